#include <algorithm>
#include <map>
#include <set>

#include "structlaws/law.hpp"

namespace structlaws {

namespace {

// Linear expression over named naturals with unit-free coefficients.
struct Lin {
  std::map<std::string, long> terms;
  long cst = 0;

  static Lin c(long v) {
    Lin l;
    l.cst = v;
    return l;
  }
  static Lin sym(const std::string& s) {
    Lin l;
    l.terms[s] = 1;
    return l;
  }
  Lin operator+(const Lin& o) const {
    Lin r = *this;
    for (const auto& [k, v] : o.terms) r.terms[k] += v;
    r.cst += o.cst;
    return r;
  }
  Lin plus(long v) const {
    Lin r = *this;
    r.cst += v;
    return r;
  }
  bool operator==(const Lin&) const = default;
  // Holds for every valuation of the (non-negative) symbols.
  bool le(const Lin& o) const {
    if (cst > o.cst) return false;
    for (const auto& [k, v] : terms) {
      auto it = o.terms.find(k);
      if (v > (it == o.terms.end() ? 0 : it->second)) return false;
    }
    return true;
  }
  std::string str() const {
    std::string s;
    for (const auto& [k, v] : terms) {
      if (!s.empty()) s += "+";
      if (v != 1) s += std::to_string(v) + "*";
      s += k;
    }
    if (cst != 0 || s.empty()) s += (s.empty() ? "" : "+") + std::to_string(cst);
    return s;
  }
};

struct SCtx {
  bool omega = false;
  std::vector<Lin> k;

  SCtx with(KindId kind, Lin v) const {
    SCtx r = *this;
    if (!omega) r.k[kind] = std::move(v);
    return r;
  }
  SCtx add(KindId kind, const Lin& v) const {
    SCtx r = *this;
    if (!omega) r.k[kind] = r.k[kind] + v;
    return r;
  }
  bool operator==(const SCtx& o) const { return omega || o.omega || k == o.k; }
};

struct SSort {
  FamilyId family = 0;
  std::optional<Lin> arg;
  bool operator==(const SSort&) const = default;
};

struct Env {
  std::vector<Lin> nats;  // clause nat numbering
};

Lin nat_lin(const NatExpr& e, const std::vector<Lin>& env) {
  if (e.is_literal()) return Lin::c(e.offset);
  if (e.param >= env.size()) return Lin::sym("?");
  return env[e.param].plus(e.offset);
}

SSort sort_lin(const SortExpr& e, const std::vector<Lin>& env) {
  SSort s{e.family, std::nullopt};
  if (e.arg) s.arg = nat_lin(*e.arg, env);
  return s;
}

class Validator {
 public:
  Validator(const LawStack& stack, std::string subject, Nat layer, const std::vector<AuxSchema>* own)
      : stack_(stack), sig_(stack.sig()), subject_(std::move(subject)), layer_(layer), own_(own) {}

  Diagnostics& out() { return out_; }

  void report(std::string code, std::string msg, int line) {
    if (line > 0) msg += " (line " + std::to_string(line) + ")";
    Diagnostic d{std::move(code), subject_, std::move(msg)};
    if (std::find(out_.begin(), out_.end(), d) == out_.end()) out_.push_back(std::move(d));
  }

  std::string show(const SCtx& c) const {
    if (c.omega) return "omega";
    std::string s = "(";
    for (std::size_t i = 0; i < c.k.size(); ++i) {
      if (i) s += ", ";
      s += sig_.kinds[i].name + "=" + c.k[i].str();
    }
    return s + ")";
  }
  std::string show(const SSort& s) const {
    std::string out = sig_.sorts.at(s.family).name;
    if (s.arg) out += "(" + s.arg->str() + ")";
    return out;
  }

  // Sets up the symbolic frame of an Aux node of `schema` at result context C.
  void setup(const AuxSchema& schema) {
    schema_ = &schema;
    nats_.clear();
    for (const auto& n : schema.nat_names) nats_.push_back(Lin::sym(n));
    C_ = SCtx{};
    if (!sig_.scoped()) {
      C_.omega = true;
      C_.k.assign(sig_.kinds.size(), Lin::c(0));
    } else {
      for (const auto& k : sig_.kinds) C_.k.push_back(Lin::sym("ctx." + k.name));
    }
    env_len_.assign(schema.params.size(), Lin::c(0));
    param_ctx_.assign(schema.params.size(), C_);
    SCtx cur = C_;
    for (std::size_t j = schema.params.size(); j-- > 0;) {
      const auto& p = schema.params[j];
      if (p.kind != ParamKind::Env) continue;
      env_len_[j] = Lin::sym("|" + p.name + "|");
      param_ctx_[j] = cur;
      cur = cur.with(p.var_kind, env_len_[j]);
    }
    chain_base_ = cur;
    children_ctx_.clear();
    children_sort_.clear();
  }

  // Called once the clause's nat substitutions are known.
  void frame_contexts() {
    const AuxSchema& schema = *schema_;
    for (std::size_t j = 0; j < schema.params.size(); ++j) {
      const auto& p = schema.params[j];
      if (p.kind == ParamKind::Term) param_ctx_[j] = extend(C_, p.binders, nats_);
    }
    M_ = extend(chain_base_, schema.main_binders, nats_);
    main_sort_ = sort_lin(schema.main_sort, nats_);
  }

  SCtx extend(const SCtx& c, const std::vector<Binder>& bs, const std::vector<Lin>& env) const {
    SCtx r = c;
    for (const auto& b : bs) r = r.add(b.kind, nat_lin(b.count, env));
    return r;
  }

  // Clause-level validation; returns false when the clause is unreachable.
  bool setup_clause(const AuxSchema& schema, const Clause& c) {
    setup(schema);
    clause_ = &c;
    op_ = nullptr;
    if (c.on_var) {
      frame_contexts();
      return true;
    }
    op_ = &sig_.op(c.op);
    std::size_t base = nats_.size();
    for (Nat i = 0; i < op_->nat_params; ++i)
      nats_.push_back(Lin::sym(i < c.binds.size() ? c.binds[i] : "$" + std::to_string(i)));
    if (!unify(schema.main_sort, op_->result, base, c.line)) return false;
    frame_contexts();
    std::vector<Lin> con_nats(nats_.begin() + static_cast<long>(base), nats_.end());
    for (const auto& a : op_->args) {
      if (const auto* sub = std::get_if<SubArgSpec>(&a)) {
        children_ctx_.push_back(extend(M_, sub->binders, con_nats));
        children_sort_.push_back(sort_lin(sub->sort, con_nats));
      } else {
        children_ctx_.push_back(M_);
        children_sort_.push_back(SSort{});
      }
    }
    return true;
  }

  // Solves main_sort(aux nats) = result(con nats), substituting nat symbols.
  bool unify(const SortExpr& main, const SortExpr& result, std::size_t base, int line) {
    if (main.family != result.family) return false;
    if (!main.arg || !result.arg) return true;
    const NatExpr& a = *main.arg;
    const NatExpr& r = *result.arg;
    if (a.is_literal() && r.is_literal()) return a.offset == r.offset;
    if (a.is_literal()) {
      if (a.offset < r.offset) return false;
      nats_[base + r.param] = Lin::c(a.offset - r.offset);
      return true;
    }
    if (r.is_literal()) {
      if (r.offset < a.offset) return false;
      nats_[a.param] = Lin::c(r.offset - a.offset);
      return true;
    }
    if (r.offset < a.offset) {
      report("SortMismatch", "cannot match main sort against constructor result", line);
      return false;
    }
    nats_[a.param] = nats_[base + r.param].plus(r.offset - a.offset);
    return true;
  }

  // Whether a constructor can head a main argument of this schema.
  static bool reachable(const AuxSchema& schema, const OpSchema& op) {
    if (schema.main_sort.family != op.result.family) return false;
    if (!schema.main_sort.arg || !op.result.arg) return true;
    const NatExpr& a = *schema.main_sort.arg;
    const NatExpr& r = *op.result.arg;
    if (a.is_literal() && r.is_literal()) return a.offset == r.offset;
    if (a.is_literal()) return a.offset >= r.offset;
    if (r.is_literal()) return r.offset >= a.offset;
    return true;
  }

  std::optional<KindId> index_kind(const IndexExpr& e) const {
    switch (e.source) {
      case IndexSource::Literal: return std::nullopt;
      case IndexSource::VarIndex: return clause_ ? std::optional<KindId>(clause_->var_kind) : std::nullopt;
      case IndexSource::RefChild:
        if (op_ && e.slot < op_->args.size())
          if (const auto* r = std::get_if<RefArgSpec>(&op_->args[e.slot])) return r->kind;
        return std::nullopt;
      case IndexSource::VarRefParam: return schema_->params.at(e.slot).var_kind;
    }
    return std::nullopt;
  }

  bool index_ok(const IndexExpr& e, KindId kind, const SCtx& G, int line) {
    if (G.omega) return true;
    if (auto k = index_kind(e); k && *k != kind) {
      report("SortMismatch", "variable index " + e.name + " has kind " + sig_.kinds[*k].name + ", expected " +
                                 sig_.kinds[kind].name, line);
      return false;
    }
    bool ok = false;
    switch (e.source) {
      case IndexSource::Literal: ok = G.k[kind].cst >= static_cast<long>(e.literal) + 1; break;
      case IndexSource::VarIndex:
      case IndexSource::RefChild: ok = M_.k[kind].le(G.k[kind]); break;
      case IndexSource::VarRefParam: ok = C_.k[kind].le(G.k[kind]); break;
    }
    if (!ok) {
      std::string what = e.source == IndexSource::Literal ? std::to_string(e.literal) : e.name;
      report("ScopeMismatch", "variable index " + what + " may be out of range at " + show(G), line);
    }
    return ok;
  }

  void expect_ctx(const SCtx& have, const SCtx& want, const std::string& what, int line) {
    if (!(have == want)) report("ScopeMismatch", what + " lives at " + show(have) + ", used at " + show(want), line);
  }
  void expect_sort(const SSort& have, const SSort& want, const std::string& what, int line) {
    if (!(have == want)) report("SortMismatch", what + " has sort " + show(have) + ", expected " + show(want), line);
  }

  std::optional<SSort> var_sort(KindId k) const {
    const auto& vs = sig_.var_sort.at(k);
    if (!vs) return std::nullopt;
    return SSort{vs->family, std::nullopt};
  }

  const AuxSchema* resolve_aux(const std::string& name, int line) {
    if (own_)
      for (const auto& c : *own_)
        if (c.name == name) {
          report("UnguardedRecursion", "uses " + name + " outside a recursive call on a subterm", line);
          return nullptr;
        }
    auto id = stack_.aux().find(name);
    if (!id) {
      report("LayerViolation", "uses " + name + ", which is not defined in an earlier layer", line);
      return nullptr;
    }
    auto layer = stack_.layer_of(*id);
    if (layer && *layer >= layer_) {
      report("LayerViolation", "uses " + name + " from layer " + std::to_string(*layer), line);
      return nullptr;
    }
    return &stack_.aux().at(*id);
  }

  std::vector<Lin> nat_args(const std::vector<NatExpr>& ns) const {
    std::vector<Lin> out;
    for (const auto& n : ns) out.push_back(nat_lin(n, nats_));
    return out;
  }

  void body(const Body& b, const SCtx& G, const SSort& want) {
    switch (b.kind) {
      case Body::Kind::Unknown: return;
      case Body::Kind::Child:
        if (b.slot >= children_ctx_.size()) return;
        expect_ctx(children_ctx_[b.slot], G, "subterm " + b.name, b.line);
        expect_sort(children_sort_[b.slot], want, "subterm " + b.name, b.line);
        return;
      case Body::Kind::Param: {
        const auto& p = schema_->params.at(b.slot);
        expect_ctx(param_ctx_[b.slot], G, "parameter " + p.name, b.line);
        expect_sort(sort_lin(p.sort, nats_), want, "parameter " + p.name, b.line);
        return;
      }
      case Body::Kind::Main:
        expect_ctx(M_, G, "main argument", b.line);
        expect_sort(main_sort_, want, "main argument", b.line);
        return;
      case Body::Kind::VarOf:
      case Body::Kind::Fresh: {
        auto vs = var_sort(b.var_kind);
        if (!vs) {
          report("SortMismatch", "variables of kind " + sig_.kinds[b.var_kind].name + " are not terms", b.line);
          return;
        }
        expect_sort(*vs, want, "variable", b.line);
        if (b.kind == Body::Kind::VarOf) index_ok(b.index, b.var_kind, G, b.line);
        else if (!fresh_ok_) report("UnknownMetavar", "@ outside a lift template", b.line);
        return;
      }
      case Body::Kind::Op: {
        const OpSchema& op = sig_.op(b.id);
        if (b.nats.size() != op.nat_params || b.children.size() != op.args.size()) {
          report("ArityMismatch", "operator " + op.name + " applied to the wrong number of arguments", b.line);
          return;
        }
        auto ns = nat_args(b.nats);
        expect_sort(sort_lin(op.result, ns), want, "operator " + op.name, b.line);
        for (std::size_t i = 0; i < op.args.size(); ++i) {
          const Body& c = *b.children[i];
          if (const auto* sub = std::get_if<SubArgSpec>(&op.args[i])) {
            body(c, extend(G, sub->binders, ns), sort_lin(sub->sort, ns));
          } else {
            KindId rk = std::get<RefArgSpec>(op.args[i]).kind;
            if (c.kind != Body::Kind::VarOf || c.var_kind != rk) {
              report("SortMismatch", "operator " + op.name + " needs a variable of kind " + sig_.kinds[rk].name, c.line);
            } else {
              index_ok(c.index, rk, G, c.line);
            }
          }
        }
        return;
      }
      case Body::Kind::Aux: {
        const AuxSchema* target = resolve_aux(b.name, b.line);
        if (!target) return;
        auto main = call(*target, b.nats, G, b.args, want, b.line);
        if (main) body(*b.children[0], main->first, main->second);
        return;
      }
      case Body::Kind::Rec: {
        if (!own_ || b.id >= own_->size() || b.slot >= children_ctx_.size()) return;
        const AuxSchema& target = (*own_)[b.id];
        auto main = call(target, b.nats, G, b.args, want, b.line);
        if (!main) return;
        expect_ctx(children_ctx_[b.slot], main->first, "recursive call on " + b.name, b.line);
        expect_sort(children_sort_[b.slot], main->second, "recursive call on " + b.name, b.line);
        return;
      }
      case Body::Kind::Lookup: {
        if (b.slot >= schema_->params.size()) return;
        const auto& p = schema_->params[b.slot];
        if (p.kind == ParamKind::ShiftRen) {
          if (auto vs = var_sort(0)) expect_sort(*vs, want, "renamed variable", b.line);
          return;
        }
        if (p.kind == ParamKind::Env) {
          if (auto k = index_kind(b.index); k && *k != p.var_kind) {
            report("SortMismatch", "lookup of " + p.name + " with an index of another kind", b.line);
          } else if (b.index.source != IndexSource::Literal) {
            SCtx src = b.index.source == IndexSource::VarRefParam ? C_ : M_;
            if (!src.omega && !src.k[p.var_kind].le(env_len_[b.slot]))
              report("ScopeMismatch", "index " + b.index.name + " may be out of the domain of " + p.name, b.line);
          } else if (env_len_[b.slot].cst < static_cast<long>(b.index.literal) + 1) {
            report("ScopeMismatch", "literal index out of the domain of " + p.name, b.line);
          }
        }
        expect_ctx(param_ctx_[b.slot], G, "entry of " + p.name, b.line);
        expect_sort(sort_lin(p.sort, nats_), want, "entry of " + p.name, b.line);
        return;
      }
    }
  }

  // Checks an application of `target` at result context G; returns the main
  // argument's context and sort.
  std::optional<std::pair<SCtx, SSort>> call(const AuxSchema& target, const std::vector<NatExpr>& nat_exprs,
                                             const SCtx& G, const std::vector<ArgPtr>& args, const SSort& want,
                                             int line) {
    if (nat_exprs.size() != target.nat_names.size() || args.size() != target.params.size()) {
      report("ArityMismatch", target.name + " applied to the wrong number of arguments", line);
      return std::nullopt;
    }
    auto ns = nat_args(nat_exprs);
    expect_sort(sort_lin(target.result, ns), want, target.name, line);
    return call_args(target, ns, G, args, line);
  }

  std::optional<std::pair<SCtx, SSort>> call_args(const AuxSchema& target, const std::vector<Lin>& ns,
                                                  const SCtx& G, const std::vector<ArgPtr>& args, int line) {
    SCtx cur = G;
    for (std::size_t j = target.params.size(); j-- > 0;) {
      const auto& p = target.params[j];
      if (p.kind != ParamKind::Env) continue;
      auto len = env_arg(*args[j], p.var_kind, sort_lin(p.sort, ns), cur);
      cur = cur.with(p.var_kind, len ? *len : Lin::sym("?" + p.name));
    }
    for (std::size_t j = 0; j < target.params.size(); ++j) {
      const auto& p = target.params[j];
      switch (p.kind) {
        case ParamKind::Term: term_arg(*args[j], sort_lin(p.sort, ns), extend(G, p.binders, ns)); break;
        case ParamKind::VarRef: vref_arg(*args[j], p.var_kind, G); break;
        case ParamKind::ShiftEnv: senv_arg(*args[j], sort_lin(p.sort, ns)); break;
        case ParamKind::ShiftRen: sren_arg(*args[j]); break;
        case ParamKind::Env: break;
      }
    }
    (void)line;
    return std::make_pair(extend(cur, target.main_binders, ns), sort_lin(target.main_sort, ns));
  }

  bool scoped_only(const ArgExpr& a, const char* what) {
    if (sig_.scoped()) return true;
    report("ModeViolation", std::string(what) + " is only available in scoped signatures", a.line);
    return false;
  }

  std::optional<SCtx> drop(const SCtx& R, KindId k, int line) {
    if (R.omega) return R;
    if (R.k[k].cst < 1) {
      report("ScopeMismatch", "no fresh variable of kind " + sig_.kinds[k].name + " at " + show(R), line);
      return std::nullopt;
    }
    return R.with(k, R.k[k].plus(-1));
  }

  void term_arg(const ArgExpr& a, const SSort& want, const SCtx& R) {
    switch (a.kind) {
      case ArgExpr::Kind::Term: body(*a.body, R, want); return;
      case ArgExpr::Kind::Param: {
        const auto& p = schema_->params.at(a.slot);
        if (p.kind == ParamKind::Term) {
          expect_ctx(param_ctx_[a.slot], R, "parameter " + p.name, a.line);
          expect_sort(sort_lin(p.sort, nats_), want, "parameter " + p.name, a.line);
        } else if (p.kind == ParamKind::VarRef) {
          auto vs = var_sort(p.var_kind);
          if (!vs) report("SortMismatch", p.name + " is not a term", a.line);
          else expect_sort(*vs, want, "parameter " + p.name, a.line);
          IndexExpr e{IndexSource::VarRefParam, a.slot, 0, p.name};
          index_ok(e, p.var_kind, R, a.line);
        } else {
          report("SortMismatch", "parameter " + p.name + " is not a term", a.line);
        }
        return;
      }
      case ArgExpr::Kind::Weaken:
        if (!scoped_only(a, "weaken")) return;
        if (auto inner = drop(R, a.var_kind, a.line)) term_arg(*a.args[0], want, *inner);
        return;
      default: report("SortMismatch", "expected a term argument", a.line);
    }
  }

  void vref_arg(const ArgExpr& a, KindId kind, const SCtx& R) {
    switch (a.kind) {
      case ArgExpr::Kind::Param: {
        const auto& p = schema_->params.at(a.slot);
        if (p.kind != ParamKind::VarRef || p.var_kind != kind) {
          report("SortMismatch", "parameter " + p.name + " is not a variable reference of kind " + sig_.kinds[kind].name,
                 a.line);
          return;
        }
        IndexExpr e{IndexSource::VarRefParam, a.slot, 0, p.name};
        index_ok(e, kind, R, a.line);
        return;
      }
      case ArgExpr::Kind::Term:
        if (a.body->kind == Body::Kind::VarOf && a.body->var_kind == kind) {
          index_ok(a.body->index, kind, R, a.line);
          return;
        }
        break;
      case ArgExpr::Kind::Weaken:
        if (!scoped_only(a, "weaken")) return;
        if (auto inner = drop(R, a.var_kind, a.line)) vref_arg(*a.args[0], kind, *inner);
        return;
      default: break;
    }
    report("SortMismatch", "expected a variable reference of kind " + sig_.kinds[kind].name, a.line);
  }

  std::optional<Lin> env_arg(const ArgExpr& a, KindId kind, const SSort& entry, const SCtx& R) {
    if (!sig_.scoped()) {
      report("ModeViolation", "envs are only available in scoped signatures", a.line);
      return std::nullopt;
    }
    switch (a.kind) {
      case ArgExpr::Kind::Param: {
        const auto& p = schema_->params.at(a.slot);
        if (p.kind != ParamKind::Env || p.var_kind != kind) {
          report("SortMismatch", "parameter " + p.name + " is not an env of kind " + sig_.kinds[kind].name, a.line);
          return std::nullopt;
        }
        expect_sort(sort_lin(p.sort, nats_), entry, "entries of " + p.name, a.line);
        expect_ctx(param_ctx_[a.slot], R, "entries of " + p.name, a.line);
        return env_len_[a.slot];
      }
      case ArgExpr::Kind::Lift: {
        auto inner = drop(R, kind, a.line);
        if (!inner) return std::nullopt;
        auto len = env_arg(*a.args[0], kind, entry, *inner);
        if (a.body) {
          bool saved = fresh_ok_;
          fresh_ok_ = true;
          if (a.body) body(*a.body, R, entry);
          fresh_ok_ = saved;
        } else if (auto vs = var_sort(kind); !vs || !(*vs == entry)) {
          report("SortMismatch", "lift without a template needs entries of the variable sort", a.line);
        }
        if (!len) return std::nullopt;
        return len->plus(1);
      }
      case ArgExpr::Kind::Weaken: {
        auto inner = drop(R, a.var_kind, a.line);
        if (!inner) return std::nullopt;
        return env_arg(*a.args[0], kind, entry, *inner);
      }
      case ArgExpr::Kind::Cons: {
        body(*a.body, R, entry);
        auto len = env_arg(*a.args[0], kind, entry, R);
        if (!len) return std::nullopt;
        return len->plus(1);
      }
      case ArgExpr::Kind::IdEnv: {
        if (a.var_kind != kind) {
          report("SortMismatch", "identity env of the wrong kind", a.line);
          return std::nullopt;
        }
        auto vs = var_sort(kind);
        if (!vs || !(*vs == entry)) report("SortMismatch", "identity env entries have the variable sort", a.line);
        return R.k[kind];
      }
      case ArgExpr::Kind::Map: {
        const AuxSchema* target = resolve_aux(a.name, a.line);
        if (!target) return std::nullopt;
        std::vector<ArgPtr> rest(a.args.begin() + 1, a.args.end());
        auto main = call(*target, a.nats, R, rest, entry, a.line);
        if (!main) return std::nullopt;
        return env_arg(*a.args[0], kind, main->second, main->first);
      }
      default: report("SortMismatch", "expected an env argument", a.line); return std::nullopt;
    }
  }

  void senv_arg(const ArgExpr& a, const SSort& entry) {
    if (sig_.scoped()) {
      report("ModeViolation", "shift-envs are only available in unscoped signatures", a.line);
      return;
    }
    switch (a.kind) {
      case ArgExpr::Kind::Param: {
        const auto& p = schema_->params.at(a.slot);
        if (p.kind != ParamKind::ShiftEnv) report("SortMismatch", "parameter " + p.name + " is not a shift-env", a.line);
        else expect_sort(sort_lin(p.sort, nats_), entry, "entries of " + p.name, a.line);
        return;
      }
      case ArgExpr::Kind::Cons:
        body(*a.body, C_, entry);
        senv_arg(*a.args[0], entry);
        return;
      case ArgExpr::Kind::ShiftEnvLit:
        for (const auto& e : a.entries) body(*e, C_, entry);
        return;
      case ArgExpr::Kind::Map: {
        const AuxSchema* target = resolve_aux(a.name, a.line);
        if (!target) return;
        std::vector<ArgPtr> rest(a.args.begin() + 1, a.args.end());
        auto main = call(*target, a.nats, C_, rest, entry, a.line);
        if (main) senv_arg(*a.args[0], main->second);
        return;
      }
      default: report("SortMismatch", "expected a shift-env argument", a.line);
    }
  }

  void sren_arg(const ArgExpr& a) {
    if (sig_.scoped()) {
      report("ModeViolation", "renamings are only available in unscoped signatures", a.line);
      return;
    }
    switch (a.kind) {
      case ArgExpr::Kind::Param:
        if (schema_->params.at(a.slot).kind != ParamKind::ShiftRen)
          report("SortMismatch", "parameter " + a.name + " is not a renaming", a.line);
        return;
      case ArgExpr::Kind::ShiftRenLit: return;
      case ArgExpr::Kind::LiftRen: sren_arg(*a.args[0]); return;
      case ArgExpr::Kind::Compose:
        sren_arg(*a.args[0]);
        sren_arg(*a.args[1]);
        return;
      default: report("SortMismatch", "expected a renaming argument", a.line);
    }
  }

  void schema_checks(const AuxSchema& s) {
    for (const auto& p : s.params) {
      bool scoped_kind = p.kind == ParamKind::Env;
      bool unscoped_kind = p.kind == ParamKind::ShiftEnv || p.kind == ParamKind::ShiftRen;
      if ((scoped_kind && !sig_.scoped()) || (unscoped_kind && sig_.scoped()))
        report("ModeViolation", "parameter " + p.name + " does not fit the ambient mode", 0);
    }
    for (std::size_t i = 0; i < s.params.size(); ++i)
      for (std::size_t j = i + 1; j < s.params.size(); ++j)
        if (s.params[i].name == s.params[j].name) report("DuplicateOp", "parameter " + s.params[i].name + " declared twice", 0);
    if (s.main_sort.arg && !s.main_sort.arg->is_literal() && s.main_sort.arg->offset != 0)
      report("SortMismatch", "main sort argument must be a nat parameter or a literal", 0);
  }

  void template_body(const AuxSchema& schema, const Body& b) {
    setup(schema);
    clause_ = nullptr;
    op_ = nullptr;
    frame_contexts();
    body(b, C_, sort_lin(schema.result, nats_));
  }

  void clause_body(const AuxSchema& schema, const Clause& c) {
    if (!setup_clause(schema, c)) {
      report("SortMismatch", "clause can never match the main sort", c.line);
      return;
    }
    for (const auto& g : c.guards) {
      auto ka = index_kind(g.a), kb = index_kind(g.b);
      if ((ka && kb && *ka != *kb) || (!ka && !kb)) report("BadGuard", "guard compares unrelated indices", g.line);
    }
    body(*c.body, C_, sort_lin(schema.result, nats_));
  }

 private:
  const LawStack& stack_;
  const Signature& sig_;
  std::string subject_;
  Nat layer_;
  const std::vector<AuxSchema>* own_;
  Diagnostics out_;

  const AuxSchema* schema_ = nullptr;
  const Clause* clause_ = nullptr;
  const OpSchema* op_ = nullptr;
  std::vector<Lin> nats_;
  SCtx C_, M_, chain_base_;
  SSort main_sort_;
  std::vector<Lin> env_len_;
  std::vector<SCtx> param_ctx_;
  std::vector<SCtx> children_ctx_;
  std::vector<SSort> children_sort_;
  bool fresh_ok_ = false;
};

bool complementary(const Clause& a, const Clause& b) {
  if (a.guards.size() != 1 || b.guards.size() != 1) return false;
  const Guard& g = a.guards[0];
  const Guard& h = b.guards[0];
  if (g.equal == h.equal) return false;
  auto same = [](const IndexExpr& x, const IndexExpr& y) {
    return x.source == y.source && x.slot == y.slot && x.literal == y.literal;
  };
  return (same(g.a, h.a) && same(g.b, h.b)) || (same(g.a, h.b) && same(g.b, h.a));
}

}  // namespace

Diagnostics validate_law(const LawStack& stack, const StructuralLaw& law) {
  const Signature& sig = stack.sig();
  Validator v(stack, law.name, law.layer, &law.components);
  Diagnostics& out = v.out();
  for (const auto& d : law.issues) out.push_back(d);
  if (law.layer != stack.depth())
    v.report("LayerViolation", "declared at layer " + std::to_string(law.layer) + " but the stack has " +
                                   std::to_string(stack.depth()) + " layers", law.line);
  std::set<FamilyId> families;
  for (const auto& c : law.components) {
    if (stack.aux().find(c.name)) v.report("DuplicateOp", "auxiliary operator " + c.name + " is already defined", law.line);
    if (!families.insert(c.main_sort.family).second)
      v.report("SortMismatch", "two components recurse on sort " + sig.sorts.at(c.main_sort.family).name, law.line);
    v.schema_checks(c);
  }
  for (std::size_t i = 0; i < law.components.size(); ++i)
    for (std::size_t j = i + 1; j < law.components.size(); ++j)
      if (law.components[i].name == law.components[j].name)
        v.report("DuplicateOp", "component " + law.components[i].name + " declared twice", law.line);

  for (const auto& c : law.clauses) {
    if (c.component >= law.components.size() || !c.body) continue;
    v.clause_body(law.components[c.component], c);
  }

  // Exhaustiveness and disjointness, per component and constructor.
  for (std::uint32_t k = 0; k < law.components.size(); ++k) {
    const AuxSchema& s = law.components[k];
    auto group = [&](bool on_var, std::uint32_t id, const std::string& what) {
      std::vector<const Clause*> cs;
      for (const auto& c : law.clauses)
        if (c.component == k && c.on_var == on_var && (on_var ? c.var_kind == id : c.op == id)) cs.push_back(&c);
      if (cs.empty()) {
        v.report("NonExhaustive", s.name + ": no clause on " + what, 0);
      } else if (cs.size() == 1) {
        if (!cs[0]->guards.empty()) v.report("NonExhaustive", s.name + ": guarded clause on " + what + " has no complement", cs[0]->line);
      } else if (cs.size() == 2 && complementary(*cs[0], *cs[1])) {
        // eq / neq pair
      } else {
        v.report("OverlappingClauses", s.name + ": clauses on " + what + " are not an exclusive eq/neq pair", cs[1]->line);
      }
    };
    for (std::uint32_t op = 0; op < sig.ops.size(); ++op)
      if (Validator::reachable(s, sig.ops[op])) group(false, op, sig.ops[op].name);
    for (KindId kd = 0; kd < sig.kinds.size(); ++kd) {
      const auto& vs = sig.var_sort[kd];
      if (!vs || vs->family != s.main_sort.family) continue;
      if (sig.kinds[kd].generic) {
        for (const auto& c : law.clauses)
          if (c.component == k && c.on_var && c.var_kind == kd)
            v.report("SortMismatch", s.name + ": generic variables of kind " + sig.kinds[kd].name + " cannot be matched", c.line);
        continue;
      }
      group(true, kd, "variables of kind " + sig.kinds[kd].name);
    }
  }
  return out;
}

Diagnostics validate_template(const LawStack& stack, const AuxSchema& schema, const Body& body,
                              const std::string& subject) {
  Validator v(stack, subject, static_cast<Nat>(stack.depth()), nullptr);
  v.schema_checks(schema);
  v.template_body(schema, body);
  return v.out();
}

}  // namespace structlaws
