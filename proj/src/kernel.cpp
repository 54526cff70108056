#include "structlaws/kernel.hpp"

#include <algorithm>
#include <set>

namespace structlaws {

Nat NatExpr::eval(std::span<const Nat> nats) const {
  if (is_literal()) return offset;
  if (param >= nats.size()) throw Error("nat parameter $" + std::to_string(param) + " out of range");
  return nats[param] + offset;
}

Sort instantiate(const SortExpr& e, std::span<const Nat> nats) {
  Sort s{e.family, std::nullopt};
  if (e.arg) s.arg = e.arg->eval(nats);
  return s;
}

std::optional<OpId> Signature::find_op(std::string_view n) const {
  for (std::size_t i = 0; i < ops.size(); ++i)
    if (ops[i].name == n) return static_cast<OpId>(i);
  return std::nullopt;
}

std::optional<KindId> Signature::find_kind(std::string_view n) const {
  for (std::size_t i = 0; i < kinds.size(); ++i)
    if (kinds[i].name == n) return static_cast<KindId>(i);
  return std::nullopt;
}

std::optional<FamilyId> Signature::find_sort(std::string_view n) const {
  for (std::size_t i = 0; i < sorts.size(); ++i)
    if (sorts[i].name == n) return static_cast<FamilyId>(i);
  return std::nullopt;
}

const OpSchema& Signature::op(OpId id) const {
  if (id >= ops.size()) throw UnknownOp("unknown operator id " + std::to_string(id));
  return ops[id];
}

namespace {

void check_nat(const NatExpr& e, Nat params, const std::string& subject, Diagnostics& out) {
  if (!e.is_literal() && e.param >= params)
    out.push_back({"BadNatExpr", subject, "references undeclared parameter $" + std::to_string(e.param)});
}

void check_sort_expr(const Signature& sig, const SortExpr& s, Nat params,
                     const std::string& subject, Diagnostics& out) {
  if (s.family >= sig.sorts.size()) {
    out.push_back({"UnknownSort", subject, "sort family id " + std::to_string(s.family)});
    return;
  }
  const auto& fam = sig.sorts[s.family];
  if (fam.parameterized != s.arg.has_value()) {
    out.push_back({"SortArity", subject,
                   "sort " + fam.name + (fam.parameterized ? " needs" : " takes no") + " natural argument"});
  }
  if (s.arg) check_nat(*s.arg, params, subject, out);
}

}  // namespace

Diagnostics validate_signature(const Signature& sig) {
  Diagnostics out;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < sig.kinds.size(); ++i) {
    const auto& k = sig.kinds[i];
    if (k.id != i) out.push_back({"KindIds", k.name, "kind ids must be dense 0..k-1"});
    if (!seen.insert("kind:" + k.name).second) out.push_back({"DuplicateKind", k.name, ""});
  }
  for (const auto& f : sig.sorts)
    if (!seen.insert("sort:" + f.name).second) out.push_back({"DuplicateSort", f.name, ""});
  if (sig.var_sort.size() != sig.kinds.size()) {
    out.push_back({"VarSort", sig.name, "var_sort must have one entry per kind"});
  } else {
    for (std::size_t i = 0; i < sig.kinds.size(); ++i) {
      const auto& vs = sig.var_sort[i];
      if (!vs) continue;
      if (vs->family >= sig.sorts.size()) {
        out.push_back({"UnknownSort", sig.kinds[i].name, "var sort"});
      } else if (sig.sorts[vs->family].parameterized) {
        out.push_back({"VarSort", sig.kinds[i].name, "variables cannot inhabit a parameterized family"});
      }
    }
  }
  if (!sig.scoped() && sig.kinds.size() != 1)
    out.push_back({"UnscopedKinds", sig.name, "unscoped signatures have exactly one kind"});
  for (const auto& op : sig.ops) {
    if (!seen.insert("op:" + op.name).second) out.push_back({"DuplicateOp", op.name, ""});
    check_sort_expr(sig, op.result, op.nat_params, op.name, out);
    for (const auto& a : op.args) {
      if (const auto* sub = std::get_if<SubArgSpec>(&a)) {
        check_sort_expr(sig, sub->sort, op.nat_params, op.name, out);
        for (const auto& b : sub->binders) {
          if (b.kind >= sig.kinds.size()) out.push_back({"UnknownKind", op.name, "binder kind"});
          check_nat(b.count, op.nat_params, op.name, out);
        }
      } else {
        const auto& ref = std::get<RefArgSpec>(a);
        if (ref.kind >= sig.kinds.size()) out.push_back({"UnknownKind", op.name, "reference kind"});
      }
    }
  }
  return out;
}

Context Context::extended(KindId k, Index by) const {
  Context c = *this;
  if (c.counts[k] != kOmega) c.counts[k] += by;
  return c;
}

Context Context::extended(std::span<const Binder> binders, std::span<const Nat> nats) const {
  Context c = *this;
  for (const auto& b : binders)
    if (c.counts[b.kind] != kOmega) c.counts[b.kind] += b.count.eval(nats);
  return c;
}

Context Context::with(KindId k, Index value) const {
  Context c = *this;
  c.counts[k] = value;
  return c;
}

std::optional<std::size_t> AuxSchema::find_param(std::string_view n) const {
  for (std::size_t i = 0; i < params.size(); ++i)
    if (params[i].name == n) return i;
  return std::nullopt;
}

AuxId AuxTable::add(AuxSchema schema) {
  if (by_name_.count(schema.name)) throw Error("duplicate auxiliary operator " + schema.name);
  AuxId id = static_cast<AuxId>(schemas_.size());
  by_name_.emplace(schema.name, id);
  schemas_.push_back(std::move(schema));
  return id;
}

const AuxSchema& AuxTable::at(AuxId id) const {
  if (id >= schemas_.size()) throw UnknownLaw("unknown auxiliary operator id " + std::to_string(id));
  return schemas_[id];
}

std::optional<AuxId> AuxTable::find(std::string_view name) const {
  auto it = by_name_.find(std::string(name));
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

// ---------------------------------------------------------------------------

std::size_t arg_size(const AuxArg& a) {
  return std::visit(
      [](const auto& x) -> std::size_t {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, TermArg>) {
          return x.term->size();
        } else if constexpr (std::is_same_v<T, EnvArg>) {
          std::size_t n = 0;
          for (const auto& e : x.entries) n += e->size();
          return n;
        } else if constexpr (std::is_same_v<T, ShiftEnvArg>) {
          std::size_t n = 0;
          for (const auto& e : x.prefix) n += e->size();
          return n;
        } else if constexpr (std::is_same_v<T, ShiftRenArg>) {
          return x.prefix.size();
        } else {
          return 1;
        }
      },
      a);
}

std::size_t arg_aux_count(const AuxArg& a) {
  return std::visit(
      [](const auto& x) -> std::size_t {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, TermArg>) {
          return x.term->aux_count();
        } else if constexpr (std::is_same_v<T, EnvArg>) {
          std::size_t n = 0;
          for (const auto& e : x.entries) n += e->aux_count();
          return n;
        } else if constexpr (std::is_same_v<T, ShiftEnvArg>) {
          std::size_t n = 0;
          for (const auto& e : x.prefix) n += e->aux_count();
          return n;
        } else {
          return 0;
        }
      },
      a);
}

TermPtr Term::var(KindId kind, Index index) {
  auto t = std::make_shared<Term>(Private{}, Tag::Var);
  t->kind_ = kind;
  t->index_ = index;
  return t;
}

TermPtr Term::con(OpId op, std::vector<Nat> nats, std::vector<TermPtr> children) {
  auto t = std::make_shared<Term>(Private{}, Tag::Con);
  t->op_ = op;
  t->nats_ = std::move(nats);
  for (const auto& c : children) {
    t->size_ += c->size_;
    t->aux_count_ += c->aux_count_;
  }
  t->children_ = std::move(children);
  return t;
}

TermPtr Term::aux(AuxId op, std::vector<Nat> nats, TermPtr main, std::vector<AuxArg> params) {
  auto t = std::make_shared<Term>(Private{}, Tag::Aux);
  t->op_ = op;
  t->nats_ = std::move(nats);
  t->size_ += main->size_;
  t->aux_count_ = 1 + main->aux_count_;
  for (const auto& p : params) {
    t->size_ += arg_size(p);
    t->aux_count_ += arg_aux_count(p);
  }
  t->children_.push_back(std::move(main));
  t->params_ = std::move(params);
  return t;
}

namespace {

template <typename T>
int cmp3(const T& a, const T& b) {
  return a < b ? -1 : (b < a ? 1 : 0);
}

int compare_terms(const std::vector<TermPtr>& a, const std::vector<TermPtr>& b) {
  if (int c = cmp3(a.size(), b.size())) return c;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (int c = compare(*a[i], *b[i])) return c;
  return 0;
}

}  // namespace

int compare(const Term& a, const Term& b) {
  if (&a == &b) return 0;
  if (int c = cmp3(a.size(), b.size())) return c;
  if (int c = cmp3(static_cast<int>(a.tag()), static_cast<int>(b.tag()))) return c;
  switch (a.tag()) {
    case Term::Tag::Var:
      if (int c = cmp3(a.kind(), b.kind())) return c;
      return cmp3(a.index(), b.index());
    case Term::Tag::Con:
      if (int c = cmp3(a.op(), b.op())) return c;
      if (int c = cmp3(a.nats(), b.nats())) return c;
      return compare_terms(a.children(), b.children());
    case Term::Tag::Aux: {
      if (int c = cmp3(a.op(), b.op())) return c;
      if (int c = cmp3(a.nats(), b.nats())) return c;
      if (int c = compare(*a.main(), *b.main())) return c;
      if (int c = cmp3(a.params().size(), b.params().size())) return c;
      for (std::size_t i = 0; i < a.params().size(); ++i)
        if (int c = compare(a.params()[i], b.params()[i])) return c;
      return 0;
    }
  }
  return 0;
}

int compare(const AuxArg& a, const AuxArg& b) {
  if (int c = cmp3(a.index(), b.index())) return c;
  if (const auto* x = std::get_if<TermArg>(&a)) return compare(*x->term, *std::get<TermArg>(b).term);
  if (const auto* x = std::get_if<EnvArg>(&a)) {
    const auto& y = std::get<EnvArg>(b);
    if (int c = cmp3(x->kind, y.kind)) return c;
    return compare_terms(x->entries, y.entries);
  }
  if (const auto* x = std::get_if<ShiftEnvArg>(&a)) {
    const auto& y = std::get<ShiftEnvArg>(b);
    if (int c = compare_terms(x->prefix, y.prefix)) return c;
    return cmp3(x->shift, y.shift);
  }
  if (const auto* x = std::get_if<ShiftRenArg>(&a)) {
    const auto& y = std::get<ShiftRenArg>(b);
    if (int c = cmp3(x->prefix, y.prefix)) return c;
    return cmp3(x->shift, y.shift);
  }
  const auto& x = std::get<VarRefArg>(a);
  const auto& y = std::get<VarRefArg>(b);
  if (int c = cmp3(x.kind, y.kind)) return c;
  return cmp3(x.index, y.index);
}

void sort_canonical(std::vector<TermPtr>& ts) { std::sort(ts.begin(), ts.end(), TermLess{}); }

// ---------------------------------------------------------------------------

AuxContexts aux_contexts(const AuxSchema& schema, std::span<const Nat> nats,
                         std::span<const AuxArg> params, const Context& result) {
  if (params.size() != schema.params.size())
    throw ScopeError(schema.name + ": expected " + std::to_string(schema.params.size()) +
                     " parameters, got " + std::to_string(params.size()));
  AuxContexts out;
  out.params.assign(params.size(), result);
  Context base = result;
  // Walk env chains from the last env back to the main argument.
  for (std::size_t j = params.size(); j-- > 0;) {
    const auto& spec = schema.params[j];
    if (spec.kind != ParamKind::Env) continue;
    const auto* env = std::get_if<EnvArg>(&params[j]);
    if (!env) throw ScopeError(schema.name + ": parameter " + spec.name + " must be an env");
    out.params[j] = base;
    base = base.with(spec.var_kind, env->entries.size());
  }
  for (std::size_t j = 0; j < params.size(); ++j) {
    const auto& spec = schema.params[j];
    if (spec.kind == ParamKind::Term) out.params[j] = result.extended(spec.binders, nats);
  }
  out.main = base.extended(schema.main_binders, nats);
  return out;
}

namespace {

class ScopeChecker {
 public:
  ScopeChecker(const Signature& sig, const AuxTable* aux) : sig_(sig), aux_(aux) {}

  std::optional<std::string> check(const Context& ctx, const Sort& sort, const Term& t) {
    switch (t.tag()) {
      case Term::Tag::Var: return check_var(ctx, sort, t);
      case Term::Tag::Con: return check_con(ctx, sort, t);
      case Term::Tag::Aux: return check_aux(ctx, sort, t);
    }
    return std::nullopt;
  }

 private:
  static bool in_range(const Context& ctx, KindId k, Index i) {
    return ctx[k] == kOmega || i < ctx[k];
  }

  std::optional<std::string> check_var(const Context& ctx, const Sort& sort, const Term& t) {
    if (t.kind() >= sig_.kinds.size()) return "unknown variable kind " + std::to_string(t.kind());
    const auto& vs = sig_.var_sort[t.kind()];
    if (!vs) return "variables of kind " + sig_.kinds[t.kind()].name + " are not terms";
    if (*vs != sort) return "variable of kind " + sig_.kinds[t.kind()].name + " has the wrong sort";
    if (!in_range(ctx, t.kind(), t.index()))
      return "variable index " + std::to_string(t.index()) + " out of range";
    return std::nullopt;
  }

  std::optional<std::string> check_con(const Context& ctx, const Sort& sort, const Term& t) {
    const OpSchema& op = sig_.op(t.op());
    if (t.nats().size() != op.nat_params) return op.name + ": wrong number of nat arguments";
    if (instantiate(op.result, t.nats()) != sort) return op.name + ": result sort mismatch";
    if (t.children().size() != op.args.size()) return op.name + ": wrong arity";
    for (std::size_t i = 0; i < op.args.size(); ++i) {
      const auto& child = *t.children()[i];
      if (const auto* sub = std::get_if<SubArgSpec>(&op.args[i])) {
        auto err = check(ctx.extended(sub->binders, t.nats()), instantiate(sub->sort, t.nats()), child);
        if (err) return err;
      } else {
        const auto& ref = std::get<RefArgSpec>(op.args[i]);
        if (!child.is_var() || child.kind() != ref.kind) return op.name + ": reference position needs a variable";
        if (!in_range(ctx, ref.kind, child.index())) return op.name + ": reference out of range";
      }
    }
    return std::nullopt;
  }

  std::optional<std::string> check_aux(const Context& ctx, const Sort& sort, const Term& t) {
    if (!aux_) throw UnknownLaw("auxiliary node without a law stack");
    const AuxSchema& schema = aux_->at(t.op());
    if (t.nats().size() != schema.nat_names.size()) return schema.name + ": wrong number of nat arguments";
    if (instantiate(schema.result, t.nats()) != sort) return schema.name + ": result sort mismatch";
    AuxContexts cs;
    try {
      cs = aux_contexts(schema, t.nats(), t.params(), ctx);
    } catch (const ScopeError& e) {
      return std::string(e.what());
    }
    if (auto err = check(cs.main, instantiate(schema.main_sort, t.nats()), *t.main())) return err;
    for (std::size_t j = 0; j < schema.params.size(); ++j) {
      const auto& spec = schema.params[j];
      const auto& arg = t.params()[j];
      const auto& pctx = cs.params[j];
      switch (spec.kind) {
        case ParamKind::Term: {
          const auto* ta = std::get_if<TermArg>(&arg);
          if (!ta) return schema.name + ": parameter " + spec.name + " must be a term";
          if (auto err = check(pctx, instantiate(spec.sort, t.nats()), *ta->term)) return err;
          break;
        }
        case ParamKind::Env: {
          const auto& env = std::get<EnvArg>(arg);
          if (!sig_.scoped()) return schema.name + ": envs only exist in scoped signatures";
          if (env.kind != spec.var_kind) return schema.name + ": env kind mismatch";
          Sort es = instantiate(spec.sort, t.nats());
          for (const auto& e : env.entries)
            if (auto err = check(pctx, es, *e)) return err;
          break;
        }
        case ParamKind::ShiftEnv: {
          const auto* se = std::get_if<ShiftEnvArg>(&arg);
          if (!se) return schema.name + ": parameter " + spec.name + " must be a shift-env";
          if (sig_.scoped()) return schema.name + ": shift-envs only exist in unscoped signatures";
          Sort es = instantiate(spec.sort, t.nats());
          for (const auto& e : se->prefix)
            if (auto err = check(pctx, es, *e)) return err;
          break;
        }
        case ParamKind::ShiftRen:
          if (!std::holds_alternative<ShiftRenArg>(arg)) return schema.name + ": parameter " + spec.name + " must be a renaming";
          if (sig_.scoped()) return schema.name + ": renamings only exist in unscoped signatures";
          break;
        case ParamKind::VarRef: {
          const auto* vr = std::get_if<VarRefArg>(&arg);
          if (!vr || vr->kind != spec.var_kind) return schema.name + ": parameter " + spec.name + " must be a variable reference";
          if (!in_range(pctx, vr->kind, vr->index)) return schema.name + ": variable reference out of range";
          break;
        }
      }
    }
    return std::nullopt;
  }

  const Signature& sig_;
  const AuxTable* aux_;
};

class Renamer {
 public:
  Renamer(const Signature& sig, const AuxTable* aux) : sig_(sig), aux_(aux) {}

  TermPtr run(const TermPtr& t, const Renaming& r) {
    switch (t->tag()) {
      case Term::Tag::Var: {
        Index j = r.kinds[t->kind()](t->index());
        if (j == t->index()) return t;
        return Term::var(t->kind(), j);
      }
      case Term::Tag::Con: {
        std::vector<TermPtr> kids;
        kids.reserve(t->children().size());
        bool same = true;
        for (const auto& c : t->children()) {
          kids.push_back(run(c, r));
          same = same && kids.back() == c;
        }
        if (same) return t;
        return Term::con(t->op(), t->nats(), std::move(kids));
      }
      case Term::Tag::Aux: return run_aux(t, r);
    }
    return t;
  }

 private:
  TermPtr run_aux(const TermPtr& t, const Renaming& r) {
    if (!aux_) throw UnknownLaw("auxiliary node without a law stack");
    const AuxSchema& schema = aux_->at(t->op());
    std::vector<AuxArg> params = t->params();
    // Env chains bind their domain coordinate: the main argument and every
    // env but the last of a chain keep that coordinate fixed.
    Renaming cur = r;
    for (std::size_t j = params.size(); j-- > 0;) {
      const auto& spec = schema.params[j];
      if (spec.kind != ParamKind::Env) continue;
      auto& env = std::get<EnvArg>(params[j]);
      for (auto& e : env.entries) e = run(e, cur);
      cur.kinds[spec.var_kind] = KindRenaming::identity();
    }
    for (std::size_t j = 0; j < params.size(); ++j) {
      const auto& spec = schema.params[j];
      if (spec.kind == ParamKind::Term) {
        auto& ta = std::get<TermArg>(params[j]);
        ta.term = run(ta.term, r);
      } else if (spec.kind == ParamKind::VarRef) {
        auto& vr = std::get<VarRefArg>(params[j]);
        vr.index = r.kinds[vr.kind](vr.index);
      }
    }
    return Term::aux(t->op(), t->nats(), run(t->main(), cur), std::move(params));
  }

  const Signature& sig_;
  const AuxTable* aux_;
};

}  // namespace

std::optional<std::string> scope_error(const Signature& sig, const AuxTable* aux,
                                       const Context& ctx, const Sort& sort, const Term& t) {
  if (ctx.counts.size() != sig.kinds.size()) return std::string("context has the wrong number of kinds");
  return ScopeChecker(sig, aux).check(ctx, sort, t);
}

Renaming Renaming::identity(const Context& ctx) {
  Renaming r;
  for (Index n : ctx.counts) {
    KindRenaming k;
    if (n != kOmega) {
      for (Index i = 0; i < n; ++i) k.image.push_back(i);
      k.target = n;
    }
    r.kinds.push_back(std::move(k));
  }
  return r;
}

Renaming Renaming::inclusion(const Context& ctx, KindId kind, Index by) {
  Renaming r = identity(ctx);
  if (ctx[kind] != kOmega) r.kinds[kind].target += by;
  return r;
}

Context Renaming::codomain() const {
  Context c;
  for (const auto& k : kinds) c.counts.push_back(k.target);
  return c;
}

Renaming Renaming::then(const Renaming& g) const {
  Renaming out;
  for (std::size_t k = 0; k < kinds.size(); ++k) {
    KindRenaming m;
    for (Index i : kinds[k].image) m.image.push_back(g.kinds[k](i));
    m.target = g.kinds[k].target;
    out.kinds.push_back(std::move(m));
  }
  return out;
}

TermPtr rename(const Signature& sig, const AuxTable* aux, const TermPtr& t, const Context& ctx,
               const Renaming& maps) {
  if (!sig.scoped()) throw ScopeError("rename: use rename_unscoped for unscoped signatures");
  if (maps.kinds.size() != sig.kinds.size() || ctx.counts.size() != sig.kinds.size())
    throw ScopeError("rename: one map per kind required");
  for (std::size_t k = 0; k < maps.kinds.size(); ++k) {
    const auto& m = maps.kinds[k];
    if (m.image.size() != ctx[k])
      throw ScopeError("rename: map for kind " + sig.kinds[k].name + " is not total on the context");
    for (Index i : m.image)
      if (i >= m.target) throw ScopeError("rename: image index out of the target context");
  }
  return Renamer(sig, aux).run(t, maps);
}

TermPtr rename_unchecked(const Signature& sig, const AuxTable* aux, const TermPtr& t,
                         const Context&, const Renaming& maps) {
  return Renamer(sig, aux).run(t, maps);
}

namespace {

// Inclusion on an Aux-free term: indices of `kind` at or above `from` are
// bound inside the term and move up by one. Unchanged subterms are shared.
TermPtr shift_from(const TermPtr& t, KindId kind, Index from) {
  switch (t->tag()) {
    case Term::Tag::Var:
      if (t->kind() == kind && t->index() >= from) return Term::var(kind, t->index() + 1);
      return t;
    case Term::Tag::Con: {
      const auto& cs = t->children();
      std::size_t i = 0;
      TermPtr first;
      for (; i < cs.size(); ++i) {
        first = shift_from(cs[i], kind, from);
        if (first != cs[i]) break;
      }
      if (i == cs.size()) return t;
      std::vector<TermPtr> kids(cs.begin(), cs.begin() + i);
      kids.push_back(std::move(first));
      for (++i; i < cs.size(); ++i) kids.push_back(shift_from(cs[i], kind, from));
      return Term::con(t->op(), t->nats(), std::move(kids));
    }
    case Term::Tag::Aux: break;
  }
  return t;
}

}  // namespace

TermPtr weaken(const Signature& sig, const AuxTable* aux, const TermPtr& t, const Context& ctx,
               KindId kind) {
  if (t->aux_free() && ctx[kind] != kOmega) return shift_from(t, kind, ctx[kind]);
  return Renamer(sig, aux).run(t, Renaming::inclusion(ctx, kind));
}

namespace {

ShiftRenArg lift_ren(const ShiftRenArg& r) {
  ShiftRenArg out;
  out.prefix.push_back(0);
  for (Index p : r.prefix) out.prefix.push_back(p + 1);
  out.shift = r.shift + 1;
  return out;
}

TermPtr rename_db(const Signature& sig, const TermPtr& t, const ShiftRenArg& rho) {
  switch (t->tag()) {
    case Term::Tag::Var: return Term::var(t->kind(), rho(t->index()));
    case Term::Tag::Con: {
      const OpSchema& op = sig.op(t->op());
      std::vector<TermPtr> kids;
      for (std::size_t i = 0; i < op.args.size(); ++i) {
        if (const auto* sub = std::get_if<SubArgSpec>(&op.args[i])) {
          ShiftRenArg r = rho;
          for (const auto& b : sub->binders)
            for (Nat n = b.count.eval(t->nats()); n > 0; --n) r = lift_ren(r);
          kids.push_back(rename_db(sig, t->children()[i], r));
        } else {
          kids.push_back(Term::var(t->children()[i]->kind(), rho(t->children()[i]->index())));
        }
      }
      return Term::con(t->op(), t->nats(), std::move(kids));
    }
    case Term::Tag::Aux: break;
  }
  throw Error("rename_unscoped: formal auxiliary nodes have no built-in renaming action");
}

}  // namespace

TermPtr rename_unscoped(const Signature& sig, const TermPtr& t, const ShiftRenArg& rho) {
  if (sig.scoped()) throw ScopeError("rename_unscoped on a scoped signature");
  return rename_db(sig, t, rho);
}

}  // namespace structlaws
