#include <algorithm>

#include "structlaws/law.hpp"

namespace structlaws {

namespace {


ShiftRenArg lift_ren(const ShiftRenArg& r) {
  ShiftRenArg out;
  out.prefix.push_back(0);
  for (Index p : r.prefix) out.prefix.push_back(p + 1);
  out.shift = r.shift + 1;
  return out;
}

ShiftRenArg compose_ren(const ShiftRenArg& r1, const ShiftRenArg& r2) {
  std::size_t p1 = r1.prefix.size(), p2 = r2.prefix.size();
  std::size_t len = p1;
  if (p1 + p2 > r1.shift) len = std::max<std::size_t>(len, p1 + p2 - r1.shift);
  ShiftRenArg out;
  for (Index i = 0; i < len; ++i) out.prefix.push_back(r2(r1(i)));
  out.shift = r2(r1(len));
  return out;
}

Context drop_one(const Context& R, KindId k) {
  if (R[k] == kOmega) return R;
  if (R[k] == 0) throw ScopeError("no variable to bind: context is empty in the bound kind");
  return R.with(k, R[k] - 1);
}

bool generic_var(const Signature& sig, const Term& t) { return t.is_var() && sig.kinds.at(t.kind()).generic; }

struct Frame {
  const AuxSchema* schema = nullptr;
  std::vector<Nat> nats;
  TermPtr main;
  Context C, M;
  const std::vector<AuxArg>* params = nullptr;
  std::vector<Context> pctx;
  const std::vector<AuxId>* comps = nullptr;  // Rec targets by component
};

class Engine {
 public:
  explicit Engine(const LawStack& stack) : stack_(stack), sig_(stack.sig()), aux_(stack.aux()) {}

  TermPtr normalize(const TermPtr& t, const Context& ctx) {
    if (t->aux_free()) return t;
    switch (t->tag()) {
      case Term::Tag::Var: return t;
      case Term::Tag::Con: {
        const OpSchema& op = sig_.op(t->op());
        std::vector<TermPtr> kids;
        kids.reserve(op.args.size());
        for (std::size_t i = 0; i < op.args.size(); ++i) {
          const auto& c = t->children()[i];
          if (const auto* sub = std::get_if<SubArgSpec>(&op.args[i]))
            kids.push_back(normalize(c, ctx.extended(sub->binders, t->nats())));
          else
            kids.push_back(c);
        }
        return Term::con(t->op(), t->nats(), std::move(kids));
      }
      case Term::Tag::Aux: {
        const AuxSchema& schema = aux_.at(t->op());
        AuxContexts cs = aux_contexts(schema, t->nats(), t->params(), ctx);
        std::vector<AuxArg> ps;
        ps.reserve(t->params().size());
        for (std::size_t j = 0; j < t->params().size(); ++j) ps.push_back(normalize_arg(t->params()[j], cs.params[j]));
        TermPtr main = normalize(t->main(), cs.main);
        return reduce(t->op(), t->nats(), std::move(main), std::move(ps), ctx);
      }
    }
    return t;
  }

  AuxArg normalize_arg(const AuxArg& a, const Context& ctx) {
    if (const auto* x = std::get_if<TermArg>(&a)) return TermArg{normalize(x->term, ctx)};
    if (const auto* x = std::get_if<EnvArg>(&a)) {
      EnvArg out{x->kind, {}};
      out.entries.reserve(x->entries.size());
      for (const auto& e : x->entries) out.entries.push_back(normalize(e, ctx));
      return out;
    }
    if (const auto* x = std::get_if<ShiftEnvArg>(&a)) {
      ShiftEnvArg out{{}, x->shift};
      for (const auto& e : x->prefix) out.prefix.push_back(normalize(e, ctx));
      return out;
    }
    return a;
  }

  // Aux node whose main and parameters are already normal.
  TermPtr reduce(AuxId id, std::vector<Nat> nats, TermPtr main, std::vector<AuxArg> params, const Context& ctx) {
    if (main->is_aux() || generic_var(sig_, *main)) return Term::aux(id, std::move(nats), std::move(main), std::move(params));
    Instance inst{id, std::move(nats), std::move(main), std::move(params), ctx};
    const Clause* c = select(inst);
    return instantiate(inst, c, c->body, true, nullptr, nullptr);
  }

  const Clause* select(const Instance& inst) {
    return select_in(inst, inst.main->is_con() ? stack_.clauses_for_op(inst.aux, inst.main->op())
                                               : stack_.clauses_for_var(inst.aux, inst.main->kind()));
  }

  const Clause* select_in(const Instance& inst, const std::vector<const Clause*>& cs) {
    for (const Clause* c : cs) {
      bool ok = true;
      for (const auto& g : c->guards) {
        bool eq = index_of(g.a, *inst.main, inst.params) == index_of(g.b, *inst.main, inst.params);
        if (eq != g.equal) {
          ok = false;
          break;
        }
      }
      if (ok) return c;
    }
    throw StuckError("no clause of " + aux_.at(inst.aux).name + " matches the main argument");
  }

  static Index index_of(const IndexExpr& e, const Term& main, const std::vector<AuxArg>& params) {
    switch (e.source) {
      case IndexSource::Literal: return e.literal;
      case IndexSource::VarIndex: return main.index();
      case IndexSource::RefChild: return main.children().at(e.slot)->index();
      case IndexSource::VarRefParam: return std::get<VarRefArg>(params.at(e.slot)).index;
    }
    return 0;
  }

  TermPtr instantiate(const Instance& inst, const Clause* clause, const BodyPtr& body, bool norm,
                      const RecHook* hook, const std::vector<AuxSchema>* components);

  std::optional<TermPtr> step(const TermPtr& t, const Context& ctx) {
    if (!t->is_aux()) return std::nullopt;
    const TermPtr& main = t->main();
    if (main->is_aux() || generic_var(sig_, *main)) return std::nullopt;
    Instance inst{t->op(), t->nats(), main, t->params(), ctx};
    const Clause* c = select(inst);
    return instantiate(inst, c, c->body, false, nullptr, nullptr);
  }

  TermPtr outermost(const TermPtr& t, const Context& ctx) {
    if (t->aux_free()) return t;
    switch (t->tag()) {
      case Term::Tag::Var: return t;
      case Term::Tag::Con: {
        const OpSchema& op = sig_.op(t->op());
        std::vector<TermPtr> kids;
        for (std::size_t i = 0; i < op.args.size(); ++i) {
          const auto& c = t->children()[i];
          if (const auto* sub = std::get_if<SubArgSpec>(&op.args[i]))
            kids.push_back(outermost(c, ctx.extended(sub->binders, t->nats())));
          else
            kids.push_back(c);
        }
        return Term::con(t->op(), t->nats(), std::move(kids));
      }
      case Term::Tag::Aux: {
        TermPtr cur = t;
        for (;;) {
          if (auto s = step(cur, ctx)) return outermost(*s, ctx);
          const AuxSchema& schema = aux_.at(cur->op());
          AuxContexts cs = aux_contexts(schema, cur->nats(), cur->params(), ctx);
          TermPtr main = cur->main();
          if (main->is_aux()) {
            TermPtr m = outermost(main, cs.main);
            if (!m->is_aux() && !generic_var(sig_, *m)) {
              cur = Term::aux(cur->op(), cur->nats(), m, cur->params());
              continue;
            }
            main = m;
          }
          std::vector<AuxArg> ps;
          for (std::size_t j = 0; j < cur->params().size(); ++j) ps.push_back(outermost_arg(cur->params()[j], cs.params[j]));
          return Term::aux(cur->op(), cur->nats(), main, std::move(ps));
        }
      }
    }
    return t;
  }

  AuxArg outermost_arg(const AuxArg& a, const Context& ctx) {
    if (const auto* x = std::get_if<TermArg>(&a)) return TermArg{outermost(x->term, ctx)};
    if (const auto* x = std::get_if<EnvArg>(&a)) {
      EnvArg out{x->kind, {}};
      for (const auto& e : x->entries) out.entries.push_back(outermost(e, ctx));
      return out;
    }
    if (const auto* x = std::get_if<ShiftEnvArg>(&a)) {
      ShiftEnvArg out{{}, x->shift};
      for (const auto& e : x->prefix) out.prefix.push_back(outermost(e, ctx));
      return out;
    }
    return a;
  }

  const LawStack& stack_;
  const Signature& sig_;
  const AuxTable& aux_;
};

class Evaluator {
 public:
  Evaluator(Engine& eng, const Frame& f, bool norm, const RecHook* hook)
      : eng_(eng), sig_(eng.sig_), aux_(eng.aux_), f_(f), norm_(norm), hook_(hook) {}

  TermPtr body(const Body& b, const Context& G) {
    switch (b.kind) {
      case Body::Kind::Child: return f_.main->children().at(b.slot);
      case Body::Kind::Param: return std::get<TermArg>(f_.params->at(b.slot)).term;
      case Body::Kind::Main: return f_.main;
      case Body::Kind::VarOf: return Term::var(b.var_kind, index(b.index));
      case Body::Kind::Fresh:
        if (fresh_.empty()) throw Error("@ outside a lift template");
        return Term::var(b.var_kind, fresh_.back());
      case Body::Kind::Op: {
        const OpSchema& op = sig_.op(b.id);
        std::vector<Nat> ns = nats(b.nats);
        std::vector<TermPtr> kids;
        kids.reserve(op.args.size());
        for (std::size_t i = 0; i < op.args.size(); ++i) {
          if (const auto* sub = std::get_if<SubArgSpec>(&op.args[i]))
            kids.push_back(body(*b.children[i], G.extended(sub->binders, ns)));
          else
            kids.push_back(body(*b.children[i], G));
        }
        return Term::con(b.id, std::move(ns), std::move(kids));
      }
      case Body::Kind::Aux: {
        if (!b.linked) throw UnknownLaw("unresolved auxiliary operator " + b.name);
        std::vector<Nat> ns = nats(b.nats);
        auto [args, mctx] = call_args(aux_.at(b.id), ns, G, b.args);
        TermPtr main = body(*b.children[0], mctx);
        return node(b.id, std::move(ns), std::move(main), std::move(args), G);
      }
      case Body::Kind::Rec: {
        std::vector<Nat> ns = nats(b.nats);
        TermPtr child = f_.main->children().at(b.slot);
        if (hook_) {
          auto [args, mctx] = call_args(rec_schema_->at(b.id), ns, G, b.args);
          return (*hook_)(b.id, std::move(ns), std::move(child), std::move(args), G);
        }
        AuxId id = f_.comps->at(b.id);
        auto [args, mctx] = call_args(aux_.at(id), ns, G, b.args);
        return node(id, std::move(ns), std::move(child), std::move(args), G);
      }
      case Body::Kind::Lookup: {
        const AuxArg& p = f_.params->at(b.slot);
        Index i = index(b.index);
        if (const auto* e = std::get_if<EnvArg>(&p)) {
          if (i >= e->entries.size()) throw ScopeError("lookup outside the env domain");
          return e->entries[i];
        }
        if (const auto* s = std::get_if<ShiftEnvArg>(&p)) {
          if (i < s->prefix.size()) return s->prefix[i];
          return Term::var(0, i - s->prefix.size() + s->shift);
        }
        return Term::var(0, std::get<ShiftRenArg>(p)(i));
      }
      case Body::Kind::Unknown: break;
    }
    throw Error("cannot evaluate an unresolved body");
  }

  const std::vector<AuxSchema>* rec_schema_ = nullptr;

 private:
  TermPtr node(AuxId id, std::vector<Nat> ns, TermPtr main, std::vector<AuxArg> args, const Context& G) {
    if (norm_) return eng_.reduce(id, std::move(ns), std::move(main), std::move(args), G);
    return Term::aux(id, std::move(ns), std::move(main), std::move(args));
  }

  std::vector<Nat> nats(const std::vector<NatExpr>& es) const {
    std::vector<Nat> out;
    out.reserve(es.size());
    for (const auto& e : es) out.push_back(e.eval(f_.nats));
    return out;
  }

  Index index(const IndexExpr& e) const { return Engine::index_of(e, *f_.main, *f_.params); }

  std::pair<std::vector<AuxArg>, Context> call_args(const AuxSchema& target, const std::vector<Nat>& ns,
                                                    const Context& G, const std::vector<ArgPtr>& args) {
    std::vector<AuxArg> out(target.params.size());
    Context cur = G;
    for (std::size_t j = target.params.size(); j-- > 0;) {
      const auto& p = target.params[j];
      if (p.kind != ParamKind::Env) continue;
      EnvArg e = env(*args.at(j), p.var_kind, cur);
      cur = cur.with(p.var_kind, e.entries.size());
      out[j] = std::move(e);
    }
    for (std::size_t j = 0; j < target.params.size(); ++j) {
      const auto& p = target.params[j];
      switch (p.kind) {
        case ParamKind::Term: out[j] = TermArg{term(*args.at(j), G.extended(p.binders, ns))}; break;
        case ParamKind::VarRef: out[j] = vref(*args.at(j)); break;
        case ParamKind::ShiftEnv: out[j] = senv(*args.at(j)); break;
        case ParamKind::ShiftRen: out[j] = sren(*args.at(j)); break;
        case ParamKind::Env: break;
      }
    }
    return {std::move(out), cur.extended(target.main_binders, ns)};
  }

  TermPtr term(const ArgExpr& a, const Context& R) {
    switch (a.kind) {
      case ArgExpr::Kind::Term: return body(*a.body, R);
      case ArgExpr::Kind::Param: {
        const AuxArg& p = f_.params->at(a.slot);
        if (const auto* t = std::get_if<TermArg>(&p)) return t->term;
        const auto& v = std::get<VarRefArg>(p);
        return Term::var(v.kind, v.index);
      }
      case ArgExpr::Kind::Weaken: {
        Context inner = drop_one(R, a.var_kind);
        return weaken(sig_, &aux_, term(*a.args[0], inner), inner, a.var_kind);
      }
      default: throw Error("argument is not a term");
    }
  }

  VarRefArg vref(const ArgExpr& a) {
    switch (a.kind) {
      case ArgExpr::Kind::Term: {
        const Body& b = *a.body;
        if (b.kind != Body::Kind::VarOf) throw Error("argument is not a variable");
        return VarRefArg{b.var_kind, index(b.index)};
      }
      case ArgExpr::Kind::Param: return std::get<VarRefArg>(f_.params->at(a.slot));
      // Inclusions fix every index below the new top variable.
      case ArgExpr::Kind::Weaken: return vref(*a.args[0]);
      default: throw Error("argument is not a variable reference");
    }
  }

  EnvArg env(const ArgExpr& a, KindId k, const Context& R) {
    switch (a.kind) {
      case ArgExpr::Kind::Param: return std::get<EnvArg>(f_.params->at(a.slot));
      case ArgExpr::Kind::Lift: {
        Context inner = drop_one(R, k);
        EnvArg e = env(*a.args[0], k, inner);
        for (auto& x : e.entries) x = weaken(sig_, &aux_, x, inner, k);
        Index fresh = R[k] - 1;
        if (a.body) {
          fresh_.push_back(fresh);
          e.entries.push_back(body(*a.body, R));
          fresh_.pop_back();
        } else {
          e.entries.push_back(Term::var(k, fresh));
        }
        return e;
      }
      case ArgExpr::Kind::Weaken: {
        Context inner = drop_one(R, a.var_kind);
        EnvArg e = env(*a.args[0], k, inner);
        for (auto& x : e.entries) x = weaken(sig_, &aux_, x, inner, a.var_kind);
        return e;
      }
      case ArgExpr::Kind::Cons: {
        EnvArg e = env(*a.args[0], k, R);
        e.entries.push_back(body(*a.body, R));
        return e;
      }
      case ArgExpr::Kind::IdEnv: {
        EnvArg e{k, {}};
        for (Index i = 0; i < R[k]; ++i) e.entries.push_back(Term::var(k, i));
        return e;
      }
      case ArgExpr::Kind::Map: {
        if (!a.linked) throw UnknownLaw("unresolved auxiliary operator " + a.name);
        std::vector<Nat> ns = nats(a.nats);
        std::vector<ArgPtr> rest(a.args.begin() + 1, a.args.end());
        auto [args, mctx] = call_args(aux_.at(a.id), ns, R, rest);
        EnvArg e = env(*a.args[0], k, mctx);
        for (auto& x : e.entries) x = node(a.id, ns, x, args, R);
        return e;
      }
      default: throw Error("argument is not an env");
    }
  }

  ShiftEnvArg senv(const ArgExpr& a) {
    switch (a.kind) {
      case ArgExpr::Kind::Param: return std::get<ShiftEnvArg>(f_.params->at(a.slot));
      case ArgExpr::Kind::Cons: {
        ShiftEnvArg inner = senv(*a.args[0]);
        ShiftEnvArg out{{body(*a.body, Context::omega())}, inner.shift};
        for (auto& x : inner.prefix) out.prefix.push_back(std::move(x));
        return out;
      }
      case ArgExpr::Kind::ShiftEnvLit: {
        ShiftEnvArg out{{}, a.shift};
        for (const auto& e : a.entries) out.prefix.push_back(body(*e, Context::omega()));
        return out;
      }
      case ArgExpr::Kind::Map: return map_senv(a);
      default: throw Error("argument is not a shift-env");
    }
  }

  // Post-composition of a shift-env with an auxiliary operator f. Beyond the
  // longest prefix among f's own parameters, f must act on variables as a
  // constant shift, which is probed and then checked once more.
  ShiftEnvArg map_senv(const ArgExpr& a) {
    if (!a.linked) throw UnknownLaw("unresolved auxiliary operator " + a.name);
    std::vector<Nat> ns = nats(a.nats);
    std::vector<ArgPtr> rest(a.args.begin() + 1, a.args.end());
    auto [args, mctx] = call_args(aux_.at(a.id), ns, Context::omega(), rest);
    ShiftEnvArg s = senv(*a.args[0]);
    Index T = 0;
    for (const auto& p : args) {
      if (const auto* r = std::get_if<ShiftRenArg>(&p)) T = std::max<Index>(T, r->prefix.size());
      if (const auto* r = std::get_if<ShiftEnvArg>(&p)) T = std::max<Index>(T, r->prefix.size());
    }
    auto probe = [&](Index j) -> long long {
      TermPtr v = eng_.reduce(a.id, ns, Term::var(0, j), args, Context::omega());
      if (!v->is_var()) throw Error("map over a shift-env needs an operator that renames variables");
      return static_cast<long long>(v->index()) - static_cast<long long>(j);
    };
    long long c = probe(T);
    if (probe(T + 1) != c) throw Error("map over a shift-env needs a constant shift on the tail");
    Index P = s.prefix.size();
    Index L = P + (T > s.shift ? T - s.shift : 0);
    ShiftEnvArg out;
    for (Index i = 0; i < L; ++i) {
      TermPtr x = i < P ? s.prefix[i] : Term::var(0, i - P + s.shift);
      out.prefix.push_back(node(a.id, ns, x, args, Context::omega()));
    }
    out.shift = static_cast<Index>(static_cast<long long>(std::max(s.shift, T)) + c);
    return out;
  }

  ShiftRenArg sren(const ArgExpr& a) {
    switch (a.kind) {
      case ArgExpr::Kind::Param: return std::get<ShiftRenArg>(f_.params->at(a.slot));
      case ArgExpr::Kind::ShiftRenLit: return ShiftRenArg{a.prefix, a.shift};
      case ArgExpr::Kind::LiftRen: return lift_ren(sren(*a.args[0]));
      case ArgExpr::Kind::Compose: return compose_ren(sren(*a.args[0]), sren(*a.args[1]));
      default: throw Error("argument is not a renaming");
    }
  }

  Engine& eng_;
  const Signature& sig_;
  const AuxTable& aux_;
  const Frame& f_;
  bool norm_;
  const RecHook* hook_;
  std::vector<Index> fresh_;
};

TermPtr Engine::instantiate(const Instance& inst, const Clause* clause, const BodyPtr& body, bool norm,
                            const RecHook* hook, const std::vector<AuxSchema>* components) {
  Frame f;
  const std::vector<AuxSchema>* comps = components;
  if (components) {
    f.schema = &(*components).at(clause ? clause->component : 0);
  } else {
    f.schema = &aux_.at(inst.aux);
    if (clause) {
      auto [law, k] = stack_.owner(inst.aux);
      (void)k;
      comps = &law->components;
      f.comps = &stack_.sibling_ids(inst.aux);
    }
  }
  f.nats = inst.nats;
  f.main = inst.main;
  f.C = inst.ctx;
  f.params = &inst.params;
  AuxContexts cs = aux_contexts(*f.schema, inst.nats, inst.params, inst.ctx);
  f.M = cs.main;
  f.pctx = std::move(cs.params);
  if (clause && !clause->on_var) {
    if (!inst.main->is_con() || inst.main->op() != clause->op) throw StuckError("clause does not match the main argument");
    for (Nat n : inst.main->nats()) f.nats.push_back(n);
  }
  Evaluator ev(*this, f, norm, hook);
  ev.rec_schema_ = comps;
  return ev.body(*body, inst.ctx);
}

}  // namespace

TermPtr normalize(const LawStack& stack, const TermPtr& t, const Context& ctx) { return Engine(stack).normalize(t, ctx); }

TermPtr normalize(const LawStack& stack, const TermPtr& t) { return normalize(stack, t, default_context(stack.sig())); }

TermPtr normalize_outermost(const LawStack& stack, const TermPtr& t, const Context& ctx) {
  return Engine(stack).outermost(t, ctx);
}

AuxArg normalize_arg(const LawStack& stack, const AuxArg& a, const Context& ctx) {
  return Engine(stack).normalize_arg(a, ctx);
}

std::optional<TermPtr> step(const LawStack& stack, const TermPtr& t, const Context& ctx) {
  return Engine(stack).step(t, ctx);
}

Context default_context(const Signature& sig) {
  if (!sig.scoped()) return Context::omega();
  return Context::zeros(sig.kinds.size());
}

bool is_stuck(const LawStack& stack, const Term& t) {
  if (!t.is_aux()) return false;
  const Term& m = *t.main();
  if (m.is_var()) return stack.sig().kinds.at(m.kind()).generic;
  return m.is_aux() && is_stuck(stack, m);
}

TermPtr apply_aux(const LawStack& stack, std::string_view name, std::vector<Nat> nats, TermPtr main,
                  std::vector<AuxArg> params) {
  return apply_aux(stack, name, std::move(nats), std::move(main), std::move(params), default_context(stack.sig()));
}

TermPtr apply_aux(const LawStack& stack, std::string_view name, std::vector<Nat> nats, TermPtr main,
                  std::vector<AuxArg> params, const Context& ctx) {
  auto id = stack.aux().find(name);
  if (!id) throw UnknownLaw("unknown auxiliary operator " + std::string(name));
  const AuxSchema& schema = stack.aux().at(*id);
  if (nats.size() != schema.nat_names.size()) throw ScopeError(schema.name + ": wrong number of nat arguments");
  TermPtr t = Term::aux(*id, std::move(nats), std::move(main), std::move(params));
  Sort sort = instantiate(schema.result, t->nats());
  if (auto err = scope_error(stack.sig(), &stack.aux(), ctx, sort, *t)) throw ScopeError(*err);
  return normalize(stack, t, ctx);
}

TermPtr instantiate_body(const LawStack& stack, const Instance& inst, const Clause* clause, const BodyPtr& body,
                         bool normalize, const RecHook* hook, const std::vector<AuxSchema>* components) {
  return Engine(stack).instantiate(inst, clause, body, normalize, hook, components);
}

const Clause* select_among(const std::vector<const Clause*>& cs, const Term& main, const std::vector<AuxArg>& params) {
  for (const Clause* c : cs) {
    bool ok = true;
    for (const auto& g : c->guards)
      if ((Engine::index_of(g.a, main, params) == Engine::index_of(g.b, main, params)) != g.equal) {
        ok = false;
        break;
      }
    if (ok) return c;
  }
  return nullptr;
}

const Clause* select_clause(const LawStack& stack, const Instance& inst) {
  Engine eng(stack);
  if (inst.main->is_aux() || generic_var(stack.sig(), *inst.main)) return nullptr;
  return eng.select(inst);
}

}  // namespace structlaws
