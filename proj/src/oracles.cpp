// Reference implementations written directly against the term constructors.
// Nothing here calls the engine's renaming, weakening or normalizer.

#include <map>

#include "structlaws/examples.hpp"

namespace structlaws {

namespace {

struct Ops {
  const Signature& sig;
  std::map<std::string, OpId, std::less<>> ids;

  explicit Ops(const Signature& s) : sig(s) {
    for (OpId i = 0; i < s.ops.size(); ++i) ids[s.ops[i].name] = i;
  }
  OpId id(std::string_view name) const {
    auto it = ids.find(name);
    if (it == ids.end()) throw UnknownOp(std::string(name));
    return it->second;
  }
  bool is(const Term& t, std::string_view name) const { return t.is_con() && sig.ops[t.op()].name == name; }
  TermPtr make(std::string_view name, std::vector<TermPtr> kids, std::vector<Nat> nats = {}) const {
    return Term::con(id(name), std::move(nats), std::move(kids));
  }
  KindId kind(std::string_view name) const {
    for (KindId k = 0; k < sig.kinds.size(); ++k)
      if (sig.kinds[k].name == name) return k;
    throw UnknownOp(std::string(name));
  }
};

void require_closed(const Signature& sig, const Term& t) {
  if (t.is_aux()) throw OpenTermError("oracle input contains an auxiliary operator");
  if (t.is_var() && sig.kinds.at(t.kind()).generic) throw OpenTermError("oracle input contains a variable");
  for (const auto& c : t.children()) require_closed(sig, *c);
}

void require_closed(const Signature& sig, const TermPtr& main, const std::vector<AuxArg>& params) {
  require_closed(sig, *main);
  for (const auto& p : params) {
    if (const auto* a = std::get_if<TermArg>(&p)) require_closed(sig, *a->term);
    if (const auto* a = std::get_if<EnvArg>(&p))
      for (const auto& e : a->entries) require_closed(sig, *e);
    if (const auto* a = std::get_if<ShiftEnvArg>(&p))
      for (const auto& e : a->prefix) require_closed(sig, *e);
  }
}

const TermPtr& term_param(const std::vector<AuxArg>& ps, std::size_t i) { return std::get<TermArg>(ps.at(i)).term; }

TermPtr rebuild(const Term& t, std::vector<TermPtr> kids) { return Term::con(t.op(), t.nats(), std::move(kids)); }

// Top-binding weakening: a fresh variable of kind k is added at index
// `cutoff`, so every index >= cutoff moves up by one.
TermPtr bump(const TermPtr& t, KindId k, Index cutoff) {
  if (t->is_var()) {
    if (t->kind() == k && t->index() >= cutoff) return Term::var(k, t->index() + 1);
    return t;
  }
  std::vector<TermPtr> kids;
  for (const auto& c : t->children()) kids.push_back(bump(c, k, cutoff));
  return rebuild(*t, std::move(kids));
}

// ---------------------------------------------------------------------------
// Peano

std::uint64_t numeral_value(const Ops& o, const Term& t) {
  std::uint64_t n = 0;
  const Term* cur = &t;
  while (o.is(*cur, "s")) {
    ++n;
    cur = cur->children()[0].get();
  }
  if (!o.is(*cur, "z")) throw OpenTermError("not a numeral");
  return n;
}

TermPtr numeral(const Ops& o, std::uint64_t n) {
  TermPtr t = o.make("z", {});
  while (n--) t = o.make("s", {t});
  return t;
}

// ---------------------------------------------------------------------------
// Evaluation contexts and the sharing calculus: plug by structural recursion.

TermPtr plug_ctx(const Ops& o, const TermPtr& E, const TermPtr& e) {
  if (o.is(*E, "hole")) return e;
  if (o.is(*E, "capp")) return o.make("app", {plug_ctx(o, E->children()[0], e), E->children()[1]});
  throw OpenTermError("not an evaluation context");
}

TermPtr plug_sharing(const Ops& o, const TermPtr& E, const TermPtr& e) {
  if (o.is(*E, "hole")) return e;
  if (o.is(*E, "ext")) return o.make("esub", {plug_sharing(o, E->children()[0], e), E->children()[1]});
  throw OpenTermError("not a context");
}

// ---------------------------------------------------------------------------
// Scoped lambda terms: environment-passing substitution. An env maps the n
// variables of the input to terms over m variables.

TermPtr env_subst(const Ops& o, const TermPtr& t, const std::vector<TermPtr>& env, Index m) {
  if (t->is_var()) {
    if (t->index() >= env.size()) throw ScopeError("variable outside the environment");
    return env[t->index()];
  }
  if (o.is(*t, "app"))
    return o.make("app", {env_subst(o, t->children()[0], env, m), env_subst(o, t->children()[1], env, m)});
  // lam: the bound variable is the new top one on both sides.
  std::vector<TermPtr> lifted;
  for (const auto& e : env) lifted.push_back(bump(e, 0, m));
  lifted.push_back(Term::var(0, m));
  return o.make("lam", {env_subst(o, t->children()[0], lifted, m + 1)});
}

// ---------------------------------------------------------------------------
// De Bruijn terms: shifting, renaming and substitution.

TermPtr db_shift(const Ops& o, const TermPtr& t, Index by, Index cutoff) {
  if (t->is_var()) return t->index() >= cutoff ? Term::var(0, t->index() + by) : t;
  if (o.is(*t, "app"))
    return o.make("app", {db_shift(o, t->children()[0], by, cutoff), db_shift(o, t->children()[1], by, cutoff)});
  return o.make("lam", {db_shift(o, t->children()[0], by, cutoff + 1)});
}

TermPtr db_rename(const Ops& o, const TermPtr& t, const std::function<Index(Index)>& r) {
  if (t->is_var()) return Term::var(0, r(t->index()));
  if (o.is(*t, "app")) return o.make("app", {db_rename(o, t->children()[0], r), db_rename(o, t->children()[1], r)});
  auto up = [&](Index i) { return i == 0 ? Index{0} : r(i - 1) + 1; };
  return o.make("lam", {db_rename(o, t->children()[0], up)});
}

TermPtr db_subst(const Ops& o, const TermPtr& t, const std::function<TermPtr(Index)>& s) {
  if (t->is_var()) return s(t->index());
  if (o.is(*t, "app")) return o.make("app", {db_subst(o, t->children()[0], s), db_subst(o, t->children()[1], s)});
  auto up = [&](Index i) { return i == 0 ? Term::var(0, 0) : db_shift(o, s(i - 1), 1, 0); };
  return o.make("lam", {db_subst(o, t->children()[0], up)});
}

// ---------------------------------------------------------------------------
// lambda-mu: named substitution.

struct Lammu {
  const Ops& o;
  KindId pv, cv;

  TermPtr run(const TermPtr& t, Index j, const TermPtr& g, Index np, Index nc) const {
    if (t->is_var()) return t;
    const auto& k = t->children();
    if (o.is(*t, "app")) return o.make("app", {run(k[0], j, g, np, nc), run(k[1], j, g, np, nc)});
    if (o.is(*t, "lam")) return o.make("lam", {run(k[0], j, bump(g, pv, np), np + 1, nc)});
    if (o.is(*t, "mu")) return o.make("mu", {run(k[0], j, bump(g, cv, nc), np, nc + 1)});
    // [b]e
    TermPtr e = run(k[1], j, g, np, nc);
    if (k[0]->index() == j) e = o.make("app", {e, g});
    return o.make("name", {k[0], e});
  }
};

// ---------------------------------------------------------------------------
// Differential lambda calculus. Multiterms are handled as lists of simple
// terms.

using Multi = std::vector<TermPtr>;

struct Diff {
  const Ops& o;

  Multi list(const TermPtr& M) const {
    Multi out;
    const Term* cur = M.get();
    while (o.is(*cur, "sum")) {
      out.push_back(cur->children()[0]);
      cur = cur->children()[1].get();
    }
    if (!o.is(*cur, "nil")) throw OpenTermError("not a multiterm");
    return out;
  }
  TermPtr term(const Multi& m) const {
    TermPtr t = o.make("nil", {});
    for (auto it = m.rbegin(); it != m.rend(); ++it) t = o.make("sum", {*it, t});
    return t;
  }
  static Multi plus(Multi a, const Multi& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
  }
  Multi appx(const Multi& M, const Multi& N) const {
    Multi out;
    TermPtr n = term(N);
    for (const auto& e : M) out.push_back(o.make("app", {e, n}));
    return out;
  }
  Multi abs(const Multi& M) const {
    Multi out;
    for (const auto& e : M) out.push_back(o.make("lam", {e}));
    return out;
  }
  Multi lapp0(const Multi& N, const TermPtr& e) const {
    Multi out;
    for (const auto& f : N) out.push_back(o.make("dapp", {e, f}));
    return out;
  }
  Multi lapp(const Multi& M, const Multi& N) const {
    Multi out;
    for (const auto& e : M) out = plus(out, lapp0(N, e));
    return out;
  }

  // Simple or multiterm `t` with each variable i replaced by env[i]; entries
  // live over m variables.
  Multi subst(const TermPtr& t, const std::vector<Multi>& env, Index m) const {
    if (t->is_var()) {
      if (t->index() >= env.size()) throw ScopeError("variable outside the environment");
      return env[t->index()];
    }
    const auto& k = t->children();
    if (o.is(*t, "nil")) return {};
    if (o.is(*t, "sum")) return plus(subst(k[0], env, m), subst(k[1], env, m));
    if (o.is(*t, "app")) return appx(subst(k[0], env, m), subst(k[1], env, m));
    if (o.is(*t, "dapp")) return lapp(subst(k[0], env, m), subst(k[1], env, m));
    std::vector<Multi> lifted;
    for (const auto& entry : env) {
      Multi w;
      for (const auto& e : entry) w.push_back(bump(e, 0, m));
      lifted.push_back(std::move(w));
    }
    lifted.push_back({Term::var(0, m)});
    return abs(subst(k[0], lifted, m + 1));
  }

  // Partial derivative of `t` along variable x, applied to M; n variables
  // in scope.
  Multi diff(const TermPtr& t, Index x, const Multi& M, Index n) const {
    if (t->is_var()) return t->index() == x ? M : Multi{};
    const auto& k = t->children();
    if (o.is(*t, "nil")) return {};
    if (o.is(*t, "sum")) return plus(diff(k[0], x, M, n), diff(k[1], x, M, n));
    if (o.is(*t, "app")) {
      Multi N = list(k[1]);
      return plus(appx(diff(k[0], x, M, n), N), appx(lapp0(diff(k[1], x, M, n), k[0]), N));
    }
    if (o.is(*t, "dapp")) return plus(lapp(diff(k[0], x, M, n), {k[1]}), lapp0(diff(k[1], x, M, n), k[0]));
    Multi w;
    for (const auto& e : M) w.push_back(bump(e, 0, n));
    return abs(diff(k[0], x, w, n + 1));
  }
};

std::vector<Oracle> peano_oracles(const Signature& sig) {
  auto o = std::make_shared<Ops>(sig);
  auto arith = [o](auto f) -> OracleFn {
    return [o, f](const std::vector<Nat>&, const TermPtr& m, const std::vector<AuxArg>& ps, const Context&) {
      return numeral(*o, f(numeral_value(*o, *m), numeral_value(*o, *term_param(ps, 0))));
    };
  };
  return {{"add", arith([](std::uint64_t a, std::uint64_t b) { return a + b; })},
          {"mul", arith([](std::uint64_t a, std::uint64_t b) { return a * b; })}};
}

std::vector<Oracle> presheaf_oracles(const Signature& sig) {
  auto o = std::make_shared<Ops>(sig);
  return {{"subst", [o](const std::vector<Nat>&, const TermPtr& m, const std::vector<AuxArg>& ps, const Context& ctx) {
             return env_subst(*o, m, std::get<EnvArg>(ps.at(0)).entries, ctx[0]);
           }}};
}

std::vector<Oracle> debruijn_oracles(const Signature& sig) {
  auto o = std::make_shared<Ops>(sig);
  OracleFn ren = [o](const std::vector<Nat>&, const TermPtr& m, const std::vector<AuxArg>& ps, const Context&) {
    const auto& r = std::get<ShiftRenArg>(ps.at(0));
    return db_rename(*o, m, [&](Index i) { return i < r.prefix.size() ? r.prefix[i] : i - r.prefix.size() + r.shift; });
  };
  OracleFn subst = [o](const std::vector<Nat>&, const TermPtr& m, const std::vector<AuxArg>& ps, const Context&) {
    const auto& s = std::get<ShiftEnvArg>(ps.at(0));
    return db_subst(*o, m, [&](Index i) {
      return i < s.prefix.size() ? s.prefix[i] : Term::var(0, i - s.prefix.size() + s.shift);
    });
  };
  return {{"ren", ren}, {"subst", subst}};
}

std::vector<Oracle> plug_oracles(const Signature& sig, bool sharing) {
  auto o = std::make_shared<Ops>(sig);
  return {{"plug", [o, sharing](const std::vector<Nat>&, const TermPtr& m, const std::vector<AuxArg>& ps,
                                const Context&) {
             return sharing ? plug_sharing(*o, m, term_param(ps, 0)) : plug_ctx(*o, m, term_param(ps, 0));
           }}};
}

std::vector<Oracle> lammu_oracles(const Signature& sig) {
  auto o = std::make_shared<Ops>(sig);
  OracleFn f = [o](const std::vector<Nat>&, const TermPtr& m, const std::vector<AuxArg>& ps, const Context& ctx) {
    Lammu l{*o, o->kind("pv"), o->kind("cv")};
    return l.run(m, std::get<VarRefArg>(ps.at(0)).index, term_param(ps, 1), ctx[l.pv], ctx[l.cv]);
  };
  return {{"nsub", f}, {"nsub-c", f}};
}

std::vector<Oracle> difflambda_oracles(const Signature& sig) {
  auto o = std::make_shared<Ops>(sig);
  using Fn = std::function<Multi(const Diff&, const TermPtr&, const std::vector<AuxArg>&, const Context&)>;
  auto wrap = [o](Fn f) -> OracleFn {
    return [o, f](const std::vector<Nat>&, const TermPtr& m, const std::vector<AuxArg>& ps, const Context& ctx) {
      Diff d{*o};
      return d.term(f(d, m, ps, ctx));
    };
  };
  auto multi = [](const Diff& d, const std::vector<AuxArg>& ps, std::size_t i) { return d.list(term_param(ps, i)); };
  Fn subst = [](const Diff& d, const TermPtr& m, const std::vector<AuxArg>& ps, const Context& ctx) {
    std::vector<Multi> env;
    for (const auto& e : std::get<EnvArg>(ps.at(0)).entries) env.push_back(d.list(e));
    return d.subst(m, env, ctx[0]);
  };
  Fn diff = [multi](const Diff& d, const TermPtr& m, const std::vector<AuxArg>& ps, const Context& ctx) {
    return d.diff(m, std::get<VarRefArg>(ps.at(0)).index, multi(d, ps, 1), ctx[0]);
  };
  return {
      {"plus", wrap([multi](const Diff& d, const TermPtr& m, const std::vector<AuxArg>& ps, const Context&) {
         return Diff::plus(d.list(m), multi(d, ps, 0));
       })},
      {"appx", wrap([multi](const Diff& d, const TermPtr& m, const std::vector<AuxArg>& ps, const Context&) {
         return d.appx(d.list(m), multi(d, ps, 0));
       })},
      {"abs", wrap([](const Diff& d, const TermPtr& m, const std::vector<AuxArg>&, const Context&) {
         return d.abs(d.list(m));
       })},
      {"lapp0", wrap([](const Diff& d, const TermPtr& m, const std::vector<AuxArg>& ps, const Context&) {
         return d.lapp0(d.list(m), term_param(ps, 0));
       })},
      {"lapp", wrap([multi](const Diff& d, const TermPtr& m, const std::vector<AuxArg>& ps, const Context&) {
         return d.lapp(d.list(m), multi(d, ps, 0));
       })},
      {"subst", wrap(subst)},
      {"subst-m", wrap(subst)},
      {"diff", wrap(diff)},
      {"diff-m", wrap(diff)},
  };
}

}  // namespace

std::vector<Oracle> make_oracles(const Signature& sig) {
  std::vector<Oracle> out;
  if (sig.name == "peano") out = peano_oracles(sig);
  else if (sig.name == "lambda-presheaf") out = presheaf_oracles(sig);
  else if (sig.name == "lambda-debruijn") out = debruijn_oracles(sig);
  else if (sig.name == "eval-ctx") out = plug_oracles(sig, false);
  else if (sig.name == "sharing") out = plug_oracles(sig, true);
  else if (sig.name == "lammu") out = lammu_oracles(sig);
  else if (sig.name == "difflambda") out = difflambda_oracles(sig);
  for (auto& oracle : out) {
    OracleFn inner = std::move(oracle.eval);
    const Signature* s = &sig;
    oracle.eval = [inner, s](const std::vector<Nat>& nats, const TermPtr& m, const std::vector<AuxArg>& ps,
                             const Context& ctx) {
      require_closed(*s, m, ps);
      return inner(nats, m, ps, ctx);
    };
  }
  return out;
}

std::uint64_t peano_value(const LawStack& stack, const Term& t) {
  const Signature& sig = stack.sig();
  switch (t.tag()) {
    case Term::Tag::Var:
      throw OpenTermError("peano_value: variable");
    case Term::Tag::Con: {
      const auto& name = sig.ops[t.op()].name;
      if (name == "z") return 0;
      if (name == "s") return peano_value(stack, *t.children()[0]) + 1;
      throw UnknownOp(name);
    }
    case Term::Tag::Aux: {
      const auto& name = stack.aux().at(t.op()).name;
      std::uint64_t a = peano_value(stack, *t.main());
      std::uint64_t b = peano_value(stack, *std::get<TermArg>(t.params().at(0)).term);
      if (name == "add") return a + b;
      if (name == "mul") return a * b;
      throw UnknownOp(name);
    }
  }
  return 0;
}

TermPtr peano_numeral(const Signature& sig, std::uint64_t n) { return numeral(Ops(sig), n); }

}  // namespace structlaws
