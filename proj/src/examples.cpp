#include "structlaws/examples.hpp"

#include "structlaws/syntax.hpp"

namespace structlaws {

namespace {

Bounds bundle_bounds(std::string_view name) {
  Bounds b;
  if (name == "peano") {
    b.size = 6;
    b.param_size = 4;
  } else if (name == "lambda-presheaf") {
    b.size = 4;
    b.param_size = 2;
    b.ctx = 2;
  } else if (name == "lambda-debruijn") {
    b.size = 4;
    b.param_size = 2;
    b.ctx = 2;
    b.prefix = 1;
    b.shift = 2;
  } else if (name == "sharing") {
    b.size = 5;
    b.param_size = 3;
  } else if (name == "difflambda") {
    b.size = 4;
    b.param_size = 2;
    b.ctx = 2;
  } else {
    b.size = 5;
    b.param_size = 3;
    b.ctx = 2;
  }
  return b;
}

const Oracle* find_oracle(const ExampleBundle& b, std::string_view aux) {
  for (const auto& o : b.oracles)
    if (o.aux == aux) return &o;
  return nullptr;
}

}  // namespace

std::vector<std::string> bundle_names() {
  std::vector<std::string> out;
  for (const auto& e : embedded_bundles()) out.emplace_back(e.name);
  return out;
}

ExampleBundle load_bundle(std::string name, std::string_view signature, std::string_view laws, std::string_view eqs,
                          const std::string& source_prefix) {
  Signature sig = parse_signature(signature, source_prefix + "signature.sexp");
  auto parsed = parse_laws(sig, laws, source_prefix + "laws.sexp");
  ExampleBundle b{std::move(name), build_stack(std::move(sig), std::move(parsed)), {}, {}, Bounds{}};
  if (!eqs.empty()) {
    b.systems = parse_eqsystems(b.stack, eqs, source_prefix + "eqs.sexp");
    Diagnostics all;
    for (const auto& eq : b.systems)
      for (auto& d : validate_eqsys(b.stack, eq)) all.push_back(std::move(d));
    if (!all.empty()) throw ValidationError(std::move(all));
  }
  return b;
}

ExampleBundle build(std::string_view name) {
  for (const auto& e : embedded_bundles()) {
    if (e.name != name) continue;
    ExampleBundle b = load_bundle(std::string(name), e.signature, e.laws, e.eqs, std::string(name) + "/");
    b.oracles = make_oracles(b.stack.sig());
    b.bounds = bundle_bounds(name);
    return b;
  }
  throw Error("unknown bundle: " + std::string(name));
}

TermPtr oracle_eval(const ExampleBundle& b, std::string_view aux, const std::vector<Nat>& nats, const TermPtr& main,
                    const std::vector<AuxArg>& params, const Context& ctx) {
  const Oracle* o = find_oracle(b, aux);
  if (!o) throw UnknownLaw("no oracle for " + std::string(aux));
  return o->eval(nats, main, params, ctx);
}

Report crosscheck(const ExampleBundle& b, const Bounds& bounds, unsigned jobs) {
  const LawStack& stack = b.stack;
  Enumerator en(stack);
  std::vector<Report> parts;
  for (AuxId id = 0; id < stack.aux().size(); ++id) {
    const AuxSchema& schema = stack.aux().at(id);
    const Oracle* o = find_oracle(b, schema.name);
    if (!o) continue;
    InstanceSpace space(en, schema, bounds);
    parts.push_back(run_indexed(schema.name, space.size(), jobs, [&](std::uint64_t i) -> std::optional<Counterexample> {
      InstanceValue v = space.at(i);
      TermPtr got = normalize(stack, Term::aux(id, v.nats, v.main, v.params), v.ctx);
      TermPtr want = o->eval(v.nats, v.main, v.params, v.ctx);
      if (term_eq(got, want)) return std::nullopt;
      return Counterexample{describe_instance(stack, schema, v), print_term(stack.sig(), &stack.aux(), *got),
                            print_term(stack.sig(), &stack.aux(), *want)};
    }));
  }
  if (bounds.size == 0) {
    Report r;
    r.name = "oracle";
    return r;
  }
  return merge_reports("oracle", parts);
}

// ---------------------------------------------------------------------------
// Peano

namespace {

AugmentedAlgebra<std::uint64_t> nat_algebra(bool max_for_add) {
  using V = std::uint64_t;
  AugmentedAlgebra<V> a;
  a.equal = [](const V& x, const V& y) { return x == y; };
  a.show = [](const V& x) { return std::to_string(x); };
  a.ops["z"] = [](const std::vector<Nat>&, const std::vector<V>&) { return V{0}; };
  a.ops["s"] = [](const std::vector<Nat>&, const std::vector<V>& k) { return k[0] + 1; };
  a.aux["add"] = [max_for_add](const std::vector<Nat>&, const V& m, const std::vector<AlgArg<V>>& ps) {
    return max_for_add ? std::max(m, ps[0].value) : m + ps[0].value;
  };
  a.aux["mul"] = [](const std::vector<Nat>&, const V& m, const std::vector<AlgArg<V>>& ps) {
    return m * ps[0].value;
  };
  return a;
}

constexpr std::string_view kWrongAssoc = R"((eqsys add-assoc-wrong
  (schema add3 (result nat) (main a nat) (params (b term nat) (c term nat)))
  (clauses
    (clause (on z) (aux add () b (c)))
    (clause (on s) (binds k) (op s (rc k () (b c)))))
  (left (aux add () (aux add () a (b)) (c)))
  (right (aux add () a ((aux add () b ((op s c))))))))";

}  // namespace

AugmentedAlgebra<std::uint64_t> peano_nat_algebra() { return nat_algebra(false); }
AugmentedAlgebra<std::uint64_t> peano_max_algebra() { return nat_algebra(true); }

EquationSystem peano_wrong_assoc(const LawStack& stack) {
  return parse_eqsystems(stack, kWrongAssoc, "add-assoc-wrong").front();
}

// ---------------------------------------------------------------------------
// Differential lambda calculus tables

namespace {

struct Build {
  const LawStack& stack;

  TermPtr op(std::string_view name, std::vector<TermPtr> kids = {}) const {
    return Term::con(*stack.sig().find_op(name), {}, std::move(kids));
  }
  TermPtr aux(std::string_view name, TermPtr main, std::vector<AuxArg> ps = {}) const {
    return Term::aux(*stack.aux().find(name), {}, std::move(main), std::move(ps));
  }
  TermPtr aux(std::string_view name, TermPtr main, TermPtr p) const { return aux(name, std::move(main), {TermArg{p}}); }
  TermPtr var(Index i) const { return Term::var(0, i); }
  TermPtr single(const TermPtr& e) const { return op("sum", {e, op("nil")}); }
  // x := M, every other variable y := y + 0.
  AuxArg env(const TermPtr& M, Index x, Index n) const {
    EnvArg e{0, {}};
    for (Index i = 0; i < n; ++i) e.entries.push_back(i == x ? M : single(var(i)));
    return e;
  }
  AuxArg ref(Index x) const { return VarRefArg{0, x}; }
};

}  // namespace

std::vector<TableLine> difflambda_table(const ExampleBundle& b) {
  const LawStack& st = b.stack;
  const Signature& sig = st.sig();
  Build B{st};
  FamilyId s = *sig.find_sort("s");
  FamilyId m = *sig.find_sort("m");
  using Ts = std::vector<TermPtr>;
  using P = std::pair<TermPtr, TermPtr>;
  const Index x = 0, y = 1;
  std::vector<TableLine> out;
  auto line = [&](std::string table, std::string text, std::vector<FamilyId> mv, auto f) {
    out.push_back(TableLine{std::move(table), std::move(text), std::move(mv),
                            [f](const Ts& v, const Context& c) -> P { return f(v, c[0]); }});
  };
  // The lambda lines put their metavariable under the binder.
  auto weak = [B](const TermPtr& t, Index n) { return weaken(B.stack.sig(), &B.stack.aux(), t, Context{{n}}, 0); };

  line("A", "0 + N = N", {m}, [B](const Ts& v, Index) { return P{B.aux("plus", B.op("nil"), v[0]), v[0]}; });
  line("A", "(e + M) + N = e + (M + N)", {s, m, m}, [B](const Ts& v, Index) {
    return P{B.aux("plus", B.op("sum", {v[0], v[1]}), v[2]), B.op("sum", {v[0], B.aux("plus", v[1], v[2])})};
  });
  line("A", "0 N = 0", {m}, [B](const Ts& v, Index) { return P{B.aux("appx", B.op("nil"), v[0]), B.op("nil")}; });
  line("A", "(e + M) N = (e N) + M N", {s, m, m}, [B](const Ts& v, Index) {
    return P{B.aux("appx", B.op("sum", {v[0], v[1]}), v[2]),
             B.op("sum", {B.op("app", {v[0], v[2]}), B.aux("appx", v[1], v[2])})};
  });
  line("A", "lambda x. 0 = 0", {}, [B](const Ts&, Index) { return P{B.aux("abs", B.op("nil")), B.op("nil")}; });
  line("A", "lambda x. (e + M) = lambda x. e + lambda x. M", {s, m}, [B, weak](const Ts& v, Index n) {
    TermPtr e = weak(v[0], n), M = weak(v[1], n);
    return P{B.aux("abs", B.op("sum", {e, M})), B.op("sum", {B.op("lam", {e}), B.aux("abs", M)})};
  });
  line("A", "D(e) . 0 = 0", {s}, [B](const Ts& v, Index) { return P{B.aux("lapp0", B.op("nil"), v[0]), B.op("nil")}; });
  line("A", "D(e) . (f + N) = D(e) . f + D(e) . N", {s, s, m}, [B](const Ts& v, Index) {
    return P{B.aux("lapp0", B.op("sum", {v[1], v[2]}), v[0]),
             B.op("sum", {B.op("dapp", {v[0], v[1]}), B.aux("lapp0", v[2], v[0])})};
  });
  line("A", "D(0) . N = 0", {m}, [B](const Ts& v, Index) { return P{B.aux("lapp", B.op("nil"), v[0]), B.op("nil")}; });
  line("A", "D(e + M) . N = D(e) . N + D(M) . N", {s, m, m}, [B](const Ts& v, Index) {
    return P{B.aux("lapp", B.op("sum", {v[0], v[1]}), v[2]),
             B.aux("plus", B.aux("lapp0", v[2], v[0]), B.aux("lapp", v[1], v[2]))};
  });

  line("B", "x[x := M] = M", {m}, [B](const Ts& v, Index n) {
    return P{B.aux("subst", B.var(x), {B.env(v[0], x, n)}), v[0]};
  });
  line("B", "y[x := M] = y + 0", {m}, [B](const Ts& v, Index n) {
    return P{B.aux("subst", B.var(y), {B.env(v[0], x, n)}), B.single(B.var(y))};
  });
  line("B", "(lambda y. e)[x := M] = lambda y. (e[x := M])", {s, m}, [B, weak](const Ts& v, Index n) {
    TermPtr e = weak(v[0], n);
    EnvArg up = std::get<EnvArg>(B.env(weak(v[1], n), x, n));
    up.entries.push_back(B.single(B.var(n)));
    return P{B.aux("subst", B.op("lam", {e}), {B.env(v[1], x, n)}), B.aux("abs", B.aux("subst", e, {up}))};
  });
  line("B", "(e N)[x := M] = e[x := M] N[x := M]", {s, m, m}, [B](const Ts& v, Index n) {
    AuxArg sg = B.env(v[2], x, n);
    return P{B.aux("subst", B.op("app", {v[0], v[1]}), {sg}),
             B.aux("appx", B.aux("subst", v[0], {sg}), B.aux("subst-m", v[1], {sg}))};
  });
  line("B", "(D e . f)[x := M] = D e[x := M] . f[x := M]", {s, s, m}, [B](const Ts& v, Index n) {
    AuxArg sg = B.env(v[2], x, n);
    return P{B.aux("subst", B.op("dapp", {v[0], v[1]}), {sg}),
             B.aux("lapp", B.aux("subst", v[0], {sg}), B.aux("subst", v[1], {sg}))};
  });
  line("B", "0[x := M] = 0", {m}, [B](const Ts& v, Index n) {
    return P{B.aux("subst-m", B.op("nil"), {B.env(v[0], x, n)}), B.op("nil")};
  });
  line("B", "(e + N)[x := M] = e[x := M] + N[x := M]", {s, m, m}, [B](const Ts& v, Index n) {
    AuxArg sg = B.env(v[2], x, n);
    return P{B.aux("subst-m", B.op("sum", {v[0], v[1]}), {sg}),
             B.aux("plus", B.aux("subst", v[0], {sg}), B.aux("subst-m", v[1], {sg}))};
  });

  auto d = [B](std::string_view name, const TermPtr& t, const TermPtr& M) {
    return B.aux(name, t, {B.ref(x), TermArg{M}});
  };
  line("C", "dx/dx . M = M", {m}, [d, B](const Ts& v, Index) { return P{d("diff", B.var(x), v[0]), v[0]}; });
  line("C", "dy/dx . M = 0", {m}, [d, B](const Ts& v, Index) { return P{d("diff", B.var(y), v[0]), B.op("nil")}; });
  line("C", "d(e N)/dx . M = (de/dx . M) N + (D e . (dN/dx . M)) N", {s, m, m}, [d, B](const Ts& v, Index) {
    const TermPtr &e = v[0], &N = v[1], &M = v[2];
    return P{d("diff", B.op("app", {e, N}), M),
             B.aux("plus", B.aux("appx", d("diff", e, M), N), B.aux("appx", B.aux("lapp0", d("diff-m", N, M), e), N))};
  });
  line("C", "d(lambda y. e)/dx . M = lambda y. (de/dx . M)", {s, m}, [d, B, weak](const Ts& v, Index n) {
    TermPtr e = weak(v[0], n);
    return P{d("diff", B.op("lam", {e}), v[1]), B.aux("abs", d("diff", e, weak(v[1], n)))};
  });
  line("C", "d(D e . f)/dx . M = D(de/dx . M) . f + D e . (df/dx . M)", {s, s, m}, [d, B](const Ts& v, Index) {
    const TermPtr &e = v[0], &f = v[1], &M = v[2];
    return P{d("diff", B.op("dapp", {e, f}), M),
             B.aux("plus", B.aux("lapp", d("diff", e, M), B.single(f)), B.aux("lapp0", d("diff", f, M), e))};
  });
  line("C", "d0/dx . M = 0", {m}, [d, B](const Ts& v, Index) { return P{d("diff-m", B.op("nil"), v[0]), B.op("nil")}; });
  line("C", "d(e + N)/dx . M = de/dx . M + dN/dx . M", {s, m, m}, [d, B](const Ts& v, Index) {
    const TermPtr &e = v[0], &N = v[1], &M = v[2];
    return P{d("diff-m", B.op("sum", {e, N}), M), B.aux("plus", d("diff", e, M), d("diff-m", N, M))};
  });
  return out;
}

std::vector<Report> check_difflambda_table(const ExampleBundle& b, std::size_t size, Index ctx, unsigned jobs) {
  const LawStack& st = b.stack;
  Enumerator en(st);
  Context c{{ctx}};
  std::vector<Report> out;
  for (const auto& l : difflambda_table(b)) {
    std::vector<std::vector<TermPtr>> pools;
    std::uint64_t n = 1;
    for (FamilyId f : l.metavars) {
      pools.push_back(en.upto(Sort{f, std::nullopt}, c, size));
      n *= pools.back().size();
    }
    out.push_back(run_indexed(l.table + ": " + l.text, n, jobs, [&](std::uint64_t i) -> std::optional<Counterexample> {
      std::vector<TermPtr> v(pools.size());
      for (std::size_t k = pools.size(); k-- > 0;) {
        v[k] = pools[k][i % pools[k].size()];
        i /= pools[k].size();
      }
      auto [lhs, rhs] = l.sides(v, c);
      TermPtr nl = normalize(st, lhs, c), nr = normalize(st, rhs, c);
      if (term_eq(nl, nr)) return std::nullopt;
      std::string in;
      for (const auto& t : v) in += (in.empty() ? "" : " ") + print_term(st.sig(), &st.aux(), *t);
      return Counterexample{in, print_term(st.sig(), &st.aux(), *nl), print_term(st.sig(), &st.aux(), *nr)};
    }));
  }
  return out;
}

}  // namespace structlaws
