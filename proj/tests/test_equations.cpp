#include <doctest.h>

#include "structlaws/examples.hpp"
#include "structlaws/syntax.hpp"

using namespace structlaws;

namespace {

const EquationSystem& system_named(const ExampleBundle& b, const std::string& name) {
  for (const auto& e : b.systems)
    if (e.name == name) return e;
  FAIL("no system " << name);
  throw Error("unreachable");
}

Bounds small(std::size_t size, std::size_t param_size) {
  Bounds b;
  b.size = size;
  b.param_size = param_size;
  return b;
}

}  // namespace

TEST_CASE("shipped systems validate") {
  for (const auto& name : bundle_names()) {
    ExampleBundle b = build(name);
    for (const auto& e : b.systems) CHECK(validate_eqsys(b.stack, e).empty());
  }
  CHECK(build("peano").systems.size() == 2);
  CHECK(build("lambda-presheaf").systems.size() == 2);
  CHECK(build("difflambda").systems.empty());
}

TEST_CASE("interpretations evaluate") {
  ExampleBundle p = build("peano");
  const auto& assoc = system_named(p, "add-assoc");
  auto n = [&](std::uint64_t k) { return peano_numeral(p.signature(), k); };
  Context c0{{0}};
  TermPtr l = interp_eval(p.stack, assoc, Side::Left, {}, n(0), {TermArg{n(1)}, TermArg{n(0)}}, c0);
  CHECK(term_eq(l, n(1)));
  TermPtr r = interp_eval(p.stack, assoc, Side::Right, {}, n(2), {TermArg{n(1)}, TermArg{n(3)}}, c0);
  CHECK(term_eq(r, n(6)));

  ExampleBundle lam = build("lambda-presheaf");
  const auto& la = system_named(lam, "subst-assoc");
  const auto& sig = lam.signature();
  TermPtr e = parse_term(sig, nullptr, "(op app (var v 0) (var v 1))");
  EnvArg s{0, {parse_term(sig, nullptr, "(var v 1)"), parse_term(sig, nullptr, "(op lam (var v 1))")}};
  EnvArg t{0, {parse_term(sig, nullptr, "(var v 0)"), parse_term(sig, nullptr, "(var v 0)")}};
  Context c2{{2}};
  TermPtr left = interp_eval(lam.stack, la, Side::Left, {}, e, {s, t}, c2);
  TermPtr right = interp_eval(lam.stack, la, Side::Right, {}, e, {s, t}, c2);
  CHECK(print_term(sig, nullptr, *left) == "(op app (var v 0) (op lam (var v 0)))");
  CHECK(term_eq(left, right));
}

TEST_CASE("peano associativity is coherent and benign") {
  ExampleBundle p = build("peano");
  for (const auto& e : p.systems) {
    CAPTURE(e.name);
    Bounds b = small(4, 3);
    CHECK(check_coherence(p.stack, e, Side::Left, b).passed());
    CHECK(check_coherence(p.stack, e, Side::Right, b).passed());
    CoherenceStatus cs{true, true};
    Report r = check_benign(p.stack, e, b, 2, &cs);
    CHECK(r.passed());
    REQUIRE(r.notes.size() == 1);
    CHECK(r.notes[0] == "benign-by-theorem");
  }
}

TEST_CASE("the wrong right side fails on the zero clause") {
  ExampleBundle p = build("peano");
  EquationSystem wrong = peano_wrong_assoc(p.stack);
  CHECK(validate_eqsys(p.stack, wrong).empty());
  Bounds b = small(3, 2);
  CHECK(check_coherence(p.stack, wrong, Side::Left, b).passed());
  Report r = check_coherence(p.stack, wrong, Side::Right, b);
  CHECK_FALSE(r.passed());
  REQUIRE(!r.counterexamples.empty());
  const auto& c = r.counterexamples.front();
  CHECK(c.inputs.find("a=(op z) b=(op z) c=(op z)") != std::string::npos);
  CHECK(c.lhs == "(op s (op z))");
  CHECK(c.rhs == "(op z)");
}

TEST_CASE("lambda substitution systems") {
  ExampleBundle lam = build("lambda-presheaf");
  Bounds b = small(3, 2);
  b.ctx = 2;
  EquationBundle bundle = combine(lam.systems);
  BundleReport r = check_benign(lam.stack, bundle, b);
  CHECK(r.passed());
  CHECK(r.components.size() == 2);
  for (const auto& c : r.components) {
    CHECK(c.passed());
    CHECK(c.notes.back() == "benign-by-theorem");
  }

  ExampleBundle db = build("lambda-debruijn");
  Bounds d = small(3, 2);
  d.ctx = 2;
  d.prefix = 2;
  d.shift = 1;
  for (const auto& e : db.systems) {
    CAPTURE(e.name);
    CHECK(check_coherence(db.stack, e, Side::Left, d).passed());
    CHECK(check_coherence(db.stack, e, Side::Right, d).passed());
    CHECK(check_benign(db.stack, e, d).passed());
  }
}

TEST_CASE("empty and failing bundles") {
  ExampleBundle p = build("peano");
  BundleReport empty = check_benign(p.stack, combine({}), small(3, 2));
  CHECK(empty.passed());
  CHECK(empty.total.instances == 0);

  BundleReport mixed = check_benign(p.stack, combine({p.systems[0], peano_wrong_assoc(p.stack)}), small(3, 2));
  CHECK_FALSE(mixed.passed());
  REQUIRE(mixed.components.size() == 2);
  CHECK(mixed.components[0].passed());
  CHECK_FALSE(mixed.components[1].passed());
  CHECK(mixed.components[1].notes.front() == "warning: coherence failed; result is empirical");
  REQUIRE(mixed.total.notes.size() >= 1);
  CHECK(mixed.total.notes.back() == "failing system: add-assoc-wrong");
}

TEST_CASE("eqsys printing round-trips") {
  for (const auto& name : bundle_names()) {
    ExampleBundle b = build(name);
    for (const auto& e : b.systems) {
      std::string text = to_string(eqsys_to_sexp(b.stack, e));
      EquationSystem again = parse_eqsys(b.stack, parse_sexp(text));
      CHECK(to_string(eqsys_to_sexp(b.stack, again)) == text);
    }
  }
}

TEST_CASE("malformed systems") {
  ExampleBundle p = build("peano");
  CHECK_THROWS_AS(parse_eqsystems(p.stack, "(eqsys broken (schema"), ParseError);
  auto bad = parse_eqsystems(p.stack,
                             "(eqsys incomplete"
                             "  (schema add3 (result nat) (main a nat) (params (b term nat)))"
                             "  (clauses (clause (on z) b))"
                             "  (left (aux add () a (b)))"
                             "  (right (aux add () a (b))))");
  REQUIRE(bad.size() == 1);
  auto d = validate_eqsys(p.stack, bad[0]);
  REQUIRE(!d.empty());
  CHECK(d[0].code == "NonExhaustive");
}
