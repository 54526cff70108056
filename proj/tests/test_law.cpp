#include <doctest.h>

#include <algorithm>

#include "structlaws/examples.hpp"
#include "structlaws/syntax.hpp"

using namespace structlaws;

namespace {

const char* kPeanoSig =
    "(signature peano (mode scoped) (kind x generic) (sort nat) (var-sort x nat)"
    " (op z 0 nat) (op s 0 nat (sub nat)))";

const char* kAdd =
    "(law add (layer 0)"
    "  (schema add (result nat) (main m nat) (params (n term nat)))"
    "  (clause (on z) n)"
    "  (clause (on s) (binds k) (op s (rc k () (n)))))";

const char* kMul =
    "(law mul (layer 1)"
    "  (schema mul (result nat) (main m nat) (params (n term nat)))"
    "  (clause (on z) (op z))"
    "  (clause (on s) (binds k) (aux add () (rc k () (n)) (n))))";

bool has_code(const Diagnostics& ds, const std::string& code) {
  return std::any_of(ds.begin(), ds.end(), [&](const Diagnostic& d) { return d.code == code; });
}

Diagnostics stack_errors(const std::string& laws) {
  Signature sig = parse_signature(kPeanoSig);
  try {
    build_stack(sig, parse_laws(sig, laws));
  } catch (const ValidationError& e) {
    return e.diagnostics();
  }
  return {};
}

struct Peano {
  ExampleBundle b = build("peano");
  TermPtr t(const std::string& s) const { return parse_term(b.signature(), &b.stack.aux(), s); }
  std::string show(const TermPtr& t) const { return print_term(b.signature(), &b.stack.aux(), *t); }
  TermPtr num(std::uint64_t n) const { return peano_numeral(b.signature(), n); }
};

}  // namespace

TEST_CASE("peano add and mul validate") {
  CHECK(stack_errors(std::string(kAdd) + kMul).empty());
  Signature sig = parse_signature(kPeanoSig);
  LawStack st = build_stack(sig, parse_laws(sig, std::string(kAdd) + kMul));
  CHECK(st.depth() == 2);
  CHECK(st.layers()[0].size() == 1);
  CHECK(st.find_law("mul") != nullptr);
}

TEST_CASE("missing clause is NonExhaustive") {
  auto d = stack_errors(
      "(law add (layer 0)"
      "  (schema add (result nat) (main m nat) (params (n term nat)))"
      "  (clause (on s) (binds k) (op s (rc k () (n)))))");
  REQUIRE(!d.empty());
  CHECK(d[0].code == "NonExhaustive");
  CHECK(d[0].message.find("z") != std::string::npos);
}

TEST_CASE("reverse layering is a LayerViolation") {
  auto d = stack_errors(
      "(law mul (layer 0)"
      "  (schema mul (result nat) (main m nat) (params (n term nat)))"
      "  (clause (on z) (op z))"
      "  (clause (on s) (binds k) (aux add () (rc k () (n)) (n))))"
      "(law add (layer 1)"
      "  (schema add (result nat) (main m nat) (params (n term nat)))"
      "  (clause (on z) n)"
      "  (clause (on s) (binds k) (op s (rc k () (n)))))");
  CHECK(has_code(d, "LayerViolation"));
}

TEST_CASE("pushing a law that references an unpushed law") {
  Signature sig = parse_signature(kPeanoSig);
  LawStack base(sig);
  CHECK_THROWS_AS(push_layer(base, parse_laws(sig, kMul)), ValidationError);
  LawStack one = push_layer(base, parse_laws(sig, kAdd));
  LawStack two = push_layer(one, parse_laws(sig, kMul));
  CHECK(two.depth() == 2);
  CHECK(two.layer_of(*two.aux().find("mul")) == 1u);
}

TEST_CASE("unguarded recursion is rejected before any check") {
  auto d = stack_errors(
      "(law add (layer 0)"
      "  (schema add (result nat) (main m nat) (params (n term nat)))"
      "  (clause (on z) (aux add () (op z) (n)))"
      "  (clause (on s) (binds k) (op s (rc k () (n)))))");
  CHECK(has_code(d, "UnguardedRecursion"));
  auto d2 = stack_errors(
      "(law add (layer 0)"
      "  (schema add (result nat) (main m nat) (params (n term nat)))"
      "  (clause (on z) (rc n () (n)))"
      "  (clause (on s) (binds k) (op s (rc k () (n)))))");
  CHECK(has_code(d2, "UnguardedRecursion"));
}

TEST_CASE("law printing round-trips") {
  Signature sig = parse_signature(kPeanoSig);
  for (const auto& law : parse_laws(sig, std::string(kAdd) + kMul)) {
    std::string text = to_string(law_to_sexp(sig, law));
    CHECK(to_string(law_to_sexp(sig, parse_law(sig, parse_sexp(text)))) == text);
  }
}

TEST_CASE("apply_aux on peano") {
  Peano p;
  TermPtr r = apply_aux(p.b.stack, "add", {}, p.num(2), {TermArg{p.num(1)}});
  CHECK(p.show(r) == "(op s (op s (op s (op z))))");
  CHECK(term_eq(normalize(p.b.stack, p.t("(aux mul () (op s (op z)) ((op s (op s (op z)))))")), p.num(2)));
  CHECK_THROWS_AS(apply_aux(p.b.stack, "sub", {}, p.num(1), {TermArg{p.num(1)}}), UnknownLaw);
}

TEST_CASE("normalize keeps stuck nodes on generic variables") {
  Peano p;
  TermPtr t = p.t("(aux add () (var x 0) ((op s (op z))))");
  Context c{{1}};
  TermPtr n = normalize(p.b.stack, t, c);
  CHECK(term_eq(n, t));
  CHECK(is_stuck(p.b.stack, *n));
  TermPtr u = p.t("(op s (aux add () (aux add () (op z) ((var x 0))) ((op z))))");
  CHECK(p.show(normalize(p.b.stack, u, c)) == "(op s (aux add () (var x 0) ((op z))))");
  TermPtr basic = p.t("(op s (op s (op z)))");
  CHECK(normalize(p.b.stack, basic) == basic);
}

TEST_CASE("one step leaves recursive calls formal") {
  Peano p;
  auto s = step(p.b.stack, p.t("(aux add () (op s (op z)) ((op z)))"), Context{{0}});
  REQUIRE(s.has_value());
  CHECK(p.show(*s) == "(op s (aux add () (op z) ((op z))))");
  CHECK_FALSE(step(p.b.stack, p.num(1), Context{{0}}).has_value());
}

TEST_CASE("other calculi") {
  ExampleBundle ev = build("eval-ctx");
  const auto& es = ev.signature();
  TermPtr e = parse_term(es, nullptr, "(op lam (var v 0))");
  TermPtr plugged = apply_aux(ev.stack, "plug", {}, parse_term(es, nullptr, "(op hole)"), {TermArg{e}});
  CHECK(term_eq(plugged, e));

  ExampleBundle sh = build("sharing");
  const auto& ss = sh.signature();
  TermPtr E = parse_term(ss, nullptr, "(op ext 0 (op hole) (op k))");
  TermPtr x = Term::var(0, 0);
  TermPtr r = apply_aux(sh.stack, "plug", {1}, E, {TermArg{x}});
  CHECK(term_eq(r, parse_term(ss, nullptr, "(op esub (var v 0) (op k))")));
}

TEST_CASE("folds into machine naturals") {
  Peano p;
  auto nat = peano_nat_algebra();
  CHECK(fold(p.b.stack, nat, *p.num(2)) == 2);
  TermPtr t = p.t("(aux add () (op s (op z)) ((op s (op z))))");
  CHECK(fold(p.b.stack, nat, *t) == 2);
  CHECK(fold(p.b.stack, nat, *normalize(p.b.stack, t)) == 2);
  CHECK_THROWS_AS(fold(p.b.stack, nat, *Term::var(0, 0)), AlgebraIncomplete);
}
