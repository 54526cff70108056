#include <doctest.h>

#include "structlaws/examples.hpp"
#include "structlaws/syntax.hpp"

using namespace structlaws;

namespace {

const char* kPeanoSig =
    "(signature peano (mode scoped) (kind x generic) (sort nat) (var-sort x nat)"
    " (op z 0 nat) (op s 0 nat (sub nat)))";

Sort sort_of(const Signature& sig, const std::string& text) {
  return instantiate(parse_sort_expr(sig, parse_sexp(text), "test"), {});
}

Context ctx1(Index n) { return Context{{n}}; }

}  // namespace

TEST_CASE("peano signature validates") {
  Signature sig = parse_signature(kPeanoSig);
  CHECK(validate_signature(sig).empty());
  CHECK(sig.kinds.size() == 1);
  CHECK(sig.kinds[0].generic);
  CHECK(sig.find_op("s").has_value());
  CHECK_FALSE(sig.find_op("add").has_value());
}

TEST_CASE("duplicate operator names are rejected") {
  Signature sig = parse_signature(
      "(signature lam (mode scoped) (kind v) (sort p) (var-sort v p)"
      " (op app 0 p (sub p) (sub p)) (op app 0 p (sub p)))");
  auto d = validate_signature(sig);
  REQUIRE(d.size() == 1);
  CHECK(d[0].code == "DuplicateOp");
  CHECK(d[0].subject == "app");
}

TEST_CASE("sharing signature validates") {
  ExampleBundle b = build("sharing");
  CHECK(validate_signature(b.signature()).empty());
  CHECK(b.signature().find_op("k").has_value());
}

TEST_CASE("signature printing round-trips") {
  for (const auto& e : embedded_bundles()) {
    Signature sig = parse_signature(e.signature);
    Signature again = parse_signature(print_signature(sig));
    CHECK(print_signature(again) == print_signature(sig));
  }
}

TEST_CASE("scope checking") {
  ExampleBundle lam = build("lambda-presheaf");
  const Signature& sig = lam.signature();
  Sort p = sort_of(sig, "p");
  TermPtr id = parse_term(sig, nullptr, "(op lam (var v 0))");
  CHECK(check_scope(sig, nullptr, ctx1(0), p, *id));
  CHECK_FALSE(check_scope(sig, nullptr, ctx1(0), p, *parse_term(sig, nullptr, "(op lam (var v 1))")));
  CHECK_FALSE(check_scope(sig, nullptr, ctx1(2), p, *Term::var(0, 3)));
  CHECK(check_scope(sig, nullptr, ctx1(2), p, *Term::var(0, 1)));

  ExampleBundle sh = build("sharing");
  const Signature& ss = sh.signature();
  TermPtr hole = parse_term(ss, nullptr, "(op hole)");
  CHECK(check_scope(ss, nullptr, ctx1(2), sort_of(ss, "(c 0)"), *hole));
  CHECK_FALSE(check_scope(ss, nullptr, ctx1(2), sort_of(ss, "(c 1)"), *hole));
  TermPtr ext = parse_term(ss, nullptr, "(op ext 0 (op hole) (var v 0))");
  CHECK(check_scope(ss, nullptr, ctx1(1), sort_of(ss, "(c 1)"), *ext));
  CHECK_FALSE(check_scope(ss, nullptr, ctx1(1), sort_of(ss, "(c 0)"), *ext));
}

TEST_CASE("renaming is functorial") {
  ExampleBundle lam = build("lambda-presheaf");
  const Signature& sig = lam.signature();
  TermPtr t = parse_term(sig, nullptr, "(op app (var v 1) (op lam (op app (var v 0) (var v 2))))");
  Context c2 = ctx1(2);
  CHECK(term_eq(rename(sig, nullptr, t, c2, Renaming::identity(c2)), t));

  Renaming f{{KindRenaming{{2, 0}, 3}}};
  Renaming g{{KindRenaming{{1, 2, 0}, 3}}};
  TermPtr ft = rename(sig, nullptr, t, c2, f);
  CHECK(print_term(sig, nullptr, *ft) == "(op app (var v 0) (op lam (op app (var v 2) (var v 3))))");
  TermPtr gft = rename(sig, nullptr, ft, ctx1(3), g);
  CHECK(term_eq(gft, rename(sig, nullptr, t, c2, f.then(g))));

  Renaming partial{{KindRenaming{{0}, 1}}};
  CHECK_THROWS_AS(rename(sig, nullptr, t, c2, partial), ScopeError);
}

TEST_CASE("weakening shifts free variables") {
  ExampleBundle lam = build("lambda-presheaf");
  const Signature& sig = lam.signature();
  TermPtr t = parse_term(sig, nullptr, "(op lam (op app (var v 0) (var v 1)))");
  TermPtr w = weaken(sig, nullptr, t, ctx1(1), 0);
  CHECK(print_term(sig, nullptr, *w) == "(op lam (op app (var v 0) (var v 2)))");
  TermPtr u = parse_term(sig, nullptr, "(op lam (op app (var v 0) (var v 2)))");
  CHECK(print_term(sig, nullptr, *weaken(sig, nullptr, u, ctx1(2), 0)) == "(op lam (op app (var v 0) (var v 3)))");
}

TEST_CASE("canonical order") {
  Signature sig = parse_signature(kPeanoSig);
  TermPtr z = parse_term(sig, nullptr, "(op z)");
  TermPtr s0 = parse_term(sig, nullptr, "(op s (op z))");
  TermPtr ss0 = parse_term(sig, nullptr, "(op s (op s (op z)))");
  CHECK(term_eq(s0, parse_term(sig, nullptr, "(op s (op z))")));
  CHECK_FALSE(term_eq(s0, z));
  std::vector<TermPtr> ts{ss0, z, s0};
  sort_canonical(ts);
  CHECK(term_eq(ts[0], z));
  CHECK(term_eq(ts[1], s0));
  CHECK(term_eq(ts[2], ss0));
  CHECK(compare(*Term::var(0, 5), *z) < 0);
  CHECK(s0->size() == 2);
}

TEST_CASE("term parsing errors") {
  Signature sig = parse_signature(kPeanoSig);
  CHECK_THROWS_AS(parse_term(sig, nullptr, "(op q)"), UnknownOp);
  CHECK_THROWS_AS(parse_term(sig, nullptr, "(op s"), ParseError);
}
