#include <doctest.h>

#include <fstream>
#include <sstream>

#include "structlaws/checks.hpp"
#include "structlaws/examples.hpp"
#include "structlaws/syntax.hpp"

using namespace structlaws;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  REQUIRE_MESSAGE(f.good(), "cannot read " << path);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

std::string bundle_file(const std::string& bundle, const std::string& file) {
  return std::string(STRUCTLAWS_BUNDLE_DIR) + "/" + bundle + "/" + file;
}

bool has_file(const std::string& path) { return std::ifstream(path).good(); }

}  // namespace

TEST_CASE("bundle shapes") {
  CHECK(bundle_names() == std::vector<std::string>{"peano", "eval-ctx", "lambda-presheaf", "sharing", "lammu",
                                                    "difflambda", "lambda-debruijn"});
  CHECK(build("peano").stack.depth() == 2);
  ExampleBundle d = build("difflambda");
  CHECK(d.stack.depth() == 4);
  CHECK(d.stack.layers()[0].size() == 4);
  CHECK(build("lambda-debruijn").signature().mode == AmbientMode::Unscoped);
  CHECK(build("lambda-debruijn").stack.depth() == 2);
  CHECK_THROWS_AS(build("nope"), Error);
  for (const auto& name : bundle_names()) CHECK_FALSE(build(name).oracles.empty());
}

TEST_CASE("embedded bundles match the shipped files") {
  for (const auto& e : embedded_bundles()) {
    std::string name(e.name);
    CAPTURE(name);
    CHECK(slurp(bundle_file(name, "signature.sexp")) == e.signature);
    CHECK(slurp(bundle_file(name, "laws.sexp")) == e.laws);
    if (has_file(bundle_file(name, "eqs.sexp"))) CHECK(slurp(bundle_file(name, "eqs.sexp")) == e.eqs);
    else CHECK(e.eqs.empty());
  }
}

TEST_CASE("printing parsed bundle files gives their canonical text") {
  for (const auto& name : bundle_names()) {
    CAPTURE(name);
    std::string sig_text = slurp(bundle_file(name, "signature.sexp"));
    Signature sig = parse_signature(sig_text);
    CHECK(to_string(signature_to_sexp(sig)) + "\n" == canonical_text(sig_text));

    std::string law_text = slurp(bundle_file(name, "laws.sexp"));
    std::string printed;
    for (const auto& law : parse_laws(sig, law_text)) printed += to_string(law_to_sexp(sig, law)) + "\n";
    CHECK(printed == canonical_text(law_text));

    if (!has_file(bundle_file(name, "eqs.sexp"))) continue;
    std::string eq_text = slurp(bundle_file(name, "eqs.sexp"));
    ExampleBundle b = build(name);
    printed.clear();
    for (const auto& eq : parse_eqsystems(b.stack, eq_text)) printed += to_string(eqsys_to_sexp(b.stack, eq)) + "\n";
    CHECK(printed == canonical_text(eq_text));
  }
}

TEST_CASE("loading user files") {
  const auto& e = embedded_bundles().front();
  ExampleBundle b = load_bundle("mine", e.signature, e.laws, e.eqs);
  CHECK(b.name == "mine");
  CHECK(b.oracles.empty());
  CHECK(b.systems.size() == 2);
  CHECK_THROWS_AS(load_bundle("bad", e.signature, "(law add (layer 0)", ""), ParseError);
  CHECK_THROWS_AS(load_bundle("bad", e.signature,
                              "(law add (layer 0) (schema add (result nat) (main m nat) (params (n term nat)))"
                              " (clause (on z) n))",
                              ""),
                  ValidationError);
}

TEST_CASE("peano oracle") {
  ExampleBundle p = build("peano");
  auto n = [&](std::uint64_t k) { return peano_numeral(p.signature(), k); };
  TermPtr r = oracle_eval(p, "mul", {}, n(2), {TermArg{n(3)}}, Context{{0}});
  CHECK(term_eq(r, n(6)));
  CHECK(term_eq(normalize(p.stack, Term::aux(*p.stack.aux().find("mul"), {}, n(2), {TermArg{n(3)}})), n(6)));
  CHECK(peano_value(p.stack, *parse_term(p.signature(), &p.stack.aux(),
                                         "(aux mul () (op s (op s (op z))) ((aux add () (op s (op z)) ((op s (op z))))))")) ==
        4);
  CHECK_THROWS_AS(oracle_eval(p, "add", {}, Term::var(0, 0), {TermArg{n(1)}}, Context{{1}}), OpenTermError);
  TermPtr nested = Term::aux(*p.stack.aux().find("add"), {}, n(1), {TermArg{n(1)}});
  CHECK_THROWS_AS(oracle_eval(p, "add", {}, nested, {TermArg{n(1)}}, Context{{0}}), OpenTermError);
  CHECK_THROWS_AS(oracle_eval(p, "sub", {}, n(1), {TermArg{n(1)}}, Context{{0}}), UnknownLaw);
  CHECK_THROWS_AS(peano_value(p.stack, *Term::var(0, 0)), OpenTermError);
}

TEST_CASE("lambda mu named substitution on a matching name") {
  ExampleBundle b = build("lammu");
  const auto& sig = b.signature();
  TermPtr d = parse_term(sig, nullptr, "(op name (var cv 0) (op lam (var pv 0)))");
  TermPtr g = parse_term(sig, nullptr, "(op lam (var pv 0))");
  std::vector<AuxArg> ps{VarRefArg{1, 0}, TermArg{g}};
  Context ctx{{0, 1}};
  TermPtr want = parse_term(sig, nullptr, "(op name (var cv 0) (op app (op lam (var pv 0)) (op lam (var pv 0))))");
  TermPtr o = oracle_eval(b, "nsub-c", {}, d, ps, ctx);
  CHECK(term_eq(o, want));
  TermPtr n = normalize(b.stack, Term::aux(*b.stack.aux().find("nsub-c"), {}, d, ps), ctx);
  CHECK(term_eq(n, want));

  TermPtr other = parse_term(sig, nullptr, "(op name (var cv 1) (var pv 0))");
  Context c2{{1, 2}};
  TermPtr kept = normalize(b.stack, Term::aux(*b.stack.aux().find("nsub-c"), {}, other, ps), c2);
  CHECK(term_eq(kept, other));
  CHECK(term_eq(oracle_eval(b, "nsub-c", {}, other, ps, c2), other));
}

TEST_CASE("differentiating another variable gives zero") {
  ExampleBundle b = build("difflambda");
  const auto& sig = b.signature();
  TermPtr y = Term::var(0, 1);
  TermPtr M = parse_term(sig, nullptr, "(op sum (var v 0) (op nil))");
  std::vector<AuxArg> ps{VarRefArg{0, 0}, TermArg{M}};
  Context c{{2}};
  TermPtr nil = parse_term(sig, nullptr, "(op nil)");
  CHECK(term_eq(oracle_eval(b, "diff", {}, y, ps, c), nil));
  CHECK(term_eq(normalize(b.stack, Term::aux(*b.stack.aux().find("diff"), {}, y, ps), c), nil));
  TermPtr x = Term::var(0, 0);
  CHECK(term_eq(normalize(b.stack, Term::aux(*b.stack.aux().find("diff"), {}, x, ps), c), M));
}

TEST_CASE("plugging a sharing context captures") {
  ExampleBundle b = build("sharing");
  const auto& sig = b.signature();
  TermPtr E = parse_term(sig, nullptr, "(op ext 0 (op hole) (op lam (var v 0)))");
  std::vector<AuxArg> ps{TermArg{Term::var(0, 0)}};
  TermPtr want = parse_term(sig, nullptr, "(op esub (var v 0) (op lam (var v 0)))");
  CHECK(term_eq(oracle_eval(b, "plug", {1}, E, ps, Context{{0}}), want));
  CHECK(term_eq(normalize(b.stack, Term::aux(*b.stack.aux().find("plug"), {1}, E, ps), Context{{0}}), want));
}

TEST_CASE("crosscheck on every bundle") {
  for (const auto& name : bundle_names()) {
    CAPTURE(name);
    ExampleBundle b = build(name);
    Bounds bd;
    bd.size = 3;
    bd.param_size = 2;
    bd.ctx = 1;
    Report r = crosscheck(b, bd, 2);
    CHECK(r.passed());
    CHECK(r.instances > 0);
    bd.size = 0;
    CHECK(crosscheck(b, bd).instances == 0);
  }
}

TEST_CASE("suites pass on every bundle at small bounds") {
  for (const auto& name : bundle_names()) {
    CAPTURE(name);
    ExampleBundle b = build(name);
    Bounds bd;
    bd.size = 3;
    bd.param_size = 2;
    CHECK(check_admissible(b.stack, bd, 2).passed());
    MonadBounds mb;
    mb.size = 4;
    CHECK(check_monad_laws(b.stack, mb, 2).passed());
  }
}

TEST_CASE("difflambda tables") {
  ExampleBundle b = build("difflambda");
  auto lines = difflambda_table(b);
  CHECK(lines.size() == 24);
  auto reports = check_difflambda_table(b, 2, 2);
  REQUIRE(reports.size() == lines.size());
  for (const auto& r : reports) {
    CAPTURE(r.name);
    CHECK(r.passed());
    CHECK(r.instances > 0);
  }
}

TEST_CASE("peano fold algebras") {
  ExampleBundle p = build("peano");
  auto max = peano_max_algebra();
  TermPtr t = parse_term(p.signature(), &p.stack.aux(), "(aux add () (op s (op z)) ((op s (op z))))");
  CHECK(fold(p.stack, max, *t) == 1);
  CHECK(fold(p.stack, max, *normalize(p.stack, t)) == 2);
}
