#include <doctest.h>

#include "structlaws/checks.hpp"
#include "structlaws/examples.hpp"

using namespace structlaws;

TEST_CASE("peano is admissible") {
  ExampleBundle p = build("peano");
  Bounds b;
  b.size = 6;
  b.param_size = 6;
  Report r = check_admissible(p.stack, b, 2);
  CHECK(r.passed());
  CHECK(r.instances > 0);
}

TEST_CASE("lambda substitution is admissible") {
  ExampleBundle p = build("lambda-presheaf");
  Bounds b;
  b.size = 6;
  b.param_size = 2;
  b.ctx = 1;
  Report r = check_admissible(p.stack, b, 2);
  CHECK(r.passed());
}

TEST_CASE("admissibility at size 0 is vacuous") {
  ExampleBundle p = build("peano");
  Bounds b;
  b.size = 0;
  Report r = check_admissible(p.stack, b);
  CHECK(r.passed());
  CHECK(r.instances == 0);
}

TEST_CASE("monad laws") {
  MonadBounds mb;
  mb.size = 6;
  mb.ctx = 1;
  CHECK(check_monad_laws(build("peano").stack, mb, 2).passed());
  mb.size = 5;
  mb.ctx = 2;
  Report r = check_monad_laws(build("lambda-presheaf").stack, mb, 2);
  CHECK(r.passed());
  CHECK(r.instances > 0);
}

TEST_CASE("algebra triangle") {
  ExampleBundle p = build("peano");
  Bounds b;
  b.size = 3;
  b.param_size = 3;
  CHECK(check_algebra(p.stack, peano_nat_algebra(), b).passed());
  Report bad = check_algebra(p.stack, peano_max_algebra(), b);
  CHECK_FALSE(bad.passed());
  bool found = false;
  for (const auto& c : bad.counterexamples)
    found = found || (c.inputs.find("(aux add () (op s (op z)) ((op s (op z))))") != std::string::npos && c.lhs == "1" &&
                      c.rhs.rfind("2", 0) == 0);
  CHECK(found);
  b.size = 0;
  Report vac = check_algebra(p.stack, peano_max_algebra(), b);
  CHECK(vac.passed());
  CHECK(vac.instances == 0);
}

TEST_CASE("folds commute with normalize") {
  ExampleBundle p = build("peano");
  Sort nat{0, std::nullopt};
  Report r = check_fold(p.stack, peano_nat_algebra(), nat, Context{{0}}, 6);
  CHECK(r.passed());
  CHECK(r.instances > 0);
}

TEST_CASE("all_sorts covers parameterized families") {
  ExampleBundle s = build("sharing");
  CHECK(all_sorts(s.signature(), 2).size() == 1 + 3);
}
