#include <doctest.h>

#include "structlaws/error.hpp"
#include "structlaws/sexp.hpp"

using namespace structlaws;

TEST_CASE("atoms, lists and comments") {
  auto xs = parse_sexps("(a (b c) d) ; trailing\nfoo");
  REQUIRE(xs.size() == 2);
  CHECK(xs[0].is_list());
  CHECK(xs[0].has_head("a"));
  CHECK(xs[0][1].size() == 2);
  CHECK(xs[1].is_atom("foo"));
  CHECK(xs[1].line == 2);
}

TEST_CASE("canonical printing") {
  CHECK(to_string(parse_sexp("(  a\n  (b   c)  )")) == "(a (b c))");
  CHECK(to_string(parse_sexp("()")) == "()");
  CHECK(canonical_text("(a)\n\n  (b  c) ; x\n") == "(a)\n(b c)\n");
}

TEST_CASE("integer atoms") {
  CHECK(is_integer_atom(parse_sexp("12")));
  CHECK_FALSE(is_integer_atom(parse_sexp("x1")));
  CHECK_FALSE(is_integer_atom(parse_sexp("(1)")));
}

TEST_CASE("parse errors carry the line") {
  try {
    parse_sexps("(a\n(b", "f.sexp");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.source() == "f.sexp");
    CHECK(e.line() >= 1);
  }
  CHECK_THROWS_AS(parse_sexp(")"), ParseError);
  CHECK_THROWS_AS(parse_sexp("a b"), ParseError);
}
