#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace structlaws {

// Minimal s-expression tree. Atoms are maximal runs of non-space,
// non-parenthesis characters; `;` starts a comment running to end of line.
struct Sexp {
  bool list = false;
  std::string atom;
  std::vector<Sexp> items;
  int line = 0;

  static Sexp make_atom(std::string a, int line = 0) {
    Sexp s;
    s.atom = std::move(a);
    s.line = line;
    return s;
  }
  static Sexp make_list(std::vector<Sexp> xs, int line = 0) {
    Sexp s;
    s.list = true;
    s.items = std::move(xs);
    s.line = line;
    return s;
  }

  bool is_atom() const { return !list; }
  bool is_list() const { return list; }
  bool is_atom(std::string_view a) const { return !list && atom == a; }
  // True for a non-empty list whose first item is the atom `h`.
  bool has_head(std::string_view h) const {
    return list && !items.empty() && items[0].is_atom(h);
  }
  std::size_t size() const { return items.size(); }
  const Sexp& operator[](std::size_t i) const { return items[i]; }
};

std::vector<Sexp> parse_sexps(std::string_view text,
                              const std::string& source = "<input>");

// Parses exactly one s-expression.
Sexp parse_sexp(std::string_view text, const std::string& source = "<input>");

// Canonical single-line form: single spaces, no trailing whitespace.
std::string to_string(const Sexp& s);

// Canonical form of a whole file: each top-level form on its own line.
std::string canonical_text(std::string_view text,
                           const std::string& source = "<input>");

bool is_integer_atom(const Sexp& s);

}  // namespace structlaws
