#include "structlaws/sexp.hpp"

#include <cctype>

#include "structlaws/error.hpp"

namespace structlaws {

namespace {

class Reader {
 public:
  Reader(std::string_view text, const std::string& source)
      : text_(text), source_(source) {}

  std::vector<Sexp> read_all() {
    std::vector<Sexp> out;
    skip();
    while (pos_ < text_.size()) {
      out.push_back(read());
      skip();
    }
    return out;
  }

 private:
  void skip() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '\n') {
        ++line_;
        ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else if (c == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  Sexp read() {
    skip();
    if (pos_ >= text_.size()) throw ParseError(source_, line_, "unexpected end of input");
    char c = text_[pos_];
    if (c == ')') throw ParseError(source_, line_, "unexpected ')'");
    if (c == '(') {
      int start = line_;
      ++pos_;
      std::vector<Sexp> items;
      for (;;) {
        skip();
        if (pos_ >= text_.size()) throw ParseError(source_, start, "unclosed '('");
        if (text_[pos_] == ')') {
          ++pos_;
          break;
        }
        items.push_back(read());
      }
      return Sexp::make_list(std::move(items), start);
    }
    std::size_t begin = pos_;
    while (pos_ < text_.size()) {
      char d = text_[pos_];
      if (d == '(' || d == ')' || d == ';' || std::isspace(static_cast<unsigned char>(d))) break;
      ++pos_;
    }
    return Sexp::make_atom(std::string(text_.substr(begin, pos_ - begin)), line_);
  }

  std::string_view text_;
  const std::string& source_;
  std::size_t pos_ = 0;
  int line_ = 1;
};

void print(const Sexp& s, std::string& out) {
  if (s.is_atom()) {
    out += s.atom;
    return;
  }
  out += '(';
  for (std::size_t i = 0; i < s.items.size(); ++i) {
    if (i) out += ' ';
    print(s.items[i], out);
  }
  out += ')';
}

}  // namespace

std::vector<Sexp> parse_sexps(std::string_view text, const std::string& source) {
  return Reader(text, source).read_all();
}

Sexp parse_sexp(std::string_view text, const std::string& source) {
  auto all = parse_sexps(text, source);
  if (all.size() != 1) {
    throw ParseError(source, all.empty() ? 1 : all[1].line,
                     "expected exactly one s-expression, got " + std::to_string(all.size()));
  }
  return std::move(all[0]);
}

std::string to_string(const Sexp& s) {
  std::string out;
  print(s, out);
  return out;
}

std::string canonical_text(std::string_view text, const std::string& source) {
  std::string out;
  for (const auto& form : parse_sexps(text, source)) {
    print(form, out);
    out += '\n';
  }
  return out;
}

bool is_integer_atom(const Sexp& s) {
  if (!s.is_atom() || s.atom.empty()) return false;
  for (char c : s.atom)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace structlaws
