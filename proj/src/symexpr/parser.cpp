#include "cwb/symexpr/parser.hpp"

#include <algorithm>
#include <cctype>

namespace cwb::sym {
namespace {

class Parser {
 public:
  Parser(std::string_view text, const ParseOptions& opts) : s_(text), opts_(opts) {}

  RationalFn parse_all() {
    RationalFn r = expr();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return r;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw SyntaxError(msg, opts_.line, opts_.column_offset + static_cast<int>(pos_) + 1);
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  RationalFn expr() {
    RationalFn acc = term();
    for (;;) {
      if (accept('+')) {
        acc += term();
      } else if (accept('-')) {
        acc -= term();
      } else {
        return acc;
      }
    }
  }

  RationalFn term() {
    RationalFn acc = unary();
    for (;;) {
      if (accept('*')) {
        acc *= unary();
      } else if (accept('/')) {
        std::size_t at = pos_;
        RationalFn d = unary();
        if (d.is_zero()) {
          pos_ = at;
          fail("division by zero");
        }
        acc /= d;
      } else {
        return acc;
      }
    }
  }

  RationalFn unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  RationalFn power() {
    RationalFn base = primary();
    if (accept('^')) {
      skip_ws();
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) fail("expected nonnegative integer exponent");
      auto digits = s_.substr(start, pos_ - start);
      if (digits.size() > 4) {
        pos_ = start;
        fail("exponent too large");
      }
      return base.pow(std::stoi(std::string(digits)));
    }
    return base;
  }

  RationalFn primary() {
    skip_ws();
    if (pos_ >= s_.size()) fail("unexpected end of expression");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      RationalFn r = expr();
      if (!accept(')')) fail("expected ')'");
      return r;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      return RationalFn(Rational(Integer(std::string(s_.substr(start, pos_ - start)))));
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      std::string name(s_.substr(start, pos_ - start));
      if (opts_.allowed_variables) {
        const auto& allowed = *opts_.allowed_variables;
        if (std::find(allowed.begin(), allowed.end(), name) == allowed.end()) {
          pos_ = start;
          fail("unknown variable '" + name + "'");
        }
      }
      return RationalFn::var(name);
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string_view s_;
  const ParseOptions& opts_;
  std::size_t pos_ = 0;
};

}  // namespace

RationalFn parse_expression(std::string_view text, const ParseOptions& opts) {
  return Parser(text, opts).parse_all();
}

Rational parse_rational(std::string_view text, int line, int column_offset) {
  std::size_t i = 0;
  auto fail = [&](const std::string& msg) -> void {
    throw SyntaxError(msg, line, column_offset + static_cast<int>(i) + 1);
  };
  auto skip = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  auto digits = [&]() -> Integer {
    std::size_t start = i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
    if (start == i) fail("expected digits");
    return Integer(std::string(text.substr(start, i - start)));
  };
  skip();
  bool negative = false;
  if (i < text.size() && (text[i] == '-' || text[i] == '+')) negative = text[i++] == '-';
  skip();
  Integer num = digits();
  Integer den(1);
  skip();
  if (i < text.size() && text[i] == '/') {
    ++i;
    skip();
    den = digits();
    if (den == 0) fail("zero denominator");
  }
  skip();
  if (i != text.size()) fail("unexpected '" + std::string(1, text[i]) + "'");
  Rational r(negative ? Integer(-num) : num, den);
  r.canonicalize();
  return r;
}

RationalFn diff(const RationalFn& f, std::string_view name) {
  auto v = Variables::find(name);
  if (!v) throw UnknownVariable("unknown variable '" + std::string(name) + "'");
  return f.diff(*v);
}

}  // namespace cwb::sym
