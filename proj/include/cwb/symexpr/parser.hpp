#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cwb/symexpr/rational_function.hpp"

namespace cwb::sym {

class SyntaxError : public std::runtime_error {
 public:
  SyntaxError(const std::string& msg, int line, int column)
      : std::runtime_error(msg + " at line " + std::to_string(line) + ", column " + std::to_string(column)),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

struct ParseOptions {
  // When set, identifiers outside this list are rejected.
  std::optional<std::vector<std::string>> allowed_variables;
  int line = 1;
  int column_offset = 0;
};

/// Parses `+ - * / ^`, parentheses, integers and identifiers into a
/// canonical rational function.
RationalFn parse_expression(std::string_view text, const ParseOptions& opts = {});

/// Parses an integer or `a/b` literal (optionally signed).
Rational parse_rational(std::string_view text, int line = 1, int column_offset = 0);

/// d/d(name); throws UnknownVariable if `name` was never declared.
RationalFn diff(const RationalFn& f, std::string_view name);

}  // namespace cwb::sym
