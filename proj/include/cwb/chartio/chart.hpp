#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cwb/symexpr/matrix.hpp"
#include "cwb/symexpr/parser.hpp"

namespace cwb::chart {

using sym::FnMatrix;
using sym::Rational;
using sym::RationalFn;
using sym::SyntaxError;
using sym::Var;

class SymmetryConflict : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class DimensionMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class MissingCoordinate : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class DegenerateMetricAtPoint : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class SignatureMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class UnknownChart : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Signature {
  int p = 0;  // negative directions
  int q = 0;  // positive directions
  friend bool operator==(const Signature&, const Signature&) = default;
};

struct Chart {
  std::string name;
  Signature signature;
  std::vector<std::string> coords;
  std::vector<Var> vars;
  FnMatrix metric;

  std::size_t dim() const { return coords.size(); }
  friend bool operator==(const Chart& a, const Chart& b) {
    return a.name == b.name && a.signature == b.signature && a.coords == b.coords && a.metric == b.metric;
  }
};

/// Builds a chart, validating shape and symmetry.
Chart make_chart(std::string name, Signature sig, std::vector<std::string> coords, FnMatrix metric);

struct EvalPoint {
  std::vector<Rational> values;  // in coordinate order
  sym::Assignment assignment;
};

Chart parse_chart(std::string_view text);
std::string print_chart(const Chart& chart);

/// Parses `coord = rational` assignments separated by whitespace or
/// newlines; validates completeness, metric nondegeneracy and signature.
EvalPoint parse_point(std::string_view text, const Chart& chart);
EvalPoint make_point(const Chart& chart, const std::vector<Rational>& values);
std::string print_point(const Chart& chart, const EvalPoint& x);

/// Bryant's rank-3 distribution in dimension 6 given by the annihilator of
/// theta_1 = dy1 + x2 dx3, theta_2 = dy2 + f dx1, theta_3 = dy3 + x1 dx2 in
/// coordinates (x1, x2, x3, y1, y2, y3).
struct DistributionData {
  std::string name;
  std::vector<std::string> coords;
  std::vector<Var> vars;
  RationalFn f;
  std::vector<std::vector<RationalFn>> one_forms;       // covector components
  std::vector<std::vector<RationalFn>> spanning_fields;  // vector components
};

DistributionData bryant_distribution(const std::string& f_expression);

std::vector<std::string> builtin_chart_names();
Chart builtin_chart(const std::string& name);
std::vector<Chart> builtin_charts();

}  // namespace cwb::chart
