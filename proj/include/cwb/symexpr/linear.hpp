#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cwb/symexpr/rational_function.hpp"

namespace cwb::sym {

/// Affine equations sum_i coeffs[i] * u_i = rhs over a field F.
template <class F>
struct LinearSystem {
  struct Equation {
    std::vector<F> coeffs;
    F rhs;
  };
  std::vector<std::string> unknowns;
  std::vector<Equation> equations;

  void add(std::vector<F> coeffs, F rhs) {
    if (coeffs.size() != unknowns.size()) throw std::invalid_argument("equation arity does not match unknowns");
    equations.push_back({std::move(coeffs), std::move(rhs)});
  }
};

enum class SolveStatus { Unique, Underdetermined, Inconsistent };

template <class F>
struct LinearSolution {
  SolveStatus status = SolveStatus::Unique;
  std::size_t rank = 0;
  std::vector<F> particular;               // free unknowns set to zero
  std::vector<std::vector<F>> nullspace;   // one vector per free unknown
  std::vector<std::size_t> pivot_unknowns;
  std::vector<std::size_t> free_unknowns;
  std::optional<std::size_t> inconsistent_equation;
};

/// Gauss-Jordan elimination over an exact field.
template <class F>
LinearSolution<F> solve_linear(const LinearSystem<F>& sys) {
  const std::size_t n = sys.unknowns.size();
  std::vector<std::vector<F>> rows;
  std::vector<std::size_t> origin;
  rows.reserve(sys.equations.size());
  for (std::size_t e = 0; e < sys.equations.size(); ++e) {
    auto r = sys.equations[e].coeffs;
    r.push_back(sys.equations[e].rhs);
    rows.push_back(std::move(r));
    origin.push_back(e);
  }
  LinearSolution<F> out;
  std::size_t rank = 0;
  for (std::size_t col = 0; col < n && rank < rows.size(); ++col) {
    std::size_t piv = rank;
    while (piv < rows.size() && is_zero(rows[piv][col])) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[piv], rows[rank]);
    std::swap(origin[piv], origin[rank]);
    F inv = F(1) / rows[rank][col];
    for (std::size_t c = col; c <= n; ++c)
      if (!is_zero(rows[rank][c])) rows[rank][c] *= inv;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == rank || is_zero(rows[r][col])) continue;
      F f = rows[r][col];
      for (std::size_t c = col; c <= n; ++c)
        if (!is_zero(rows[rank][c])) rows[r][c] -= f * rows[rank][c];
    }
    out.pivot_unknowns.push_back(col);
    ++rank;
  }
  out.rank = rank;
  for (std::size_t r = rank; r < rows.size(); ++r) {
    if (!is_zero(rows[r][n])) {
      out.status = SolveStatus::Inconsistent;
      out.inconsistent_equation = origin[r];
      return out;
    }
  }
  std::vector<bool> is_pivot(n, false);
  for (auto c : out.pivot_unknowns) is_pivot[c] = true;
  for (std::size_t c = 0; c < n; ++c)
    if (!is_pivot[c]) out.free_unknowns.push_back(c);
  out.particular.assign(n, F(0));
  for (std::size_t r = 0; r < rank; ++r) out.particular[out.pivot_unknowns[r]] = rows[r][n];
  for (auto f : out.free_unknowns) {
    std::vector<F> v(n, F(0));
    v[f] = F(1);
    for (std::size_t r = 0; r < rank; ++r) v[out.pivot_unknowns[r]] = -rows[r][f];
    out.nullspace.push_back(std::move(v));
  }
  out.status = out.free_unknowns.empty() ? SolveStatus::Unique : SolveStatus::Underdetermined;
  return out;
}

/// Splits an expression affine in `unknowns` into coefficients and constant
/// term (so that expr = sum coeffs[i]*u_i + constant). Returns nullopt if
/// the expression is not affine in the unknowns.
std::optional<std::pair<std::vector<RationalFn>, RationalFn>> affine_parts(const RationalFn& expr,
                                                                            const std::vector<Var>& unknowns);

/// Incrementally maintained row-reduced basis of a subspace of Q^dim.
class RowSpace {
 public:
  explicit RowSpace(std::size_t dim) : dim_(dim) {}
  std::size_t dim() const { return dim_; }
  std::size_t rank() const { return rows_.size(); }
  /// Adds v; returns true if it enlarged the span.
  bool insert(const std::vector<Rational>& v);
  bool contains(const std::vector<Rational>& v) const;
  const std::vector<std::vector<Rational>>& rows() const { return rows_; }

 private:
  std::vector<Rational> reduce(std::vector<Rational> v) const;
  std::size_t dim_;
  std::vector<std::vector<Rational>> rows_;  // each with a unit pivot
  std::vector<std::size_t> pivots_;
};

std::size_t rank_of(const std::vector<std::vector<Rational>>& vectors);

}  // namespace cwb::sym
