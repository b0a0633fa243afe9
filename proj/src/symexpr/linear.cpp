#include "cwb/symexpr/linear.hpp"

#include <algorithm>

namespace cwb::sym {

std::optional<std::pair<std::vector<RationalFn>, RationalFn>> affine_parts(const RationalFn& expr,
                                                                            const std::vector<Var>& unknowns) {
  for (Var u : unknowns)
    if (expr.den().contains(u)) return std::nullopt;
  std::vector<RationalFn> coeffs(unknowns.size());
  RationalFn constant;
  for (const auto& [mono, coef] : expr.num().collect(unknowns)) {
    if (mono.degree() > 1) return std::nullopt;
    RationalFn part(coef, expr.den());
    if (mono.is_one()) {
      constant = part;
      continue;
    }
    Var v{mono.factors().front().var};
    auto it = std::find(unknowns.begin(), unknowns.end(), v);
    coeffs[static_cast<std::size_t>(it - unknowns.begin())] = part;
  }
  return std::make_pair(std::move(coeffs), std::move(constant));
}

std::vector<Rational> RowSpace::reduce(std::vector<Rational> v) const {
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    const auto p = pivots_[r];
    if (sgn(v[p]) == 0) continue;
    Rational f = v[p];
    for (std::size_t c = 0; c < dim_; ++c)
      if (sgn(rows_[r][c]) != 0) v[c] -= f * rows_[r][c];
  }
  return v;
}

bool RowSpace::insert(const std::vector<Rational>& v) {
  if (v.size() != dim_) throw std::invalid_argument("vector dimension mismatch");
  auto w = reduce(v);
  auto it = std::find_if(w.begin(), w.end(), [](const Rational& x) { return sgn(x) != 0; });
  if (it == w.end()) return false;
  const auto p = static_cast<std::size_t>(it - w.begin());
  Rational inv = 1 / w[p];
  for (auto& x : w) x *= inv;
  for (auto& row : rows_) {
    if (sgn(row[p]) == 0) continue;
    Rational f = row[p];
    for (std::size_t c = 0; c < dim_; ++c)
      if (sgn(w[c]) != 0) row[c] -= f * w[c];
  }
  rows_.push_back(std::move(w));
  pivots_.push_back(p);
  return true;
}

bool RowSpace::contains(const std::vector<Rational>& v) const {
  if (v.size() != dim_) throw std::invalid_argument("vector dimension mismatch");
  auto w = reduce(v);
  return std::all_of(w.begin(), w.end(), [](const Rational& x) { return sgn(x) == 0; });
}

std::size_t rank_of(const std::vector<std::vector<Rational>>& vectors) {
  if (vectors.empty()) return 0;
  RowSpace s(vectors.front().size());
  for (const auto& v : vectors) s.insert(v);
  return s.rank();
}

}  // namespace cwb::sym
