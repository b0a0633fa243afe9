#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cwb/chartio/chart.hpp"
#include "cwb/curvature/tensor.hpp"

namespace cwb::curv {

using chart::Chart;
using chart::EvalPoint;

class SingularMetric : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};
class ZeroFactor : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Levi-Civita curvature of a chart, computed lazily and cached. Index
/// conventions:
///   christoffel  G^k_ij            slots (k, i, j)
///   riemann      R^l_kij = (R(d_i, d_j) d_k)^l, R(X,Y) = [D_X, D_Y] - D_[X,Y]
///   ricci        Ric_ab = R^l_{b l a}
///   cotton       C_kij = (D_i P)_jk - (D_j P)_ik
///   weyl         W^l_kij, same layout as riemann
///   bach         B_ij = -D^k C_jik + P^kl W_ikjl with W_ikjl = g_ie W^e_kjl
/// Thread safe: every cached quantity is initialized exactly once.
class Curvature {
 public:
  explicit Curvature(Chart chart);

  const Chart& chart() const { return chart_; }
  std::size_t n() const { return chart_.dim(); }
  const FnMatrix& g() const { return chart_.metric; }
  const FnMatrix& ginv() const;
  const TensorField& christoffel() const;
  const TensorField& riemann() const;
  const TensorField& ricci() const;
  const RationalFn& scalar() const;
  const TensorField& schouten() const;       // P_ij
  const TensorField& schouten_mixed() const;  // P^i_j
  const TensorField& cotton() const;
  const TensorField& weyl() const;
  const TensorField& bach() const;

  /// Appends a covariant derivative slot: (DT)(..., m) = (D_m T)(...).
  TensorField covariant_derivative(const TensorField& t) const;
  /// Covariant derivative of a vector field along d_i.
  std::vector<RationalFn> derivative_of_vector(std::size_t i, const std::vector<RationalFn>& v) const;
  TensorField raise(const TensorField& t, std::size_t slot) const;
  TensorField lower(const TensorField& t, std::size_t slot) const;

 private:
  template <class T, class F>
  const T& cached(std::once_flag& flag, std::optional<T>& slot, F&& compute) const {
    std::call_once(flag, [&] { slot.emplace(compute()); });
    return *slot;
  }

  Chart chart_;
  mutable std::once_flag f_ginv_, f_gamma_, f_riem_, f_ric_, f_scal_, f_p_, f_pm_, f_c_, f_w_, f_b_;
  mutable std::optional<FnMatrix> ginv_;
  mutable std::optional<TensorField> gamma_, riem_, ric_, p_, pm_, c_, w_, b_;
  mutable std::optional<RationalFn> scal_;
};

/// Metric Omega^2 g on the same coordinates.
Chart conformal_rescale(const Chart& chart, const RationalFn& omega);

struct NullDistributionReport {
  struct PointResult {
    std::string point;
    bool lightlike = false;
    bool parallel = false;
    bool contains_ricci_image = false;
  };
  std::vector<PointResult> points;
  bool all_pass() const;
};

/// Checks span{fields} for total lightlikeness, invariance under D and
/// containing Im(Ric) at each point.
NullDistributionReport check_parallel_null_distribution(const Curvature& curv,
                                                        const std::vector<std::vector<RationalFn>>& fields,
                                                        const std::vector<EvalPoint>& points);

}  // namespace cwb::curv
