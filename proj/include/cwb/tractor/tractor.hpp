#pragma once

#include <mutex>
#include <optional>
#include <stdexcept>
#include <vector>

#include "cwb/curvature/curvature.hpp"

namespace cwb::tractor {

using curv::Curvature;
using sym::FnMatrix;
using sym::QMatrix;
using sym::Rational;
using sym::RationalFn;

class PreconditionFailed : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// (alpha, Y, beta) = alpha s_- + Y + beta s_+ in the splitting of a fixed metric.
struct StandardTractor {
  RationalFn alpha;
  std::vector<RationalFn> Y;
  RationalFn beta;

  static StandardTractor from_vector(const std::vector<RationalFn>& v);
  std::vector<RationalFn> to_vector() const;
  friend bool operator==(const StandardTractor&, const StandardTractor&) = default;
};

/// Phi(mu, (a, A), Z) with mu a 1-form, A a g-skew endomorphism A^i_j and Z
/// a vector. As a matrix in the frame (s_-, d_1, ..., d_n, s_+):
///   [ -a    mu    0      ]
///   [  Z    A    -mu^#   ]
///   [  0   -Z^b   a      ]
struct AdjointTractor {
  std::vector<RationalFn> mu;
  RationalFn a;
  FnMatrix A;
  std::vector<RationalFn> Z;

  static AdjointTractor zero(std::size_t n);
  /// Reads the components off a matrix; the lower-left blocks are taken as given.
  static AdjointTractor from_matrix(const FnMatrix& m);
  FnMatrix to_matrix(const FnMatrix& g, const FnMatrix& ginv) const;
  friend bool operator==(const AdjointTractor&, const AdjointTractor&) = default;
};

/// Tractor metric h in the frame (s_-, d_i, s_+).
FnMatrix tractor_metric(const FnMatrix& g);
bool is_h_skew(const FnMatrix& m, const FnMatrix& g);
bool is_h_skew(const QMatrix& m, const QMatrix& g);
RationalFn tractor_inner(const StandardTractor& t1, const StandardTractor& t2, const FnMatrix& g);

/// Endomorphism of a wedge of two covectors: (alpha ^ beta)(X) = alpha(X) beta^# - beta(X) alpha^#.
FnMatrix wedge(const std::vector<RationalFn>& alpha, const std::vector<RationalFn>& beta, const FnMatrix& ginv);

/// Matrix of s_-^b ^ V^b.
FnMatrix s_minus_wedge(const std::vector<RationalFn>& V, const FnMatrix& g, const FnMatrix& ginv);
QMatrix s_minus_wedge(const std::vector<Rational>& V, const QMatrix& g);

/// Graded bracket from the component formulas of the |1|-grading.
AdjointTractor adjoint_bracket(const AdjointTractor& p1, const AdjointTractor& p2, const FnMatrix& g,
                               const FnMatrix& ginv);

/// Normal tractor connection of a chart in the splitting of its metric.
class TractorConnection {
 public:
  explicit TractorConnection(const Curvature& curv);

  const Curvature& curvature() const { return curv_; }
  std::size_t n() const { return curv_.n(); }
  std::size_t rank() const { return curv_.n() + 2; }

  /// Connection matrix along d_i: D_i T = d_i T + gamma(i) T.
  const FnMatrix& gamma(std::size_t i) const;
  std::vector<RationalFn> derivative(std::size_t i, const std::vector<RationalFn>& t) const;
  StandardTractor derivative(const std::vector<RationalFn>& X, const StandardTractor& t) const;
  /// Induced derivative on so(T, h): d_i Phi + [gamma(i), Phi].
  FnMatrix adjoint_derivative(std::size_t i, const FnMatrix& phi) const;
  FnMatrix adjoint_derivative(const std::vector<RationalFn>& X, const FnMatrix& phi) const;
  /// R^nc(d_i, d_j) = [D_i, D_j].
  const FnMatrix& curvature_matrix(std::size_t i, std::size_t j) const;
  AdjointTractor curvature(std::size_t i, std::size_t j) const;

 private:
  const Curvature& curv_;
  mutable std::once_flag gamma_flag_, curv_flag_;
  mutable std::vector<FnMatrix> gamma_;
  mutable std::vector<FnMatrix> curv_mats_;
};

/// Standard tractor of g re-expressed in the splitting of Omega^2 g.
StandardTractor tractor_transform(const StandardTractor& t, const RationalFn& omega, const Curvature& curv);

/// The explicit dimension-6 obstruction in the presence of a parallel null
/// distribution containing Im(Ric). Returns O_mi (covariant).
curv::TensorField obstruction6_null(const TractorConnection& conn,
                                    const std::vector<std::vector<RationalFn>>& null_fields,
                                    const std::vector<chart::EvalPoint>& points);

}  // namespace cwb::tractor
