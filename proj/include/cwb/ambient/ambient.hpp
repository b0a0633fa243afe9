#pragma once

#include <cstddef>
#include <limits>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cwb/curvature/curvature.hpp"
#include "cwb/tractor/tractor.hpp"

namespace cwb::amb {

using chart::Chart;
using chart::EvalPoint;
using curv::Curvature;
using curv::Pos;
using curv::TensorField;
using sym::FnMatrix;
using sym::QMatrix;
using sym::Rational;
using sym::RationalFn;

class SingularBaseMetric : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};
class UnsolvableOrder : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};
class UnsupportedDimension : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Order marker for series known to all orders.
inline constexpr int kExactOrder = std::numeric_limits<int>::max() / 4;

/// Power series in rho with coefficients in Q(x), known exactly modulo
/// rho^valid. `low` is a lower bound for the vanishing order of the true
/// series; products use it to propagate validity.
class RhoSeries {
 public:
  RhoSeries() = default;  // exact zero
  static RhoSeries exact(std::vector<RationalFn> coeffs);
  static RhoSeries truncated(std::vector<RationalFn> coeffs, int valid);

  int valid() const { return valid_; }
  int low() const { return low_; }
  bool is_exact() const { return valid_ >= kExactOrder; }
  /// Zero to every known order.
  bool known_zero() const { return low_ >= valid_; }
  /// Coefficient of rho^k; throws std::out_of_range beyond the valid order.
  RationalFn coeff(int k) const;
  const std::vector<RationalFn>& stored() const { return c_; }

  RhoSeries operator+(const RhoSeries& o) const;
  RhoSeries operator-(const RhoSeries& o) const;
  RhoSeries operator*(const RhoSeries& o) const;
  RhoSeries operator-() const;
  RhoSeries scaled(const RationalFn& f) const;
  RhoSeries diff_rho() const;
  RhoSeries diff(sym::Var v) const;
  RhoSeries truncate(int order) const;
  RhoSeries partial_eval(const sym::Assignment& at) const;

 private:
  RhoSeries(std::vector<RationalFn> c, int valid, int low);
  void normalize();
  std::vector<RationalFn> c_;
  int valid_ = kExactOrder;
  int low_ = kExactOrder;
};

/// t^weight * series(rho; x).
struct AmbientScalar {
  int weight = 0;
  RhoSeries series;

  bool known_zero() const { return series.known_zero(); }
  AmbientScalar operator+(const AmbientScalar& o) const;  // throws std::logic_error on a weight clash
  AmbientScalar operator-(const AmbientScalar& o) const;
  AmbientScalar operator*(const AmbientScalar& o) const;
  AmbientScalar operator-() const { return {weight, -series}; }
  AmbientScalar diff_t() const;
};

/// Components over ambient indices I in {0, 1..n, n+1}: 0 is d_t, 1..n the
/// coordinates of M, n+1 is d_rho. Row-major, slot 0 most significant.
struct AmbientSeriesTensor {
  std::size_t dim = 0;  // n + 2
  std::vector<Pos> slots;
  std::vector<AmbientScalar> c;

  AmbientSeriesTensor() = default;
  AmbientSeriesTensor(std::size_t dim, std::vector<Pos> slots);
  AmbientScalar& at(const std::vector<std::size_t>& idx);
  const AmbientScalar& at(const std::vector<std::size_t>& idx) const;
  std::vector<std::size_t> unflatten(std::size_t flat) const;
};

/// t-weight of a component of a tensor with dilation degree d
/// (delta_s^* T = s^d T): d - #(lower 0 indices) + #(upper 0 indices).
int expected_weight(const std::vector<Pos>& slots, const std::vector<std::size_t>& idx, int degree);

/// g_rho = sum_k rho^k coeffs[k], known modulo rho^(K+1) with K = coeffs.size() - 1.
struct AmbientJet {
  Chart base;
  std::vector<FnMatrix> coeffs;
  int truncation() const { return static_cast<int>(coeffs.size()) - 1; }
};

/// g^(0) = g, g^(1) = 2P, higher orders zero.
AmbientJet default_jet(const Curvature& curv, int K);
/// g_rho = g.
AmbientJet flat_jet(const Chart& chart, int K);
/// g_rho = (1 + lambda rho)^2 g.
AmbientJet einstein_jet(const Chart& chart, const Rational& lambda, int K);

/// Levi-Civita data of 2t dt drho + 2 rho dt^2 + t^2 g_rho, computed lazily.
/// Series are carried to rho^cap for the Christoffel symbols and rho^(cap-1)
/// for curvature; cap defaults to the jet truncation.
class AmbientMetric {
 public:
  explicit AmbientMetric(AmbientJet jet, std::optional<int> cap = std::nullopt);

  const AmbientJet& jet() const { return jet_; }
  std::size_t n() const { return jet_.base.dim(); }
  std::size_t dim() const { return n() + 2; }
  int cap() const { return cap_; }

  const AmbientSeriesTensor& metric() const;          // (Down, Down)
  const AmbientSeriesTensor& inverse_metric() const;  // (Up, Up); throws SingularBaseMetric
  const AmbientSeriesTensor& christoffel() const;     // G^A_BC, (Up, Down, Down)
  const AmbientSeriesTensor& ricci() const;           // (Down, Down)
  /// (L, K) = R^L_{K I J}, i.e. the endomorphism R(d_I, d_J).
  AmbientSeriesTensor curvature(std::size_t I, std::size_t J) const;
  /// (A, B) = (D_B T)^A for T = t d_t.
  AmbientSeriesTensor euler_derivative() const;

 private:
  AmbientJet jet_;
  int cap_;
  mutable std::once_flag f_g_, f_gi_, f_gamma_, f_ric_;
  mutable AmbientSeriesTensor g_, gi_, gamma_, ric_;
};

AmbientSeriesTensor assemble_ambient(const AmbientJet& jet);
AmbientSeriesTensor ambient_connection(const AmbientJet& jet);
AmbientSeriesTensor ricci_series(const AmbientJet& jet);

/// Smallest k whose coefficient is nonzero, or the valid order if all known
/// coefficients vanish (then `certain` is false unless the series is exact).
struct VanishingOrder {
  int order = 0;
  bool certain = false;
};
VanishingOrder vanishing_order(const AmbientScalar& s);

struct JetOrderSolution {
  int order = 0;
  std::string point;
  QMatrix value;  // g^(k)(x); at the critical order the pure-trace solution
  std::size_t unknowns = 0;
  std::size_t rank = 0;
  bool unique = false;
  std::size_t free_dim = 0;
  bool free_part_tracefree = true;      // every undetermined direction is g-trace free
  std::optional<Rational> forced_trace;  // g^ij g^(k)_ij when determined
  bool free_part_enters = false;         // an undetermined direction changes the equations
  std::optional<QMatrix> residual;       // critical order: remaining Ricci coefficient, O / c_n
};

/// Solves the rho^(k-1) coefficient of the tangential ambient Ricci tensor
/// at x for g^(k)(x), using the jet's orders below k. At the critical order
/// k = n/2 of even n only its trace is imposed. Throws
/// UnsolvableOrder on an inconsistent system and sym::DependencyError if a
/// derivative of an unknown enters the equations.
JetOrderSolution solve_jet_order(const AmbientJet& jet, int k, const EvalPoint& x);

/// Jet with orders 1..K determined symbolically where the Ricci condition
/// determines them; in even dimension order n/2 takes the pure-trace
/// solution (tau/n) g, which reproduces (1 + lambda rho)^2 g for Einstein g,
/// and orders above n/2 are zero.
AmbientJet solve_jet(const Curvature& curv, int K);

/// Normalization c_n = (-1)^(n/2-1) 2^(n/2-1) ((n/2-1)!)^2 / (n-2), chosen so that
/// O = Lap^(n/2-2) (Lap P - D D J) + nonlinear terms; in dimension 4 O is the Bach tensor.
Rational obstruction_constant(std::size_t n);

/// c_n (rho^(1-n/2) Ric~|TM x TM) at rho = 0 for even n. Throws UnsupportedDimension otherwise.
TensorField obstruction(const Curvature& curv);
QMatrix obstruction(const Curvature& curv, const EvalPoint& x);

struct IdentificationReport {
  bool tangential_pass = false;  // R~(d_i, d_j) = R^nc(d_i, d_j)
  bool t_pass = false;           // R~(d_t, d_I) = 0
  bool rho_pass = false;         // R~(d_rho, d_i) = 3 g^kl (D_k R^nc)(d_l, d_i)
  std::optional<Rational> rho_ratio;  // uniform factor LHS = ratio * RHS', RHS' without the 3
  std::vector<QMatrix> rho_lhs;       // R~(d_rho, d_i) at x, per i
  std::vector<QMatrix> rho_rhs;       // g^kl (D_k R^nc)(d_l, d_i) at x, per i
  std::vector<std::string> mismatches;
  bool all_pass() const { return tangential_pass && t_pass && rho_pass; }
};
IdentificationReport tractor_ambient_identification_check(const AmbientJet& jet, const tractor::TractorConnection& conn,
                                                          const EvalPoint& x);

}  // namespace cwb::amb
