#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cwb/symexpr/linear.hpp"
#include "cwb/tractor/tractor.hpp"

namespace cwb::hol {

using chart::EvalPoint;
using sym::QMatrix;
using sym::Rational;
using sym::RationalFn;
using tractor::TractorConnection;

class SpanMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Span of (n+2)x(n+2) matrices over Q with an incremental membership test.
class MatrixSpan {
 public:
  explicit MatrixSpan(std::size_t size) : size_(size), rows_(size * size) {}
  std::size_t size() const { return size_; }
  std::size_t dim() const { return basis_.size(); }
  const std::vector<QMatrix>& basis() const { return basis_; }
  /// Adds m; returns true if the span grew.
  bool insert(const QMatrix& m);
  bool contains(const QMatrix& m) const;

 private:
  std::size_t size_;
  sym::RowSpace rows_;
  std::vector<QMatrix> basis_;
};

struct LieSubalgebra {
  std::string point;  // printed evaluation point, empty for abstract algebras
  std::size_t n = 0;
  int p = 0, q = 0;
  std::vector<QMatrix> basis;
  bool closed = false;  // closure certificate: every bracket of basis elements lies in the span

  std::size_t dim() const { return basis.size(); }
};

/// Smallest bracket-closed subspace containing the generators.
LieSubalgebra lie_closure(const std::vector<QMatrix>& generators);
/// Checks that every bracket of basis elements lies in their span.
bool is_bracket_closed(const std::vector<QMatrix>& basis);
bool membership(const QMatrix& phi, const LieSubalgebra& alg);

struct HolonomyResult {
  LieSubalgebra algebra;
  std::vector<std::size_t> dims_by_order;  // dimension of the closure using derivatives up to each order
  int max_order = 0;
  bool stabilized = false;
};

/// Lie algebra generated at x by R^nc(d_i, d_j) and its iterated tractor
/// derivatives along coordinate fields, up to max_order derivatives.
HolonomyResult infinitesimal_holonomy(const TractorConnection& conn, const EvalPoint& x, int max_order);

struct HolonomyDistribution {
  std::vector<std::vector<Rational>> basis;  // tangent vectors V with s_-^b ^ V^b in the algebra
  std::size_t rank() const { return basis.size(); }
};

/// g is the metric at the point of the algebra.
HolonomyDistribution holonomy_distribution(const LieSubalgebra& alg, const QMatrix& g);

/// Full so(p+1, q+1) in the tractor frame for the metric g at a point.
std::vector<QMatrix> so_basis(const QMatrix& g);
/// Parabolic p = g_0 + g_1 (stabilizer of the line of s_-).
std::vector<QMatrix> parabolic_basis(const QMatrix& g);

struct GenericityReport {
  std::size_t dim = 0;
  std::size_t full_dim = 0;
  bool generic = false;     // dim equals dim so(p+1, q+1)
  bool open_orbit = false;  // alg + p spans so(p+1, q+1)
  std::size_t e_rank = 0;
  bool e_lightlike = false;
};
GenericityReport genericity_report(const LieSubalgebra& alg, const QMatrix& g);

struct WedgeReport {
  bool pass = true;
  std::vector<std::size_t> failing;  // indices of distribution basis vectors
};
/// alpha: fully antisymmetric covariant components at the point, row-major, of rank k.
WedgeReport check_wedge_condition(const HolonomyDistribution& E, const QMatrix& g, const std::vector<Rational>& alpha,
                                  std::size_t k);

/// Coordinate Lie bracket [X, Y]^k = X(Y^k) - Y(X^k).
std::vector<RationalFn> lie_bracket(const std::vector<sym::Var>& vars, const std::vector<RationalFn>& X,
                                    const std::vector<RationalFn>& Y);

struct BracketReport {
  std::size_t dim = 0;           // manifold dimension
  std::size_t rank = 0;          // rank of the fields at the point
  std::size_t bracket_span = 0;  // rank of fields + first brackets (+ second brackets when rank 2)
  bool integrable = false;       // brackets lie in the span of the fields
  bool generic = false;          // brackets fill the tangent space in the (5,2)/(6,3) cases
};
BracketReport bracket_report(const std::vector<sym::Var>& vars, const std::vector<std::vector<RationalFn>>& fields,
                             const sym::Assignment& at);

struct RegionReport {
  struct PointEntry {
    std::string point;
    std::size_t e_rank = 0;
    std::size_t holonomy_dim = 0;
    BracketReport brackets;
  };
  std::vector<PointEntry> points;
  bool constant_rank = true;  // sampled evidence for an E-adapted region
  bool integrable = true;
  bool generic = true;
};
/// Throws SpanMismatch when the fields do not span E at some point.
RegionReport classify_E_region(const TractorConnection& conn, const std::vector<EvalPoint>& points,
                               const std::vector<std::vector<RationalFn>>& fields, int max_order);

/// spin(3,4)_H in the tractor frame (s_-, d_1, ..., d_6, s_+) for the split
/// metric g(d_a, d_{a+3}) = 1 at the point.
LieSubalgebra spin34H();
QMatrix spin34H_metric();

struct ContainmentReport {
  bool contained = false;
  std::size_t outside = 0;  // basis elements not in the target
};
ContainmentReport containment(const LieSubalgebra& alg, const LieSubalgebra& target);

/// Einstein check: every basis element annihilates the tractor t (evaluated).
bool annihilates(const LieSubalgebra& alg, const std::vector<Rational>& t);

}  // namespace cwb::hol
