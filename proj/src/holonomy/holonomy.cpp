#include "cwb/holonomy/holonomy.hpp"

#include <algorithm>

namespace cwb::hol {

using sym::FnMatrix;
using sym::LinearSystem;
using sym::RowSpace;

namespace {

std::vector<Rational> flatten(const QMatrix& m) { return m.data(); }

std::vector<Rational> mat_vec(const QMatrix& m, const std::vector<Rational>& v) {
  std::vector<Rational> out(m.rows(), Rational(0));
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c)
      if (sgn(m(r, c)) != 0 && sgn(v[c]) != 0) out[r] += m(r, c) * v[c];
  return out;
}

QMatrix tractor_metric(const QMatrix& g) {
  const std::size_t n = g.rows();
  QMatrix h(n + 2, n + 2);
  h(0, n + 1) = h(n + 1, 0) = Rational(1);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) h(1 + i, 1 + j) = g(i, j);
  return h;
}

QMatrix inverse(const QMatrix& m) {
  auto inv = sym::invert(m);
  if (!inv.inverse) throw chart::DegenerateMetricAtPoint("metric is degenerate at the point");
  return *inv.inverse;
}

}  // namespace

bool MatrixSpan::insert(const QMatrix& m) {
  if (!rows_.insert(flatten(m))) return false;
  basis_.push_back(m);
  return true;
}

bool MatrixSpan::contains(const QMatrix& m) const { return rows_.contains(flatten(m)); }

LieSubalgebra lie_closure(const std::vector<QMatrix>& generators) {
  LieSubalgebra alg;
  if (generators.empty()) {
    alg.closed = true;
    return alg;
  }
  const std::size_t N = generators.front().rows();
  MatrixSpan span(N);
  for (const auto& g : generators) span.insert(g);
  for (std::size_t i = 0; i < span.dim(); ++i)
    for (std::size_t j = 0; j < i; ++j) {
      QMatrix b = QMatrix::bracket(span.basis()[i], span.basis()[j]);
      span.insert(b);
    }
  alg.n = N - 2;
  alg.basis = span.basis();
  alg.closed = true;
  return alg;
}

bool is_bracket_closed(const std::vector<QMatrix>& basis) {
  if (basis.empty()) return true;
  MatrixSpan span(basis.front().rows());
  for (const auto& b : basis) span.insert(b);
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (!span.contains(QMatrix::bracket(basis[i], basis[j]))) return false;
  return true;
}

bool membership(const QMatrix& phi, const LieSubalgebra& alg) {
  if (phi.is_zero_matrix()) return true;
  MatrixSpan span(phi.rows());
  for (const auto& b : alg.basis) span.insert(b);
  return span.contains(phi);
}

HolonomyResult infinitesimal_holonomy(const TractorConnection& conn, const EvalPoint& x, int max_order) {
  if (max_order < 0) throw std::invalid_argument("max_order must be nonnegative");
  const auto& curv = conn.curvature();
  const std::size_t n = curv.n();
  const QMatrix gx = sym::evaluate(curv.g(), x.assignment);
  if (sgn(sym::invert(gx).determinant) == 0)
    throw chart::DegenerateMetricAtPoint("metric is degenerate at " + chart::print_point(curv.chart(), x));

  HolonomyResult res;
  res.max_order = max_order;
  struct Element {
    FnMatrix m;
    std::size_t last;  // derivatives are applied in nondecreasing coordinate order
  };
  std::vector<Element> level;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const FnMatrix& r = conn.curvature_matrix(i, j);
      if (!r.is_zero_matrix()) level.push_back({r, 0});
    }
  std::vector<QMatrix> gens;
  LieSubalgebra alg = lie_closure({});
  for (int order = 0; order <= max_order; ++order) {
    if (order > 0) {
      std::vector<Element> next;
      for (const auto& e : level)
        for (std::size_t m = e.last; m < n; ++m) {
          FnMatrix d = conn.adjoint_derivative(m, e.m);
          if (!d.is_zero_matrix()) next.push_back({std::move(d), m});
        }
      level = std::move(next);
    }
    std::vector<QMatrix> fresh = alg.basis;
    for (const auto& e : level) fresh.push_back(sym::evaluate(e.m, x.assignment));
    alg = lie_closure(fresh);
    res.dims_by_order.push_back(alg.dim());
  }
  alg.n = n;
  alg.p = curv.chart().signature.p;
  alg.q = curv.chart().signature.q;
  alg.point = chart::print_point(curv.chart(), x);
  res.algebra = std::move(alg);
  res.stabilized = max_order >= 1 && res.dims_by_order[max_order] == res.dims_by_order[max_order - 1] &&
                   res.algebra.closed;
  return res;
}

HolonomyDistribution holonomy_distribution(const LieSubalgebra& alg, const QMatrix& g) {
  const std::size_t n = g.rows();
  const std::size_t N = n + 2;
  const std::size_t d = alg.basis.size();
  HolonomyDistribution out;
  if (d == 0) return out;
  std::vector<QMatrix> E;
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<Rational> e(n, Rational(0));
    e[k] = 1;
    E.push_back(tractor::s_minus_wedge(e, g));
  }
  LinearSystem<Rational> sys;
  for (std::size_t k = 0; k < n + d; ++k) sys.unknowns.push_back("u" + std::to_string(k));
  for (std::size_t r = 0; r < N; ++r)
    for (std::size_t c = 0; c < N; ++c) {
      std::vector<Rational> row(n + d, Rational(0));
      bool any = false;
      for (std::size_t k = 0; k < n; ++k) {
        row[k] = E[k](r, c);
        any = any || sgn(row[k]) != 0;
      }
      for (std::size_t j = 0; j < d; ++j) {
        row[n + j] = -alg.basis[j](r, c);
        any = any || sgn(row[n + j]) != 0;
      }
      if (any) sys.add(std::move(row), Rational(0));
    }
  auto sol = sym::solve_linear(sys);
  RowSpace span(n);
  for (const auto& v : sol.nullspace) span.insert(std::vector<Rational>(v.begin(), v.begin() + static_cast<long>(n)));
  out.basis = span.rows();
  return out;
}

namespace {

QMatrix phi_matrix(const std::vector<Rational>& mu, const Rational& a, const QMatrix& A, const std::vector<Rational>& Z,
                   const QMatrix& g, const QMatrix& ginv) {
  const std::size_t n = g.rows();
  QMatrix m(n + 2, n + 2);
  m(0, 0) = -a;
  m(n + 1, n + 1) = a;
  auto mu_up = mat_vec(ginv, mu);
  auto z_down = mat_vec(g, Z);
  for (std::size_t k = 0; k < n; ++k) {
    m(0, 1 + k) = mu[k];
    m(1 + k, 0) = Z[k];
    m(1 + k, n + 1) = -mu_up[k];
    m(n + 1, 1 + k) = -z_down[k];
    for (std::size_t l = 0; l < n; ++l) m(1 + k, 1 + l) = A(k, l);
  }
  return m;
}

}  // namespace

std::vector<QMatrix> so_basis(const QMatrix& g) {
  const std::size_t N = g.rows() + 2;
  QMatrix hinv = inverse(tractor_metric(g));
  std::vector<QMatrix> out;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = i + 1; j < N; ++j) {
      QMatrix S(N, N);
      S(i, j) = 1;
      S(j, i) = -1;
      out.push_back(hinv * S);
    }
  return out;
}

std::vector<QMatrix> parabolic_basis(const QMatrix& g) {
  const std::size_t n = g.rows();
  QMatrix ginv = inverse(g);
  std::vector<Rational> zero(n, Rational(0));
  QMatrix zA(n, n);
  std::vector<QMatrix> out;
  out.push_back(phi_matrix(zero, Rational(1), zA, zero, g, ginv));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      QMatrix S(n, n);
      S(i, j) = 1;
      S(j, i) = -1;
      out.push_back(phi_matrix(zero, Rational(0), ginv * S, zero, g, ginv));
    }
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<Rational> mu = zero;
    mu[k] = 1;
    out.push_back(phi_matrix(mu, Rational(0), zA, zero, g, ginv));
  }
  return out;
}

GenericityReport genericity_report(const LieSubalgebra& alg, const QMatrix& g) {
  const std::size_t n = g.rows();
  GenericityReport r;
  r.dim = alg.dim();
  r.full_dim = (n + 2) * (n + 1) / 2;
  r.generic = r.dim == r.full_dim;
  MatrixSpan span(n + 2);
  for (const auto& b : alg.basis) span.insert(b);
  for (const auto& b : parabolic_basis(g)) span.insert(b);
  r.open_orbit = span.dim() == r.full_dim;
  auto E = holonomy_distribution(alg, g);
  r.e_rank = E.rank();
  r.e_lightlike = true;
  for (const auto& a : E.basis) {
    auto ga = mat_vec(g, a);
    for (const auto& b : E.basis) {
      Rational s(0);
      for (std::size_t k = 0; k < n; ++k) s += ga[k] * b[k];
      if (sgn(s) != 0) r.e_lightlike = false;
    }
  }
  return r;
}

WedgeReport check_wedge_condition(const HolonomyDistribution& E, const QMatrix& g, const std::vector<Rational>& alpha,
                                  std::size_t k) {
  const std::size_t n = g.rows();
  WedgeReport rep;
  auto alpha_at = [&](const std::vector<std::size_t>& idx) {
    std::size_t off = 0;
    for (auto i : idx) off = off * n + i;
    return alpha.at(off);
  };
  for (std::size_t b = 0; b < E.basis.size(); ++b) {
    auto vb = mat_vec(g, E.basis[b]);
    bool ok = true;
    // iterate over increasing index sets of size k + 1
    std::vector<std::size_t> I(k + 1);
    for (std::size_t s = 0; s <= k; ++s) I[s] = s;
    while (ok && k + 1 <= n) {
      Rational sum(0);
      for (std::size_t s = 0; s <= k; ++s) {
        std::vector<std::size_t> rest;
        for (std::size_t t = 0; t <= k; ++t)
          if (t != s) rest.push_back(I[t]);
        Rational term = vb[I[s]] * alpha_at(rest);
        if (s % 2 == 0) {
          sum += term;
        } else {
          sum -= term;
        }
      }
      if (sgn(sum) != 0) ok = false;
      std::size_t pos = k + 1;
      while (pos > 0 && I[pos - 1] == n - (k + 1) + (pos - 1)) --pos;
      if (pos == 0) break;
      ++I[pos - 1];
      for (std::size_t t = pos; t <= k; ++t) I[t] = I[t - 1] + 1;
    }
    if (!ok) {
      rep.pass = false;
      rep.failing.push_back(b);
    }
  }
  return rep;
}

std::vector<RationalFn> lie_bracket(const std::vector<sym::Var>& vars, const std::vector<RationalFn>& X,
                                    const std::vector<RationalFn>& Y) {
  const std::size_t n = vars.size();
  std::vector<RationalFn> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    RationalFn s;
    for (std::size_t i = 0; i < n; ++i) {
      if (!X[i].is_zero() && !Y[k].is_zero()) s += X[i] * Y[k].diff(vars[i]);
      if (!Y[i].is_zero() && !X[k].is_zero()) s -= Y[i] * X[k].diff(vars[i]);
    }
    out[k] = s;
  }
  return out;
}

namespace {

std::vector<Rational> eval_vec(const std::vector<RationalFn>& v, const sym::Assignment& at) {
  std::vector<Rational> out;
  for (const auto& c : v) out.push_back(c.is_zero() ? Rational(0) : c.eval(at));
  return out;
}

}  // namespace

BracketReport bracket_report(const std::vector<sym::Var>& vars, const std::vector<std::vector<RationalFn>>& fields,
                             const sym::Assignment& at) {
  BracketReport r;
  r.dim = vars.size();
  RowSpace span(r.dim);
  for (const auto& f : fields) span.insert(eval_vec(f, at));
  r.rank = span.rank();
  r.integrable = true;
  RowSpace big = span;
  std::vector<std::vector<RationalFn>> firsts;
  for (std::size_t i = 0; i < fields.size(); ++i)
    for (std::size_t j = i + 1; j < fields.size(); ++j) {
      auto b = lie_bracket(vars, fields[i], fields[j]);
      auto bx = eval_vec(b, at);
      if (!span.contains(bx)) r.integrable = false;
      big.insert(bx);
      firsts.push_back(std::move(b));
    }
  if (fields.size() == 2) {
    for (const auto& f : fields) big.insert(eval_vec(lie_bracket(vars, f, firsts.front()), at));
  }
  r.bracket_span = big.rank();
  const bool shape = (r.dim == 6 && r.rank == 3) || (r.dim == 5 && r.rank == 2);
  r.generic = shape && r.bracket_span == r.dim;
  return r;
}

RegionReport classify_E_region(const TractorConnection& conn, const std::vector<EvalPoint>& points,
                               const std::vector<std::vector<RationalFn>>& fields, int max_order) {
  const auto& curv = conn.curvature();
  RegionReport rep;
  for (const auto& x : points) {
    auto hol = infinitesimal_holonomy(conn, x, max_order);
    QMatrix gx = sym::evaluate(curv.g(), x.assignment);
    auto E = holonomy_distribution(hol.algebra, gx);
    RowSpace espan(curv.n()), fspan(curv.n());
    for (const auto& v : E.basis) espan.insert(v);
    for (const auto& f : fields) fspan.insert(eval_vec(f, x.assignment));
    bool same = espan.rank() == fspan.rank();
    for (const auto& v : E.basis) same = same && fspan.contains(v);
    if (!same)
      throw SpanMismatch("fields do not span the holonomy distribution at " + chart::print_point(curv.chart(), x));
    RegionReport::PointEntry e;
    e.point = hol.algebra.point;
    e.e_rank = E.rank();
    e.holonomy_dim = hol.algebra.dim();
    e.brackets = bracket_report(curv.chart().vars, fields, x.assignment);
    if (!rep.points.empty() && rep.points.front().e_rank != e.e_rank) rep.constant_rank = false;
    rep.integrable = rep.integrable && e.brackets.integrable;
    rep.generic = rep.generic && e.brackets.generic;
    rep.points.push_back(std::move(e));
  }
  if (rep.points.empty()) rep.generic = false;
  return rep;
}

QMatrix spin34H_metric() {
  QMatrix g(6, 6);
  for (std::size_t a = 0; a < 3; ++a) g(a, a + 3) = g(a + 3, a) = 1;
  return g;
}

LieSubalgebra spin34H() {
  // Graded basis (s_+, e_1, e_2, e_3, s_-, e_4, e_5, e_6) and the map into
  // the tractor frame (s_-, d_1, ..., d_6, s_+).
  const std::size_t to_frame[8] = {7, 1, 2, 3, 0, 4, 5, 6};
  struct Params {
    Rational Z[3][3];  // Z[b][a] = Z^b_a
    Rational X12, X13, X23, w2, wb1, wb3, v2;
  };
  auto build = [&](const Params& p) {
    Rational w[3] = {-p.Z[1][2], p.w2, p.Z[1][0]};
    Rational v[3] = {-p.Z[2][1], p.v2, p.Z[0][1]};
    Rational r = p.Z[0][0] - p.Z[1][1] + p.Z[2][2];
    Rational X[3][3];  // X[a][b] = X^b_a, skew
    X[0][1] = p.X12;
    X[0][2] = p.X13;
    X[1][2] = p.X23;
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < a; ++b) X[a][b] = -X[b][a];
    Rational wb[3] = {p.wb1, -X[0][2], p.wb3};
    QMatrix m(8, 8);
    m(0, 0) = r;
    m(4, 4) = -r;
    for (int a = 0; a < 3; ++a) {
      m(0, 1 + a) = w[a];
      m(0, 5 + a) = wb[a];
      m(1 + a, 0) = v[a];
      m(1 + a, 4) = -wb[a];
      m(4, 5 + a) = -v[a];
      m(5 + a, 4) = -w[a];
      for (int b = 0; b < 3; ++b) {
        // Z^b_a sits in row a, column b of the upper-left block
        m(1 + a, 1 + b) = p.Z[b][a];
        m(5 + a, 5 + b) = -p.Z[a][b];
        m(1 + a, 5 + b) = X[a][b];
      }
    }
    QMatrix f(8, 8);
    for (std::size_t i = 0; i < 8; ++i)
      for (std::size_t j = 0; j < 8; ++j) f(to_frame[i], to_frame[j]) = m(i, j);
    return f;
  };
  std::vector<QMatrix> basis;
  for (int b = 0; b < 3; ++b)
    for (int a = 0; a < 3; ++a) {
      Params p{};
      p.Z[b][a] = 1;
      basis.push_back(build(p));
    }
  Rational Params::*scalars[] = {&Params::X12, &Params::X13, &Params::X23, &Params::w2,
                                 &Params::wb1, &Params::wb3, &Params::v2};
  for (auto s : scalars) {
    Params p{};
    p.*s = 1;
    basis.push_back(build(p));
  }
  LieSubalgebra alg;
  alg.n = 6;
  alg.p = 3;
  alg.q = 3;
  alg.basis = std::move(basis);
  alg.closed = is_bracket_closed(alg.basis);
  return alg;
}

ContainmentReport containment(const LieSubalgebra& alg, const LieSubalgebra& target) {
  ContainmentReport r;
  for (const auto& b : alg.basis)
    if (!membership(b, target)) ++r.outside;
  r.contained = r.outside == 0;
  return r;
}

bool annihilates(const LieSubalgebra& alg, const std::vector<Rational>& t) {
  for (const auto& b : alg.basis)
    for (const auto& x : mat_vec(b, t))
      if (sgn(x) != 0) return false;
  return true;
}

}  // namespace cwb::hol
