#include "cwb/tractor/tractor.hpp"

namespace cwb::tractor {

using curv::Pos;
using curv::TensorField;

namespace {

void add_product(RationalFn& acc, const RationalFn& a, const RationalFn& b) {
  if (!a.is_zero() && !b.is_zero()) acc += a * b;
}

std::vector<RationalFn> sharp(const std::vector<RationalFn>& mu, const FnMatrix& ginv) {
  const std::size_t n = mu.size();
  std::vector<RationalFn> v(n);
  for (std::size_t m = 0; m < n; ++m)
    for (std::size_t e = 0; e < n; ++e) add_product(v[m], ginv(m, e), mu[e]);
  return v;
}

std::vector<RationalFn> flat(const std::vector<RationalFn>& Z, const FnMatrix& g) { return sharp(Z, g); }

RationalFn pairing(const std::vector<RationalFn>& mu, const std::vector<RationalFn>& Z) {
  RationalFn s;
  for (std::size_t k = 0; k < mu.size(); ++k) add_product(s, mu[k], Z[k]);
  return s;
}

FnMatrix diff_matrix(const FnMatrix& m, sym::Var v) {
  FnMatrix r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (!m(i, j).is_zero()) r(i, j) = m(i, j).diff(v);
  return r;
}

}  // namespace

StandardTractor StandardTractor::from_vector(const std::vector<RationalFn>& v) {
  if (v.size() < 3) throw std::invalid_argument("tractor vector too short");
  return {v.front(), std::vector<RationalFn>(v.begin() + 1, v.end() - 1), v.back()};
}

std::vector<RationalFn> StandardTractor::to_vector() const {
  std::vector<RationalFn> v;
  v.reserve(Y.size() + 2);
  v.push_back(alpha);
  v.insert(v.end(), Y.begin(), Y.end());
  v.push_back(beta);
  return v;
}

AdjointTractor AdjointTractor::zero(std::size_t n) {
  return {std::vector<RationalFn>(n), RationalFn(), FnMatrix(n, n), std::vector<RationalFn>(n)};
}

AdjointTractor AdjointTractor::from_matrix(const FnMatrix& m) {
  const std::size_t n = m.rows() - 2;
  AdjointTractor p = zero(n);
  p.a = m(n + 1, n + 1);
  for (std::size_t k = 0; k < n; ++k) {
    p.mu[k] = m(0, 1 + k);
    p.Z[k] = m(1 + k, 0);
    for (std::size_t l = 0; l < n; ++l) p.A(k, l) = m(1 + k, 1 + l);
  }
  return p;
}

FnMatrix AdjointTractor::to_matrix(const FnMatrix& g, const FnMatrix& ginv) const {
  const std::size_t n = Z.size();
  FnMatrix m(n + 2, n + 2);
  m(0, 0) = -a;
  m(n + 1, n + 1) = a;
  auto mu_up = sharp(mu, ginv);
  auto z_down = flat(Z, g);
  for (std::size_t k = 0; k < n; ++k) {
    m(0, 1 + k) = mu[k];
    m(1 + k, 0) = Z[k];
    m(1 + k, n + 1) = -mu_up[k];
    m(n + 1, 1 + k) = -z_down[k];
    for (std::size_t l = 0; l < n; ++l) m(1 + k, 1 + l) = A(k, l);
  }
  return m;
}

FnMatrix tractor_metric(const FnMatrix& g) {
  const std::size_t n = g.rows();
  FnMatrix h(n + 2, n + 2);
  h(0, n + 1) = h(n + 1, 0) = RationalFn(1);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) h(1 + i, 1 + j) = g(i, j);
  return h;
}

bool is_h_skew(const FnMatrix& m, const FnMatrix& g) {
  FnMatrix h = tractor_metric(g);
  return (m.transpose() * h + h * m).is_zero_matrix();
}

bool is_h_skew(const QMatrix& m, const QMatrix& g) {
  const std::size_t n = g.rows();
  QMatrix h(n + 2, n + 2);
  h(0, n + 1) = h(n + 1, 0) = Rational(1);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) h(1 + i, 1 + j) = g(i, j);
  return (m.transpose() * h + h * m).is_zero_matrix();
}

RationalFn tractor_inner(const StandardTractor& t1, const StandardTractor& t2, const FnMatrix& g) {
  RationalFn s;
  add_product(s, t1.alpha, t2.beta);
  add_product(s, t2.alpha, t1.beta);
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t j = 0; j < g.cols(); ++j)
      if (!g(i, j).is_zero()) add_product(s, g(i, j), t1.Y[i] * t2.Y[j]);
  return s;
}

FnMatrix wedge(const std::vector<RationalFn>& alpha, const std::vector<RationalFn>& beta, const FnMatrix& ginv) {
  const std::size_t n = alpha.size();
  auto a_up = sharp(alpha, ginv);
  auto b_up = sharp(beta, ginv);
  FnMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      RationalFn v;
      add_product(v, b_up[i], alpha[k]);
      if (!a_up[i].is_zero() && !beta[k].is_zero()) v -= a_up[i] * beta[k];
      m(i, k) = v;
    }
  return m;
}

FnMatrix s_minus_wedge(const std::vector<RationalFn>& V, const FnMatrix& g, const FnMatrix& /*ginv*/) {
  const std::size_t n = V.size();
  auto v_down = flat(V, g);
  FnMatrix m(n + 2, n + 2);
  for (std::size_t k = 0; k < n; ++k) {
    m(0, 1 + k) = -v_down[k];
    m(1 + k, n + 1) = V[k];
  }
  return m;
}

QMatrix s_minus_wedge(const std::vector<Rational>& V, const QMatrix& g) {
  const std::size_t n = V.size();
  QMatrix m(n + 2, n + 2);
  for (std::size_t k = 0; k < n; ++k) {
    Rational vk(0);
    for (std::size_t e = 0; e < n; ++e) vk += g(k, e) * V[e];
    m(0, 1 + k) = -vk;
    m(1 + k, n + 1) = V[k];
  }
  return m;
}

AdjointTractor adjoint_bracket(const AdjointTractor& p1, const AdjointTractor& p2, const FnMatrix& g,
                               const FnMatrix& ginv) {
  const std::size_t n = p1.Z.size();
  AdjointTractor r = AdjointTractor::zero(n);
  // [g0, g0]
  r.A = FnMatrix::bracket(p1.A, p2.A);
  // [(a, A), Z] = (a + A) Z
  auto act = [&](const RationalFn& a, const FnMatrix& A, const std::vector<RationalFn>& Z, bool negate) {
    for (std::size_t i = 0; i < n; ++i) {
      RationalFn v;
      add_product(v, a, Z[i]);
      for (std::size_t k = 0; k < n; ++k) add_product(v, A(i, k), Z[k]);
      r.Z[i] = negate ? r.Z[i] - v : r.Z[i] + v;
    }
  };
  act(p1.a, p1.A, p2.Z, false);
  act(p2.a, p2.A, p1.Z, true);
  // [(a, A), mu] = -mu o (A + a Id)
  auto coact = [&](const RationalFn& a, const FnMatrix& A, const std::vector<RationalFn>& mu, bool negate) {
    for (std::size_t k = 0; k < n; ++k) {
      RationalFn v;
      add_product(v, a, mu[k]);
      for (std::size_t i = 0; i < n; ++i) add_product(v, mu[i], A(i, k));
      r.mu[k] = negate ? r.mu[k] + v : r.mu[k] - v;
    }
  };
  coact(p1.a, p1.A, p2.mu, false);
  coact(p2.a, p2.A, p1.mu, true);
  // [Z, mu] = (mu(Z), mu ^ Z^b)
  auto zmu = [&](const std::vector<RationalFn>& Z, const std::vector<RationalFn>& mu, bool negate) {
    RationalFn a = pairing(mu, Z);
    FnMatrix A = wedge(mu, flat(Z, g), ginv);
    if (negate) {
      r.a -= a;
      r.A = r.A - A;
    } else {
      r.a += a;
      r.A = r.A + A;
    }
  };
  zmu(p1.Z, p2.mu, false);
  zmu(p2.Z, p1.mu, true);
  return r;
}

TractorConnection::TractorConnection(const Curvature& curv) : curv_(curv) {}

const FnMatrix& TractorConnection::gamma(std::size_t i) const {
  std::call_once(gamma_flag_, [&] {
    const std::size_t n = this->n();
    const auto& G = curv_.christoffel();
    const auto& P = curv_.schouten();
    const auto& Pm = curv_.schouten_mixed();
    for (std::size_t d = 0; d < n; ++d) {
      FnMatrix m(n + 2, n + 2);
      for (std::size_t k = 0; k < n; ++k) {
        m(0, 1 + k) = -P.at({d, k});
        m(n + 1, 1 + k) = -curv_.g()(d, k);
        m(1 + k, n + 1) = Pm.at({k, d});
        for (std::size_t l = 0; l < n; ++l) m(1 + k, 1 + l) = G.at({k, d, l});
      }
      m(1 + d, 0) = RationalFn(1);
      gamma_.push_back(std::move(m));
    }
  });
  return gamma_.at(i);
}

std::vector<RationalFn> TractorConnection::derivative(std::size_t i, const std::vector<RationalFn>& t) const {
  const FnMatrix& G = gamma(i);
  const auto v = curv_.chart().vars[i];
  std::vector<RationalFn> out(t.size());
  for (std::size_t r = 0; r < t.size(); ++r) {
    RationalFn s = t[r].diff(v);
    for (std::size_t c = 0; c < t.size(); ++c) add_product(s, G(r, c), t[c]);
    out[r] = s;
  }
  return out;
}

StandardTractor TractorConnection::derivative(const std::vector<RationalFn>& X, const StandardTractor& t) const {
  const auto tv = t.to_vector();
  std::vector<RationalFn> acc(tv.size());
  for (std::size_t i = 0; i < n(); ++i) {
    if (X[i].is_zero()) continue;
    auto d = derivative(i, tv);
    for (std::size_t r = 0; r < acc.size(); ++r) add_product(acc[r], X[i], d[r]);
  }
  return StandardTractor::from_vector(acc);
}

FnMatrix TractorConnection::adjoint_derivative(std::size_t i, const FnMatrix& phi) const {
  return diff_matrix(phi, curv_.chart().vars[i]) + FnMatrix::bracket(gamma(i), phi);
}

FnMatrix TractorConnection::adjoint_derivative(const std::vector<RationalFn>& X, const FnMatrix& phi) const {
  FnMatrix acc(phi.rows(), phi.cols());
  for (std::size_t i = 0; i < n(); ++i)
    if (!X[i].is_zero()) acc = acc + adjoint_derivative(i, phi).scaled(X[i]);
  return acc;
}

AdjointTractor TractorConnection::curvature(std::size_t i, std::size_t j) const {
  const std::size_t n = this->n();
  const auto& C = curv_.cotton();
  const auto& W = curv_.weyl();
  AdjointTractor p = AdjointTractor::zero(n);
  for (std::size_t k = 0; k < n; ++k) {
    p.mu[k] = -C.at({k, i, j});
    for (std::size_t l = 0; l < n; ++l) p.A(k, l) = W.at({k, l, i, j});
  }
  return p;
}

const FnMatrix& TractorConnection::curvature_matrix(std::size_t i, std::size_t j) const {
  std::call_once(curv_flag_, [&] {
    const std::size_t n = this->n();
    curv_mats_.resize(n * n);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) curv_mats_[a * n + b] = curvature(a, b).to_matrix(curv_.g(), curv_.ginv());
  });
  return curv_mats_.at(i * n() + j);
}

StandardTractor tractor_transform(const StandardTractor& t, const RationalFn& omega, const Curvature& curv) {
  if (omega.is_zero()) throw curv::ZeroFactor("conformal factor vanishes identically");
  const std::size_t n = curv.n();
  const auto& vars = curv.chart().vars;
  const FnMatrix& gi = curv.ginv();
  std::vector<RationalFn> dlog(n);
  for (std::size_t i = 0; i < n; ++i) dlog[i] = omega.diff(vars[i]) / omega;
  auto grad = sharp(dlog, gi);
  RationalFn y_sigma = pairing(dlog, t.Y);
  RationalFn norm2 = pairing(dlog, grad);
  RationalFn inv = RationalFn(1) / omega;
  StandardTractor r;
  RationalFn a = t.alpha - y_sigma;
  if (!t.beta.is_zero() && !norm2.is_zero()) a -= t.beta * norm2 * RationalFn(sym::make_rational(1, 2));
  r.alpha = a * inv;
  r.Y.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    RationalFn y = t.Y[i];
    add_product(y, t.beta, grad[i]);
    r.Y[i] = y * inv;
  }
  r.beta = omega * t.beta;
  return r;
}

namespace {

/// Covariant tensor with values in so(T, h); the derivative couples the
/// tractor connection with Levi-Civita on the form indices.
struct AdjointTensor {
  std::size_t n = 0;
  std::size_t rank = 0;
  std::vector<FnMatrix> c;

  std::size_t index(const std::vector<std::size_t>& idx) const {
    std::size_t off = 0;
    for (auto i : idx) off = off * n + i;
    return off;
  }
  std::vector<std::size_t> unflatten(std::size_t flat) const {
    std::vector<std::size_t> idx(rank);
    for (std::size_t k = rank; k-- > 0;) {
      idx[k] = flat % n;
      flat /= n;
    }
    return idx;
  }
};

AdjointTensor covariant_derivative(const TractorConnection& conn, const AdjointTensor& t) {
  const std::size_t n = t.n;
  const auto& G = conn.curvature().christoffel();
  AdjointTensor r{n, t.rank + 1, {}};
  r.c.resize(t.c.size() * n);
  for (std::size_t f = 0; f < r.c.size(); ++f) {
    auto idx = r.unflatten(f);
    const std::size_t k = idx.back();
    idx.pop_back();
    FnMatrix v = conn.adjoint_derivative(k, t.c[t.index(idx)]);
    for (std::size_t s = 0; s < t.rank; ++s)
      for (std::size_t e = 0; e < n; ++e) {
        const RationalFn& gam = G.at({e, k, idx[s]});
        if (gam.is_zero()) continue;
        auto jdx = idx;
        jdx[s] = e;
        const FnMatrix& m = t.c[t.index(jdx)];
        if (!m.is_zero_matrix()) v = v - m.scaled(gam);
      }
    r.c[f] = std::move(v);
  }
  return r;
}

}  // namespace

TensorField obstruction6_null(const TractorConnection& conn, const std::vector<std::vector<RationalFn>>& null_fields,
                              const std::vector<chart::EvalPoint>& points) {
  const Curvature& curv = conn.curvature();
  const std::size_t n = curv.n();
  if (n != 6) throw PreconditionFailed("the null-distribution obstruction formula needs dimension 6");
  auto rep = curv::check_parallel_null_distribution(curv, null_fields, points);
  for (const auto& p : rep.points)
    if (!p.lightlike || !p.parallel || !p.contains_ricci_image)
      throw PreconditionFailed("no parallel null distribution containing Im(Ric) at " + p.point);

  const FnMatrix& gi = curv.ginv();
  const std::size_t N = n + 2;
  AdjointTensor R{n, 2, {}};
  for (std::size_t m = 0; m < n; ++m)
    for (std::size_t l = 0; l < n; ++l) R.c.push_back(conn.curvature_matrix(m, l));
  AdjointTensor DR = covariant_derivative(conn, R);  // (m, l, k) = (D_k R)_ml

  AdjointTensor D{n, 1, std::vector<FnMatrix>(n, FnMatrix(N, N))};
  for (std::size_t m = 0; m < n; ++m)
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t l = 0; l < n; ++l)
        if (!gi(k, l).is_zero()) D.c[m] = D.c[m] + DR.c[DR.index({m, l, k})].scaled(gi(k, l));
  AdjointTensor DDD = covariant_derivative(conn, covariant_derivative(conn, D));  // (m, j, i)

  TensorField Pup = curv.raise(curv.schouten_mixed(), 1);
  std::vector<FnMatrix> divR(n, FnMatrix(N, N));  // D_j R^{ij}
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t a = 0; a < n; ++a) {
      if (gi(i, a).is_zero()) continue;
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t b = 0; b < n; ++b)
          if (!gi(j, b).is_zero()) divR[i] = divR[i] + DR.c[DR.index({a, b, j})].scaled(gi(i, a) * gi(j, b));
    }
  TensorField Cup = curv.raise(curv.raise(curv.cotton(), 1), 2);  // C_m^{kl}

  TensorField O(n, {Pos::Down, Pos::Down});
  for (std::size_t m = 0; m < n; ++m) {
    FnMatrix rhs(N, N);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        if (!gi(i, j).is_zero()) rhs = rhs + DDD.c[DDD.index({m, j, i})].scaled(gi(i, j));
        if (!Pup.at({i, j}).is_zero()) rhs = rhs + DR.c[DR.index({m, j, i})].scaled(Pup.at({i, j}) * RationalFn(4));
        if (!Cup.at({m, i, j}).is_zero()) rhs = rhs + R.c[R.index({i, j})].scaled(Cup.at({m, i, j}) * RationalFn(2));
      }
    for (std::size_t i = 0; i < n; ++i)
      rhs = rhs + FnMatrix::bracket(R.c[R.index({m, i})], divR[i]).scaled(RationalFn(2));
    // g^{ij} s_-^b ^ O_mi d_j^b has mu-slot -O_m.
    for (std::size_t j = 0; j < n; ++j) O.at({m, j}) = -rhs(0, 1 + j);
  }
  return O;
}

}  // namespace cwb::tractor
