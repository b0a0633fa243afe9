#include "cwb/ambient/ambient.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "cwb/symexpr/linear.hpp"

namespace cwb::amb {

namespace {

int sat_add(int a, int b) { return (a >= kExactOrder || b >= kExactOrder) ? kExactOrder : std::min(a + b, kExactOrder); }

}  // namespace

// ---------------------------------------------------------------- RhoSeries

RhoSeries::RhoSeries(std::vector<RationalFn> c, int valid, int low) : c_(std::move(c)), valid_(valid), low_(low) {
  normalize();
}

RhoSeries RhoSeries::exact(std::vector<RationalFn> coeffs) { return RhoSeries(std::move(coeffs), kExactOrder, 0); }

RhoSeries RhoSeries::truncated(std::vector<RationalFn> coeffs, int valid) {
  if (valid < 0) throw std::invalid_argument("negative series order");
  return RhoSeries(std::move(coeffs), valid, 0);
}

void RhoSeries::normalize() {
  if (static_cast<int>(c_.size()) > valid_) c_.resize(static_cast<std::size_t>(valid_));
  while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
  auto it = std::find_if(c_.begin(), c_.end(), [](const RationalFn& f) { return !f.is_zero(); });
  if (it != c_.end())
    low_ = static_cast<int>(it - c_.begin());
  else
    low_ = std::max(low_, valid_);
}

RationalFn RhoSeries::coeff(int k) const {
  if (k < 0 || k >= valid_) throw std::out_of_range("rho coefficient beyond the known order");
  return static_cast<std::size_t>(k) < c_.size() ? c_[static_cast<std::size_t>(k)] : RationalFn();
}

RhoSeries RhoSeries::operator+(const RhoSeries& o) const {
  const int valid = std::min(valid_, o.valid_);
  std::vector<RationalFn> c(std::min<std::size_t>(std::max(c_.size(), o.c_.size()), static_cast<std::size_t>(valid)));
  for (std::size_t k = 0; k < c.size(); ++k) {
    if (k < c_.size()) c[k] = c_[k];
    if (k < o.c_.size()) c[k] += o.c_[k];
  }
  return RhoSeries(std::move(c), valid, std::min(low_, o.low_));
}

RhoSeries RhoSeries::operator-() const {
  RhoSeries r = *this;
  for (auto& x : r.c_) x = -x;
  return r;
}

RhoSeries RhoSeries::operator-(const RhoSeries& o) const { return *this + (-o); }

RhoSeries RhoSeries::operator*(const RhoSeries& o) const {
  const int low = sat_add(low_, o.low_);
  const int valid = std::min(sat_add(valid_, o.low_), sat_add(o.valid_, low_));
  if (c_.empty() || o.c_.empty()) return RhoSeries({}, valid, low);
  const std::size_t len = std::min<std::size_t>(c_.size() + o.c_.size() - 1, static_cast<std::size_t>(valid));
  std::vector<RationalFn> c(len);
  for (std::size_t i = 0; i < c_.size() && i < len; ++i) {
    if (c_[i].is_zero()) continue;
    for (std::size_t j = 0; j < o.c_.size() && i + j < len; ++j)
      if (!o.c_[j].is_zero()) c[i + j] += c_[i] * o.c_[j];
  }
  return RhoSeries(std::move(c), valid, low);
}

RhoSeries RhoSeries::scaled(const RationalFn& f) const {
  if (f.is_zero()) return RhoSeries({}, valid_, kExactOrder);
  RhoSeries r = *this;
  for (auto& x : r.c_)
    if (!x.is_zero()) x *= f;
  return r;
}

RhoSeries RhoSeries::diff_rho() const {
  const int valid = is_exact() ? kExactOrder : valid_ - 1;
  const int low = low_ >= kExactOrder ? kExactOrder : std::max(low_ - 1, 0);
  std::vector<RationalFn> c;
  for (std::size_t k = 1; k < c_.size(); ++k) c.push_back(c_[k] * RationalFn(static_cast<long>(k)));
  return RhoSeries(std::move(c), valid, low);
}

RhoSeries RhoSeries::diff(sym::Var v) const {
  std::vector<RationalFn> c;
  c.reserve(c_.size());
  for (const auto& x : c_) c.push_back(x.diff(v));
  return RhoSeries(std::move(c), valid_, low_);
}

RhoSeries RhoSeries::truncate(int order) const {
  if (order >= valid_) return *this;
  return RhoSeries(c_, order, low_);
}

RhoSeries RhoSeries::partial_eval(const sym::Assignment& at) const {
  std::vector<RationalFn> c;
  c.reserve(c_.size());
  for (const auto& x : c_) c.push_back(x.partial_eval(at));
  return RhoSeries(std::move(c), valid_, low_);
}

// ------------------------------------------------------------ AmbientScalar

AmbientScalar AmbientScalar::operator+(const AmbientScalar& o) const {
  int w = weight;
  if (known_zero())
    w = o.weight;
  else if (!o.known_zero() && o.weight != weight)
    throw std::logic_error("t-homogeneity violated: adding weights " + std::to_string(weight) + " and " +
                           std::to_string(o.weight));
  return {w, series + o.series};
}

AmbientScalar AmbientScalar::operator-(const AmbientScalar& o) const { return *this + (-o); }

AmbientScalar AmbientScalar::operator*(const AmbientScalar& o) const { return {weight + o.weight, series * o.series}; }

AmbientScalar AmbientScalar::diff_t() const {
  if (weight == 0) return {-1, RhoSeries()};
  return {weight - 1, series.scaled(RationalFn(static_cast<long>(weight)))};
}

// ------------------------------------------------------ AmbientSeriesTensor

AmbientSeriesTensor::AmbientSeriesTensor(std::size_t d, std::vector<Pos> s) : dim(d), slots(std::move(s)) {
  std::size_t size = 1;
  for (std::size_t k = 0; k < slots.size(); ++k) size *= dim;
  c.resize(size);
}

static std::size_t flat_index(std::size_t dim, const std::vector<std::size_t>& idx) {
  std::size_t f = 0;
  for (auto i : idx) {
    if (i >= dim) throw std::out_of_range("ambient index out of range");
    f = f * dim + i;
  }
  return f;
}

AmbientScalar& AmbientSeriesTensor::at(const std::vector<std::size_t>& idx) {
  if (idx.size() != slots.size()) throw std::invalid_argument("wrong number of ambient indices");
  return c[flat_index(dim, idx)];
}

const AmbientScalar& AmbientSeriesTensor::at(const std::vector<std::size_t>& idx) const {
  if (idx.size() != slots.size()) throw std::invalid_argument("wrong number of ambient indices");
  return c[flat_index(dim, idx)];
}

std::vector<std::size_t> AmbientSeriesTensor::unflatten(std::size_t flat) const {
  std::vector<std::size_t> idx(slots.size());
  for (std::size_t k = slots.size(); k-- > 0;) {
    idx[k] = flat % dim;
    flat /= dim;
  }
  return idx;
}

int expected_weight(const std::vector<Pos>& slots, const std::vector<std::size_t>& idx, int degree) {
  int w = degree;
  for (std::size_t k = 0; k < slots.size(); ++k)
    if (idx[k] == 0) w += slots[k] == Pos::Up ? 1 : -1;
  return w;
}

// -------------------------------------------------------------------- jets

AmbientJet default_jet(const Curvature& curv, int K) {
  if (K < 0) throw std::invalid_argument("negative truncation");
  AmbientJet jet{curv.chart(), {curv.g()}};
  const std::size_t n = curv.n();
  for (int k = 1; k <= K; ++k)
    jet.coeffs.push_back(k == 1 ? curv.schouten().to_matrix().scaled(RationalFn(2)) : FnMatrix(n, n));
  return jet;
}

AmbientJet flat_jet(const Chart& chart, int K) {
  if (K < 0) throw std::invalid_argument("negative truncation");
  AmbientJet jet{chart, {chart.metric}};
  for (int k = 1; k <= K; ++k) jet.coeffs.emplace_back(chart.dim(), chart.dim());
  return jet;
}

AmbientJet einstein_jet(const Chart& chart, const Rational& lambda, int K) {
  if (K < 0) throw std::invalid_argument("negative truncation");
  AmbientJet jet{chart, {chart.metric}};
  const std::vector<Rational> binom = {2 * lambda, lambda * lambda};
  for (int k = 1; k <= K; ++k)
    jet.coeffs.push_back(k <= 2 ? chart.metric.scaled(RationalFn(binom[static_cast<std::size_t>(k - 1)]))
                                : FnMatrix(chart.dim(), chart.dim()));
  return jet;
}

// ------------------------------------------------------------ AmbientMetric

AmbientMetric::AmbientMetric(AmbientJet jet, std::optional<int> cap) : jet_(std::move(jet)) {
  if (jet_.coeffs.empty()) throw std::invalid_argument("empty ambient jet");
  if (!(jet_.coeffs.front() == jet_.base.metric)) throw std::invalid_argument("g^(0) must equal the chart metric");
  for (const auto& m : jet_.coeffs)
    if (!(m == m.transpose())) throw std::invalid_argument("jet coefficients must be symmetric");
  cap_ = cap.value_or(jet_.truncation());
  if (cap_ < 0) throw std::invalid_argument("negative series cap");
}

namespace {

AmbientScalar partial(const AmbientScalar& s, std::size_t I, std::size_t N, const std::vector<sym::Var>& vars, int cap) {
  if (I == 0) return s.diff_t();
  if (I == N - 1) return {s.weight, s.series.truncate(cap + 1).diff_rho()};
  return {s.weight, s.series.truncate(cap).diff(vars[I - 1])};
}

AmbientScalar product(const AmbientScalar& a, const AmbientScalar& b, int cap) {
  if (a.known_zero() && a.series.is_exact()) return {};
  if (b.known_zero() && b.series.is_exact()) return {};
  AmbientScalar r = AmbientScalar{a.weight, a.series.truncate(cap)} * AmbientScalar{b.weight, b.series.truncate(cap)};
  r.series = r.series.truncate(cap);
  return r;
}

bool exact_zero(const AmbientScalar& s) { return s.known_zero() && s.series.is_exact(); }

}  // namespace

const AmbientSeriesTensor& AmbientMetric::metric() const {
  std::call_once(f_g_, [&] {
    const std::size_t n = this->n(), N = dim();
    const int valid = std::min(jet_.truncation(), cap_) + 1;
    AmbientSeriesTensor g(N, {Pos::Down, Pos::Down});
    g.at({0, 0}) = {0, RhoSeries::exact({RationalFn(0), RationalFn(2)})};
    g.at({0, N - 1}) = g.at({N - 1, 0}) = {1, RhoSeries::exact({RationalFn(1)})};
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        std::vector<RationalFn> c;
        for (int k = 0; k < valid; ++k) c.push_back(jet_.coeffs[static_cast<std::size_t>(k)](i, j));
        g.at({1 + i, 1 + j}) = {2, RhoSeries::truncated(std::move(c), valid)};
      }
    g_ = std::move(g);
  });
  return g_;
}

const AmbientSeriesTensor& AmbientMetric::inverse_metric() const {
  std::call_once(f_gi_, [&] {
    const std::size_t n = this->n(), N = dim();
    const int valid = std::min(jet_.truncation(), cap_) + 1;
    auto inv = sym::invert(jet_.coeffs.front());
    if (!inv.inverse) throw SingularBaseMetric("g^(0) is not invertible");
    std::vector<FnMatrix> h{*inv.inverse};
    for (int k = 1; k < valid; ++k) {
      FnMatrix acc(n, n);
      for (int j = 1; j <= k; ++j)
        acc = acc + jet_.coeffs[static_cast<std::size_t>(j)] * h[static_cast<std::size_t>(k - j)];
      h.push_back(-(h.front() * acc));
    }
    AmbientSeriesTensor gi(N, {Pos::Up, Pos::Up});
    gi.at({0, N - 1}) = gi.at({N - 1, 0}) = {-1, RhoSeries::exact({RationalFn(1)})};
    gi.at({N - 1, N - 1}) = {-2, RhoSeries::exact({RationalFn(0), RationalFn(-2)})};
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        std::vector<RationalFn> c;
        for (const auto& m : h) c.push_back(m(i, j));
        gi.at({1 + i, 1 + j}) = {-2, RhoSeries::truncated(std::move(c), valid)};
      }
    gi_ = std::move(gi);
  });
  return gi_;
}

const AmbientSeriesTensor& AmbientMetric::christoffel() const {
  std::call_once(f_gamma_, [&] {
    const std::size_t N = dim();
    const auto& g = metric();
    const auto& gi = inverse_metric();
    const auto& vars = jet_.base.vars;
    const int cap = cap_ + 1;
    // dg[(D*N + C)*N + B] = d_B g_DC
    std::vector<AmbientScalar> dg(N * N * N);
    for (std::size_t D = 0; D < N; ++D)
      for (std::size_t C = 0; C < N; ++C) {
        const auto& s = g.at({D, C});
        if (exact_zero(s)) continue;
        for (std::size_t B = 0; B < N; ++B) dg[(D * N + C) * N + B] = partial(s, B, N, vars, cap);
      }
    auto d = [&](std::size_t D, std::size_t C, std::size_t B) -> const AmbientScalar& { return dg[(D * N + C) * N + B]; };
    AmbientSeriesTensor gamma(N, {Pos::Up, Pos::Down, Pos::Down});
    const AmbientScalar half{0, RhoSeries::exact({RationalFn(Rational(1, 2))})};
    for (std::size_t A = 0; A < N; ++A)
      for (std::size_t B = 0; B < N; ++B)
        for (std::size_t C = B; C < N; ++C) {
          AmbientScalar acc;
          for (std::size_t D = 0; D < N; ++D) {
            const auto& inv = gi.at({A, D});
            if (exact_zero(inv)) continue;
            AmbientScalar bracket = d(D, C, B) + d(D, B, C) - d(B, C, D);
            if (exact_zero(bracket)) continue;
            acc = acc + product(inv, bracket, cap);
          }
          acc = product(half, acc, cap);
          gamma.at({A, B, C}) = acc;
          gamma.at({A, C, B}) = acc;
        }
    gamma_ = std::move(gamma);
  });
  return gamma_;
}

const AmbientSeriesTensor& AmbientMetric::ricci() const {
  std::call_once(f_ric_, [&] {
    const std::size_t N = dim();
    const auto& G = christoffel();
    const auto& vars = jet_.base.vars;
    const int cap = cap_;
    std::vector<AmbientScalar> trace(N);  // G^L_LB
    for (std::size_t B = 0; B < N; ++B)
      for (std::size_t L = 0; L < N; ++L) trace[B] = trace[B] + G.at({L, L, B});
    AmbientSeriesTensor ric(N, {Pos::Down, Pos::Down});
    for (std::size_t A = 0; A < N; ++A)
      for (std::size_t B = A; B < N; ++B) {
        AmbientScalar acc;
        for (std::size_t L = 0; L < N; ++L) {
          const auto& s = G.at({L, A, B});
          if (!exact_zero(s)) acc = acc + partial(s, L, N, vars, cap);
        }
        if (!exact_zero(trace[B])) acc = acc - partial(trace[B], A, N, vars, cap);
        for (std::size_t M = 0; M < N; ++M) {
          acc = acc + product(trace[M], G.at({M, A, B}), cap);
          for (std::size_t L = 0; L < N; ++L) acc = acc - product(G.at({L, A, M}), G.at({M, L, B}), cap);
        }
        acc.series = acc.series.truncate(cap);
        ric.at({A, B}) = acc;
        ric.at({B, A}) = acc;
      }
    ric_ = std::move(ric);
  });
  return ric_;
}

AmbientSeriesTensor AmbientMetric::curvature(std::size_t I, std::size_t J) const {
  const std::size_t N = dim();
  if (I >= N || J >= N) throw std::out_of_range("ambient index out of range");
  const auto& G = christoffel();
  const auto& vars = jet_.base.vars;
  AmbientSeriesTensor R(N, {Pos::Up, Pos::Down});
  for (std::size_t L = 0; L < N; ++L)
    for (std::size_t K = 0; K < N; ++K) {
      AmbientScalar acc = partial(G.at({L, J, K}), I, N, vars, cap_) - partial(G.at({L, I, K}), J, N, vars, cap_);
      for (std::size_t M = 0; M < N; ++M)
        acc = acc + product(G.at({L, I, M}), G.at({M, J, K}), cap_) - product(G.at({L, J, M}), G.at({M, I, K}), cap_);
      acc.series = acc.series.truncate(cap_);
      R.at({L, K}) = acc;
    }
  return R;
}

AmbientSeriesTensor AmbientMetric::euler_derivative() const {
  const std::size_t N = dim();
  const auto& G = christoffel();
  const AmbientScalar T0{1, RhoSeries::exact({RationalFn(1)})};
  AmbientSeriesTensor out(N, {Pos::Up, Pos::Down});
  for (std::size_t A = 0; A < N; ++A)
    for (std::size_t B = 0; B < N; ++B) {
      AmbientScalar v = product(G.at({A, B, 0}), T0, cap_ + 1);
      if (A == 0 && B == 0) v = v + AmbientScalar{0, RhoSeries::exact({RationalFn(1)})};
      out.at({A, B}) = v;
    }
  return out;
}

AmbientSeriesTensor assemble_ambient(const AmbientJet& jet) { return AmbientMetric(jet).metric(); }
AmbientSeriesTensor ambient_connection(const AmbientJet& jet) { return AmbientMetric(jet).christoffel(); }
AmbientSeriesTensor ricci_series(const AmbientJet& jet) {
  if (jet.truncation() < 1) throw std::invalid_argument("ricci_series needs truncation K >= 1");
  return AmbientMetric(jet).ricci();
}

VanishingOrder vanishing_order(const AmbientScalar& s) {
  const auto& r = s.series;
  if (!r.known_zero()) return {r.low(), true};
  return {r.valid(), r.is_exact()};
}

// ------------------------------------------------------------ jet solving

namespace {

struct Unknowns {
  std::vector<sym::Var> vars;                      // u_ab for a <= b, row-major
  std::vector<sym::Var> derivatives;               // their coordinate derivatives
  std::vector<std::pair<std::size_t, std::size_t>> slots;
  FnMatrix matrix;
};

Unknowns make_unknowns(const Chart& chart, int k) {
  const std::size_t n = chart.dim();
  Unknowns u;
  u.matrix = FnMatrix(n, n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a; b < n; ++b) {
      const std::string name = "jet" + std::to_string(k) + "[" + chart.coords[a] + "," + chart.coords[b] + "]";
      sym::Var v = sym::Variables::intern(name);
      for (std::size_t m = 0; m < n; ++m) {
        sym::Var dv = sym::Variables::intern(name + "_" + chart.coords[m]);
        sym::Variables::set_derivative(v, chart.vars[m], dv);
        sym::Variables::set_opaque(dv);
        u.derivatives.push_back(dv);
      }
      u.vars.push_back(v);
      u.slots.emplace_back(a, b);
      u.matrix(a, b) = u.matrix(b, a) = RationalFn::var(v);
    }
  return u;
}

/// Tangential Ricci coefficients at rho^(k-1) with g^(k) unknown:
/// E_ab = constant_ab + sum_u coeffs_ab[u] * u, one entry per a <= b.
struct OrderEquations {
  Unknowns unknowns;
  std::vector<std::vector<RationalFn>> coeffs;
  std::vector<RationalFn> constants;
};

OrderEquations order_equations(const AmbientJet& jet, int k, const sym::Assignment* at) {
  if (k < 1) throw std::invalid_argument("jet order must be at least 1");
  if (jet.truncation() < k - 1) throw std::invalid_argument("jet orders below k are missing");
  const Chart& chart = jet.base;
  OrderEquations eq{make_unknowns(chart, k), {}, {}};
  AmbientJet trial{chart, std::vector<FnMatrix>(jet.coeffs.begin(), jet.coeffs.begin() + k)};
  trial.coeffs.push_back(eq.unknowns.matrix);
  AmbientMetric am(trial, k);
  const auto& ric = am.ricci();
  for (const auto& [a, b] : eq.unknowns.slots) {
    RationalFn e = ric.at({1 + a, 1 + b}).series.coeff(k - 1);
    if (at) e = e.partial_eval(*at);
    for (sym::Var v : e.variables())
      if (std::find(eq.unknowns.derivatives.begin(), eq.unknowns.derivatives.end(), v) != eq.unknowns.derivatives.end())
        throw sym::DependencyError("the order-" + std::to_string(k) + " Ricci coefficient involves " +
                                   sym::Variables::name(v));
    auto parts = sym::affine_parts(e, eq.unknowns.vars);
    if (!parts) throw std::logic_error("order equations are not affine in the unknown jet coefficients");
    eq.coeffs.push_back(std::move(parts->first));
    eq.constants.push_back(std::move(parts->second));
  }
  return eq;
}

/// Multiplicity of u_ab in g^ij U_ij.
RationalFn trace_weight(const FnMatrix& ginv, std::size_t a, std::size_t b) {
  return a == b ? ginv(a, a) : ginv(a, b) * RationalFn(2);
}

template <class F>
sym::Matrix<F> symmetric_from(const std::vector<std::pair<std::size_t, std::size_t>>& slots, const std::vector<F>& v,
                              std::size_t n) {
  sym::Matrix<F> m(n, n);
  for (std::size_t s = 0; s < slots.size(); ++s) m(slots[s].first, slots[s].second) = m(slots[s].second, slots[s].first) = v[s];
  return m;
}

/// Pure-trace solution U = s g of the trace equation g^ab E_ab(U) = 0.
std::vector<RationalFn> trace_solution(const OrderEquations& eq, const FnMatrix& g, const FnMatrix& ginv) {
  const auto& slots = eq.unknowns.slots;
  const std::size_t m = slots.size();
  sym::LinearSystem<RationalFn> sys;
  for (sym::Var v : eq.unknowns.vars) sys.unknowns.push_back(sym::Variables::name(v));
  std::vector<RationalFn> row(m);
  RationalFn rhs;
  for (std::size_t e = 0; e < m; ++e) {
    const RationalFn w = trace_weight(ginv, slots[e].first, slots[e].second);
    if (w.is_zero()) continue;
    for (std::size_t u = 0; u < m; ++u)
      if (!eq.coeffs[e][u].is_zero()) row[u] += w * eq.coeffs[e][u];
    rhs -= w * eq.constants[e];
  }
  sys.add(row, rhs);
  auto sol = sym::solve_linear(sys);
  if (sol.status == sym::SolveStatus::Inconsistent) throw UnsolvableOrder("the trace condition at the critical order fails");
  // Indicial degeneracy: undetermined directions must not enter the equations.
  for (const auto& null : sol.nullspace)
    for (std::size_t e = 0; e < m; ++e) {
      RationalFn acc;
      for (std::size_t u = 0; u < m; ++u)
        if (!null[u].is_zero() && !eq.coeffs[e][u].is_zero()) acc += eq.coeffs[e][u] * null[u];
      if (!acc.is_zero()) throw std::logic_error("critical-order equations depend on more than the trace of g^(n/2)");
    }
  RationalFn along_g;
  for (std::size_t u = 0; u < m; ++u) along_g += row[u] * g(slots[u].first, slots[u].second);
  if (along_g.is_zero()) throw std::logic_error("the trace equation does not see the trace of g^(n/2)");
  const RationalFn scale = rhs / along_g;
  std::vector<RationalFn> values(m);
  for (std::size_t u = 0; u < m; ++u) values[u] = scale * g(slots[u].first, slots[u].second);
  return values;
}

}  // namespace

JetOrderSolution solve_jet_order(const AmbientJet& jet, int k, const EvalPoint& x) {
  const Chart& chart = jet.base;
  const std::size_t n = chart.dim();
  const bool critical = n % 2 == 0 && k == static_cast<int>(n / 2);
  OrderEquations eq = order_equations(jet, k, &x.assignment);
  const std::size_t m = eq.unknowns.vars.size();
  const QMatrix gx = sym::evaluate(chart.metric, x.assignment);
  const QMatrix ginv = *sym::invert(gx).inverse;
  auto weight = [&](std::size_t s) {
    const auto [a, b] = eq.unknowns.slots[s];
    return a == b ? ginv(a, a) : 2 * ginv(a, b);
  };
  auto trace_of = [&](const std::vector<Rational>& v) {
    Rational t = 0;
    for (std::size_t s = 0; s < m; ++s) t += weight(s) * v[s];
    return t;
  };

  std::vector<std::vector<Rational>> A(m);
  std::vector<Rational> c(m);
  for (std::size_t e = 0; e < m; ++e) {
    for (const auto& f : eq.coeffs[e]) {
      if (!f.is_constant()) throw std::logic_error("order equations not constant after evaluation");
      A[e].push_back(f.constant_value());
    }
    if (!eq.constants[e].is_constant()) throw std::logic_error("order equations not constant after evaluation");
    c[e] = eq.constants[e].constant_value();
  }
  auto apply = [&](const std::vector<Rational>& u) {
    std::vector<Rational> r(m);
    for (std::size_t e = 0; e < m; ++e)
      for (std::size_t s = 0; s < m; ++s) r[e] += A[e][s] * u[s];
    return r;
  };

  sym::LinearSystem<Rational> sys;
  for (sym::Var v : eq.unknowns.vars) sys.unknowns.push_back(sym::Variables::name(v));
  if (critical) {
    std::vector<Rational> row(m);
    Rational rhs = 0;
    for (std::size_t e = 0; e < m; ++e) {
      for (std::size_t s = 0; s < m; ++s) row[s] += weight(e) * A[e][s];
      rhs -= weight(e) * c[e];
    }
    sys.add(std::move(row), rhs);
  } else {
    for (std::size_t e = 0; e < m; ++e) sys.add(A[e], -c[e]);
  }
  auto sol = sym::solve_linear(sys);
  if (sol.status == sym::SolveStatus::Inconsistent)
    throw UnsolvableOrder("order " + std::to_string(k) + " is obstructed at " + chart::print_point(chart, x));

  std::vector<Rational> chosen = sol.particular;
  if (critical) {
    Rational along_g = 0;
    for (std::size_t s = 0; s < m; ++s) along_g += sys.equations.front().coeffs[s] * gx(eq.unknowns.slots[s].first, eq.unknowns.slots[s].second);
    if (sgn(along_g) == 0) throw std::logic_error("the trace equation does not see the trace of g^(n/2)");
    const Rational scale = sys.equations.front().rhs / along_g;
    for (std::size_t s = 0; s < m; ++s) chosen[s] = scale * gx(eq.unknowns.slots[s].first, eq.unknowns.slots[s].second);
  }

  JetOrderSolution out;
  out.order = k;
  out.point = chart::print_point(chart, x);
  out.value = symmetric_from(eq.unknowns.slots, chosen, n);
  out.unknowns = m;
  out.rank = sol.rank;
  out.unique = sol.status == sym::SolveStatus::Unique;
  out.free_dim = sol.nullspace.size();
  for (const auto& v : sol.nullspace) {
    if (sgn(trace_of(v)) != 0) out.free_part_tracefree = false;
    for (const auto& r : apply(v))
      if (sgn(r) != 0) out.free_part_enters = true;
  }
  if (out.free_part_tracefree) out.forced_trace = trace_of(chosen);
  if (critical) {
    auto r = apply(chosen);
    for (std::size_t e = 0; e < m; ++e) r[e] += c[e];
    out.residual = symmetric_from(eq.unknowns.slots, r, n);
  }
  return out;
}

// TODO: solve pointwise from local Taylor jets of g; the symbolic route is impractical on dense rational metrics such as dim3_random.
AmbientJet solve_jet(const Curvature& curv, int K) {
  if (K < 0) throw std::invalid_argument("negative truncation");
  const std::size_t n = curv.n();
  const bool even = n % 2 == 0;
  const int crit = static_cast<int>(n / 2);
  AmbientJet jet{curv.chart(), {curv.g()}};
  for (int k = 1; k <= K; ++k) {
    if (even && k > crit) {
      jet.coeffs.emplace_back(n, n);
      continue;
    }
    OrderEquations eq = order_equations(jet, k, nullptr);
    std::vector<RationalFn> values;
    if (even && k == crit) {
      values = trace_solution(eq, curv.g(), curv.ginv());
    } else {
      sym::LinearSystem<RationalFn> sys;
      for (sym::Var v : eq.unknowns.vars) sys.unknowns.push_back(sym::Variables::name(v));
      for (std::size_t e = 0; e < eq.coeffs.size(); ++e) sys.add(eq.coeffs[e], -eq.constants[e]);
      auto sol = sym::solve_linear(sys);
      if (sol.status != sym::SolveStatus::Unique)
        throw UnsolvableOrder("order " + std::to_string(k) + " is not uniquely determined");
      values = sol.particular;
    }
    jet.coeffs.push_back(symmetric_from(eq.unknowns.slots, values, n));
  }
  return jet;
}

Rational obstruction_constant(std::size_t n) {
  if (n < 4 || n % 2 != 0) throw UnsupportedDimension("the obstruction tensor needs even dimension >= 4");
  const std::size_t h = n / 2 - 1;
  mpz_class fact = 1;
  for (std::size_t i = 2; i <= h; ++i) fact *= static_cast<unsigned long>(i);
  mpz_class pow2 = 1;
  pow2 <<= static_cast<mp_bitcnt_t>(h);
  Rational c{mpz_class(pow2 * fact * fact), mpz_class(static_cast<unsigned long>(n - 2))};
  c.canonicalize();
  return h % 2 == 0 ? c : Rational(-c);
}

TensorField obstruction(const Curvature& curv) {
  const std::size_t n = curv.n();
  if (n % 2 != 0) throw UnsupportedDimension("the obstruction tensor is defined in even dimension only");
  const Rational cn = obstruction_constant(n);
  const int crit = static_cast<int>(n / 2);
  AmbientJet jet = solve_jet(curv, crit - 1);
  OrderEquations eq = order_equations(jet, crit, nullptr);
  const auto values = trace_solution(eq, curv.g(), curv.ginv());
  TensorField O(n, {Pos::Down, Pos::Down});
  for (std::size_t e = 0; e < eq.unknowns.slots.size(); ++e) {
    RationalFn acc = eq.constants[e];
    for (std::size_t u = 0; u < values.size(); ++u)
      if (!values[u].is_zero() && !eq.coeffs[e][u].is_zero()) acc += eq.coeffs[e][u] * values[u];
    acc *= RationalFn(cn);
    const auto [a, b] = eq.unknowns.slots[e];
    O.at({a, b}) = acc;
    O.at({b, a}) = acc;
  }
  return O;
}

QMatrix obstruction(const Curvature& curv, const EvalPoint& x) {
  return sym::evaluate(obstruction(curv).to_matrix(), x.assignment);
}

// ------------------------------------------------- tractor identification

IdentificationReport tractor_ambient_identification_check(const AmbientJet& jet, const tractor::TractorConnection& conn,
                                                          const EvalPoint& x) {
  if (jet.truncation() < 2) throw std::invalid_argument("identification check needs truncation K >= 2");
  const Curvature& curv = conn.curvature();
  const std::size_t n = curv.n(), N = n + 2;
  if (!(jet.base == curv.chart())) throw std::invalid_argument("jet and connection belong to different charts");
  AmbientMetric am(jet);
  const auto& at = x.assignment;
  IdentificationReport rep;
  auto at_point = [&](const AmbientSeriesTensor& R) {
    QMatrix m(N, N);
    for (std::size_t L = 0; L < N; ++L)
      for (std::size_t K = 0; K < N; ++K) m(L, K) = R.at({L, K}).series.coeff(0).eval(at);
    return m;
  };
  auto label = [&](std::size_t I) {
    return I == 0 ? std::string("t") : I == N - 1 ? std::string("rho") : curv.chart().coords[I - 1];
  };

  rep.tangential_pass = true;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (at_point(am.curvature(1 + i, 1 + j)) != sym::evaluate(conn.curvature_matrix(i, j), at)) {
        rep.tangential_pass = false;
        rep.mismatches.push_back("R~(d_" + label(1 + i) + ", d_" + label(1 + j) + ")");
      }

  rep.t_pass = true;
  for (std::size_t I = 1; I < N; ++I)
    if (!at_point(am.curvature(0, I)).is_zero_matrix()) {
      rep.t_pass = false;
      rep.mismatches.push_back("R~(d_t, d_" + label(I) + ")");
    }

  const auto& Gamma = curv.christoffel();
  const FnMatrix& gi = curv.ginv();
  std::vector<QMatrix> lhs, rhs;
  for (std::size_t i = 0; i < n; ++i) {
    lhs.push_back(at_point(am.curvature(N - 1, 1 + i)));
    FnMatrix acc(N, N);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t l = 0; l < n; ++l) {
        if (gi(k, l).is_zero()) continue;
        FnMatrix d = conn.adjoint_derivative(k, conn.curvature_matrix(l, i));
        for (std::size_t m = 0; m < n; ++m) {
          if (!Gamma.at({m, k, l}).is_zero()) d = d - conn.curvature_matrix(m, i).scaled(Gamma.at({m, k, l}));
          if (!Gamma.at({m, k, i}).is_zero()) d = d - conn.curvature_matrix(l, m).scaled(Gamma.at({m, k, i}));
        }
        acc = acc + d.scaled(gi(k, l));
      }
    rhs.push_back(sym::evaluate(acc, at));
  }
  std::optional<Rational> ratio;
  bool proportional = true;
  for (std::size_t i = 0; i < n && proportional; ++i)
    for (std::size_t e = 0; e < N * N; ++e) {
      const Rational& l = lhs[i].data()[e];
      const Rational& r = rhs[i].data()[e];
      if (sgn(r) == 0) {
        if (sgn(l) != 0) proportional = false;
        continue;
      }
      Rational q = l / r;
      if (ratio && *ratio != q) proportional = false;
      ratio = q;
      if (!proportional) break;
    }
  if (proportional) {
    rep.rho_ratio = ratio;
    rep.rho_pass = !ratio || *ratio == 3;
  }
  if (!rep.rho_pass) rep.mismatches.push_back("R~(d_rho, d_i)");
  rep.rho_lhs = std::move(lhs);
  rep.rho_rhs = std::move(rhs);
  return rep;
}

}  // namespace cwb::amb
