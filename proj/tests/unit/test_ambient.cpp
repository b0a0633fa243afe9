#include <chrono>
#include <random>

#include "cwb/ambient/ambient.hpp"
#include "doctest.h"

using namespace cwb::amb;
using cwb::chart::builtin_chart;
using cwb::chart::make_point;
using cwb::sym::make_rational;
using cwb::tractor::TractorConnection;

namespace {

RationalFn q(long a, long b = 1) { return RationalFn(make_rational(a, b)); }

AmbientScalar exact_scalar(int weight, std::vector<RationalFn> c) { return {weight, RhoSeries::exact(std::move(c))}; }

/// Agreement on every coefficient known for both sides; weights must match when
/// either side is nonzero.
bool agree(const AmbientScalar& a, const AmbientScalar& b) {
  const int upto = std::min(a.series.valid(), b.series.valid());
  const int stored = static_cast<int>(std::max(a.series.stored().size(), b.series.stored().size()));
  for (int k = 0; k < std::min(upto, stored); ++k)
    if (a.series.coeff(k) != b.series.coeff(k)) return false;
  if (!a.known_zero() && !b.known_zero() && a.weight != b.weight) return false;
  return true;
}

std::vector<EvalPoint> random_points(std::mt19937& rng, const Chart& c, int count) {
  std::uniform_int_distribution<int> num(-4, 4), den(1, 3);
  std::vector<EvalPoint> pts;
  while (static_cast<int>(pts.size()) < count) {
    std::vector<Rational> v;
    for (std::size_t i = 0; i < c.dim(); ++i) v.push_back(make_rational(num(rng), den(rng)));
    try {
      pts.push_back(make_point(c, v));
    } catch (const std::exception&) {
    }
  }
  return pts;
}

/// First variation of the Christoffel symbols: 1/2 g^kl (D_i h_jl + D_j h_il - D_l h_ij).
TensorField christoffel_variation(const Curvature& curv, const FnMatrix& h) {
  const std::size_t n = curv.n();
  TensorField Dh = curv.covariant_derivative(TensorField::from_matrix(h, Pos::Down, Pos::Down));  // (a, b, m)
  TensorField out(n, {Pos::Up, Pos::Down, Pos::Down});
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        RationalFn acc;
        for (std::size_t l = 0; l < n; ++l)
          if (!curv.ginv()(k, l).is_zero())
            acc += curv.ginv()(k, l) * (Dh.at({j, l, i}) + Dh.at({i, l, j}) - Dh.at({i, j, l}));
        out.at({k, i, j}) = acc * q(1, 2);
      }
  return out;
}

/// First variation of the Ricci tensor:
/// 1/2 (D^k D_i h_jk + D^k D_j h_ik - Lap h_ij - D_i D_j tr h).
FnMatrix ricci_variation(const Curvature& curv, const FnMatrix& h) {
  const std::size_t n = curv.n();
  const FnMatrix& gi = curv.ginv();
  TensorField H = TensorField::from_matrix(h, Pos::Down, Pos::Down);
  TensorField DDh = curv.covariant_derivative(curv.covariant_derivative(H));  // (a, b, m, p) = D_p D_m h_ab
  RationalFn tr;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (!gi(a, b).is_zero()) tr += gi(a, b) * h(a, b);
  TensorField T(n, {});
  T[0] = tr;
  TensorField DDt = curv.covariant_derivative(curv.covariant_derivative(T));  // (m, p) = D_p D_m tr
  FnMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      RationalFn acc;
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l) {
          if (gi(k, l).is_zero()) continue;
          acc += gi(k, l) * (DDh.at({j, k, i, l}) + DDh.at({i, k, j, l}) - DDh.at({i, j, k, l}));
        }
      out(i, j) = (acc - DDt.at({i, j})) * q(1, 2);
    }
  return out;
}

FnMatrix sandwich(const FnMatrix& a, const FnMatrix& gi, const FnMatrix& b) { return a * gi * b; }

RationalFn trace(const FnMatrix& gi, const FnMatrix& h) {
  RationalFn t;
  for (std::size_t a = 0; a < h.rows(); ++a)
    for (std::size_t b = 0; b < h.cols(); ++b)
      if (!gi(a, b).is_zero()) t += gi(a, b) * h(a, b);
  return t;
}

FnMatrix symmetric_poly_matrix(const Chart& c) {
  const std::size_t n = c.dim();
  FnMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j)
      m(i, j) = m(j, i) = RationalFn::var(c.vars[(i + j) % n]) * q(static_cast<long>(i + 1)) + q(static_cast<long>(j));
  return m;
}

}  // namespace

TEST_CASE("rho series track validity and vanishing order") {
  auto rho = RhoSeries::exact({q(0), q(1)});
  auto f = RhoSeries::truncated({q(1), q(2), q(3)}, 3);
  auto p = rho * f;
  CHECK(p.valid() == 4);
  CHECK(p.low() == 1);
  CHECK(p.coeff(3) == q(3));
  CHECK_THROWS_AS(p.coeff(4), std::out_of_range);
  auto d = f.diff_rho();
  CHECK(d.valid() == 2);
  CHECK(d.coeff(1) == q(6));
  auto s = f + RhoSeries::truncated({q(0)}, 1);
  CHECK(s.valid() == 1);
  CHECK((f - f).known_zero());
  CHECK(RhoSeries().is_exact());
  CHECK((RhoSeries() * f).known_zero());
  CHECK((RhoSeries() * f).is_exact());
  AmbientScalar a{1, f}, b{2, f};
  CHECK_THROWS_AS(a + b, std::logic_error);
  CHECK((a * b).weight == 3);
  CHECK(a.diff_t().weight == 0);
  CHECK(AmbientScalar{0, f}.diff_t().known_zero());
}

TEST_CASE("normal form ambient metric components") {
  Curvature curv(builtin_chart("ppwave_poly"));
  auto jet = default_jet(curv, 2);
  auto g = assemble_ambient(jet);
  const std::size_t N = 6;
  CHECK(agree(g.at({0, 5}), exact_scalar(1, {q(1)})));
  CHECK(agree(g.at({0, 0}), exact_scalar(0, {q(0), q(2)})));
  CHECK(g.at({5, 5}).known_zero());
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(g.at({0, 1 + i}).known_zero());
    CHECK(g.at({N - 1, 1 + i}).known_zero());
    for (std::size_t j = 0; j < 4; ++j) {
      CHECK(g.at({1 + i, 1 + j}).series.coeff(0) == curv.g()(i, j));
      CHECK(g.at({1 + i, 1 + j}).series.coeff(1) == RationalFn(2) * curv.schouten().at({i, j}));
    }
  }
  auto flat = assemble_ambient(flat_jet(builtin_chart("flat_1_3"), 0));
  for (const auto& c : flat.c)
    if (!c.known_zero()) CHECK(c.series.stored().size() <= 2);
}

TEST_CASE("ambient connection matches the displayed normal-form formulas") {
  for (const char* name : {"warped_poly", "ppwave_quartic"}) {
    CAPTURE(std::string(name));
    Curvature curv(builtin_chart(name));
    FnMatrix g2 = symmetric_poly_matrix(curv.chart());
    auto jet = default_jet(curv, 2);
    jet.coeffs[2] = g2;
    AmbientMetric am(jet);
    const auto& G = am.christoffel();
    const std::size_t n = curv.n(), N = n + 2;
    const auto& gi = curv.ginv();
    std::vector<FnMatrix> gdot{jet.coeffs[1], jet.coeffs[2].scaled(q(2))};
    TensorField dGamma = christoffel_variation(curv, jet.coeffs[1]);

    CHECK(G.at({0, 0, 0}).known_zero());
    for (std::size_t A = 0; A < N; ++A) {
      CHECK(G.at({A, 0, 0}).known_zero());
      CHECK(G.at({A, N - 1, N - 1}).known_zero());
      CHECK(agree(G.at({A, N - 1, 0}), A == N - 1 ? exact_scalar(-1, {q(1)}) : AmbientScalar{}));
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t A = 0; A < N; ++A) {
        CHECK(agree(G.at({A, 1 + i, 0}), A == 1 + i ? exact_scalar(-1, {q(1)}) : AmbientScalar{}));
        if (A == 0 || A == N - 1) CHECK(G.at({A, 1 + i, N - 1}).known_zero());
      }
      for (std::size_t k = 0; k < n; ++k) {
        // D_i d_rho = 1/2 g^kl gdot_il d_k
        RationalFn c0;
        for (std::size_t l = 0; l < n; ++l) c0 += gi(k, l) * gdot[0](i, l);
        CHECK(G.at({1 + k, 1 + i, N - 1}).series.coeff(0) == c0 * q(1, 2));
      }
      for (std::size_t j = 0; j < n; ++j) {
        // D_i d_j = -1/2 t gdot_ij d_t + Gamma^k_ij d_k + (rho gdot_ij - g_ij) d_rho
        auto e0 = AmbientScalar{1, RhoSeries::truncated({gdot[0](i, j) * q(-1, 2), gdot[1](i, j) * q(-1, 2)}, 2)};
        CHECK(agree(G.at({0, 1 + i, 1 + j}), e0));
        auto einf = AmbientScalar{0, RhoSeries::truncated({-curv.g()(i, j), gdot[0](i, j) - jet.coeffs[1](i, j),
                                                           gdot[1](i, j) - jet.coeffs[2](i, j)},
                                                          3)};
        CHECK(agree(G.at({N - 1, 1 + i, 1 + j}), einf));
        CHECK(G.at({N - 1, 1 + i, 1 + j}).series.valid() >= 3);
        for (std::size_t k = 0; k < n; ++k) {
          const auto& s = G.at({1 + k, 1 + i, 1 + j});
          CHECK(s.series.coeff(0) == curv.christoffel().at({k, i, j}));
          CHECK(s.series.coeff(1) == dGamma.at({k, i, j}));
        }
      }
    }
  }
}

TEST_CASE("Euler field is parallel-identity and components carry the dilation weights") {
  for (const char* name : {"warped_poly", "ppwave_quartic", "s4"}) {
    CAPTURE(std::string(name));
    Curvature curv(builtin_chart(name));
    for (int K : {1, 2, 3}) {
      CAPTURE(K);
      auto jet = default_jet(curv, K);
      if (K >= 2) jet.coeffs[2] = symmetric_poly_matrix(curv.chart());
      AmbientMetric am(jet);
      const std::size_t N = am.dim();
      auto DT = am.euler_derivative();
      for (std::size_t A = 0; A < N; ++A)
        for (std::size_t B = 0; B < N; ++B) {
          const auto& s = DT.at({A, B});
          CHECK(s.series.valid() >= K);
          CHECK(agree(s, A == B ? exact_scalar(0, {q(1)}) : AmbientScalar{}));
        }
      auto check_weights = [](const AmbientSeriesTensor& t, int degree) {
        for (std::size_t f = 0; f < t.c.size(); ++f)
          if (!t.c[f].known_zero()) CHECK(t.c[f].weight == expected_weight(t.slots, t.unflatten(f), degree));
      };
      check_weights(am.metric(), 2);
      check_weights(am.inverse_metric(), -2);
      check_weights(am.christoffel(), 0);
      check_weights(am.ricci(), 0);
    }
  }
}

TEST_CASE("ambient Ricci of flat and Einstein jets vanishes to the computed order") {
  for (const char* name : {"flat_1_3", "flat_2_2", "flat_0_4"}) {
    auto ric = ricci_series(flat_jet(builtin_chart(name), 3));
    for (const auto& c : ric.c) CHECK(c.known_zero());
  }
  struct Case {
    const char* name;
    Rational lambda;
  };
  for (const auto& c : {Case{"s4", make_rational(1, 2)}, Case{"s2xs2", make_rational(1, 6)}}) {
    CAPTURE(std::string(c.name));
    Curvature curv(builtin_chart(c.name));
    CHECK(curv.schouten().to_matrix() == curv.g().scaled(RationalFn(c.lambda)));
    const int K = 3;
    auto ric = ricci_series(einstein_jet(curv.chart(), c.lambda, K));
    const std::size_t n = curv.n();
    for (std::size_t f = 0; f < ric.c.size(); ++f) {
      CHECK(ric.c[f].known_zero());
      const auto idx = ric.unflatten(f);
      const bool tangential = idx[0] >= 1 && idx[0] <= n && idx[1] >= 1 && idx[1] <= n;
      CHECK(ric.c[f].series.valid() >= (tangential ? K : K - 1));
    }
  }
}

TEST_CASE("ambient Ricci against closed-form low-order coefficients") {
  for (const char* name : {"warped_poly", "ppwave_quartic"}) {
    CAPTURE(std::string(name));
    Curvature curv(builtin_chart(name));
    const std::size_t n = curv.n(), N = n + 2;
    const FnMatrix& g = curv.g();
    const FnMatrix& gi = curv.ginv();

    // g^(1) = 2P only: every known coefficient vanishes along rho = 0.
    auto ric1 = ricci_series(default_jet(curv, 1));
    for (const auto& c : ric1.c) CHECK(c.known_zero());
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) CHECK(ric1.at({1 + i, 1 + j}).series.valid() >= 1);

    // Arbitrary g^(1), g^(2).
    FnMatrix h1 = symmetric_poly_matrix(curv.chart());
    FnMatrix h2 = curv.schouten().to_matrix() * gi * curv.schouten().to_matrix() + h1.scaled(q(1, 3));
    AmbientJet jet{curv.chart(), {g, h1, h2}};
    auto ric = ricci_series(jet);
    const FnMatrix dric = ricci_variation(curv, h1);
    const RationalFn tr1 = trace(gi, h1), tr2 = trace(gi, h2);
    const FnMatrix h1h1 = sandwich(h1, gi, h1);
    const RationalFn norm1 = trace(gi, h1h1);
    const RationalFn half_dim_minus_one = q(static_cast<long>(n), 2) - q(1);
    TensorField Dh1 = curv.covariant_derivative(TensorField::from_matrix(h1, Pos::Down, Pos::Down));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const auto& s = ric.at({1 + i, 1 + j}).series;
        REQUIRE(s.valid() >= 2);
        RationalFn e0 = -half_dim_minus_one * h1(i, j) - q(1, 2) * tr1 * g(i, j) + curv.ricci().at({i, j});
        CHECK(s.coeff(0) == e0);
        RationalFn e1 = RationalFn(2) * h2(i, j) - h1h1(i, j) + q(1, 2) * tr1 * h1(i, j) -
                        half_dim_minus_one * RationalFn(2) * h2(i, j) -
                        q(1, 2) * ((RationalFn(2) * tr2 - norm1) * g(i, j) + tr1 * h1(i, j)) + dric(i, j);
        CHECK(s.coeff(1) == e1);
      }
      // Ric~_{i rho} = 1/2 g^kl (D_k gdot_il - D_i gdot_kl) at rho = 0.
      RationalFn e;
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l)
          if (!gi(k, l).is_zero()) e += gi(k, l) * (Dh1.at({i, l, k}) - Dh1.at({k, l, i}));
      CHECK(ric.at({1 + i, N - 1}).series.coeff(0) == e * q(1, 2));
      CHECK(ric.at({0, 1 + i}).known_zero());
    }
    // Ric~_{rho rho} = -1/2 g^kl gddot_kl + 1/4 |gdot|^2 at rho = 0.
    CHECK(ric.at({N - 1, N - 1}).series.coeff(0) == -tr2 + q(1, 4) * norm1);
    CHECK(ric.at({0, 0}).known_zero());
    CHECK(ric.at({0, N - 1}).known_zero());
  }
}

TEST_CASE("pointwise jet solving") {
  std::mt19937 rng(4242);
  SUBCASE("order one reproduces 2P") {
    for (const char* name : {"warped_poly", "ppwave_quartic", "s2xs2"}) {
      CAPTURE(std::string(name));
      Curvature curv(builtin_chart(name));
      AmbientJet base = flat_jet(curv.chart(), 0);
      const FnMatrix twoP = curv.schouten().to_matrix().scaled(q(2));
      for (const auto& x : random_points(rng, curv.chart(), 5)) {
        auto sol = solve_jet_order(base, 1, x);
        CHECK(sol.unique);
        CHECK(sol.value == cwb::sym::evaluate(twoP, x.assignment));
      }
    }
  }
  SUBCASE("flat charts give vanishing orders") {
    Chart flat = builtin_chart("flat_2_3");
    AmbientJet jet = flat_jet(flat, 2);
    auto x = random_points(rng, flat, 1).front();
    for (int k = 1; k <= 3; ++k) {
      auto sol = solve_jet_order(jet, k, x);
      CHECK(sol.unique);
      CHECK(sol.value.is_zero_matrix());
    }
  }
  SUBCASE("dimension four, order two: trace forced, trace-free part free") {
    for (const char* name : {"warped_poly", "ppwave_quartic"}) {
      CAPTURE(std::string(name));
      Curvature curv(builtin_chart(name));
      auto jet = default_jet(curv, 1);
      const FnMatrix P = curv.schouten().to_matrix();
      const RationalFn normP = trace(curv.ginv(), sandwich(P, curv.ginv(), P));
      for (const auto& x : random_points(rng, curv.chart(), 2)) {
        auto sol = solve_jet_order(jet, 2, x);
        CHECK_FALSE(sol.unique);
        CHECK(sol.unknowns == 10);
        CHECK(sol.rank == 1);
        CHECK(sol.free_dim == 9);
        CHECK(sol.free_part_tracefree);
        CHECK_FALSE(sol.free_part_enters);
        REQUIRE(sol.forced_trace);
        CHECK(*sol.forced_trace == normP.eval(x.assignment));
        REQUIRE(sol.residual);
        CHECK(sol.residual->scaled(obstruction_constant(4)) == cwb::sym::evaluate(curv.bach().to_matrix(), x.assignment));
      }
    }
  }
  SUBCASE("odd dimension determines order two") {
    Curvature curv(builtin_chart("ppwave5"));
    auto jet = solve_jet(curv, 2);
    CHECK(jet.coeffs[1] == curv.schouten().to_matrix().scaled(q(2)));
    for (const auto& x : random_points(rng, curv.chart(), 2)) {
      auto sol = solve_jet_order(jet, 2, x);
      CHECK(sol.unique);
      CHECK(sol.value == cwb::sym::evaluate(jet.coeffs[2], x.assignment));
    }
    auto ric = ricci_series(jet);
    for (std::size_t i = 1; i <= 5; ++i)
      for (std::size_t j = 1; j <= 5; ++j) CHECK(ric.at({i, j}).known_zero());
  }
  SUBCASE("a jet order missing below k is rejected") {
    Chart c = builtin_chart("warped_poly");
    CHECK_THROWS_AS(solve_jet_order(flat_jet(c, 0), 3, random_points(rng, c, 1).front()), std::invalid_argument);
  }
}

TEST_CASE("unknown derivatives are tracked as separate symbols") {
  auto u = cwb::sym::Variables::intern("jet9[p,p]");
  auto x = cwb::sym::Variables::intern("p");
  auto du = cwb::sym::Variables::intern("jet9[p,p]_p");
  cwb::sym::Variables::set_derivative(u, x, du);
  cwb::sym::Variables::set_opaque(du);
  CHECK(RationalFn::var(u).diff(x) == RationalFn::var(du));
  CHECK_THROWS_AS(RationalFn::var(du).diff(x), cwb::sym::DependencyError);
}

TEST_CASE("dimension-four obstruction equals the Bach tensor") {
  CHECK(obstruction_constant(4) == make_rational(-1, 1));
  CHECK(obstruction_constant(6) == make_rational(4, 1));
  CHECK(obstruction_constant(8) == make_rational(-48, 1));
  CHECK_THROWS_AS(obstruction_constant(5), UnsupportedDimension);
  for (const char* name : {"warped_poly", "ppwave_quartic", "ppwave_poly", "s2xs2", "s4", "flat_2_2"}) {
    CAPTURE(std::string(name));
    Curvature curv(builtin_chart(name));
    TensorField O = obstruction(curv);
    CHECK(O == curv.bach());
    CHECK(trace(curv.ginv(), O.to_matrix()).is_zero());
    TensorField DO = curv.covariant_derivative(O);
    for (std::size_t j = 0; j < 4; ++j) {
      RationalFn div;
      for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t k = 0; k < 4; ++k)
          if (!curv.ginv()(i, k).is_zero()) div += curv.ginv()(i, k) * DO.at({i, j, k});
      CHECK(div.is_zero());
    }
  }
  CHECK_THROWS_AS(obstruction(Curvature(builtin_chart("ppwave5"))), UnsupportedDimension);
  CHECK_THROWS_AS(obstruction(Curvature(builtin_chart("dim3_random"))), UnsupportedDimension);
}

TEST_CASE("dimension-six obstruction of a pp-wave") {
  // For 2 du dv + H du^2 + flat, the jet recursion is linear:
  // k (k - n/2) h_k = 1/2 Lap h_(k-1), and O_uu = Lap^(n/2-1) P_uu = -Lap^(n/2) H / (2 (n - 2)).
  Curvature curv(builtin_chart("ppwave6_sextic"));
  TensorField O = obstruction(curv);
  for (std::size_t f = 0; f < O.size(); ++f) CHECK(O[f] == (f == 0 ? q(-90) : q(0)));
  CHECK(obstruction(Curvature(builtin_chart("ppwave6"))).is_zero());

  TractorConnection conn(curv);
  std::vector<EvalPoint> pts{make_point(curv.chart(), {1, 0, make_rational(1, 2), 2, -1, 3})};
  TensorField N = cwb::tractor::obstruction6_null(conn, {{q(0), q(1), q(0), q(0), q(0), q(0)}}, pts);
  CHECK(N == O.scaled(q(-1)));
}

TEST_CASE("tractor curvature from the ambient curvature") {
  std::mt19937 rng(77);
  SUBCASE("flat and Einstein jets: every identity holds") {
    for (const char* name : {"flat_1_3", "s4"}) {
      CAPTURE(std::string(name));
      Curvature curv(builtin_chart(name));
      TractorConnection conn(curv);
      AmbientJet jet = std::string(name) == "s4" ? einstein_jet(curv.chart(), make_rational(1, 2), 2)
                                                 : flat_jet(curv.chart(), 2);
      for (const auto& x : random_points(rng, curv.chart(), 3)) {
        auto rep = tractor_ambient_identification_check(jet, conn, x);
        CHECK(rep.all_pass());
        CHECK(rep.mismatches.empty());
      }
    }
  }
  SUBCASE("solved jets of Einstein charts are the Einstein jets") {
    struct Case {
      const char* name;
      Rational lambda;
    };
    for (const auto& c : {Case{"s4", make_rational(1, 2)}, Case{"s2xs2", make_rational(1, 6)}}) {
      CAPTURE(std::string(c.name));
      Curvature curv(builtin_chart(c.name));
      TractorConnection conn(curv);
      AmbientJet solved = solve_jet(curv, 2);
      AmbientJet einstein = einstein_jet(curv.chart(), c.lambda, 2);
      CHECK(solved.coeffs == einstein.coeffs);
      for (const auto& x : random_points(rng, curv.chart(), 2)) {
        CHECK(tractor_ambient_identification_check(solved, conn, x).all_pass());
        auto sol = solve_jet_order(solved, 2, x);
        CHECK(sol.value == cwb::sym::evaluate(einstein.coeffs[2], x.assignment));
      }
    }
  }
  SUBCASE("dimension four: the rho row is not proportional to the tractor side") {
    for (const char* name : {"ppwave_poly", "ppwave_quartic"}) {
      CAPTURE(std::string(name));
      Curvature curv(builtin_chart(name));
      TractorConnection conn(curv);
      auto jet = solve_jet(curv, 2);
      auto rep = tractor_ambient_identification_check(jet, conn, make_point(curv.chart(), {1, 2, 1, 1}));
      CHECK(rep.tangential_pass);
      CHECK(rep.t_pass);
      CHECK_FALSE(rep.rho_pass);
      CHECK_FALSE(rep.rho_ratio);
    }
  }
  SUBCASE("dimensions five and six: uniform ratio -1/(n-4)") {
    for (const char* name : {"ppwave5", "ppwave6", "ppwave6_sextic"}) {
      CAPTURE(std::string(name));
      Curvature curv(builtin_chart(name));
      TractorConnection conn(curv);
      auto jet = solve_jet(curv, 2);
      for (const auto& x : random_points(rng, curv.chart(), 2)) {
        auto rep = tractor_ambient_identification_check(jet, conn, x);
        CHECK(rep.tangential_pass);
        CHECK(rep.t_pass);
        REQUIRE(rep.rho_ratio);
        CHECK(*rep.rho_ratio == make_rational(-1, static_cast<long>(curv.n()) - 4));
        CHECK_FALSE(rep.rho_pass);
      }
    }
  }
}
