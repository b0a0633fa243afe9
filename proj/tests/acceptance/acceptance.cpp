#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cwb/ambient/ambient.hpp"
#include "cwb/holonomy/holonomy.hpp"
#include "cwb/report/report.hpp"
#include "random_poly.hpp"

using namespace cwb;
using chart::builtin_chart;
using chart::Chart;
using chart::EvalPoint;
using curv::Curvature;
using curv::Pos;
using curv::TensorField;
using sym::FnMatrix;
using sym::make_rational;
using sym::QMatrix;
using sym::Rational;
using sym::RationalFn;
using tractor::TractorConnection;

namespace {

/// Collects failed expectations of one criterion.
class Log {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok) failures_.push_back(what);
  }
  bool ok() const { return failures_.empty(); }
  const std::vector<std::string>& failures() const { return failures_; }

 private:
  std::vector<std::string> failures_;
};

struct Criterion {
  int id;
  std::string title;
  std::optional<double> limit_s;
  std::function<void(Log&)> run;
};

RationalFn num(long p, long q = 1) { return RationalFn(make_rational(p, q)); }

std::vector<EvalPoint> points(const Chart& c, std::size_t count, std::uint32_t seed) {
  return report::sample_points(c, count, seed);
}

bool is_zero(const TensorField& t) { return t.is_zero(); }

std::vector<RationalFn> mat_vec(const FnMatrix& m, const std::vector<RationalFn>& v) {
  std::vector<RationalFn> out(m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c)
      if (!m(r, c).is_zero() && !v[c].is_zero()) out[r] += m(r, c) * v[c];
  return out;
}

std::vector<RationalFn> random_vector(std::mt19937& rng, const Chart& c, std::size_t len) {
  std::vector<RationalFn> v;
  for (std::size_t k = 0; k < len; ++k) v.emplace_back(testing::random_poly(rng, c.vars, 3, 2, 4));
  return v;
}

tractor::AdjointTractor random_adjoint(std::mt19937& rng, const Curvature& curv) {
  const std::size_t n = curv.n();
  auto p = tractor::AdjointTractor::zero(n);
  p.mu = random_vector(rng, curv.chart(), n);
  p.Z = random_vector(rng, curv.chart(), n);
  p.a = RationalFn(testing::random_poly(rng, curv.chart().vars, 3, 2, 4));
  FnMatrix S(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      S(i, j) = RationalFn(testing::random_poly(rng, curv.chart().vars, 2, 1, 4));
      S(j, i) = -S(i, j);
    }
  p.A = curv.ginv() * S;
  return p;
}

/// O(d_i)^# at x for each i.
std::vector<std::vector<Rational>> image_vectors(const TensorField& O, const Curvature& curv, const EvalPoint& x) {
  const std::size_t n = curv.n();
  const QMatrix Ox = sym::evaluate(O.to_matrix(), x.assignment);
  const QMatrix gi = sym::evaluate(curv.ginv(), x.assignment);
  std::vector<std::vector<Rational>> out(n, std::vector<Rational>(n, Rational(0)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) out[i][a] += gi(a, b) * Ox(i, b);
  return out;
}

RationalFn trace(const FnMatrix& ginv, const FnMatrix& m) {
  RationalFn t;
  for (std::size_t a = 0; a < m.rows(); ++a)
    for (std::size_t b = 0; b < m.cols(); ++b)
      if (!ginv(a, b).is_zero()) t += ginv(a, b) * m(a, b);
  return t;
}

bool divergence_free(const Curvature& curv, const TensorField& O) {
  const std::size_t n = curv.n();
  const TensorField D = curv.covariant_derivative(O);
  for (std::size_t i = 0; i < n; ++i) {
    RationalFn d;
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        if (!curv.ginv()(j, k).is_zero()) d += curv.ginv()(j, k) * D.at({i, j, k});
    if (!d.is_zero()) return false;
  }
  return true;
}

hol::MatrixSpan brute_closure(const std::vector<QMatrix>& gens) {
  hol::MatrixSpan span(gens.front().rows());
  for (const auto& g : gens) span.insert(g);
  for (;;) {
    auto cur = span.basis();
    const std::size_t before = span.dim();
    for (const auto& a : cur)
      for (const auto& b : cur) span.insert(QMatrix::bracket(a, b));
    if (span.dim() == before) return span;
  }
}

QMatrix diagonal(std::initializer_list<int> d) {
  QMatrix g(d.size(), d.size());
  std::size_t k = 0;
  for (int x : d) g(k, k) = x, ++k;
  return g;
}

std::string name_of(const Chart& c) { return c.name; }

// ------------------------------------------------------------------ criteria

void curvature_oracle(Log& log) {
  for (const auto& name : chart::builtin_chart_names()) {
    if (name.rfind("flat_", 0) != 0) continue;
    Curvature c(builtin_chart(name));
    log.expect(is_zero(c.riemann()), name + ": R != 0");
    log.expect(is_zero(c.ricci()), name + ": Ric != 0");
    log.expect(is_zero(c.weyl()), name + ": W != 0");
    log.expect(is_zero(c.cotton()), name + ": C != 0");
    log.expect(is_zero(c.bach()), name + ": B != 0");
  }
  Curvature s4(builtin_chart("s4"));
  log.expect(s4.ricci().to_matrix() == s4.g().scaled(num(3)), "s4: Ric != 3g");
  log.expect(s4.scalar() == num(12), "s4: scal != 12");
  log.expect(s4.schouten().to_matrix() == s4.g().scaled(num(1, 2)), "s4: P != g/2");
}

void conformal_covariance(Log& log) {
  std::mt19937 rng(2024);
  struct Case {
    const char* name;
    int rescalings;
  };
  for (const auto& cs : {Case{"warped_poly", 2}, Case{"ppwave_quartic", 1}, Case{"ppwave5", 2}, Case{"ppwave6_sextic", 1}}) {
    const Chart ch = builtin_chart(cs.name);
    Curvature c(ch);
    for (int k = 0; k < cs.rescalings; ++k) {
      const RationalFn omega = testing::random_conformal_factor(rng, ch.vars);
      Curvature r(curv::conformal_rescale(ch, omega));
      log.expect(r.weyl() == c.weyl(), std::string(cs.name) + ": W^l_kij changed under rescaling");
      if (ch.dim() == 4) {
        log.expect(!c.bach().is_zero() || std::string(cs.name) == "ppwave_poly", std::string(cs.name) + ": B = 0");
        log.expect(r.bach() == c.bach().scaled(num(1) / (omega * omega)),
                   std::string(cs.name) + ": B-hat != Omega^-2 B");
      }
    }
  }
}

void dim3_weyl(Log& log) {
  Curvature fixed(builtin_chart("dim3_random"));
  log.expect(!fixed.riemann().is_zero() && fixed.weyl().is_zero(), "dim3_random: W != 0");
  std::mt19937 rng(33);
  for (int trial = 0; trial < 2; ++trial) {
    const std::vector<std::string> coords{"a", "b", "c"};
    std::vector<sym::Var> vars;
    for (const auto& s : coords) vars.push_back(sym::Variables::intern(s));
    FnMatrix g(3, 3);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = i; j < 3; ++j) {
        sym::Poly p = testing::random_poly(rng, vars, 2, 1, 2);
        if (i == j) p += sym::Poly(make_rational(6));
        g(i, j) = g(j, i) = RationalFn(p);
      }
    Curvature c(chart::make_chart("random3", {0, 3}, coords, g));
    log.expect(!c.riemann().is_zero(), "random 3-metric is flat");
    log.expect(c.weyl().is_zero(), "random 3-metric: W != 0");
  }
}

void tractor_suite(Log& log) {
  Curvature s4(builtin_chart("s4"));
  TractorConnection c4(s4);
  const std::vector<RationalFn> t{num(-1, 2), num(0), num(0), num(0), num(0), num(1)};
  for (std::size_t i = 0; i < 4; ++i)
    for (const auto& x : c4.derivative(i, t)) log.expect(x.is_zero(), "s4: (-1/2, 0, 1) not parallel");

  std::mt19937 rng(404);
  Curvature curv(builtin_chart("warped_poly"));
  TractorConnection conn(curv);
  const std::size_t n = curv.n();
  for (int s = 0; s < 3; ++s) {
    auto T = random_vector(rng, curv.chart(), n + 2);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        auto a = conn.derivative(i, conn.derivative(j, T));
        auto b = conn.derivative(j, conn.derivative(i, T));
        auto r = mat_vec(conn.curvature_matrix(i, j), T);
        for (std::size_t k = 0; k < n + 2; ++k) log.expect(a[k] - b[k] == r[k], "curvature != commutator");
      }
  }
  const FnMatrix& g = curv.g();
  const FnMatrix& gi = curv.ginv();
  for (int k = 0; k < 10; ++k) {
    auto p1 = random_adjoint(rng, curv);
    auto p2 = random_adjoint(rng, curv);
    log.expect(tractor::adjoint_bracket(p1, p2, g, gi).to_matrix(g, gi) ==
                   FnMatrix::bracket(p1.to_matrix(g, gi), p2.to_matrix(g, gi)),
               "abstract bracket != commutator");
  }
  for (int k = 0; k < 5; ++k) {
    const FnMatrix phi = random_adjoint(rng, curv).to_matrix(g, gi);
    const auto X = random_vector(rng, curv.chart(), n);
    const auto T = random_vector(rng, curv.chart(), n + 2);
    auto lhs = mat_vec(conn.adjoint_derivative(X, phi), T);
    auto dphiT = conn.derivative(X, tractor::StandardTractor::from_vector(mat_vec(phi, T))).to_vector();
    auto phidT = mat_vec(phi, conn.derivative(X, tractor::StandardTractor::from_vector(T)).to_vector());
    for (std::size_t r = 0; r < n + 2; ++r) log.expect(lhs[r] == dphiT[r] - phidT[r], "derform violates Leibniz");
  }
}

void holonomy_suite(Log& log) {
  for (const char* name : {"flat_1_3", "flat_2_2", "s4"}) {
    Curvature c(builtin_chart(name));
    TractorConnection conn(c);
    for (const auto& x : points(c.chart(), 2, 5)) {
      auto res = hol::infinitesimal_holonomy(conn, x, 4);
      log.expect(res.algebra.dim() == 0, std::string(name) + ": hol' != 0");
    }
  }
  std::mt19937 rng(55);
  std::uniform_int_distribution<int> coef(-3, 3), count(2, 3), keep(0, 99);
  const std::vector<QMatrix> metrics{diagonal({-1, 1, 1, 1}), diagonal({-1, -1, 1, 1, 1, 1}), diagonal({1, 1, 1})};
  for (int trial = 0; trial < 10; ++trial) {
    const auto basis = hol::so_basis(metrics[static_cast<std::size_t>(trial) % metrics.size()]);
    std::vector<QMatrix> gens;
    for (int k = count(rng); k > 0; --k) {
      QMatrix m(basis.front().rows(), basis.front().cols());
      for (const auto& b : basis)
        if (keep(rng) < 20) m = m + b.scaled(Rational(coef(rng)));
      gens.push_back(m);
    }
    auto closure = hol::lie_closure(gens);
    auto brute = brute_closure(gens);
    bool same = closure.dim() == brute.dim();
    for (const auto& b : closure.basis) same = same && brute.contains(b);
    log.expect(same && closure.closed, "lie_closure differs from brute force on trial " + std::to_string(trial));
  }
  struct Einstein {
    const char* name;
    Rational lambda;
  };
  for (const auto& e : {Einstein{"s4", make_rational(1, 2)}, Einstein{"s2xs2", make_rational(1, 6)}}) {
    Curvature c(builtin_chart(e.name));
    TractorConnection conn(c);
    std::vector<Rational> t(c.n() + 2, Rational(0));
    t.front() = -e.lambda;
    t.back() = 1;
    for (const auto& x : points(c.chart(), 2, 8)) {
      auto res = hol::infinitesimal_holonomy(conn, x, 4);
      log.expect(hol::annihilates(res.algebra, t), std::string(e.name) + ": hol' does not annihilate the tractor");
    }
  }
}

void obstruction_membership(Log& log) {
  for (const char* name : {"ppwave_quartic", "warped_poly"}) {
    Curvature c(builtin_chart(name));
    TractorConnection conn(c);
    const TensorField O = amb::obstruction(c);
    log.expect(!O.is_zero(), std::string(name) + ": O = 0 makes the check vacuous");
    for (const auto& x : points(c.chart(), 3, 21)) {
      auto res = hol::infinitesimal_holonomy(conn, x, 4);
      const QMatrix gx = sym::evaluate(c.g(), x.assignment);
      for (const auto& v : image_vectors(O, c, x))
        log.expect(hol::membership(tractor::s_minus_wedge(v, gx), res.algebra),
                   std::string(name) + ": s_-^b ^ O(d_i)^b not in hol' at " + chart::print_point(c.chart(), x));
    }
  }
}

void lightlike_image(Log& log) {
  std::size_t tested = 0;
  for (const char* name : {"ppwave_quartic", "ppwave_poly", "ppwave_harmonic", "warped_poly", "s2xs2", "s4", "flat_2_2",
                           "ppwave6_sextic"}) {
    Curvature c(builtin_chart(name));
    TractorConnection conn(c);
    const TensorField O = amb::obstruction(c);
    for (const auto& x : points(c.chart(), 2, 31)) {
      auto res = hol::infinitesimal_holonomy(conn, x, 4);
      const QMatrix gx = sym::evaluate(c.g(), x.assignment);
      if (hol::genericity_report(res.algebra, gx).generic) continue;
      ++tested;
      auto E = hol::holonomy_distribution(res.algebra, gx);
      for (const auto& a : E.basis)
        for (const auto& b : E.basis) {
          Rational ip = 0;
          for (std::size_t i = 0; i < c.n(); ++i)
            for (std::size_t j = 0; j < c.n(); ++j) ip += gx(i, j) * a[i] * b[j];
          log.expect(sgn(ip) == 0, std::string(name) + ": E basis not null and orthogonal");
        }
      sym::RowSpace span(c.n());
      for (const auto& v : E.basis) span.insert(v);
      for (const auto& v : image_vectors(O, c, x))
        log.expect(span.contains(v), std::string(name) + ": Im(O) not in E at " + chart::print_point(c.chart(), x));
    }
  }
  log.expect(tested >= 6, "fewer than 6 non-generic points tested");
}

void obstruction_normalization(Log& log) {
  log.expect(amb::obstruction_constant(4) == -1, "c_4 != -1");
  std::size_t nonzero = 0;
  for (const char* name : {"warped_poly", "ppwave_quartic", "ppwave_poly", "s2xs2", "s4", "flat_2_2"}) {
    Curvature c(builtin_chart(name));
    const TensorField O = amb::obstruction(c);
    log.expect(O == c.bach(), std::string(name) + ": ambient O != Bach");
    log.expect(trace(c.ginv(), O.to_matrix()).is_zero(), std::string(name) + ": O not trace-free");
    log.expect(divergence_free(c, O), std::string(name) + ": O not divergence-free");
    nonzero += !O.is_zero();
  }
  log.expect(nonzero >= 2, "fewer than two charts with O != 0");
}

void ambient_suite(Log& log) {
  const int K = 3;
  for (const char* name : {"warped_poly", "ppwave5"}) {
    Curvature c(builtin_chart(name));
    amb::AmbientMetric am(amb::default_jet(c, K));
    const auto DT = am.euler_derivative();
    const std::size_t N = am.dim();
    for (std::size_t A = 0; A < N; ++A)
      for (std::size_t B = 0; B < N; ++B) {
        const auto& s = DT.at({A, B});
        const bool ok = s.series.valid() >= K && (A == B ? s.weight == 0 && s.series.coeff(0) == num(1) &&
                                                               s.series.truncate(K).stored().size() <= 1
                                                         : s.known_zero());
        log.expect(ok, std::string(name) + ": D T != Id");
      }
  }
  for (const char* name : {"flat_1_3", "flat_2_2", "flat_3_3"}) {
    for (const auto& s : amb::ricci_series(amb::flat_jet(builtin_chart(name), K)).c)
      log.expect(s.known_zero(), std::string(name) + ": flat jet Ric~ != 0");
  }
  struct Einstein {
    const char* name;
    Rational lambda;
  };
  for (const auto& e : {Einstein{"s4", make_rational(1, 2)}, Einstein{"s2xs2", make_rational(1, 6)}}) {
    for (const auto& s : amb::ricci_series(amb::einstein_jet(builtin_chart(e.name), e.lambda, K)).c)
      log.expect(s.known_zero() && s.series.valid() >= K - 1, std::string(e.name) + ": Einstein jet Ric~ != 0");
  }
  std::size_t checked = 0;
  for (const char* name : {"warped_poly", "ppwave_quartic", "ppwave5"}) {
    Curvature c(builtin_chart(name));
    const amb::AmbientJet base{c.chart(), {c.g()}};
    const FnMatrix twoP = c.schouten().to_matrix().scaled(num(2));
    for (const auto& x : points(c.chart(), 2, 41)) {
      if (checked == 5) break;
      auto sol = amb::solve_jet_order(base, 1, x);
      log.expect(sol.unique && sol.value == sym::evaluate(twoP, x.assignment), std::string(name) + ": g^(1) != 2P");
      ++checked;
    }
  }
  log.expect(checked == 5, "fewer than 5 points for g^(1)");

  for (const char* name : {"flat_1_3", "s4", "ppwave_quartic", "ppwave5", "ppwave6"}) {
    Curvature c(builtin_chart(name));
    TractorConnection conn(c);
    const amb::AmbientJet jet = amb::solve_jet(c, 2);
    for (const auto& x : points(c.chart(), 2, 51)) {
      auto rep = amb::tractor_ambient_identification_check(jet, conn, x);
      std::string detail = std::string(name) + ": identification";
      if (!rep.tangential_pass) detail += " tangential";
      if (!rep.t_pass) detail += " t-row";
      if (!rep.rho_pass) detail += " rho-row (" + (rep.rho_ratio ? "ratio " + rep.rho_ratio->get_str() : std::string("no uniform ratio")) + ", expected 3)";
      log.expect(rep.all_pass(), detail);
    }
  }
}

void spin34(Log& log) {
  auto alg = hol::spin34H();
  log.expect(alg.dim() == 16, "dim != 16");
  log.expect(hol::is_bracket_closed(alg.basis), "not bracket-closed");
  log.expect(hol::lie_closure(alg.basis).dim() == 16, "closure adds elements");
  log.expect(hol::holonomy_distribution(alg, hol::spin34H_metric()).rank() == 1, "E not one-dimensional");
}

void bryant(Log& log) {
  for (const char* f : {"x3 + x1*x2 + x2^2 + x3^2", "x1*x3^2"}) {
    const auto d = chart::bryant_distribution(f);
    auto bracket = [&](const std::vector<RationalFn>& X, const std::vector<RationalFn>& Y) {
      std::vector<RationalFn> out(6);
      for (std::size_t k = 0; k < 6; ++k)
        for (std::size_t i = 0; i < 6; ++i) out[k] += X[i] * Y[k].diff(d.vars[i]) - Y[i] * X[k].diff(d.vars[i]);
      return out;
    };
    std::vector<std::vector<RationalFn>> fields = d.spanning_fields;
    for (std::size_t a = 0; a < d.spanning_fields.size(); ++a)
      for (std::size_t b = a + 1; b < d.spanning_fields.size(); ++b)
        fields.push_back(bracket(d.spanning_fields[a], d.spanning_fields[b]));
    for (const auto& form : d.one_forms)
      for (const auto& X : d.spanning_fields) {
        RationalFn pairing;
        for (std::size_t i = 0; i < 6; ++i) pairing += form[i] * X[i];
        log.expect(pairing.is_zero(), std::string(f) + ": field not in the annihilator");
      }
    auto spans_tm = [&](const sym::Assignment& at) {
      std::vector<std::vector<Rational>> span, base;
      for (std::size_t k = 0; k < fields.size(); ++k) {
        std::vector<Rational> v;
        for (const auto& c : fields[k]) v.push_back(c.eval(at));
        if (k < 3) base.push_back(v);
        span.push_back(v);
      }
      return sym::rank_of(base) == 3 && sym::rank_of(span) == 6;
    };
    std::mt19937 rng(61);
    std::uniform_int_distribution<long> numer(1, 4), denom(1, 3);
    for (int trial = 0; trial < 5; ++trial) {
      sym::Assignment at;
      for (auto v : d.vars) at[v] = make_rational(rng() % 2 ? numer(rng) : -numer(rng), denom(rng));
      log.expect(spans_tm(at), std::string(f) + ": [D,D] + D != TM");
      log.expect(hol::bracket_report(d.vars, d.spanning_fields, at).generic, std::string(f) + ": report not generic");
    }
    sym::Assignment origin;
    for (auto v : d.vars) origin[v] = Rational(0);
    log.expect(spans_tm(origin) == hol::bracket_report(d.vars, d.spanning_fields, origin).generic,
               std::string(f) + ": report disagrees with the bracket oracle at the origin");
  }
}

void parser_and_negative_control(Log& log) {
  for (const auto& c : chart::builtin_charts()) {
    log.expect(chart::parse_chart(chart::print_chart(c)) == c, c.name + ": chart round trip");
    for (const auto& x : points(c, 2, 71))
      log.expect(chart::parse_point(chart::print_point(c, x), c).values == x.values, c.name + ": point round trip");
  }
  std::mt19937 rng(81);
  const std::vector<sym::Var> vars{sym::Variables::intern("p"), sym::Variables::intern("q"), sym::Variables::intern("r")};
  for (int k = 0; k < 20; ++k) {
    RationalFn f(testing::random_poly(rng, vars, 4, 3), testing::random_poly(rng, vars, 2, 2) + sym::Poly(make_rational(7)));
    log.expect(sym::parse_expression(f.to_string()) == f, "expression round trip: " + f.to_string());
  }
  for (const char* bad : {"1 +", "(p", "p ** 2", "p / 0", "3 $ q"}) {
    bool threw = false;
    try {
      (void)sym::parse_expression(bad);
    } catch (const std::exception&) {
      threw = true;
    }
    log.expect(threw, std::string("accepted malformed expression '") + bad + "'");
  }

  report::RunConfig cfg;
  cfg.chart = builtin_chart("ppwave_quartic");
  cfg.which = "obstruction";
  cfg.points = points(cfg.chart, 2, 91);
  log.expect(report::verify(cfg).all_pass(), "verify fails on the correct obstruction");
  report::VerifyOptions corrupt;
  corrupt.corrupt_bach = true;
  const auto bad = report::verify(cfg, corrupt);
  bool membership_failed = false;
  for (const auto& r : bad.records)
    membership_failed = membership_failed || (r["name"] == "obstruction_membership" && r["result"] == "fail");
  log.expect(!bad.all_pass() && membership_failed, "corrupted Bach passes verification");
}

std::set<int> parse_ids(const std::string& s) {
  std::set<int> out;
  std::stringstream ss(s);
  for (std::string tok; std::getline(ss, tok, ',');)
    if (!tok.empty()) out.insert(std::stoi(tok));
  return out;
}

std::string to_list(const std::set<int>& ids) {
  std::string out;
  for (int id : ids) out += (out.empty() ? "" : ",") + std::to_string(id);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> expected_failures;
  std::set<int> only;
  bool verbose = false;
  for (int k = 1; k < argc; ++k) {
    const std::string arg = argv[k];
    if (arg == "--expect-fail" && k + 1 < argc) {
      expected_failures = parse_ids(argv[++k]);
    } else if (arg == "--only" && k + 1 < argc) {
      only = parse_ids(argv[++k]);
    } else if (arg == "--verbose") {
      verbose = true;
    } else {
      std::cerr << "usage: cwb_acceptance [--only ids] [--expect-fail ids] [--verbose]\n";
      return 2;
    }
  }

  const std::vector<Criterion> criteria{
      {1, "curvature oracle: flat charts and round S4", 10, curvature_oracle},
      {2, "conformal covariance of Weyl (dims 4-6) and Bach (dim 4)", 120, conformal_covariance},
      {3, "Weyl tensor vanishes in dimension 3", 30, dim3_weyl},
      {4, "tractor suite: parallel tractor, curvature, brackets, Leibniz", 120, tractor_suite},
      {5, "holonomy suite: flat, closure vs brute force, Einstein", 180, holonomy_suite},
      {6, "s_-^b ^ O(d_i)^b lies in hol' on dim-4 charts", 300, obstruction_membership},
      {7, "Im(O) lies in the totally lightlike E on non-generic charts", std::nullopt, lightlike_image},
      {8, "ambient obstruction equals Bach, trace-free, divergence-free", std::nullopt, obstruction_normalization},
      {9, "ambient suite: Euler field, flat and Einstein jets, g^(1) = 2P, identification", 300, ambient_suite},
      {10, "spin(3,4)_H: dimension 16, closed, one-dimensional E", 30, spin34},
      {11, "Bryant distributions are generic", 30, bryant},
      {12, "parser round trips and corrupted-Bach negative control", 10, parser_and_negative_control},
  };

  std::set<int> failed;
  std::size_t ran = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && !only.count(c.id)) continue;
    ++ran;
    Log log;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.run(log);
    } catch (const std::exception& e) {
      log.expect(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = !c.limit_s || secs < *c.limit_s;
    if (!in_time) log.expect(false, "time limit exceeded");
    const bool pass = log.ok();
    if (!pass) failed.insert(c.id);
    char timing[64];
    if (c.limit_s)
      std::snprintf(timing, sizeof timing, "%.2fs / %.0fs", secs, *c.limit_s);
    else
      std::snprintf(timing, sizeof timing, "%.2fs", secs);
    std::string line = std::string(pass ? "PASS" : "FAIL") + " [" + std::to_string(c.id) + "] " + c.title + " (" + timing + ")";
    if (!pass) {
      line += ": " + log.failures().front();
      if (log.failures().size() > 1) line += " (+" + std::to_string(log.failures().size() - 1) + " more)";
    }
    std::cout << line << std::endl;
    if (verbose)
      for (const auto& f : log.failures()) std::cout << "    " << f << '\n';
  }

  const std::string failing = to_list(failed);
  std::cout << "acceptance: " << (ran - failed.size()) << "/" << ran
            << " pass; failing: " << (failing.empty() ? "none" : failing) << std::endl;
  if (!expected_failures.empty()) std::cout << "expected failures: " << to_list(expected_failures) << std::endl;
  if (only.empty()) return failed == expected_failures ? 0 : 1;
  for (int id : failed)
    if (!expected_failures.count(id)) return 1;
  return 0;
}
