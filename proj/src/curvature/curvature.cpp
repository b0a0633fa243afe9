#include "cwb/curvature/curvature.hpp"

#include "cwb/symexpr/linear.hpp"

namespace cwb::curv {

using sym::Var;

Curvature::Curvature(Chart chart) : chart_(std::move(chart)) {}

const FnMatrix& Curvature::ginv() const {
  return cached(f_ginv_, ginv_, [&] {
    auto inv = sym::invert(chart_.metric);
    if (!inv.inverse) throw SingularMetric("metric determinant vanishes identically on chart " + chart_.name);
    return *inv.inverse;
  });
}

const TensorField& Curvature::christoffel() const {
  return cached(f_gamma_, gamma_, [&] {
    const std::size_t n = this->n();
    const FnMatrix& gi = ginv();
    std::vector<FnMatrix> dg;
    for (std::size_t l = 0; l < n; ++l) {
      FnMatrix d(n, n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) d(i, j) = d(j, i) = chart_.metric(i, j).diff(chart_.vars[l]);
      dg.push_back(std::move(d));
    }
    // first kind: G_lij = (d_i g_jl + d_j g_il - d_l g_ij) / 2
    TensorField first(n, {Pos::Down, Pos::Down, Pos::Down});
    const RationalFn half(sym::make_rational(1, 2));
    for (std::size_t l = 0; l < n; ++l)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
          RationalFn v = dg[i](j, l) + dg[j](i, l) - dg[l](i, j);
          if (!v.is_zero()) v *= half;
          first.at({l, i, j}) = v;
          first.at({l, j, i}) = v;
        }
    TensorField gamma(n, {Pos::Up, Pos::Down, Pos::Down});
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
          RationalFn s;
          for (std::size_t l = 0; l < n; ++l)
            if (!gi(k, l).is_zero() && !first.at({l, i, j}).is_zero()) s += gi(k, l) * first.at({l, i, j});
          gamma.at({k, i, j}) = s;
          gamma.at({k, j, i}) = s;
        }
    return gamma;
  });
}

const TensorField& Curvature::riemann() const {
  return cached(f_riem_, riem_, [&] {
    const std::size_t n = this->n();
    const TensorField& G = christoffel();
    // dG[m](l, a, b) = d_m G^l_ab
    std::vector<TensorField> dG;
    for (std::size_t m = 0; m < n; ++m) {
      TensorField d(n, G.slots());
      for (std::size_t f = 0; f < G.size(); ++f)
        if (!G[f].is_zero()) d[f] = G[f].diff(chart_.vars[m]);
      dG.push_back(std::move(d));
    }
    TensorField R(n, {Pos::Up, Pos::Down, Pos::Down, Pos::Down});
    for (std::size_t l = 0; l < n; ++l)
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = i + 1; j < n; ++j) {
            RationalFn v = dG[i].at({l, j, k}) - dG[j].at({l, i, k});
            for (std::size_t m = 0; m < n; ++m) {
              const auto& a = G.at({l, i, m});
              const auto& b = G.at({m, j, k});
              if (!a.is_zero() && !b.is_zero()) v += a * b;
              const auto& c = G.at({l, j, m});
              const auto& d = G.at({m, i, k});
              if (!c.is_zero() && !d.is_zero()) v -= c * d;
            }
            R.at({l, k, i, j}) = v;
            R.at({l, k, j, i}) = -v;
          }
    return R;
  });
}

const TensorField& Curvature::ricci() const {
  return cached(f_ric_, ric_, [&] {
    const std::size_t n = this->n();
    const TensorField& R = riemann();
    TensorField ric(n, {Pos::Down, Pos::Down});
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        RationalFn s;
        for (std::size_t l = 0; l < n; ++l) s += R.at({l, b, l, a});
        ric.at({a, b}) = s;
      }
    return ric;
  });
}

const RationalFn& Curvature::scalar() const {
  return cached(f_scal_, scal_, [&] {
    const std::size_t n = this->n();
    const FnMatrix& gi = ginv();
    const TensorField& ric = ricci();
    RationalFn s;
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        if (!gi(a, b).is_zero() && !ric.at({a, b}).is_zero()) s += gi(a, b) * ric.at({a, b});
    return s;
  });
}

const TensorField& Curvature::schouten() const {
  return cached(f_p_, p_, [&] {
    const std::size_t n = this->n();
    const auto nn = static_cast<long>(n);
    const TensorField& ric = ricci();
    RationalFn c = scalar() * RationalFn(sym::make_rational(1, 2 * (nn - 1)));
    RationalFn inv(sym::make_rational(1, nn - 2));
    TensorField p(n, {Pos::Down, Pos::Down});
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        RationalFn v = ric.at({a, b});
        if (!c.is_zero() && !g()(a, b).is_zero()) v -= c * g()(a, b);
        p.at({a, b}) = v.is_zero() ? v : v * inv;
      }
    return p;
  });
}

const TensorField& Curvature::schouten_mixed() const {
  return cached(f_pm_, pm_, [&] { return raise(schouten(), 0); });
}

TensorField Curvature::raise(const TensorField& t, std::size_t slot) const {
  if (t.slots()[slot] != Pos::Down) throw std::invalid_argument("slot is not covariant");
  auto slots = t.slots();
  slots[slot] = Pos::Up;
  TensorField r(t.n(), slots);
  const FnMatrix& gi = ginv();
  for (std::size_t f = 0; f < r.size(); ++f) {
    auto idx = r.unflatten(f);
    const std::size_t a = idx[slot];
    RationalFn s;
    for (std::size_t e = 0; e < t.n(); ++e) {
      if (gi(a, e).is_zero()) continue;
      idx[slot] = e;
      const auto& v = t.at(idx);
      if (!v.is_zero()) s += gi(a, e) * v;
    }
    r[f] = s;
  }
  return r;
}

TensorField Curvature::lower(const TensorField& t, std::size_t slot) const {
  if (t.slots()[slot] != Pos::Up) throw std::invalid_argument("slot is not contravariant");
  auto slots = t.slots();
  slots[slot] = Pos::Down;
  TensorField r(t.n(), slots);
  for (std::size_t f = 0; f < r.size(); ++f) {
    auto idx = r.unflatten(f);
    const std::size_t a = idx[slot];
    RationalFn s;
    for (std::size_t e = 0; e < t.n(); ++e) {
      if (g()(a, e).is_zero()) continue;
      idx[slot] = e;
      const auto& v = t.at(idx);
      if (!v.is_zero()) s += g()(a, e) * v;
    }
    r[f] = s;
  }
  return r;
}

TensorField Curvature::covariant_derivative(const TensorField& t) const {
  const std::size_t n = this->n();
  const TensorField& G = christoffel();
  auto slots = t.slots();
  slots.push_back(Pos::Down);
  TensorField r(n, slots);
  for (std::size_t f = 0; f < r.size(); ++f) {
    auto idx = r.unflatten(f);
    const std::size_t m = idx.back();
    idx.pop_back();
    RationalFn s = t.at(idx).diff(chart_.vars[m]);
    for (std::size_t slot = 0; slot < t.rank(); ++slot) {
      const std::size_t a = idx[slot];
      for (std::size_t e = 0; e < n; ++e) {
        const RationalFn& gam = t.slots()[slot] == Pos::Up ? G.at({a, m, e}) : G.at({e, m, a});
        if (gam.is_zero()) continue;
        auto jdx = idx;
        jdx[slot] = e;
        const auto& v = t.at(jdx);
        if (v.is_zero()) continue;
        if (t.slots()[slot] == Pos::Up) {
          s += gam * v;
        } else {
          s -= gam * v;
        }
      }
    }
    r[f] = s;
  }
  return r;
}

std::vector<RationalFn> Curvature::derivative_of_vector(std::size_t i, const std::vector<RationalFn>& v) const {
  const std::size_t n = this->n();
  const TensorField& G = christoffel();
  std::vector<RationalFn> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    RationalFn s = v[k].diff(chart_.vars[i]);
    for (std::size_t e = 0; e < n; ++e)
      if (!G.at({k, i, e}).is_zero() && !v[e].is_zero()) s += G.at({k, i, e}) * v[e];
    out[k] = s;
  }
  return out;
}

const TensorField& Curvature::cotton() const {
  return cached(f_c_, c_, [&] {
    const std::size_t n = this->n();
    TensorField dP = covariant_derivative(schouten());  // dP(a, b, m) = (D_m P)_ab
    TensorField C(n, {Pos::Down, Pos::Down, Pos::Down});
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
          RationalFn v = dP.at({j, k, i}) - dP.at({i, k, j});
          C.at({k, i, j}) = v;
          C.at({k, j, i}) = -v;
        }
    return C;
  });
}

const TensorField& Curvature::weyl() const {
  return cached(f_w_, w_, [&] {
    const std::size_t n = this->n();
    const TensorField& R = riemann();
    const TensorField& P = schouten();
    const TensorField& Pm = schouten_mixed();
    TensorField W(n, R.slots());
    auto delta = [](std::size_t a, std::size_t b) { return a == b; };
    for (std::size_t l = 0; l < n; ++l)
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = i + 1; j < n; ++j) {
            RationalFn v = R.at({l, k, i, j});
            if (!g()(i, k).is_zero()) v += g()(i, k) * Pm.at({l, j});
            if (delta(l, j)) v += P.at({i, k});
            if (delta(l, i)) v -= P.at({j, k});
            if (!g()(j, k).is_zero()) v -= g()(j, k) * Pm.at({l, i});
            W.at({l, k, i, j}) = v;
            W.at({l, k, j, i}) = -v;
          }
    return W;
  });
}

const TensorField& Curvature::bach() const {
  return cached(f_b_, b_, [&] {
    const std::size_t n = this->n();
    const FnMatrix& gi = ginv();
    const TensorField& C = cotton();
    TensorField dC = covariant_derivative(C);  // dC(i, j, k, m) = (D_m C)_ijk
    TensorField Wd = lower(weyl(), 0);  // Wd(l, k, i, j) = g(d_l, W(d_i, d_j) d_k)
    TensorField Pup = raise(schouten_mixed(), 1);
    TensorField B(n, {Pos::Down, Pos::Down});
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        RationalFn s;
        for (std::size_t k = 0; k < n; ++k)
          for (std::size_t m = 0; m < n; ++m) {
            if (!gi(k, m).is_zero() && !dC.at({j, i, k, m}).is_zero()) s -= gi(k, m) * dC.at({j, i, k, m});
            const auto& w = Wd.at({i, k, j, m});
            if (!Pup.at({k, m}).is_zero() && !w.is_zero()) s += Pup.at({k, m}) * w;
          }
        B.at({i, j}) = s;
      }
    return B;
  });
}

Chart conformal_rescale(const Chart& chart, const RationalFn& omega) {
  if (omega.is_zero()) throw ZeroFactor("conformal factor vanishes identically");
  RationalFn o2 = omega * omega;
  FnMatrix m = chart.metric.scaled(o2);
  return chart::make_chart(chart.name + "_rescaled", chart.signature, chart.coords, std::move(m));
}

bool NullDistributionReport::all_pass() const {
  for (const auto& p : points)
    if (!p.lightlike || !p.parallel || !p.contains_ricci_image) return false;
  return true;
}

NullDistributionReport check_parallel_null_distribution(const Curvature& curv,
                                                        const std::vector<std::vector<RationalFn>>& fields,
                                                        const std::vector<EvalPoint>& points) {
  const std::size_t n = curv.n();
  NullDistributionReport report;
  // Covariant derivatives of the spanning fields along every coordinate.
  std::vector<std::vector<std::vector<RationalFn>>> dfields;
  for (const auto& V : fields) {
    std::vector<std::vector<RationalFn>> per_dir;
    for (std::size_t i = 0; i < n; ++i) per_dir.push_back(curv.derivative_of_vector(i, V));
    dfields.push_back(std::move(per_dir));
  }
  TensorField ric_mixed = curv.raise(curv.ricci(), 0);  // Ric^a_b
  for (const auto& x : points) {
    NullDistributionReport::PointResult pr;
    pr.point = chart::print_point(curv.chart(), x);
    auto eval_vec = [&](const std::vector<RationalFn>& v) {
      std::vector<Rational> out;
      for (const auto& c : v) out.push_back(c.eval(x.assignment));
      return out;
    };
    sym::QMatrix gx = sym::evaluate(curv.g(), x.assignment);
    std::vector<std::vector<Rational>> basis;
    sym::RowSpace span(n);
    for (const auto& V : fields) {
      basis.push_back(eval_vec(V));
      span.insert(basis.back());
    }
    pr.lightlike = true;
    for (const auto& a : basis)
      for (const auto& b : basis) {
        Rational s(0);
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n; ++j) s += gx(i, j) * a[i] * b[j];
        if (sgn(s) != 0) pr.lightlike = false;
      }
    pr.parallel = true;
    for (const auto& per_dir : dfields)
      for (const auto& dv : per_dir)
        if (!span.contains(eval_vec(dv))) pr.parallel = false;
    pr.contains_ricci_image = true;
    auto ricx = ric_mixed.evaluate(x.assignment);
    for (std::size_t b = 0; b < n; ++b) {
      std::vector<Rational> col(n);
      for (std::size_t a = 0; a < n; ++a) col[a] = ricx[a * n + b];
      if (!span.contains(col)) pr.contains_ricci_image = false;
    }
    report.points.push_back(std::move(pr));
  }
  return report;
}

}  // namespace cwb::curv
