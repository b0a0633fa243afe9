#include "cwb/symexpr/rational_function.hpp"

#include <algorithm>

#include "cwb/symexpr/gcd.hpp"

namespace cwb::sym {

RationalFn RationalFn::make_normalized_lc(Poly num, Poly den) {
  if (num.is_zero()) return RationalFn();
  const Rational lc = den.leading().coef;
  if (lc != 1) {
    Rational inv = 1 / lc;
    num = num.scaled(inv);
    den = den.scaled(inv);
  }
  return RationalFn(Raw{}, std::move(num), std::move(den));
}

RationalFn::RationalFn(const Poly& num, const Poly& den) {
  if (den.is_zero()) throw DivisionByZeroFn("rational function with zero denominator");
  if (num.is_zero()) {
    den_ = Poly(1);
    return;
  }
  if (den.is_constant()) {
    *this = make_normalized_lc(num, den);
    return;
  }
  Poly g = gcd(num, den);
  Poly n = num, d = den;
  if (!g.is_constant()) {
    n = *num.divide_exact(g);
    d = *den.divide_exact(g);
  }
  *this = make_normalized_lc(std::move(n), std::move(d));
}

RationalFn RationalFn::operator-() const { return RationalFn(Raw{}, -num_, den_); }

RationalFn RationalFn::operator+(const RationalFn& o) const {
  if (is_zero()) return o;
  if (o.is_zero()) return *this;
  if (den_ == o.den_) {
    if (den_.is_constant()) return RationalFn(Raw{}, num_ + o.num_, den_);
    return RationalFn(num_ + o.num_, den_);
  }
  if (den_.is_constant()) return RationalFn(Raw{}, num_ * o.den_ + o.num_, o.den_);
  if (o.den_.is_constant()) return RationalFn(Raw{}, num_ + o.num_ * den_, den_);
  Poly g = gcd(den_, o.den_);
  if (g.is_constant()) {
    return make_normalized_lc(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
  }
  Poly b1 = *den_.divide_exact(g);
  Poly d1 = *o.den_.divide_exact(g);
  Poly n = num_ * d1 + o.num_ * b1;
  if (n.is_zero()) return RationalFn();
  Poly h = gcd(n, g);
  if (!h.is_constant()) {
    n = *n.divide_exact(h);
    g = *g.divide_exact(h);
  }
  return make_normalized_lc(std::move(n), b1 * d1 * g);
}

RationalFn RationalFn::operator-(const RationalFn& o) const { return *this + (-o); }

RationalFn RationalFn::operator*(const RationalFn& o) const {
  if (is_zero() || o.is_zero()) return RationalFn();
  if (den_.is_constant() && o.den_.is_constant()) return RationalFn(Raw{}, num_ * o.num_, Poly(1));
  Poly a = num_, b = den_, c = o.num_, d = o.den_;
  if (!d.is_constant()) {
    Poly g1 = gcd(a, d);
    if (!g1.is_constant()) {
      a = *a.divide_exact(g1);
      d = *d.divide_exact(g1);
    }
  }
  if (!b.is_constant()) {
    Poly g2 = gcd(c, b);
    if (!g2.is_constant()) {
      c = *c.divide_exact(g2);
      b = *b.divide_exact(g2);
    }
  }
  return make_normalized_lc(a * c, b * d);
}

RationalFn RationalFn::operator/(const RationalFn& o) const {
  if (o.is_zero()) throw DivisionByZeroFn("division by identically zero rational function");
  return *this * make_normalized_lc(o.den_, o.num_);
}

RationalFn RationalFn::pow(int e) const {
  if (e < 0) return RationalFn(1) / pow(-e);
  return make_normalized_lc(num_.pow(static_cast<unsigned>(e)), den_.pow(static_cast<unsigned>(e)));
}

RationalFn RationalFn::diff(Var v) const {
  if (den_.is_constant()) return RationalFn(Raw{}, num_.diff(v), den_);
  Poly dd = den_.diff(v);
  Poly dn = num_.diff(v);
  if (dd.is_zero()) return RationalFn(dn, den_);
  // (n/d)' = (n'd - nd')/d^2; cancel against d first to keep the gcd small.
  Poly top = dn * den_ - num_ * dd;
  if (top.is_zero()) return RationalFn();
  Poly g = gcd(top, den_);
  Poly d1 = den_;
  if (!g.is_constant()) {
    top = *top.divide_exact(g);
    d1 = *d1.divide_exact(g);
  }
  return RationalFn(top, d1 * den_);
}

Rational RationalFn::eval(const Assignment& at) const {
  Rational d = den_.eval(at);
  if (sgn(d) == 0) throw PoleAtPoint("denominator vanishes at evaluation point");
  return num_.eval(at) / d;
}

RationalFn RationalFn::partial_eval(const Assignment& at) const {
  Poly d = den_.partial_eval(at);
  if (d.is_zero()) throw PoleAtPoint("denominator vanishes at evaluation point");
  return RationalFn(num_.partial_eval(at), d);
}

RationalFn RationalFn::substitute(const std::map<Var, RationalFn>& subs) const {
  auto apply = [&](const Poly& p) {
    RationalFn acc;
    for (const auto& t : p.terms()) {
      RationalFn term(Poly::monomial(Monomial{}, t.coef));
      Monomial rest;
      for (const auto& f : t.mono.factors()) {
        auto it = subs.find(Var{f.var});
        if (it == subs.end()) {
          rest = rest * Monomial::of(Var{f.var}, f.exp);
        } else {
          term *= it->second.pow(static_cast<int>(f.exp));
        }
      }
      acc += term * RationalFn(Poly::monomial(rest, Rational(1)));
    }
    return acc;
  };
  return apply(num_) / apply(den_);
}

std::vector<Var> RationalFn::variables() const {
  auto a = num_.variables();
  auto b = den_.variables();
  std::vector<Var> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::string RationalFn::to_string() const {
  if (den_.is_constant()) {
    if (num_.size() <= 1 || den_.constant_value() == 1) return num_.to_string();
  }
  std::string n = num_.to_string();
  std::string d = den_.to_string();
  if (num_.size() > 1) n = "(" + n + ")";
  if (den_.size() > 1 || !den_.leading().mono.is_one() || den_.leading().coef != 1) d = "(" + d + ")";
  return n + "/" + d;
}

}  // namespace cwb::sym
