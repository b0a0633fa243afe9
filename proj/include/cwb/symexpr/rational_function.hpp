#pragma once

#include <string>

#include "cwb/symexpr/polynomial.hpp"

namespace cwb::sym {

class DivisionByZeroFn : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class PoleAtPoint : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Quotient of polynomials kept in canonical form: numerator and denominator
/// coprime, denominator with graded-lex leading coefficient 1.
class RationalFn {
 public:
  RationalFn() : den_(1) {}
  RationalFn(const Rational& c) : num_(c), den_(1) {}  // NOLINT(google-explicit-constructor)
  RationalFn(long c) : RationalFn(Rational(c)) {}     // NOLINT(google-explicit-constructor)
  RationalFn(const Poly& p) : num_(p), den_(1) {}     // NOLINT(google-explicit-constructor)
  RationalFn(const Poly& num, const Poly& den);

  static RationalFn var(Var v) { return RationalFn(Poly::var(v)); }
  static RationalFn var(std::string_view name) { return var(Variables::intern(name)); }

  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return den_.is_constant(); }
  bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
  Rational constant_value() const { return num_.constant_value() / den_.constant_value(); }

  RationalFn operator-() const;
  RationalFn operator+(const RationalFn& o) const;
  RationalFn operator-(const RationalFn& o) const;
  RationalFn operator*(const RationalFn& o) const;
  RationalFn operator/(const RationalFn& o) const;
  RationalFn& operator+=(const RationalFn& o) { return *this = *this + o; }
  RationalFn& operator-=(const RationalFn& o) { return *this = *this - o; }
  RationalFn& operator*=(const RationalFn& o) { return *this = *this * o; }
  RationalFn& operator/=(const RationalFn& o) { return *this = *this / o; }
  RationalFn pow(int e) const;

  RationalFn diff(Var v) const;
  Rational eval(const Assignment& at) const;
  RationalFn partial_eval(const Assignment& at) const;
  RationalFn substitute(const std::map<Var, RationalFn>& subs) const;
  std::vector<Var> variables() const;

  friend bool operator==(const RationalFn& a, const RationalFn& b) { return a.num_ == b.num_ && a.den_ == b.den_; }
  friend bool operator!=(const RationalFn& a, const RationalFn& b) { return !(a == b); }

  /// Re-runs canonicalization; a fixed point on canonical values.
  RationalFn normalized() const { return RationalFn(num_, den_); }

  std::string to_string() const;

 private:
  struct Raw {};
  RationalFn(Raw, Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) {}
  static RationalFn make_normalized_lc(Poly num, Poly den);

  Poly num_;
  Poly den_;
};

inline bool is_zero(const RationalFn& f) { return f.is_zero(); }
inline bool is_zero(const Rational& r) { return sgn(r) == 0; }

}  // namespace cwb::sym
