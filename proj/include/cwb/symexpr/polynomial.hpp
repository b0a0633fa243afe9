#pragma once

#include <gmpxx.h>

#include <boost/container/small_vector.hpp>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cwb/symexpr/variables.hpp"

namespace cwb::sym {

using Rational = mpq_class;
using Integer = mpz_class;

Rational make_rational(long num, long den = 1);

/// Assignment of exact rational values to variables.
using Assignment = std::map<Var, Rational>;

class UnknownVariable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a variable with declared coordinate dependence is
/// differentiated past its registered jet.
class DependencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Monomial {
 public:
  struct Factor {
    std::uint32_t var;
    std::uint32_t exp;
    friend bool operator==(const Factor&, const Factor&) = default;
  };
  using Factors = boost::container::small_vector<Factor, 4>;

  Monomial() = default;
  static Monomial of(Var v, std::uint32_t exp = 1);

  const Factors& factors() const { return f_; }
  std::uint32_t degree() const { return deg_; }
  std::uint32_t exponent(Var v) const;
  bool is_one() const { return f_.empty(); }

  Monomial operator*(const Monomial& o) const;
  // Returns nullopt if `o` does not divide *this.
  std::optional<Monomial> divide(const Monomial& o) const;
  Monomial without(Var v) const;
  Monomial with_exponent(Var v, std::uint32_t e) const;
  static Monomial gcd(const Monomial& a, const Monomial& b);

  /// Graded lexicographic comparison: -1, 0, +1.
  static int compare(const Monomial& a, const Monomial& b);
  friend bool operator==(const Monomial& a, const Monomial& b) {
    return a.deg_ == b.deg_ && a.f_ == b.f_;
  }
  std::size_t hash() const;

  std::string to_string() const;

 private:
  Factors f_;
  std::uint32_t deg_ = 0;
  friend class Poly;
};

/// Sparse multivariate polynomial with rational coefficients. Terms are kept
/// sorted by decreasing graded-lex order with no zero coefficients.
class Poly {
 public:
  struct Term {
    Monomial mono;
    Rational coef;
  };

  Poly() = default;
  Poly(const Rational& c);  // NOLINT(google-explicit-constructor)
  Poly(long c) : Poly(Rational(c)) {}  // NOLINT(google-explicit-constructor)
  static Poly var(Var v);
  static Poly monomial(const Monomial& m, const Rational& c);
  static Poly from_terms(std::vector<Term> terms);  // sorts and combines

  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].mono.is_one()); }
  Rational constant_value() const;  // requires is_constant()
  const Term& leading() const { return terms_.front(); }
  std::uint32_t total_degree() const;
  std::uint32_t degree(Var v) const;
  std::vector<Var> variables() const;
  bool contains(Var v) const;

  Poly operator-() const;
  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator*(const Poly& o) const;
  Poly& operator+=(const Poly& o) { return *this = *this + o; }
  Poly& operator-=(const Poly& o) { return *this = *this - o; }
  Poly& operator*=(const Poly& o) { return *this = *this * o; }
  Poly scaled(const Rational& c) const;
  Poly times_monomial(const Monomial& m, const Rational& c) const;
  Poly pow(unsigned e) const;

  /// Total derivative with respect to `v`, honouring registered dependencies.
  Poly diff(Var v) const;
  /// Partial derivative treating every other variable as constant.
  Poly partial(Var v) const;

  Rational eval(const Assignment& at) const;
  /// Substitutes the assigned variables, keeping the others symbolic.
  Poly partial_eval(const Assignment& at) const;
  /// Substitutes polynomials for variables.
  Poly substitute(const std::map<Var, Poly>& subs) const;

  /// Exact division; nullopt if `d` does not divide *this.
  std::optional<Poly> divide_exact(const Poly& d) const;

  /// Groups terms by their monomial in `vars`; the map values are the
  /// coefficient polynomials in the remaining variables.
  std::vector<std::pair<Monomial, Poly>> collect(const std::vector<Var>& vars) const;

  friend bool operator==(const Poly& a, const Poly& b);
  friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }
  std::size_t hash() const;

  std::string to_string() const;

 private:
  std::vector<Term> terms_;
};

}  // namespace cwb::sym
