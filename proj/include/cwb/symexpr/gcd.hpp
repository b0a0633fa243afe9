#pragma once

#include "cwb/symexpr/polynomial.hpp"

namespace cwb::sym {

/// Greatest common divisor over Q[x...], normalized to leading coefficient 1
/// in graded-lex order. gcd(0, 0) = 0.
Poly gcd(const Poly& a, const Poly& b);

/// Reference Euclidean gcd for univariate inputs; used as a test oracle.
Poly univariate_gcd_euclid(const Poly& a, const Poly& b, Var x);

/// Scales `p` so its leading coefficient is 1.
Poly monic(const Poly& p);

}  // namespace cwb::sym
