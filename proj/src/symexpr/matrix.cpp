#include "cwb/symexpr/matrix.hpp"

namespace cwb::sym {

Inertia inertia(const QMatrix& symmetric) {
  QMatrix a = symmetric;
  const std::size_t n = a.rows();
  Inertia out;
  auto swap_index = [&](std::size_t i, std::size_t j) {
    for (std::size_t c = 0; c < n; ++c) std::swap(a(i, c), a(j, c));
    for (std::size_t r = 0; r < n; ++r) std::swap(a(r, i), a(r, j));
  };
  for (std::size_t k = 0; k < n; ++k) {
    if (sgn(a(k, k)) == 0) {
      std::size_t j = k + 1;
      while (j < n && sgn(a(j, j)) == 0) ++j;
      if (j < n) {
        swap_index(k, j);
      } else {
        j = k + 1;
        while (j < n && sgn(a(k, j)) == 0) ++j;
        if (j == n) {
          ++out.zero;
          continue;
        }
        // Congruence e_k -> e_k + e_j gives pivot 2 a(k,j).
        for (std::size_t c = 0; c < n; ++c) a(k, c) += a(j, c);
        for (std::size_t r = 0; r < n; ++r) a(r, k) += a(r, j);
      }
    }
    const Rational p = a(k, k);
    (sgn(p) > 0 ? out.positive : out.negative) += 1;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (sgn(a(i, k)) == 0) continue;
      Rational f = a(i, k) / p;
      for (std::size_t c = k + 1; c < n; ++c) a(i, c) -= f * a(k, c);
    }
    for (std::size_t i = k + 1; i < n; ++i) a(i, k) = a(k, i) = 0;
  }
  return out;
}

QMatrix evaluate(const FnMatrix& m, const Assignment& at) {
  QMatrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j).eval(at);
  return out;
}

}  // namespace cwb::sym
