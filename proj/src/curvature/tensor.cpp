#include "cwb/curvature/tensor.hpp"

#include <stdexcept>

namespace cwb::curv {

TensorField::TensorField(std::size_t n, std::vector<Pos> slots) : n_(n), slots_(std::move(slots)) {
  std::size_t total = 1;
  for (std::size_t k = 0; k < slots_.size(); ++k) total *= n_;
  c_.assign(total, RationalFn());
}

std::size_t TensorField::offset(const std::size_t* idx, std::size_t len) const {
  if (len != slots_.size()) throw std::invalid_argument("tensor index arity mismatch");
  std::size_t off = 0;
  for (std::size_t k = 0; k < len; ++k) off = off * n_ + idx[k];
  return off;
}

std::vector<std::size_t> TensorField::unflatten(std::size_t flat) const {
  std::vector<std::size_t> idx(slots_.size());
  for (std::size_t k = slots_.size(); k-- > 0;) {
    idx[k] = flat % n_;
    flat /= n_;
  }
  return idx;
}

bool TensorField::is_zero() const {
  for (const auto& x : c_)
    if (!x.is_zero()) return false;
  return true;
}

std::vector<Rational> TensorField::evaluate(const sym::Assignment& at) const {
  std::vector<Rational> out;
  out.reserve(c_.size());
  for (const auto& x : c_) out.push_back(x.is_zero() ? Rational(0) : x.eval(at));
  return out;
}

TensorField TensorField::operator+(const TensorField& o) const {
  if (o.slots_ != slots_ || o.n_ != n_) throw std::invalid_argument("tensor shape mismatch");
  TensorField r = *this;
  for (std::size_t k = 0; k < c_.size(); ++k) r.c_[k] += o.c_[k];
  return r;
}

TensorField TensorField::operator-(const TensorField& o) const {
  if (o.slots_ != slots_ || o.n_ != n_) throw std::invalid_argument("tensor shape mismatch");
  TensorField r = *this;
  for (std::size_t k = 0; k < c_.size(); ++k) r.c_[k] -= o.c_[k];
  return r;
}

TensorField TensorField::scaled(const RationalFn& f) const {
  TensorField r = *this;
  for (auto& x : r.c_)
    if (!x.is_zero()) x *= f;
  return r;
}

TensorField TensorField::from_matrix(const FnMatrix& m, Pos a, Pos b) {
  TensorField t(m.rows(), {a, b});
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) t.at({i, j}) = m(i, j);
  return t;
}

FnMatrix TensorField::to_matrix() const {
  if (rank() != 2) throw std::invalid_argument("to_matrix requires a rank-2 tensor");
  FnMatrix m(n_, n_);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) m(i, j) = at({i, j});
  return m;
}

}  // namespace cwb::curv
