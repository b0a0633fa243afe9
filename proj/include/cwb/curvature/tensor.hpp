#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

#include "cwb/symexpr/matrix.hpp"

namespace cwb::curv {

using sym::FnMatrix;
using sym::QMatrix;
using sym::Rational;
using sym::RationalFn;

enum class Pos : char { Up, Down };

/// Components of a tensor field in chart coordinates, stored row-major with
/// index slot 0 most significant.
class TensorField {
 public:
  TensorField() = default;
  TensorField(std::size_t n, std::vector<Pos> slots);

  std::size_t n() const { return n_; }
  std::size_t rank() const { return slots_.size(); }
  const std::vector<Pos>& slots() const { return slots_; }
  std::size_t size() const { return c_.size(); }

  RationalFn& operator[](std::size_t flat) { return c_[flat]; }
  const RationalFn& operator[](std::size_t flat) const { return c_[flat]; }
  RationalFn& at(std::initializer_list<std::size_t> idx) { return c_[offset(idx.begin(), idx.size())]; }
  const RationalFn& at(std::initializer_list<std::size_t> idx) const { return c_[offset(idx.begin(), idx.size())]; }
  RationalFn& at(const std::vector<std::size_t>& idx) { return c_[offset(idx.data(), idx.size())]; }
  const RationalFn& at(const std::vector<std::size_t>& idx) const { return c_[offset(idx.data(), idx.size())]; }

  std::vector<std::size_t> unflatten(std::size_t flat) const;
  bool is_zero() const;
  std::vector<Rational> evaluate(const sym::Assignment& at) const;

  TensorField operator+(const TensorField& o) const;
  TensorField operator-(const TensorField& o) const;
  TensorField scaled(const RationalFn& f) const;

  friend bool operator==(const TensorField& a, const TensorField& b) {
    return a.n_ == b.n_ && a.slots_ == b.slots_ && a.c_ == b.c_;
  }

  static TensorField from_matrix(const FnMatrix& m, Pos a, Pos b);
  FnMatrix to_matrix() const;  // rank 2 only

 private:
  std::size_t offset(const std::size_t* idx, std::size_t len) const;
  std::size_t n_ = 0;
  std::vector<Pos> slots_;
  std::vector<RationalFn> c_;
};

}  // namespace cwb::curv
