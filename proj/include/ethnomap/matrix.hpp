#pragma once

#include <cstddef>
#include <vector>

namespace ethnomap {

// Dense row-major n x n matrix.
template <typename T>
class SquareMatrix {
 public:
  SquareMatrix() = default;
  explicit SquareMatrix(std::size_t n, T fill = T{}) : n_(n), data_(n * n, fill) {}

  std::size_t size() const noexcept { return n_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }

  const T* row(std::size_t i) const { return data_.data() + i * n_; }

  // Writes v at (i, j) and (j, i).
  void set_symmetric(std::size_t i, std::size_t j, T v) {
    (*this)(i, j) = v;
    (*this)(j, i) = v;
  }

  bool operator==(const SquareMatrix&) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<T> data_;
};

}  // namespace ethnomap
