#pragma once

#include <cstddef>
#include <vector>

#include "cforge/scalar.hpp"

namespace cforge {

template <Scalar T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  T& operator()(int r, int c) { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
  const T& operator()(int r, int c) const { return data_[static_cast<std::size_t>(r) * cols_ + c]; }

  // Copy with row and column k removed.
  Matrix without(int k) const;

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<T> data_;
};

// Solves a x = b. Float uses partial-pivot LU; rational uses exact Gaussian
// elimination. Throws SolveFailure on a singular system.
template <Scalar T>
std::vector<T> solve_linear(Matrix<T> a, std::vector<T> b);

template <Scalar T>
T determinant(Matrix<T> a);

// log(det a) for a matrix with positive determinant; throws SolveFailure if
// the determinant is zero or negative.
template <Scalar T>
double log_determinant(const Matrix<T>& a);

}  // namespace cforge
