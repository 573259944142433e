#include "cforge/linalg.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "cforge/errors.hpp"

namespace cforge {

namespace {

Eigen::MatrixXd to_eigen(const Matrix<double>& a) {
  Eigen::MatrixXd m(a.rows(), a.cols());
  for (int r = 0; r < a.rows(); ++r)
    for (int c = 0; c < a.cols(); ++c) m(r, c) = a(r, c);
  return m;
}

void require_square(int rows, int cols) {
  if (rows != cols) throw Error(ErrorCode::DimensionMismatch, "matrix is not square");
}

// In-place exact elimination to upper-triangular form; returns the sign flips.
// Returns false when a column has no nonzero pivot.
bool eliminate(Matrix<Rational>& a, std::vector<Rational>* b, int& swaps) {
  const int n = a.rows();
  swaps = 0;
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    while (pivot < n && sgn(a(pivot, col)) == 0) ++pivot;
    if (pivot == n) return false;
    if (pivot != col) {
      for (int c = col; c < n; ++c) std::swap(a(pivot, c), a(col, c));
      if (b) std::swap((*b)[pivot], (*b)[col]);
      ++swaps;
    }
    for (int r = col + 1; r < n; ++r) {
      if (sgn(a(r, col)) == 0) continue;
      Rational f = a(r, col) / a(col, col);
      for (int c = col; c < n; ++c) a(r, c) -= f * a(col, c);
      if (b) (*b)[r] -= f * (*b)[col];
    }
  }
  return true;
}

}  // namespace

template <Scalar T>
Matrix<T> Matrix<T>::without(int k) const {
  Matrix<T> m(rows_ - 1, cols_ - 1);
  for (int r = 0, rr = 0; r < rows_; ++r) {
    if (r == k) continue;
    for (int c = 0, cc = 0; c < cols_; ++c) {
      if (c == k) continue;
      m(rr, cc++) = (*this)(r, c);
    }
    ++rr;
  }
  return m;
}

template <>
std::vector<double> solve_linear(Matrix<double> a, std::vector<double> b) {
  require_square(a.rows(), a.cols());
  if (static_cast<int>(b.size()) != a.rows())
    throw Error(ErrorCode::DimensionMismatch, "right-hand side length");
  if (a.rows() == 0) return {};
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(to_eigen(a));
  if (!(lu.rcond() > 1e-14)) throw Error(ErrorCode::SolveFailure, "matrix is numerically singular");
  Eigen::VectorXd x = lu.solve(Eigen::Map<Eigen::VectorXd>(b.data(), static_cast<Eigen::Index>(b.size())));
  std::vector<double> out(x.data(), x.data() + x.size());
  for (double v : out)
    if (!std::isfinite(v)) throw Error(ErrorCode::SolveFailure, "non-finite solution");
  return out;
}

template <>
std::vector<Rational> solve_linear(Matrix<Rational> a, std::vector<Rational> b) {
  require_square(a.rows(), a.cols());
  if (static_cast<int>(b.size()) != a.rows())
    throw Error(ErrorCode::DimensionMismatch, "right-hand side length");
  const int n = a.rows();
  int swaps = 0;
  if (!eliminate(a, &b, swaps)) throw Error(ErrorCode::SolveFailure, "matrix is singular");
  std::vector<Rational> x(static_cast<std::size_t>(n));
  for (int r = n - 1; r >= 0; --r) {
    Rational acc = b[r];
    for (int c = r + 1; c < n; ++c) acc -= a(r, c) * x[c];
    x[r] = acc / a(r, r);
  }
  return x;
}

template <>
double determinant(Matrix<double> a) {
  require_square(a.rows(), a.cols());
  if (a.rows() == 0) return 1.0;
  return Eigen::PartialPivLU<Eigen::MatrixXd>(to_eigen(a)).determinant();
}

template <>
Rational determinant(Matrix<Rational> a) {
  require_square(a.rows(), a.cols());
  int swaps = 0;
  if (!eliminate(a, nullptr, swaps)) return Rational(0);
  Rational det = swaps % 2 ? Rational(-1) : Rational(1);
  for (int k = 0; k < a.rows(); ++k) det *= a(k, k);
  return det;
}

template <>
double log_determinant(const Matrix<double>& a) {
  require_square(a.rows(), a.cols());
  if (a.rows() == 0) return 0.0;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(to_eigen(a));
  const Eigen::MatrixXd& u = lu.matrixLU();
  double log_abs = 0.0;
  int sign = lu.permutationP().determinant();
  for (Eigen::Index k = 0; k < u.rows(); ++k) {
    double p = u(k, k);
    if (p == 0.0 || !std::isfinite(p)) throw Error(ErrorCode::SolveFailure, "zero pivot in log-determinant");
    if (p < 0) sign = -sign;
    log_abs += std::log(std::fabs(p));
  }
  if (sign < 0) throw Error(ErrorCode::SolveFailure, "determinant is negative");
  return log_abs;
}

template <>
double log_determinant(const Matrix<Rational>& a) {
  Rational det = determinant(a);
  if (sgn(det) <= 0) throw Error(ErrorCode::SolveFailure, "determinant is not positive");
  return log_of(det);
}

template class Matrix<double>;
template class Matrix<Rational>;

}  // namespace cforge
