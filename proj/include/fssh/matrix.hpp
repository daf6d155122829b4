#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace fssh {

using Complex = std::complex<double>;
using StateVector = std::vector<Complex>;

/// Dense complex matrix, row-major storage. Sized for the lattice problems in
/// this project (a few hundred rows at most); no sparse or blocked paths.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, Complex(0.0, 0.0)) {}

  static ComplexMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_ && rows_ > 0; }

  Complex& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  ComplexMatrix adjoint() const;

  /// max_ij |a_ij|
  double max_abs() const;
  /// max_ij |a_ij - conj(a_ji)| (square matrices)
  double hermiticity_defect() const;
  /// max_ij |(A^dag A - I)_ij| (square matrices)
  double unitarity_defect() const;
  bool all_finite() const;

  /// Determinant by LU with partial pivoting; intended for small blocks.
  Complex determinant() const;

  ComplexMatrix& operator+=(const ComplexMatrix& rhs);
  ComplexMatrix& operator-=(const ComplexMatrix& rhs);
  ComplexMatrix& operator*=(Complex s);

  friend ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs += rhs; }
  friend ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs -= rhs; }
  friend ComplexMatrix operator*(Complex s, ComplexMatrix m) { return m *= s; }

  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
  friend StateVector operator*(const ComplexMatrix& a, const StateVector& x);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

/// max_ij |a_ij - b_ij|
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

double norm(const StateVector& v);
StateVector normalized(StateVector v);

}  // namespace fssh
