#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "eigenbound/error.hpp"

namespace eigenbound {

using Complex = std::complex<double>;

// Square complex matrix, row-major, finite entries only.
class DenseMatrix {
 public:
  // n x n zero matrix.
  explicit DenseMatrix(std::size_t n);
  // Takes ownership of n*n row-major entries. Throws DimensionError on a
  // size mismatch or n == 0, NonFiniteError on NaN/Inf.
  DenseMatrix(std::size_t n, std::vector<Complex> entries);
  DenseMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static DenseMatrix identity(std::size_t n);
  static DenseMatrix diagonal(std::span<const Complex> values);

  std::size_t n() const noexcept { return n_; }

  const Complex& operator()(std::size_t i, std::size_t j) const noexcept {
    return data_[i * n_ + j];
  }
  // Mutable access does not re-check finiteness; callers that write
  // computed values are trusted.
  Complex& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * n_ + j]; }

  std::span<const Complex> entries() const noexcept { return data_; }

  double max_abs_entry() const noexcept;

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t n_;
  std::vector<Complex> data_;
};

DenseMatrix adjoint(const DenseMatrix& a);
DenseMatrix conjugate(const DenseMatrix& a);
Complex trace(const DenseMatrix& a);
double frobenius_norm_sq(const DenseMatrix& a);
DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b);
// alpha*a + beta*b, entrywise.
DenseMatrix linear_combine(Complex alpha, const DenseMatrix& a, Complex beta, const DenseMatrix& b);
// lambda*I - a
DenseMatrix shift(const DenseMatrix& a, Complex lambda);

// (A + A*) / 2. Exactly Hermitian in floating point.
DenseMatrix hermitian_real_part(const DenseMatrix& a);
// (A - A*) / (2i). Exactly Hermitian in floating point.
DenseMatrix hermitian_imag_part(const DenseMatrix& a);

// ||AA* - A*A||_F^2 / 2, via explicit products.
double commutator_defect(const DenseMatrix& a);

// max_ij |a_ij - b_ij|
double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b);

}  // namespace eigenbound
