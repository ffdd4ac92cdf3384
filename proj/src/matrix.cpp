#include "eigenbound/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace eigenbound {

namespace {

void require_same_size(const DenseMatrix& a, const DenseMatrix& b, const char* op) {
  if (a.n() != b.n()) {
    throw DimensionError(std::string(op) + ": dimension mismatch (" + std::to_string(a.n()) +
                         " vs " + std::to_string(b.n()) + ")");
  }
}

}  // namespace

DenseMatrix::DenseMatrix(std::size_t n) : n_(n), data_(n * n) {
  if (n == 0) throw DimensionError("matrix dimension must be positive");
}

DenseMatrix::DenseMatrix(std::size_t n, std::vector<Complex> entries)
    : n_(n), data_(std::move(entries)) {
  if (n == 0) throw DimensionError("matrix dimension must be positive");
  if (data_.size() != n * n) {
    throw DimensionError("expected " + std::to_string(n * n) + " entries, got " +
                         std::to_string(data_.size()));
  }
  for (std::size_t k = 0; k < data_.size(); ++k) {
    if (!std::isfinite(data_[k].real()) || !std::isfinite(data_[k].imag())) {
      throw NonFiniteError("non-finite entry at (" + std::to_string(k / n) + ", " +
                           std::to_string(k % n) + ")");
    }
  }
}

namespace {

std::vector<Complex> flatten(std::initializer_list<std::initializer_list<Complex>> rows) {
  std::vector<Complex> out;
  out.reserve(rows.size() * rows.size());
  for (const auto& row : rows) {
    if (row.size() != rows.size()) throw DimensionError("literal matrix is not square");
    out.insert(out.end(), row.begin(), row.end());
  }
  return out;
}

}  // namespace

DenseMatrix::DenseMatrix(std::initializer_list<std::initializer_list<Complex>> rows)
    : DenseMatrix(rows.size(), flatten(rows)) {}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::diagonal(std::span<const Complex> values) {
  std::vector<Complex> entries(values.size() * values.size());
  for (std::size_t i = 0; i < values.size(); ++i) entries[i * values.size() + i] = values[i];
  return DenseMatrix(values.size(), std::move(entries));
}

double DenseMatrix::max_abs_entry() const noexcept {
  double m = 0.0;
  for (const auto& z : data_) m = std::max(m, std::abs(z));
  return m;
}

DenseMatrix adjoint(const DenseMatrix& a) {
  const std::size_t n = a.n();
  DenseMatrix out(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out(i, j) = std::conj(a(j, i));
  return out;
}

DenseMatrix conjugate(const DenseMatrix& a) {
  const std::size_t n = a.n();
  DenseMatrix out(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out(i, j) = std::conj(a(i, j));
  return out;
}

Complex trace(const DenseMatrix& a) {
  Complex sum{0.0, 0.0};
  for (std::size_t i = 0; i < a.n(); ++i) sum += a(i, i);
  return sum;
}

double frobenius_norm_sq(const DenseMatrix& a) {
  double sum = 0.0;
  for (const auto& z : a.entries()) sum += std::norm(z);
  return sum;
}

DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b) {
  require_same_size(a, b, "multiply");
  const std::size_t n = a.n();
  DenseMatrix out(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex{}) continue;
      for (std::size_t j = 0; j < n; ++j) out(i, j) += aik * b(k, j);
    }
  }
  return out;
}

DenseMatrix linear_combine(Complex alpha, const DenseMatrix& a, Complex beta, const DenseMatrix& b) {
  require_same_size(a, b, "linear_combine");
  const std::size_t n = a.n();
  DenseMatrix out(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out(i, j) = alpha * a(i, j) + beta * b(i, j);
  return out;
}

DenseMatrix shift(const DenseMatrix& a, Complex lambda) {
  const std::size_t n = a.n();
  DenseMatrix out(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out(i, j) = -a(i, j);
  for (std::size_t i = 0; i < n; ++i) out(i, i) += lambda;
  return out;
}

DenseMatrix hermitian_real_part(const DenseMatrix& a) {
  const std::size_t n = a.n();
  DenseMatrix out(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out(i, j) = 0.5 * (a(i, j) + std::conj(a(j, i)));
  return out;
}

DenseMatrix hermitian_imag_part(const DenseMatrix& a) {
  const std::size_t n = a.n();
  DenseMatrix out(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      // x / (2i) = (Im x / 2) - i (Re x / 2); written out so that the
      // (i,j) and (j,i) results are exact conjugates.
      const Complex x = a(i, j) - std::conj(a(j, i));
      out(i, j) = Complex{0.5 * x.imag(), -0.5 * x.real()};
    }
  }
  return out;
}

double commutator_defect(const DenseMatrix& a) {
  const DenseMatrix ah = adjoint(a);
  const DenseMatrix c = linear_combine(1.0, multiply(a, ah), -1.0, multiply(ah, a));
  return 0.5 * frobenius_norm_sq(c);
}

double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b) {
  require_same_size(a, b, "max_abs_diff");
  double m = 0.0;
  const auto ea = a.entries();
  const auto eb = b.entries();
  for (std::size_t k = 0; k < ea.size(); ++k) m = std::max(m, std::abs(ea[k] - eb[k]));
  return m;
}

}  // namespace eigenbound
