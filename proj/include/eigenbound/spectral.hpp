#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "eigenbound/matrix.hpp"

namespace eigenbound {

// A = U* R U with U unitary and R upper triangular.
struct SchurForm {
  DenseMatrix unitary;
  DenseMatrix upper_triangular;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, SchurForm partial)
      : Error(what), partial_(std::move(partial)) {}
  // Quasi-triangular state at the moment iteration stopped.
  const SchurForm& partial() const noexcept { return partial_; }

 private:
  SchurForm partial_;
};

// Lambda is farther than the cluster tolerance from every oracle eigenvalue.
class NotAnEigenvalueError : public Error {
 public:
  using Error::Error;
};

// Lambda matches an oracle eigenvalue, but lambda*I - A has full numerical
// rank at the requested tolerance.
class RankToleranceError : public Error {
 public:
  using Error::Error;
};

inline constexpr double kDeflationEps = 1e-14;
inline constexpr double kDefaultRankTol = 1e-10;

struct Spectrum {
  std::vector<Complex> eigenvalues;
  // Backward-error estimate per eigenvalue.
  std::vector<double> residuals;
  // Eigenvalues with modulus above the zero tolerance (k in the rank lemma).
  std::size_t nonzero_count = 0;
  // Filled by cluster_eigenvalues; all zeros until then.
  std::vector<std::size_t> cluster_ids;
  double zero_tolerance = 0.0;
};

struct RankEstimate {
  std::size_t rank = 0;
  std::vector<double> singular_values;  // descending
  double tolerance_used = 0.0;
};

struct MultiplicityEstimate {
  Complex eigenvalue;
  std::size_t t = 0;
  RankEstimate rank_of_shift;
};

struct Cluster {
  Complex representative;  // centroid
  std::vector<std::size_t> members;
};

// max_iters: QR sweeps allowed per eigenvalue; 0 selects 40*n.
SchurForm schur_decompose(const DenseMatrix& a, std::size_t max_iters = 0);

Spectrum eigenvalues(const DenseMatrix& a, std::size_t max_iters = 0);

std::vector<double> singular_values(const DenseMatrix& a);

RankEstimate numerical_rank(const DenseMatrix& a, double rel_tol = kDefaultRankTol);

// cluster_tol defaults to 1e-7 * (1 + ||A||); pass it explicitly to
// decide between NotAnEigenvalueError and RankToleranceError when t == 0.
MultiplicityEstimate geometric_multiplicity(const DenseMatrix& a, Complex lambda,
                                            double rel_tol = kDefaultRankTol,
                                            std::optional<double> cluster_tol = std::nullopt);

double default_cluster_tolerance(const DenseMatrix& a);

// Single-linkage clustering in the complex plane. Cluster ids are assigned in
// order of first appearance.
Spectrum cluster_eigenvalues(Spectrum spec, double cluster_tol);

std::vector<Cluster> clusters_of(const Spectrum& spec);

}  // namespace eigenbound
