#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "eigenbound/matrix.hpp"
#include "eigenbound/spectral.hpp"

namespace eigenbound {

// Scalar statistics every radius formula consumes.
struct BoundInputs {
  std::size_t n = 0;
  Complex trace;
  double frob_sq = 0.0;  // ||A||_F^2
  double q = 0.0;        // ||A||^2 - |tr A|^2 / n, clamped at 0
  double delta = 0.0;    // commutator defect

  Complex center() const { return trace / static_cast<double>(n); }
};

enum class DiscSource { theorem1, theorem2_re, theorem2_im, classical };

std::string_view to_string(DiscSource s);

struct Disc {
  Complex center;
  double radius = 0.0;
  DiscSource source = DiscSource::theorem1;
  std::optional<std::size_t> t_used;
};

struct Interval {
  double lower = 0.0;
  double upper = 0.0;
  double width() const { return upper - lower; }
};

struct DerivationProbe {
  Complex lambda;
  double s = 0.0;      // |lambda - tr/n|^2
  double sigma = 0.0;  // n|lambda|^2 - lambda tr(A*) - conj(lambda) tr(A)
  double sigma_imag_leak = 0.0;
};

struct ShiftIdentity {
  // ||lambda I - A||^2 - (n s + q)
  double gap_sq_norm = 0.0;
  // |tr(lambda I - A)|^2 - n^2 s
  double gap_trace = 0.0;
  DerivationProbe probe;
};

// Throws Error if q comes out below -1e-12 * ||A||^2.
BoundInputs bound_inputs(const DenseMatrix& a);

// Trace-centered disc for an eigenvalue of geometric multiplicity t. The
// inner discriminant is clamped to zero inside 1e-10*max(q^2, 1); beyond
// that DiscriminantError is thrown.
Disc theorem1_radius(const BoundInputs& inp, std::size_t t);

// sqrt((n - t) / (n t) * q), the normal-matrix radius.
Disc normal_case_radius(const BoundInputs& inp, std::size_t t,
                        DiscSource source = DiscSource::theorem2_re);

struct HermitianDiscs {
  Disc real_part;
  Disc imag_part;
};

HermitianDiscs theorem2_discs(const DenseMatrix& a, std::size_t t_re, std::size_t t_im);

// |tr A|/n <= |lambda|_max <= |tr A|/n + sqrt((n-1)/n q)
Interval classical_interval(const BoundInputs& inp);

// sqrt(||A||^4 - delta) - sum |lambda_j|^2
double lemma1_gap(const BoundInputs& inp, const Spectrum& spec);

// rank * sqrt(||A||^4 - delta) - |tr A|^2
double lemma2_gap(const BoundInputs& inp, const RankEstimate& rank);

ShiftIdentity shift_identity_gap(const DenseMatrix& a, Complex lambda);

struct ClusterComparison {
  Complex representative;
  std::size_t cluster_size = 0;
  std::size_t t = 0;
  Disc theorem1;
  double envelope_radius = 0.0;  // sqrt((n-t)/(n t) q)
  Interval classical;
  // Largest |lambda - tr/n| over the cluster's members.
  double actual_distance = 0.0;
  double theorem1_slack = 0.0;  // radius - distance
  double envelope_slack = 0.0;
  // theorem1 radius / classical width; only for t == 1 and nonzero width.
  std::optional<double> sharpness_ratio;
};

struct ComparisonInput {
  MultiplicityEstimate multiplicity;
  std::size_t cluster_size = 1;
  double actual_distance = 0.0;
};

std::vector<ClusterComparison> compare_bounds(const DenseMatrix& a,
                                              const std::vector<ComparisonInput>& clusters);

}  // namespace eigenbound
