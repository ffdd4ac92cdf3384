#include "eigenbound/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace eigenbound {

std::string_view to_string(DiscSource s) {
  switch (s) {
    case DiscSource::theorem1:
      return "theorem1";
    case DiscSource::theorem2_re:
      return "theorem2_re";
    case DiscSource::theorem2_im:
      return "theorem2_im";
    case DiscSource::classical:
      return "classical";
  }
  return "unknown";
}

namespace {

void check_t(const BoundInputs& inp, std::size_t t) {
  if (t < 1 || t > inp.n) {
    throw Error("multiplicity t=" + std::to_string(t) + " outside [1, " + std::to_string(inp.n) +
                "]");
  }
}

// sqrt(||A||^4 - delta), clamping tiny negative arguments.
double lemma_rhs(const BoundInputs& inp) {
  return std::sqrt(std::max(0.0, inp.frob_sq * inp.frob_sq - inp.delta));
}

}  // namespace

BoundInputs bound_inputs(const DenseMatrix& a) {
  BoundInputs inp;
  inp.n = a.n();
  inp.trace = trace(a);
  inp.frob_sq = frobenius_norm_sq(a);
  const double q = inp.frob_sq - std::norm(inp.trace) / static_cast<double>(inp.n);
  if (q < -1e-12 * inp.frob_sq) {
    throw Error("q_A = " + std::to_string(q) + " is negative beyond rounding");
  }
  inp.q = std::max(q, 0.0);
  inp.delta = commutator_defect(a);
  return inp;
}

Disc theorem1_radius(const BoundInputs& inp, std::size_t t) {
  check_t(inp, t);
  Disc d{inp.center(), 0.0, DiscSource::theorem1, t};
  if (t == inp.n) return d;

  const double n = static_cast<double>(inp.n);
  const double tt = static_cast<double>(t);
  const double nt = n - tt;
  const double weight = (2.0 * n - tt) * tt;
  double disc = inp.q * inp.q - weight / (n * n) * inp.delta;
  const double clamp = 1e-10 * std::max(inp.q * inp.q, 1.0);
  if (disc < 0.0) {
    if (disc < -clamp) {
      throw DiscriminantError("discriminant negative (" + std::to_string(disc) +
                                  "): t=" + std::to_string(t) +
                                  " inconsistent with the multiplicity premise for this matrix",
                              disc);
    }
    disc = 0.0;
  }
  const double inner = nt / n * inp.q + std::sqrt(disc);
  d.radius = std::sqrt(nt / weight) * std::sqrt(inner);
  return d;
}

Disc normal_case_radius(const BoundInputs& inp, std::size_t t, DiscSource source) {
  check_t(inp, t);
  const double n = static_cast<double>(inp.n);
  const double tt = static_cast<double>(t);
  Disc d{inp.center(), 0.0, source, t};
  d.radius = std::sqrt((n - tt) / (n * tt) * std::max(inp.q, 0.0));
  return d;
}

HermitianDiscs theorem2_discs(const DenseMatrix& a, std::size_t t_re, std::size_t t_im) {
  return HermitianDiscs{
      normal_case_radius(bound_inputs(hermitian_real_part(a)), t_re, DiscSource::theorem2_re),
      normal_case_radius(bound_inputs(hermitian_imag_part(a)), t_im, DiscSource::theorem2_im)};
}

Interval classical_interval(const BoundInputs& inp) {
  const double n = static_cast<double>(inp.n);
  Interval iv;
  iv.lower = std::abs(inp.trace) / n;
  iv.upper = iv.lower + std::sqrt((n - 1.0) / n * std::max(inp.q, 0.0));
  return iv;
}

double lemma1_gap(const BoundInputs& inp, const Spectrum& spec) {
  double sum = 0.0;
  for (const auto& ev : spec.eigenvalues) sum += std::norm(ev);
  return lemma_rhs(inp) - sum;
}

double lemma2_gap(const BoundInputs& inp, const RankEstimate& rank) {
  return static_cast<double>(rank.rank) * lemma_rhs(inp) - std::norm(inp.trace);
}

ShiftIdentity shift_identity_gap(const DenseMatrix& a, Complex lambda) {
  const BoundInputs inp = bound_inputs(a);
  const double n = static_cast<double>(inp.n);

  ShiftIdentity out;
  out.probe.lambda = lambda;
  out.probe.s = std::norm(lambda - inp.center());
  const Complex sigma = n * std::norm(lambda) - lambda * std::conj(inp.trace) -
                        std::conj(lambda) * inp.trace;
  out.probe.sigma = sigma.real();
  out.probe.sigma_imag_leak = sigma.imag();

  const DenseMatrix m = shift(a, lambda);
  out.gap_sq_norm = frobenius_norm_sq(m) - (n * out.probe.s + inp.q);
  out.gap_trace = std::norm(trace(m)) - n * n * out.probe.s;
  return out;
}

std::vector<ClusterComparison> compare_bounds(const DenseMatrix& a,
                                              const std::vector<ComparisonInput>& clusters) {
  const BoundInputs inp = bound_inputs(a);
  const Interval classical = classical_interval(inp);
  std::vector<ClusterComparison> out;
  out.reserve(clusters.size());
  for (const auto& c : clusters) {
    ClusterComparison row;
    row.representative = c.multiplicity.eigenvalue;
    row.cluster_size = c.cluster_size;
    row.t = c.multiplicity.t;
    row.theorem1 = theorem1_radius(inp, row.t);
    row.envelope_radius = normal_case_radius(inp, row.t).radius;
    row.classical = classical;
    row.actual_distance = c.actual_distance;
    row.theorem1_slack = row.theorem1.radius - row.actual_distance;
    row.envelope_slack = row.envelope_radius - row.actual_distance;
    if (row.t == 1 && classical.width() > 0.0) {
      row.sharpness_ratio = row.theorem1.radius / classical.width();
    }
    out.push_back(row);
  }
  return out;
}

}  // namespace eigenbound
