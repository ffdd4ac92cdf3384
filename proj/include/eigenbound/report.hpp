#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "eigenbound/bounds.hpp"
#include "eigenbound/data_io.hpp"
#include "eigenbound/spectral.hpp"

namespace eigenbound {

// Which multiplicity feeds the radius formulas for each cluster.
enum class TPolicy { oracle, one, cluster_size };

std::string_view to_string(TPolicy p);
TPolicy parse_t_policy(std::string_view text);

struct AnalyzeOptions {
  TPolicy t_policy = TPolicy::oracle;
  double rank_tol = kDefaultRankTol;
  // Defaults to 1e-7 * (1 + ||A||).
  std::optional<double> verify_tol;
  // Defaults to 1e-7 * (1 + ||A||).
  std::optional<double> cluster_tol;
  std::size_t shift_probes = 100;
  std::size_t delta_probes = 10;
  std::uint64_t probe_seed = 0;
  bool timestamp = true;
};

// One audited inequality: pass <=> slack >= -tolerance.
struct InequalityRecord {
  std::string name;
  std::optional<std::size_t> cluster;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct ClusterRow {
  Complex representative;
  std::size_t cluster_size = 0;
  std::size_t t = 0;
  std::optional<std::size_t> t_oracle;
  double rank_tolerance_used = 0.0;
  // A singular value of lambda*I - A lies within a factor 10 of the rank
  // tolerance, so t is uncertain.
  bool rank_borderline = false;
  Disc theorem1;
  double envelope_radius = 0.0;
  double actual_distance = 0.0;
  double slack = 0.0;
  std::optional<double> sharpness_ratio;
};

struct HermitianPartReport {
  std::string label;  // "real" or "imag"
  BoundInputs inputs;
  std::vector<Complex> eigenvalues;
  struct Row {
    Complex representative;
    std::size_t cluster_size = 0;
    std::size_t t = 0;
    Disc disc;
    double actual_distance = 0.0;
    double slack = 0.0;
  };
  std::vector<Row> rows;
};

struct ClassicalReport {
  Interval interval;
  double max_modulus = 0.0;
  double lower_slack = 0.0;
  double upper_slack = 0.0;
  std::optional<double> theorem1_t1_radius;
};

struct LemmaReport {
  double lemma1_gap = 0.0;
  double lemma2_gap = 0.0;
  std::size_t rank = 0;
  double rank_tolerance_used = 0.0;
  double shift_identity_max_gap = 0.0;
  double shift_trace_max_gap = 0.0;
  double delta_shift_max_diff = 0.0;
};

struct BoundReport {
  std::string source;
  BoundInputs inputs;
  double frob_norm = 0.0;
  double verify_tol = 0.0;
  TPolicy t_policy = TPolicy::oracle;
  Spectrum oracle;
  std::vector<ClusterRow> per_cluster;
  HermitianPartReport real_part;
  HermitianPartReport imag_part;
  ClassicalReport classical;
  LemmaReport lemmas;
  std::vector<InequalityRecord> checks;
  std::optional<std::string> generated_at;

  bool all_pass() const;
};

// Raised when a radius cannot be formed for a specific cluster.
class ClusterError : public Error {
 public:
  ClusterError(const std::string& what, std::string part, std::size_t cluster)
      : Error(what), part_(std::move(part)), cluster_(cluster) {}
  const std::string& part() const noexcept { return part_; }
  std::size_t cluster() const noexcept { return cluster_; }

 private:
  std::string part_;
  std::size_t cluster_;
};

BoundReport analyze(const DenseMatrix& a, const AnalyzeOptions& options,
                    std::string source = "matrix");

nlohmann::ordered_json to_json(const BoundReport& report);
std::string to_csv(const BoundReport& report);

// Column order for compare output; new columns are appended only.
inline constexpr std::string_view kCompareColumns =
    "trial,seed,cluster,n,t,q,delta,theorem1_radius,envelope_radius,classical_width,"
    "actual_distance,sharpness_ratio,t_policy";

struct RunOptions {
  AnalyzeOptions analyze;
  // 0 reads EIGENBOUND_THREADS, falling back to hardware concurrency.
  std::size_t threads = 0;
};

struct InequalityTally {
  std::size_t checked = 0;
  std::size_t failed = 0;
  double worst_slack = 0.0;
  double tolerance_at_worst = 0.0;
  std::optional<std::uint64_t> worst_seed;
};

struct TrialError {
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  std::string message;
};

struct VerifySummary {
  EnsembleSpec ensemble;
  std::size_t trials = 0;
  std::size_t passed_trials = 0;
  std::vector<std::pair<std::string, InequalityTally>> tallies;  // sorted by name
  std::vector<std::uint64_t> failing_seeds;
  std::vector<TrialError> errors;
  double min_delta_over_q = 0.0;
  double max_delta_over_q = 0.0;
  std::optional<std::string> generated_at;

  bool ok() const { return failing_seeds.empty() && errors.empty(); }
};

VerifySummary run_verify(const EnsembleSpec& base, std::size_t trials, const RunOptions& options);
nlohmann::ordered_json to_json(const VerifySummary& summary);

struct CompareResult {
  std::string csv;
  std::vector<TrialError> errors;
};

CompareResult run_compare(const EnsembleSpec& base, std::size_t trials, const RunOptions& options);

std::size_t thread_count_from_env();

// "%.17g"
std::string format_real(double x);

}  // namespace eigenbound
