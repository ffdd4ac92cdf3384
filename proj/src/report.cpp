#include "eigenbound/report.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <limits>
#include <map>
#include <sstream>
#include <thread>

namespace eigenbound {

std::string_view to_string(TPolicy p) {
  switch (p) {
    case TPolicy::oracle:
      return "oracle";
    case TPolicy::one:
      return "1";
    case TPolicy::cluster_size:
      return "cluster-size";
  }
  return "unknown";
}

TPolicy parse_t_policy(std::string_view text) {
  if (text == "oracle") return TPolicy::oracle;
  if (text == "1" || text == "one") return TPolicy::one;
  if (text == "cluster-size" || text == "cluster_size") return TPolicy::cluster_size;
  throw Error("unknown t policy '" + std::string(text) + "' (expected oracle, 1, cluster-size)");
}

std::string format_real(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

bool BoundReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.pass; });
}

namespace {

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

InequalityRecord record(std::string name, std::optional<std::size_t> cluster, double lhs,
                        double rhs, double tolerance) {
  InequalityRecord r{std::move(name), cluster, lhs, rhs, rhs - lhs, tolerance, false};
  r.pass = r.slack >= -r.tolerance;
  return r;
}

std::size_t choose_t(TPolicy policy, std::size_t oracle_t, std::size_t cluster_size) {
  switch (policy) {
    case TPolicy::oracle:
      return oracle_t;
    case TPolicy::one:
      return 1;
    case TPolicy::cluster_size:
      return cluster_size;
  }
  return oracle_t;
}

bool borderline(const RankEstimate& r) {
  if (r.tolerance_used == 0.0) return false;
  return std::any_of(r.singular_values.begin(), r.singular_values.end(), [&](double s) {
    return s > 0.1 * r.tolerance_used && s < 10.0 * r.tolerance_used;
  });
}

double max_distance(const Spectrum& spec, const Cluster& c, Complex center) {
  double d = 0.0;
  for (auto m : c.members) d = std::max(d, std::abs(spec.eigenvalues[m] - center));
  return d;
}

MultiplicityEstimate multiplicity_or_throw(const DenseMatrix& a, const Cluster& c,
                                           const AnalyzeOptions& opt, double cluster_tol,
                                           const std::string& part, std::size_t index) {
  try {
    return geometric_multiplicity(a, c.representative, opt.rank_tol, cluster_tol);
  } catch (const Error& e) {
    throw ClusterError(part + " cluster " + std::to_string(index) + ": " + e.what(), part, index);
  }
}

HermitianPartReport analyze_part(const DenseMatrix& part, std::string label, DiscSource source,
                                 const AnalyzeOptions& opt, double verify_tol,
                                 std::vector<InequalityRecord>& checks) {
  HermitianPartReport out;
  out.label = std::move(label);
  out.inputs = bound_inputs(part);
  const double cluster_tol = opt.cluster_tol.value_or(default_cluster_tolerance(part));
  const Spectrum spec = cluster_eigenvalues(eigenvalues(part), cluster_tol);
  out.eigenvalues = spec.eigenvalues;
  const auto clusters = clusters_of(spec);
  const std::string check_name = std::string(to_string(source)) + "_containment";
  for (std::size_t k = 0; k < clusters.size(); ++k) {
    const auto& c = clusters[k];
    const auto mult = multiplicity_or_throw(part, c, opt, cluster_tol, out.label, k);
    HermitianPartReport::Row row;
    row.representative = c.representative;
    row.cluster_size = c.members.size();
    row.t = choose_t(opt.t_policy, mult.t, row.cluster_size);
    row.disc = normal_case_radius(out.inputs, row.t, source);
    row.actual_distance = max_distance(spec, c, out.inputs.center());
    row.slack = row.disc.radius - row.actual_distance;
    checks.push_back(record(check_name, k, row.actual_distance, row.disc.radius, verify_tol));
    out.rows.push_back(row);
  }
  return out;
}

}  // namespace

BoundReport analyze(const DenseMatrix& a, const AnalyzeOptions& opt, std::string source) {
  BoundReport rep;
  rep.source = std::move(source);
  rep.t_policy = opt.t_policy;
  rep.inputs = bound_inputs(a);
  const BoundInputs& inp = rep.inputs;
  const double n = static_cast<double>(inp.n);
  rep.frob_norm = std::sqrt(inp.frob_sq);
  rep.verify_tol = opt.verify_tol.value_or(1e-7 * (1.0 + rep.frob_norm));
  const double verify_tol = rep.verify_tol;
  const Complex center = inp.center();
  auto& checks = rep.checks;

  // Oracle spectrum and per-cluster discs.
  const double cluster_tol = opt.cluster_tol.value_or(default_cluster_tolerance(a));
  rep.oracle = cluster_eigenvalues(eigenvalues(a), cluster_tol);
  const auto clusters = clusters_of(rep.oracle);
  for (std::size_t k = 0; k < clusters.size(); ++k) {
    const auto& c = clusters[k];
    MultiplicityEstimate mult = multiplicity_or_throw(a, c, opt, cluster_tol, "matrix", k);
    ClusterRow row;
    row.representative = c.representative;
    row.cluster_size = c.members.size();
    row.t_oracle = mult.t;
    row.rank_tolerance_used = mult.rank_of_shift.tolerance_used;
    row.rank_borderline = borderline(mult.rank_of_shift);
    mult.t = choose_t(opt.t_policy, mult.t, row.cluster_size);
    row.t = mult.t;

    const double distance = max_distance(rep.oracle, c, center);
    ClusterComparison cmp;
    try {
      cmp = compare_bounds(a, {ComparisonInput{mult, row.cluster_size, distance}}).front();
    } catch (const DiscriminantError& e) {
      throw ClusterError("matrix cluster " + std::to_string(k) + " at lambda=(" +
                             format_real(c.representative.real()) + ", " +
                             format_real(c.representative.imag()) + "): " + e.what(),
                         "matrix", k);
    }
    row.theorem1 = cmp.theorem1;
    row.envelope_radius = cmp.envelope_radius;
    row.actual_distance = cmp.actual_distance;
    row.slack = cmp.theorem1_slack;
    row.sharpness_ratio = cmp.sharpness_ratio;

    checks.push_back(record("theorem1_containment", k, distance, row.theorem1.radius, verify_tol));
    checks.push_back(
        record("theorem1_envelope_order", k, row.theorem1.radius, row.envelope_radius, 1e-12));
    checks.push_back(record("multiplicity_consistency", k, static_cast<double>(*row.t_oracle),
                            static_cast<double>(row.cluster_size), 0.0));
    rep.per_cluster.push_back(row);
  }

  rep.real_part = analyze_part(hermitian_real_part(a), "real", DiscSource::theorem2_re, opt,
                               verify_tol, checks);
  rep.imag_part = analyze_part(hermitian_imag_part(a), "imag", DiscSource::theorem2_im, opt,
                               verify_tol, checks);

  // Classical interval on the modulus axis.
  auto& cl = rep.classical;
  cl.interval = classical_interval(inp);
  for (const auto& ev : rep.oracle.eigenvalues) cl.max_modulus = std::max(cl.max_modulus, std::abs(ev));
  cl.lower_slack = cl.max_modulus - cl.interval.lower;
  cl.upper_slack = cl.interval.upper - cl.max_modulus;
  checks.push_back(record("classical_lower", std::nullopt, cl.interval.lower, cl.max_modulus, verify_tol));
  checks.push_back(record("classical_upper", std::nullopt, cl.max_modulus, cl.interval.upper, verify_tol));
  cl.theorem1_t1_radius = theorem1_radius(inp, 1).radius;
  checks.push_back(record("modulus_projection", std::nullopt,
                          cl.interval.lower + *cl.theorem1_t1_radius, cl.interval.upper, 1e-12));

  // Lemmas and oracle sanity.
  auto& lem = rep.lemmas;
  const double lemma_tol = 1e-7 * inp.frob_sq;
  const RankEstimate rank = numerical_rank(a, opt.rank_tol);
  lem.rank = rank.rank;
  lem.rank_tolerance_used = rank.tolerance_used;
  lem.lemma1_gap = lemma1_gap(inp, rep.oracle);
  lem.lemma2_gap = lemma2_gap(inp, rank);
  const double lemma_rhs = std::sqrt(std::max(0.0, inp.frob_sq * inp.frob_sq - inp.delta));
  checks.push_back(record("lemma1", std::nullopt, lemma_rhs - lem.lemma1_gap, lemma_rhs, lemma_tol));
  checks.push_back(record("lemma2", std::nullopt, std::norm(inp.trace),
                          static_cast<double>(rank.rank) * lemma_rhs, lemma_tol));

  double sum_sq = 0.0;
  Complex sum{};
  for (const auto& ev : rep.oracle.eigenvalues) {
    sum_sq += std::norm(ev);
    sum += ev;
  }
  checks.push_back(record("schur_inequality", std::nullopt, sum_sq, inp.frob_sq, 1e-8 * inp.frob_sq));
  checks.push_back(record("trace_preservation", std::nullopt, std::abs(sum - inp.trace), 0.0,
                          1e-9 * (1.0 + std::abs(inp.trace))));

  // Proof identities at random shifts.
  Rng rng(opt.probe_seed);
  const double spread = 1.0 + std::sqrt(inp.q / n);
  std::optional<InequalityRecord> worst_norm, worst_trace, worst_delta;
  auto keep_worst = [](std::optional<InequalityRecord>& slot, InequalityRecord r) {
    const double ratio = r.tolerance > 0.0 ? -r.slack / r.tolerance : -r.slack;
    if (!slot) {
      slot = std::move(r);
      return;
    }
    const double old = slot->tolerance > 0.0 ? -slot->slack / slot->tolerance : -slot->slack;
    if (ratio > old) slot = std::move(r);
  };
  for (std::size_t p = 0; p < opt.shift_probes; ++p) {
    const Complex lambda = center + spread * rng.complex_normal();
    const ShiftIdentity id = shift_identity_gap(a, lambda);
    const double lam2 = std::norm(lambda);
    lem.shift_identity_max_gap = std::max(lem.shift_identity_max_gap, std::abs(id.gap_sq_norm));
    lem.shift_trace_max_gap = std::max(lem.shift_trace_max_gap, std::abs(id.gap_trace));
    keep_worst(worst_norm, record("shift_identity", std::nullopt, std::abs(id.gap_sq_norm), 0.0,
                                  1e-10 * (1.0 + inp.frob_sq + n * lam2)));
    const double scale = n * std::abs(lambda) + std::abs(inp.trace);
    keep_worst(worst_trace, record("shift_trace_identity", std::nullopt, std::abs(id.gap_trace),
                                   0.0, 1e-10 * (1.0 + scale * scale)));
    if (p < opt.delta_probes) {
      const DenseMatrix m = shift(a, lambda);
      const double dm = commutator_defect(m);
      const double diff = std::abs(dm - inp.delta);
      lem.delta_shift_max_diff = std::max(lem.delta_shift_max_diff, diff);
      const double m2 = frobenius_norm_sq(m);
      keep_worst(worst_delta, record("delta_shift_invariance", std::nullopt, diff, 0.0,
                                     1e-10 * inp.delta + 1e-20 * m2 * m2));
    }
  }
  for (auto* slot : {&worst_norm, &worst_trace, &worst_delta})
    if (*slot) checks.push_back(**slot);

  if (opt.timestamp) rep.generated_at = utc_timestamp();
  return rep;
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

using ojson = nlohmann::ordered_json;

ojson complex_json(Complex z) { return ojson{{"re", z.real()}, {"im", z.imag()}}; }

template <typename T>
ojson opt_json(const std::optional<T>& v) {
  return v ? ojson(*v) : ojson(nullptr);
}

ojson disc_json(const Disc& d) {
  return ojson{{"center", complex_json(d.center)},
               {"radius", d.radius},
               {"source", std::string(to_string(d.source))},
               {"t_used", opt_json(d.t_used)}};
}

ojson inputs_json(const BoundInputs& inp) {
  return ojson{{"n", inp.n},
               {"trace", complex_json(inp.trace)},
               {"frob_sq", inp.frob_sq},
               {"q", inp.q},
               {"delta", inp.delta}};
}

ojson part_json(const HermitianPartReport& p) {
  ojson rows = ojson::array();
  for (const auto& r : p.rows) {
    rows.push_back(ojson{{"representative", complex_json(r.representative)},
                         {"cluster_size", r.cluster_size},
                         {"t", r.t},
                         {"disc", disc_json(r.disc)},
                         {"actual_distance", r.actual_distance},
                         {"slack", r.slack}});
  }
  ojson eig = ojson::array();
  for (const auto& z : p.eigenvalues) eig.push_back(complex_json(z));
  return ojson{{"label", p.label}, {"inputs", inputs_json(p.inputs)}, {"eigenvalues", eig},
               {"clusters", rows}};
}

ojson record_json(const InequalityRecord& r) {
  return ojson{{"name", r.name},          {"cluster", opt_json(r.cluster)},
               {"lhs", r.lhs},            {"rhs", r.rhs},
               {"slack", r.slack},        {"tolerance", r.tolerance},
               {"pass", r.pass}};
}

std::string csv_row(std::optional<std::size_t> trial, std::optional<std::uint64_t> seed,
                    std::size_t cluster, const BoundReport& rep, const ClusterRow& row) {
  std::string out;
  out += trial ? std::to_string(*trial) : "";
  out += ',';
  out += seed ? std::to_string(*seed) : "";
  out += ',' + std::to_string(cluster);
  out += ',' + std::to_string(rep.inputs.n);
  out += ',' + std::to_string(row.t);
  out += ',' + format_real(rep.inputs.q);
  out += ',' + format_real(rep.inputs.delta);
  out += ',' + format_real(row.theorem1.radius);
  out += ',' + format_real(row.envelope_radius);
  out += ',' + format_real(rep.classical.interval.width());
  out += ',' + format_real(row.actual_distance);
  out += ',' + (row.sharpness_ratio ? format_real(*row.sharpness_ratio) : std::string());
  out += ',' + std::string(to_string(rep.t_policy));
  out += '\n';
  return out;
}

}  // namespace

nlohmann::ordered_json to_json(const BoundReport& rep) {
  ojson eig = ojson::array();
  for (const auto& z : rep.oracle.eigenvalues) eig.push_back(complex_json(z));

  ojson clusters = ojson::array();
  for (const auto& r : rep.per_cluster) {
    clusters.push_back(ojson{{"representative", complex_json(r.representative)},
                             {"cluster_size", r.cluster_size},
                             {"t", r.t},
                             {"t_oracle", opt_json(r.t_oracle)},
                             {"t_policy", std::string(to_string(rep.t_policy))},
                             {"rank_tolerance_used", r.rank_tolerance_used},
                             {"rank_borderline", r.rank_borderline},
                             {"theorem1", disc_json(r.theorem1)},
                             {"envelope_radius", r.envelope_radius},
                             {"actual_distance", r.actual_distance},
                             {"slack", r.slack},
                             {"sharpness_ratio", opt_json(r.sharpness_ratio)}});
  }

  ojson checks = ojson::array();
  ojson failed = ojson::array();
  for (const auto& c : rep.checks) {
    checks.push_back(record_json(c));
    if (!c.pass) failed.push_back(c.name);
  }

  const auto& cl = rep.classical;
  const auto& lem = rep.lemmas;
  ojson meta = inputs_json(rep.inputs);
  meta["source"] = rep.source;
  meta["frob_norm"] = rep.frob_norm;
  return ojson{
      {"matrix_meta", meta},
      {"options", {{"t_policy", std::string(to_string(rep.t_policy))}, {"verify_tol", rep.verify_tol}}},
      {"oracle",
       {{"eigenvalues", eig},
        {"residuals", rep.oracle.residuals},
        {"cluster_ids", rep.oracle.cluster_ids},
        {"nonzero_count", rep.oracle.nonzero_count}}},
      {"per_cluster", clusters},
      {"hermitian_parts", {{"real", part_json(rep.real_part)}, {"imag", part_json(rep.imag_part)}}},
      {"classical",
       {{"lower", cl.interval.lower},
        {"upper", cl.interval.upper},
        {"width", cl.interval.width()},
        {"max_modulus", cl.max_modulus},
        {"lower_slack", cl.lower_slack},
        {"upper_slack", cl.upper_slack},
        {"theorem1_t1_radius", opt_json(cl.theorem1_t1_radius)}}},
      {"lemma_checks",
       {{"lemma1_gap", lem.lemma1_gap},
        {"lemma2_gap", lem.lemma2_gap},
        {"rank", lem.rank},
        {"rank_tolerance_used", lem.rank_tolerance_used},
        {"shift_identity_max_gap", lem.shift_identity_max_gap},
        {"shift_trace_max_gap", lem.shift_trace_max_gap},
        {"delta_shift_max_diff", lem.delta_shift_max_diff}}},
      {"checks", checks},
      {"verdict", {{"pass", rep.all_pass()}, {"failed", failed}}},
      {"generated_at", opt_json(rep.generated_at)}};
}

std::string to_csv(const BoundReport& rep) {
  std::string out(kCompareColumns);
  out += '\n';
  for (std::size_t k = 0; k < rep.per_cluster.size(); ++k) {
    out += csv_row(std::nullopt, std::nullopt, k, rep, rep.per_cluster[k]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Sweeps

std::size_t thread_count_from_env() {
  if (const char* env = std::getenv("EIGENBOUND_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) return static_cast<std::size_t>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

struct TrialOutcome {
  std::uint64_t seed = 0;
  std::optional<BoundReport> report;
  std::string error;
};

std::vector<TrialOutcome> run_trials(const EnsembleSpec& base, std::size_t trials,
                                     const RunOptions& options) {
  if (trials == 0) throw Error("trials must be at least 1");
  std::vector<TrialOutcome> out(trials);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < trials; i = next++) {
      EnsembleSpec spec = base;
      spec.seed = trial_seed(base.seed, i);
      out[i].seed = spec.seed;
      AnalyzeOptions opt = options.analyze;
      opt.probe_seed = splitmix64(spec.seed ^ 0x70726F6265ULL);
      opt.timestamp = false;
      try {
        const MatrixSource src{spec};
        out[i].report = analyze(generate(spec), opt, src.describe());
      } catch (const std::exception& e) {
        out[i].error = e.what();
      }
    }
  };
  const std::size_t threads =
      std::min(trials, options.threads ? options.threads : thread_count_from_env());
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return out;
}

}  // namespace

VerifySummary run_verify(const EnsembleSpec& base, std::size_t trials, const RunOptions& options) {
  const auto outcomes = run_trials(base, trials, options);
  VerifySummary s;
  s.ensemble = base;
  s.trials = trials;
  std::map<std::string, InequalityTally> tallies;
  double min_ratio = std::numeric_limits<double>::infinity();
  double max_ratio = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const auto& o = outcomes[i];
    if (!o.report) {
      s.errors.push_back(TrialError{i, o.seed, o.error});
      continue;
    }
    bool trial_ok = true;
    for (const auto& c : o.report->checks) {
      auto& t = tallies[c.name];
      if (t.checked == 0 || c.slack < t.worst_slack) {
        t.worst_slack = c.slack;
        t.tolerance_at_worst = c.tolerance;
        t.worst_seed = o.seed;
      }
      ++t.checked;
      if (!c.pass) {
        ++t.failed;
        trial_ok = false;
      }
    }
    if (trial_ok) {
      ++s.passed_trials;
    } else {
      s.failing_seeds.push_back(o.seed);
    }
    if (o.report->inputs.q > 0.0) {
      const double r = o.report->inputs.delta / o.report->inputs.q;
      min_ratio = std::min(min_ratio, r);
      max_ratio = std::max(max_ratio, r);
    }
  }
  s.tallies.assign(tallies.begin(), tallies.end());
  s.min_delta_over_q = min_ratio;
  s.max_delta_over_q = max_ratio;
  if (options.analyze.timestamp) s.generated_at = utc_timestamp();
  return s;
}

nlohmann::ordered_json to_json(const VerifySummary& s) {
  ojson ineq = ojson::object();
  for (const auto& [name, t] : s.tallies) {
    ineq[name] = ojson{{"checked", t.checked},
                       {"passed", t.checked - t.failed},
                       {"failed", t.failed},
                       {"worst_slack", t.worst_slack},
                       {"tolerance_at_worst", t.tolerance_at_worst},
                       {"worst_seed", opt_json(t.worst_seed)}};
  }
  ojson errors = ojson::array();
  for (const auto& e : s.errors) {
    errors.push_back(ojson{{"trial", e.trial}, {"seed", e.seed}, {"message", e.message}});
  }
  const bool have_ratio = std::isfinite(s.min_delta_over_q);
  return ojson{
      {"ensemble",
       {{"kind", std::string(to_string(s.ensemble.kind))},
        {"n", s.ensemble.n},
        {"seed", s.ensemble.seed},
        {"scale", s.ensemble.scale},
        {"multiplicity", s.ensemble.multiplicity}}},
      {"trials", s.trials},
      {"passed_trials", s.passed_trials},
      {"failed_trials", s.failing_seeds.size()},
      {"error_trials", s.errors.size()},
      {"inequalities", ineq},
      {"failing_seeds", s.failing_seeds},
      {"errors", errors},
      {"delta_over_q",
       {{"min", have_ratio ? ojson(s.min_delta_over_q) : ojson(nullptr)},
        {"max", have_ratio ? ojson(s.max_delta_over_q) : ojson(nullptr)}}},
      {"pass", s.ok()},
      {"generated_at", opt_json(s.generated_at)}};
}

CompareResult run_compare(const EnsembleSpec& base, std::size_t trials, const RunOptions& options) {
  const auto outcomes = run_trials(base, trials, options);
  CompareResult r;
  r.csv = std::string(kCompareColumns) + "\n";
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const auto& o = outcomes[i];
    if (!o.report) {
      r.errors.push_back(TrialError{i, o.seed, o.error});
      continue;
    }
    for (std::size_t k = 0; k < o.report->per_cluster.size(); ++k) {
      r.csv += csv_row(i, o.seed, k, *o.report, o.report->per_cluster[k]);
    }
  }
  return r;
}

}  // namespace eigenbound
