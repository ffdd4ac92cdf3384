#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "eigenbound/report.hpp"

using namespace eigenbound;

namespace {

AnalyzeOptions quiet() {
  AnalyzeOptions o;
  o.timestamp = false;
  return o;
}

const InequalityRecord& find_check(const BoundReport& r, const std::string& name,
                                   std::optional<std::size_t> cluster = std::nullopt) {
  for (const auto& c : r.checks)
    if (c.name == name && (!cluster || c.cluster == cluster)) return c;
  throw std::runtime_error("missing check " + name);
}

std::vector<std::string> keys(const nlohmann::ordered_json& j) {
  std::vector<std::string> out;
  for (auto it = j.begin(); it != j.end(); ++it) out.push_back(it.key());
  return out;
}

}  // namespace

TEST(Analyze, JordanTwo) {
  const auto rep = analyze(DenseMatrix{{0.0, 1.0}, {0.0, 0.0}}, quiet());
  ASSERT_EQ(rep.per_cluster.size(), 1u);
  const auto& row = rep.per_cluster[0];
  EXPECT_EQ(row.cluster_size, 2u);
  EXPECT_EQ(row.t, 1u);
  EXPECT_NEAR(row.theorem1.radius, 0.5773502691896257, 1e-12);
  EXPECT_NEAR(rep.classical.interval.width(), 0.7071067811865476, 1e-12);
  EXPECT_EQ(row.actual_distance, 0.0);
  ASSERT_TRUE(row.sharpness_ratio);
  EXPECT_NEAR(*row.sharpness_ratio, 0.816496580927726, 1e-9);
  EXPECT_TRUE(rep.all_pass());
}

TEST(Analyze, IdentityHasZeroRadii) {
  const auto rep = analyze(DenseMatrix::identity(3), quiet());
  ASSERT_EQ(rep.per_cluster.size(), 1u);
  EXPECT_EQ(rep.per_cluster[0].t, 3u);
  EXPECT_EQ(rep.per_cluster[0].theorem1.radius, 0.0);
  EXPECT_EQ(rep.per_cluster[0].actual_distance, 0.0);
  EXPECT_FALSE(rep.per_cluster[0].sharpness_ratio);
  for (const auto& r : rep.real_part.rows) {
    EXPECT_EQ(r.disc.radius, 0.0);
    EXPECT_EQ(r.actual_distance, 0.0);
  }
  EXPECT_TRUE(rep.all_pass());
}

TEST(Analyze, PlusMinusOneEqualityCase) {
  const std::vector<Complex> d{1.0, -1.0};
  const auto rep = analyze(DenseMatrix::diagonal(d), quiet());
  ASSERT_EQ(rep.real_part.rows.size(), 2u);
  for (const auto& r : rep.real_part.rows) {
    EXPECT_DOUBLE_EQ(r.disc.radius, 1.0);
    EXPECT_DOUBLE_EQ(r.actual_distance, 1.0);
    EXPECT_LE(std::abs(r.slack), 1e-12);
  }
  EXPECT_TRUE(rep.all_pass());
}

TEST(Analyze, RecordsAreAuditable) {
  const auto rep = analyze(generate({EnsembleKind::ginibre_complex, 6, 3}), quiet());
  for (const auto& c : rep.checks) {
    EXPECT_DOUBLE_EQ(c.slack, c.rhs - c.lhs) << c.name;
    EXPECT_EQ(c.pass, c.slack >= -c.tolerance) << c.name;
  }
  for (const char* name :
       {"theorem1_containment", "theorem1_envelope_order", "theorem2_re_containment",
        "theorem2_im_containment", "classical_lower", "classical_upper", "modulus_projection",
        "lemma1", "lemma2", "schur_inequality", "trace_preservation", "shift_identity",
        "shift_trace_identity", "delta_shift_invariance", "multiplicity_consistency"}) {
    EXPECT_NO_THROW(find_check(rep, name)) << name;
  }
  EXPECT_TRUE(rep.all_pass());
}

TEST(Analyze, TPolicies) {
  const std::vector<Complex> d{2.0, 2.0, 2.0, 5.0};
  const auto a = DenseMatrix::diagonal(d);
  auto opt = quiet();
  EXPECT_EQ(analyze(a, opt).per_cluster[0].t, 3u);
  opt.t_policy = TPolicy::one;
  const auto one = analyze(a, opt);
  EXPECT_EQ(one.per_cluster[0].t, 1u);
  EXPECT_EQ(one.per_cluster[0].t_oracle, 3u);
  EXPECT_TRUE(one.all_pass());

  opt.t_policy = TPolicy::cluster_size;
  DenseMatrix j(3);
  j(0, 1) = 1.0;
  j(2, 2) = 5.0;
  const auto by_size = analyze(j, opt);
  ASSERT_EQ(by_size.per_cluster.size(), 2u);
  EXPECT_EQ(by_size.per_cluster[0].t, 2u);
  EXPECT_EQ(by_size.per_cluster[0].t_oracle, 1u);
}

TEST(Analyze, MultiplicityFailureNamesCluster) {
  // No computed eigenvalue makes lambda*I - A singular to 1e-300.
  auto opt = quiet();
  opt.rank_tol = 1e-300;
  try {
    analyze(generate({EnsembleKind::ginibre_complex, 4, 2}), opt);
    FAIL() << "expected ClusterError";
  } catch (const ClusterError& e) {
    EXPECT_EQ(e.part(), "matrix");
    EXPECT_EQ(e.cluster(), 0u);
    EXPECT_NE(std::string(e.what()).find("full numerical rank"), std::string::npos);
  }
}

TEST(Analyze, TimestampToggle) {
  AnalyzeOptions opt;
  EXPECT_TRUE(analyze(DenseMatrix::identity(2), opt).generated_at);
  opt.timestamp = false;
  const auto j = to_json(analyze(DenseMatrix::identity(2), opt));
  EXPECT_TRUE(j["generated_at"].is_null());
}

TEST(Json, SchemaStable) {
  const auto a = to_json(analyze(DenseMatrix::identity(2), quiet()));
  const auto b = to_json(analyze(generate({EnsembleKind::ginibre_complex, 5, 1}), quiet()));
  EXPECT_EQ(keys(a), keys(b));
  EXPECT_EQ(keys(a["per_cluster"][0]), keys(b["per_cluster"][0]));
  EXPECT_EQ(keys(a["classical"]), keys(b["classical"]));
  EXPECT_EQ(keys(a["hermitian_parts"]["real"]), keys(b["hermitian_parts"]["imag"]));
  // Absent sharpness ratio (identity, width 0) is explicit null.
  EXPECT_TRUE(a["per_cluster"][0].contains("sharpness_ratio"));
  EXPECT_TRUE(a["per_cluster"][0]["sharpness_ratio"].is_null());
  EXPECT_TRUE(a["verdict"]["pass"].get<bool>());
}

TEST(Json, NumbersRoundTripExactly) {
  const auto rep = analyze(generate({EnsembleKind::ginibre_complex, 4, 9}), quiet());
  const auto j = nlohmann::ordered_json::parse(to_json(rep).dump());
  EXPECT_EQ(j["per_cluster"][0]["theorem1"]["radius"].get<double>(), rep.per_cluster[0].theorem1.radius);
  EXPECT_EQ(j["matrix_meta"]["delta"].get<double>(), rep.inputs.delta);
}

TEST(Csv, ColumnsAndRows) {
  const auto rep = analyze(DenseMatrix{{0.0, 1.0}, {0.0, 0.0}}, quiet());
  const std::string csv = to_csv(rep);
  std::istringstream in(csv);
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  EXPECT_EQ(header, kCompareColumns);
  EXPECT_EQ(row,
            ",,0,2,1,1,1,0.57735026918962573,0.70710678118654757,0.70710678118654757,0,"
            "0.81649658092772592,oracle");
}

TEST(Verify, JordanAndDiagonalTrials) {
  RunOptions opt;
  opt.analyze.timestamp = false;
  opt.threads = 1;
  const auto s = run_verify({EnsembleKind::jordan_nilpotent, 20, 1}, 1, opt);
  EXPECT_TRUE(s.ok());
  EXPECT_EQ(s.passed_trials, 1u);
  // q = 19, delta = 1
  EXPECT_DOUBLE_EQ(s.min_delta_over_q, 1.0 / 19.0);

  const auto d = run_verify({EnsembleKind::diagonal_repeated, 4, 1, 1.0, 4}, 1, opt);
  EXPECT_TRUE(d.ok());
  EXPECT_EQ(d.passed_trials, 1u);
  const auto j = to_json(d);
  EXPECT_TRUE(j["delta_over_q"]["min"].is_null());
}

TEST(Verify, GinibreHundredTrials) {
  RunOptions opt;
  opt.analyze.timestamp = false;
  const auto s = run_verify({EnsembleKind::ginibre_complex, 10, 1}, 100, opt);
  EXPECT_TRUE(s.ok()) << to_json(s).dump(2);
  EXPECT_EQ(s.passed_trials, 100u);
}

TEST(Verify, ByteIdenticalAcrossRunsAndThreads) {
  RunOptions serial;
  serial.analyze.timestamp = false;
  serial.threads = 1;
  RunOptions parallel = serial;
  parallel.threads = 4;
  const EnsembleSpec spec{EnsembleKind::gaussian_real, 8, 77};
  const auto a = to_json(run_verify(spec, 12, serial)).dump();
  EXPECT_EQ(a, to_json(run_verify(spec, 12, serial)).dump());
  EXPECT_EQ(a, to_json(run_verify(spec, 12, parallel)).dump());
  EXPECT_EQ(run_compare(spec, 12, serial).csv, run_compare(spec, 12, parallel).csv);
}

TEST(Compare, NormalRowsHaveUnitRatio) {
  RunOptions opt;
  opt.analyze.timestamp = false;
  const auto r = run_compare({EnsembleKind::normal_conjugated, 6, 5}, 3, opt);
  ASSERT_TRUE(r.errors.empty());
  std::istringstream in(r.csv);
  std::string line;
  std::getline(in, line);
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    const auto pos = line.rfind(',');
    const auto prev = line.rfind(',', pos - 1);
    const double ratio = std::stod(line.substr(prev + 1, pos - prev - 1));
    EXPECT_NEAR(ratio, 1.0, 1e-9) << line;
  }
  EXPECT_EQ(rows, 18u);
}

TEST(Options, ParseTPolicy) {
  EXPECT_EQ(parse_t_policy("oracle"), TPolicy::oracle);
  EXPECT_EQ(parse_t_policy("1"), TPolicy::one);
  EXPECT_EQ(parse_t_policy("cluster-size"), TPolicy::cluster_size);
  EXPECT_THROW(parse_t_policy("2"), Error);
}
