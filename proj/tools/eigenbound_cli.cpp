// eigenbound: trace-centered eigenvalue localization discs, checked against
// a dense spectral oracle.
//
//   eigenbound analyze <path|--ensemble KIND --n N --seed S|--literal JSON>
//   eigenbound verify  --ensemble KIND --n N --seed S --trials T
//   eigenbound compare --ensemble KIND --n N --seed S --trials T --out FILE
//
// Exit codes: 0 all inequalities verified, 1 violation, 2 operational error.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "eigenbound/data_io.hpp"
#include "eigenbound/report.hpp"

namespace {

constexpr int kExitViolation = 1;
constexpr int kExitError = 2;

struct CommonArgs {
  std::string ensemble;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  double scale = 1.0;
  std::size_t multiplicity = 2;
  std::string t_policy = "oracle";
  double tol_rank = eigenbound::kDefaultRankTol;
  std::optional<double> tol_verify;
  bool no_timestamp = false;

  void add_ensemble(CLI::App* app, bool required) {
    auto* e = app->add_option("--ensemble", ensemble,
                              "ginibre_complex | gaussian_real | hermitian | normal_conjugated | "
                              "jordan_nilpotent | diagonal_repeated");
    auto* nn = app->add_option("--n", n, "matrix dimension")->check(CLI::PositiveNumber);
    app->add_option("--seed", seed, "base seed");
    app->add_option("--scale", scale, "entry standard deviation")->check(CLI::PositiveNumber);
    app->add_option("--multiplicity", multiplicity, "repeat count for diagonal_repeated");
    if (required) {
      e->required();
      nn->required();
    }
  }

  void add_tolerances(CLI::App* app) {
    app->add_option("--t", t_policy, "multiplicity policy: oracle | 1 | cluster-size");
    app->add_option("--tol-rank", tol_rank, "relative rank tolerance")->check(CLI::PositiveNumber);
    app->add_option("--tol-verify", tol_verify, "absolute verification tolerance")
        ->check(CLI::NonNegativeNumber);
    app->add_flag("--no-timestamp", no_timestamp, "omit generated_at");
  }

  eigenbound::EnsembleSpec ensemble_spec() const {
    eigenbound::EnsembleSpec s;
    s.kind = eigenbound::parse_ensemble_kind(ensemble);
    s.n = n;
    s.seed = seed;
    s.scale = scale;
    s.multiplicity = multiplicity;
    return s;
  }

  eigenbound::RunOptions run_options() const {
    eigenbound::RunOptions r;
    r.analyze.t_policy = eigenbound::parse_t_policy(t_policy);
    r.analyze.rank_tol = tol_rank;
    r.analyze.verify_tol = tol_verify;
    r.analyze.timestamp = !no_timestamp;
    return r;
  }
};

void print_errors(const std::vector<eigenbound::TrialError>& errors) {
  for (const auto& e : errors) {
    std::cerr << "trial " << e.trial << " (seed " << e.seed << "): " << e.message << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Trace-centered eigenvalue localization bounds with oracle verification"};
  app.require_subcommand(1);

  CommonArgs analyze_args;
  std::string path;
  std::string literal;
  bool as_csv = false;
  bool as_json = false;
  auto* analyze = app.add_subcommand("analyze", "analyze one matrix");
  analyze->add_option("path", path, "Matrix Market file");
  analyze->add_option("--literal", literal, "row-major JSON, entries number or [re, im]");
  analyze_args.add_ensemble(analyze, false);
  analyze_args.add_tolerances(analyze);
  auto* csv_flag = analyze->add_flag("--csv", as_csv, "emit per-cluster CSV");
  analyze->add_flag("--json", as_json, "emit the JSON report (default)")->excludes(csv_flag);

  CommonArgs verify_args;
  std::size_t verify_trials = 1;
  auto* verify = app.add_subcommand("verify", "run seeded trials and tally every inequality");
  verify_args.add_ensemble(verify, true);
  verify_args.add_tolerances(verify);
  verify->add_option("--trials", verify_trials, "number of trials")->required()->check(CLI::PositiveNumber);

  CommonArgs compare_args;
  std::size_t compare_trials = 1;
  std::string out_path;
  auto* compare = app.add_subcommand("compare", "CSV of bound radii per trial and cluster");
  compare_args.add_ensemble(compare, true);
  compare_args.add_tolerances(compare);
  compare->add_option("--trials", compare_trials, "number of trials")->required()->check(CLI::PositiveNumber);
  compare->add_option("--out", out_path, "output CSV path (stdout if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitError;
  }

  try {
    if (*analyze) {
      eigenbound::MatrixSource source;
      const int given = !path.empty() + !literal.empty() + !analyze_args.ensemble.empty();
      if (given != 1) {
        std::cerr << "analyze: give exactly one of <path>, --literal, --ensemble\n";
        return kExitError;
      }
      if (!path.empty()) {
        source.descriptor = eigenbound::MatrixSource::File{path};
      } else if (!literal.empty()) {
        source.descriptor = eigenbound::MatrixSource::Literal{literal};
      } else {
        if (analyze_args.n == 0) {
          std::cerr << "analyze: --ensemble requires --n\n";
          return kExitError;
        }
        source.descriptor = analyze_args.ensemble_spec();
      }
      auto opt = analyze_args.run_options().analyze;
      const auto report = eigenbound::analyze(eigenbound::load(source), opt, source.describe());
      if (as_csv) {
        std::cout << eigenbound::to_csv(report);
      } else {
        std::cout << eigenbound::to_json(report).dump(2) << '\n';
      }
      return report.all_pass() ? 0 : kExitViolation;
    }
    if (*verify) {
      const auto summary = eigenbound::run_verify(verify_args.ensemble_spec(), verify_trials,
                                                  verify_args.run_options());
      std::cout << eigenbound::to_json(summary).dump(2) << '\n';
      print_errors(summary.errors);
      if (!summary.errors.empty() && summary.failing_seeds.empty()) return kExitError;
      return summary.ok() ? 0 : kExitViolation;
    }
    if (*compare) {
      const auto result = eigenbound::run_compare(compare_args.ensemble_spec(), compare_trials,
                                                  compare_args.run_options());
      if (out_path.empty()) {
        std::cout << result.csv;
      } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out || !(out << result.csv)) {
          std::cerr << "compare: cannot write " << out_path << '\n';
          return kExitError;
        }
      }
      print_errors(result.errors);
      return result.errors.empty() ? 0 : kExitError;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
