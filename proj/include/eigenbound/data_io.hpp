#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "eigenbound/matrix.hpp"

namespace eigenbound {

// xoshiro256** seeded through splitmix64. Identical streams on every
// platform; normal variates use Box-Muller on 53-bit uniforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();
  // Uniform on (0, 1].
  double uniform();
  double normal();
  // Re and Im independent N(0, 1/2), so E|z|^2 = 1.
  Complex complex_normal();

 private:
  std::array<std::uint64_t, 4> state_;
};

std::uint64_t splitmix64(std::uint64_t x);

// Seed for trial `index` of a run with base seed `base`:
//   splitmix64(base ^ splitmix64(index + 1))
// Trials are independent of execution order.
std::uint64_t trial_seed(std::uint64_t base, std::uint64_t index);

enum class EnsembleKind {
  ginibre_complex,
  gaussian_real,
  hermitian,
  normal_conjugated,
  jordan_nilpotent,
  diagonal_repeated,
};

std::string_view to_string(EnsembleKind k);
EnsembleKind parse_ensemble_kind(std::string_view name);
const std::vector<EnsembleKind>& all_ensemble_kinds();

struct EnsembleSpec {
  EnsembleKind kind = EnsembleKind::ginibre_complex;
  std::size_t n = 1;
  std::uint64_t seed = 0;
  double scale = 1.0;
  // diagonal_repeated only: how many times the repeated value appears
  // (clamped to n).
  std::size_t multiplicity = 2;
};

DenseMatrix generate(const EnsembleSpec& spec);

// normal_conjugated with its diagonal factor exposed: matrix = U D U*.
struct NormalSample {
  DenseMatrix matrix;
  std::vector<Complex> spectrum;
};
NormalSample generate_normal(const EnsembleSpec& spec);

DenseMatrix read_matrix_market(const std::filesystem::path& path);
DenseMatrix read_matrix_market(std::istream& in);
void write_matrix_market(const DenseMatrix& a, const std::filesystem::path& path);
void write_matrix_market(const DenseMatrix& a, std::ostream& out);

// Row-major nested JSON arrays; each entry a number or [re, im].
DenseMatrix parse_json_literal(std::string_view text);

struct MatrixSource {
  struct File {
    std::filesystem::path path;
  };
  struct Literal {
    std::string json;
  };
  std::variant<File, EnsembleSpec, Literal> descriptor;

  std::string describe() const;
};

DenseMatrix load(const MatrixSource& source);

}  // namespace eigenbound
