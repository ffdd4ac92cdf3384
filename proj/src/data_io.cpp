#include "eigenbound/data_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

namespace eigenbound {

// ---------------------------------------------------------------------------
// RNG

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t trial_seed(std::uint64_t base, std::uint64_t index) {
  return splitmix64(base ^ splitmix64(index + 1));
}

Rng::Rng(std::uint64_t seed) {
  std::uint64_t s = seed;
  for (auto& word : state_) {
    s = splitmix64(s);
    word = s;
  }
}

std::uint64_t Rng::next_u64() {
  auto rotl = [](std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); };
  const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl(state_[3], 45);
  return result;
}

double Rng::uniform() {
  return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
}

double Rng::normal() {
  const double u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Complex Rng::complex_normal() {
  const double re = normal();
  const double im = normal();
  return Complex{re, im} * std::numbers::sqrt2 * 0.5;
}

// ---------------------------------------------------------------------------
// Ensembles

namespace {

struct KindName {
  EnsembleKind kind;
  std::string_view name;
};

constexpr std::array<KindName, 6> kKindNames{{
    {EnsembleKind::ginibre_complex, "ginibre_complex"},
    {EnsembleKind::gaussian_real, "gaussian_real"},
    {EnsembleKind::hermitian, "hermitian"},
    {EnsembleKind::normal_conjugated, "normal_conjugated"},
    {EnsembleKind::jordan_nilpotent, "jordan_nilpotent"},
    {EnsembleKind::diagonal_repeated, "diagonal_repeated"},
}};

DenseMatrix ginibre(std::size_t n, double scale, Rng& rng) {
  std::vector<Complex> e(n * n);
  for (auto& z : e) z = scale * rng.complex_normal();
  return DenseMatrix(n, std::move(e));
}

// Product of n Householder reflectors built from complex Gaussian vectors.
DenseMatrix random_unitary(std::size_t n, Rng& rng) {
  DenseMatrix u = DenseMatrix::identity(n);
  std::vector<Complex> v(n);
  for (std::size_t k = 0; k < n; ++k) {
    double vnorm2 = 0.0;
    for (auto& x : v) {
      x = rng.complex_normal();
      vnorm2 += std::norm(x);
    }
    const double beta = 2.0 / vnorm2;
    for (std::size_t r = 0; r < n; ++r) {
      Complex w{};
      for (std::size_t i = 0; i < n; ++i) w += u(r, i) * v[i];
      w *= beta;
      for (std::size_t i = 0; i < n; ++i) u(r, i) -= w * std::conj(v[i]);
    }
  }
  return u;
}

void require_valid(const EnsembleSpec& spec) {
  if (spec.n == 0) throw Error("ensemble dimension must be positive");
  if (!(spec.scale > 0.0) || !std::isfinite(spec.scale)) {
    throw Error("ensemble scale must be positive and finite");
  }
}

}  // namespace

std::string_view to_string(EnsembleKind k) {
  for (const auto& kn : kKindNames)
    if (kn.kind == k) return kn.name;
  return "unknown";
}

EnsembleKind parse_ensemble_kind(std::string_view name) {
  for (const auto& kn : kKindNames)
    if (kn.name == name) return kn.kind;
  throw Error("unknown ensemble kind '" + std::string(name) + "'");
}

const std::vector<EnsembleKind>& all_ensemble_kinds() {
  static const std::vector<EnsembleKind> kinds = [] {
    std::vector<EnsembleKind> out;
    for (const auto& kn : kKindNames) out.push_back(kn.kind);
    return out;
  }();
  return kinds;
}

NormalSample generate_normal(const EnsembleSpec& spec) {
  require_valid(spec);
  Rng rng(spec.seed);
  std::vector<Complex> d(spec.n);
  for (auto& z : d) z = spec.scale * rng.complex_normal();
  const DenseMatrix u = random_unitary(spec.n, rng);
  DenseMatrix ud = u;
  for (std::size_t i = 0; i < spec.n; ++i)
    for (std::size_t j = 0; j < spec.n; ++j) ud(i, j) *= d[j];
  return NormalSample{multiply(ud, adjoint(u)), std::move(d)};
}

DenseMatrix generate(const EnsembleSpec& spec) {
  require_valid(spec);
  const std::size_t n = spec.n;
  Rng rng(spec.seed);
  switch (spec.kind) {
    case EnsembleKind::ginibre_complex:
      return ginibre(n, spec.scale, rng);
    case EnsembleKind::gaussian_real: {
      std::vector<Complex> e(n * n);
      for (auto& z : e) z = spec.scale * rng.normal();
      return DenseMatrix(n, std::move(e));
    }
    case EnsembleKind::hermitian:
      return hermitian_real_part(ginibre(n, spec.scale, rng));
    case EnsembleKind::normal_conjugated:
      return generate_normal(spec).matrix;
    case EnsembleKind::jordan_nilpotent: {
      DenseMatrix m(n);
      for (std::size_t i = 0; i + 1 < n; ++i) m(i, i + 1) = spec.scale;
      return m;
    }
    case EnsembleKind::diagonal_repeated: {
      const std::size_t reps = std::clamp<std::size_t>(spec.multiplicity, 1, n);
      std::vector<Complex> d(n);
      const Complex repeated = spec.scale * rng.complex_normal();
      for (std::size_t i = 0; i < reps; ++i) d[i] = repeated;
      for (std::size_t i = reps; i < n; ++i) d[i] = spec.scale * rng.complex_normal();
      return DenseMatrix::diagonal(d);
    }
  }
  throw Error("unhandled ensemble kind");
}

// ---------------------------------------------------------------------------
// Matrix Market

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

enum class Symmetry { general, symmetric, hermitian, skew };

struct LineReader {
  std::istream& in;
  std::size_t line_no = 0;

  // Next line that is neither blank nor a comment.
  bool next_data(std::string& line) {
    while (std::getline(in, line)) {
      ++line_no;
      const auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos || line[first] == '%') continue;
      return true;
    }
    return false;
  }
};

}  // namespace

DenseMatrix read_matrix_market(std::istream& in) {
  LineReader reader{in};
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty input", 1);
  reader.line_no = 1;

  std::istringstream header(line);
  std::string banner, object, format, field, symmetry;
  header >> banner >> object >> format >> field >> symmetry;
  if (lower(banner) != "%%matrixmarket") throw ParseError("missing %%MatrixMarket banner", 1);
  if (lower(object) != "matrix") throw ParseError("unsupported object '" + object + "'", 1);
  format = lower(format);
  field = lower(field);
  symmetry = lower(symmetry);
  if (format != "array" && format != "coordinate") {
    throw ParseError("unsupported format '" + format + "'", 1);
  }
  if (field == "pattern") throw ParseError("pattern matrices carry no values", 1);
  if (field != "real" && field != "complex" && field != "integer" && field != "double") {
    throw ParseError("unsupported field '" + field + "'", 1);
  }
  Symmetry sym;
  if (symmetry == "general") {
    sym = Symmetry::general;
  } else if (symmetry == "symmetric") {
    sym = Symmetry::symmetric;
  } else if (symmetry == "hermitian") {
    sym = Symmetry::hermitian;
  } else if (symmetry == "skew-symmetric") {
    sym = Symmetry::skew;
  } else {
    throw ParseError("unsupported symmetry '" + symmetry + "'", 1);
  }
  const bool is_complex = field == "complex";

  if (!reader.next_data(line)) throw ParseError("missing size line", reader.line_no + 1);
  std::istringstream size_line(line);
  long long rows = 0, cols = 0, nnz = 0;
  size_line >> rows >> cols;
  if (format == "coordinate") size_line >> nnz;
  if (!size_line || rows <= 0 || cols <= 0 || nnz < 0) {
    throw ParseError("malformed size line", reader.line_no);
  }
  if (rows != cols) {
    throw ParseError("matrix is not square (" + std::to_string(rows) + "x" + std::to_string(cols) +
                         ")",
                     reader.line_no);
  }
  const auto n = static_cast<std::size_t>(rows);
  std::vector<Complex> e(n * n);

  auto read_value = [&](std::istringstream& ls) {
    double re = 0.0, im = 0.0;
    ls >> re;
    if (is_complex) ls >> im;
    if (!ls) throw ParseError("malformed value", reader.line_no);
    if (!std::isfinite(re) || !std::isfinite(im)) {
      throw ParseError("non-finite value", reader.line_no);
    }
    return Complex{re, im};
  };

  auto place = [&](std::size_t i, std::size_t j, Complex v) {
    if (sym != Symmetry::general && j > i) {
      throw ParseError("entry above the diagonal in a symmetric-storage file", reader.line_no);
    }
    if (sym == Symmetry::skew && i == j) {
      throw ParseError("diagonal entry in a skew-symmetric file", reader.line_no);
    }
    if (sym == Symmetry::hermitian && i == j && v.imag() != 0.0) {
      throw ParseError("hermitian diagonal entry must be real", reader.line_no);
    }
    e[i * n + j] += v;
    if (i == j) return;
    switch (sym) {
      case Symmetry::general:
        break;
      case Symmetry::symmetric:
        e[j * n + i] += v;
        break;
      case Symmetry::hermitian:
        e[j * n + i] += std::conj(v);
        break;
      case Symmetry::skew:
        e[j * n + i] -= v;
        break;
    }
  };

  if (format == "array") {
    // Column-major; symmetric storage lists the lower triangle only.
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t first = sym == Symmetry::general ? 0 : (sym == Symmetry::skew ? j + 1 : j);
      for (std::size_t i = first; i < n; ++i) {
        if (!reader.next_data(line)) throw ParseError("unexpected end of data", reader.line_no + 1);
        std::istringstream ls(line);
        place(i, j, read_value(ls));
      }
    }
  } else {
    for (long long k = 0; k < nnz; ++k) {
      if (!reader.next_data(line)) throw ParseError("unexpected end of data", reader.line_no + 1);
      std::istringstream ls(line);
      long long i = 0, j = 0;
      ls >> i >> j;
      if (!ls || i < 1 || j < 1 || i > rows || j > cols) {
        throw ParseError("bad coordinate index", reader.line_no);
      }
      place(static_cast<std::size_t>(i - 1), static_cast<std::size_t>(j - 1), read_value(ls));
    }
  }
  if (reader.next_data(line)) throw ParseError("trailing data after last entry", reader.line_no);
  return DenseMatrix(n, std::move(e));
}

DenseMatrix read_matrix_market(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return read_matrix_market(in);
}

void write_matrix_market(const DenseMatrix& a, std::ostream& out) {
  const std::size_t n = a.n();
  out << "%%MatrixMarket matrix array complex general\n";
  out << n << ' ' << n << '\n';
  char buf[64];
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      std::snprintf(buf, sizeof buf, "%.17g %.17g\n", a(i, j).real(), a(i, j).imag());
      out << buf;
    }
  }
}

void write_matrix_market(const DenseMatrix& a, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  write_matrix_market(a, out);
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

// ---------------------------------------------------------------------------
// JSON literal

DenseMatrix parse_json_literal(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(e.what(), 1);
  }
  if (!j.is_array() || j.empty()) throw ParseError("literal must be a non-empty array of rows", 1);
  const std::size_t n = j.size();
  std::vector<Complex> e;
  e.reserve(n * n);
  for (const auto& row : j) {
    if (!row.is_array() || row.size() != n) throw ParseError("literal matrix is not square", 1);
    for (const auto& v : row) {
      if (v.is_number()) {
        e.emplace_back(v.get<double>(), 0.0);
      } else if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
        e.emplace_back(v[0].get<double>(), v[1].get<double>());
      } else {
        throw ParseError("entry must be a number or [re, im]", 1);
      }
    }
  }
  return DenseMatrix(n, std::move(e));
}

std::string MatrixSource::describe() const {
  struct Visitor {
    std::string operator()(const File& f) const { return "file:" + f.path.string(); }
    std::string operator()(const EnsembleSpec& s) const {
      std::string out = "ensemble:" + std::string(to_string(s.kind)) + ":n=" + std::to_string(s.n) +
                        ":seed=" + std::to_string(s.seed);
      if (s.kind == EnsembleKind::diagonal_repeated) {
        out += ":multiplicity=" + std::to_string(s.multiplicity);
      }
      return out;
    }
    std::string operator()(const Literal&) const { return "literal"; }
  };
  return std::visit(Visitor{}, descriptor);
}

DenseMatrix load(const MatrixSource& source) {
  struct Visitor {
    DenseMatrix operator()(const MatrixSource::File& f) const { return read_matrix_market(f.path); }
    DenseMatrix operator()(const EnsembleSpec& s) const { return generate(s); }
    DenseMatrix operator()(const MatrixSource::Literal& l) const {
      return parse_json_literal(l.json);
    }
  };
  return std::visit(Visitor{}, source.descriptor);
}

}  // namespace eigenbound
