#include "eigenbound/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace eigenbound {

namespace {

constexpr double kMachineEps = std::numeric_limits<double>::epsilon();

// Rotation G = [[c, s], [-conj(s), c]] with real c, chosen so that
// G * [x; y] = [r; 0].
struct Givens {
  double c = 1.0;
  Complex s{0.0, 0.0};
  Complex r{0.0, 0.0};
};

Givens make_givens(Complex x, Complex y) {
  Givens g;
  if (y == Complex{}) {
    g.r = x;
    return g;
  }
  const double ax = std::abs(x);
  const double norm = std::hypot(ax, std::abs(y));
  if (ax == 0.0) {
    g.c = 0.0;
    g.s = std::conj(y) / std::abs(y);
    g.r = norm;
    return g;
  }
  const Complex phase = x / ax;
  g.c = ax / norm;
  g.s = phase * std::conj(y) / norm;
  g.r = phase * norm;
  return g;
}

// Rows i, i+1 of m, columns [col_begin, n): m <- G m.
void rotate_rows(DenseMatrix& m, const Givens& g, std::size_t i, std::size_t col_begin) {
  for (std::size_t j = col_begin; j < m.n(); ++j) {
    const Complex x = m(i, j);
    const Complex y = m(i + 1, j);
    m(i, j) = g.c * x + g.s * y;
    m(i + 1, j) = -std::conj(g.s) * x + g.c * y;
  }
}

// Columns j, j+1 of m, rows [0, row_end): m <- m G*.
void rotate_cols(DenseMatrix& m, const Givens& g, std::size_t j, std::size_t row_end) {
  for (std::size_t i = 0; i < row_end; ++i) {
    const Complex x = m(i, j);
    const Complex y = m(i, j + 1);
    m(i, j) = g.c * x + std::conj(g.s) * y;
    m(i, j + 1) = -g.s * x + g.c * y;
  }
}

// Householder reduction to upper Hessenberg form: a = z h z*.
void reduce_to_hessenberg(DenseMatrix& h, DenseMatrix& z) {
  const std::size_t n = h.n();
  if (n < 3) return;
  std::vector<Complex> v(n);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    const std::size_t len = n - k - 1;
    double tail = 0.0;
    for (std::size_t i = 1; i < len; ++i) tail += std::norm(h(k + 1 + i, k));
    if (tail == 0.0) continue;
    const Complex x0 = h(k + 1, k);
    const double xnorm = std::sqrt(tail + std::norm(x0));
    const Complex phase = (x0 == Complex{}) ? Complex{1.0, 0.0} : x0 / std::abs(x0);
    const Complex alpha = -phase * xnorm;
    for (std::size_t i = 0; i < len; ++i) v[i] = h(k + 1 + i, k);
    v[0] -= alpha;
    double vnorm2 = 0.0;
    for (std::size_t i = 0; i < len; ++i) vnorm2 += std::norm(v[i]);
    const double beta = 2.0 / vnorm2;

    // Left: rows k+1.., columns k+1.. (column k is written explicitly below).
    for (std::size_t j = k + 1; j < n; ++j) {
      Complex w{};
      for (std::size_t i = 0; i < len; ++i) w += std::conj(v[i]) * h(k + 1 + i, j);
      w *= beta;
      for (std::size_t i = 0; i < len; ++i) h(k + 1 + i, j) -= v[i] * w;
    }
    // Right: all rows, columns k+1..
    auto apply_right = [&](DenseMatrix& m) {
      for (std::size_t r = 0; r < n; ++r) {
        Complex w{};
        for (std::size_t i = 0; i < len; ++i) w += m(r, k + 1 + i) * v[i];
        w *= beta;
        for (std::size_t i = 0; i < len; ++i) m(r, k + 1 + i) -= w * std::conj(v[i]);
      }
    };
    apply_right(h);
    apply_right(z);

    h(k + 1, k) = alpha;
    for (std::size_t i = k + 2; i < n; ++i) h(i, k) = Complex{};
  }
}

// Eigenvalue of the trailing 2x2 block closest to its (1,1) corner entry d.
Complex wilkinson_shift(Complex a, Complex b, Complex c, Complex d) {
  const Complex half_diff = 0.5 * (a - d);
  const Complex root = std::sqrt(half_diff * half_diff + b * c);
  const Complex mid = 0.5 * (a + d);
  const Complex e1 = mid + root;
  const Complex e2 = mid - root;
  return std::abs(e1 - d) <= std::abs(e2 - d) ? e1 : e2;
}

struct QrOutcome {
  std::vector<double> deflated;  // |h(k, k-1)| at the moment it was zeroed
};

QrOutcome hessenberg_qr(DenseMatrix& h, DenseMatrix& z, std::size_t max_iters) {
  const std::size_t n = h.n();
  QrOutcome out;
  out.deflated.assign(n, 0.0);
  const double hnorm = std::sqrt(frobenius_norm_sq(h));
  if (n == 1) return out;

  std::size_t hi = n - 1;
  std::size_t iter = 0;
  while (hi > 0) {
    std::size_t l = hi;
    for (; l > 0; --l) {
      double scale = std::abs(h(l - 1, l - 1)) + std::abs(h(l, l));
      if (scale == 0.0) scale = hnorm;
      const double sub = std::abs(h(l, l - 1));
      if (sub <= kDeflationEps * scale) {
        out.deflated[l] = sub;
        h(l, l - 1) = Complex{};
        break;
      }
    }
    if (l == hi) {
      --hi;
      iter = 0;
      continue;
    }

    if (++iter > max_iters) {
      SchurForm partial{adjoint(z), h};
      throw ConvergenceError("QR iteration did not converge for eigenvalue " +
                                 std::to_string(hi) + " after " + std::to_string(max_iters) +
                                 " sweeps",
                             std::move(partial));
    }

    Complex mu;
    if (iter % 10 == 0) {
      // Exceptional shift to break cycles.
      mu = h(hi, hi) + 0.75 * std::abs(h(hi, hi - 1));
    } else {
      mu = wilkinson_shift(h(hi - 1, hi - 1), h(hi - 1, hi), h(hi, hi - 1), h(hi, hi));
    }

    // Implicit single-shift sweep over the active block [l, hi].
    for (std::size_t k = l; k < hi; ++k) {
      Complex x;
      Complex y;
      if (k == l) {
        x = h(l, l) - mu;
        y = h(l + 1, l);
      } else {
        x = h(k, k - 1);
        y = h(k + 1, k - 1);
      }
      const Givens g = make_givens(x, y);
      if (k > l) {
        h(k, k - 1) = g.r;
        h(k + 1, k - 1) = Complex{};
      }
      rotate_rows(h, g, k, k);
      rotate_cols(h, g, k, std::min(k + 3, hi + 1));
      rotate_cols(z, g, k, n);
    }
  }
  return out;
}

}  // namespace

SchurForm schur_decompose(const DenseMatrix& a, std::size_t max_iters) {
  const std::size_t n = a.n();
  if (max_iters == 0) max_iters = 40 * n;
  DenseMatrix h = a;
  DenseMatrix z = DenseMatrix::identity(n);
  reduce_to_hessenberg(h, z);
  hessenberg_qr(h, z, max_iters);
  // The sweeps only touch rows up to hi+1 in the active columns; anything
  // left below the diagonal is an exact zero or a deflated entry.
  for (std::size_t i = 1; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) h(i, j) = Complex{};
  return SchurForm{adjoint(z), std::move(h)};
}

Spectrum eigenvalues(const DenseMatrix& a, std::size_t max_iters) {
  const std::size_t n = a.n();
  if (max_iters == 0) max_iters = 40 * n;
  DenseMatrix h = a;
  DenseMatrix z = DenseMatrix::identity(n);
  reduce_to_hessenberg(h, z);
  const QrOutcome qr = hessenberg_qr(h, z, max_iters);

  const double norm = std::sqrt(frobenius_norm_sq(a));
  const double floor = static_cast<double>(n) * kMachineEps * norm;

  Spectrum spec;
  spec.eigenvalues.resize(n);
  spec.residuals.resize(n);
  spec.cluster_ids.assign(n, 0);
  spec.zero_tolerance = 1e-7 * (1.0 + norm);
  for (std::size_t i = 0; i < n; ++i) {
    spec.eigenvalues[i] = h(i, i);
    double r = qr.deflated[i];
    if (i + 1 < n) r = std::max(r, qr.deflated[i + 1]);
    spec.residuals[i] = r + floor;
    if (std::abs(h(i, i)) > spec.zero_tolerance) ++spec.nonzero_count;
  }
  return spec;
}

std::vector<double> singular_values(const DenseMatrix& a) {
  // One-sided (Hestenes) Jacobi on the columns of A. Small singular values
  // come out with absolute accuracy ~eps*||A||, which the rank tolerance
  // relies on.
  const std::size_t n = a.n();
  std::vector<Complex> w(n * n);  // column-major copy
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) w[j * n + i] = a(i, j);
  auto col = [&](std::size_t j) { return w.data() + j * n; };

  constexpr int kMaxSweeps = 80;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        Complex* cp = col(p);
        Complex* cq = col(q);
        double alpha = 0.0;
        double beta = 0.0;
        Complex gamma{};
        for (std::size_t i = 0; i < n; ++i) {
          alpha += std::norm(cp[i]);
          beta += std::norm(cq[i]);
          gamma += std::conj(cp[i]) * cq[i];
        }
        const double g = std::abs(gamma);
        if (g == 0.0 || g <= kMachineEps * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const Complex phase = std::conj(gamma / g);
        const double zeta = (beta - alpha) / (2.0 * g);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t i = 0; i < n; ++i) {
          const Complex xp = cp[i];
          const Complex xq = cq[i] * phase;
          cp[i] = c * xp - s * xq;
          cq[i] = s * xp + c * xq;
        }
      }
    }
    if (!rotated) break;
  }

  std::vector<double> sigma(n);
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += std::norm(col(j)[i]);
    sigma[j] = std::sqrt(s);
  }
  std::sort(sigma.begin(), sigma.end(), std::greater<>());
  return sigma;
}

RankEstimate numerical_rank(const DenseMatrix& a, double rel_tol) {
  if (!(rel_tol > 0.0)) throw Error("numerical_rank: rel_tol must be positive");
  RankEstimate est;
  est.singular_values = singular_values(a);
  est.tolerance_used = rel_tol * est.singular_values.front() * static_cast<double>(a.n());
  est.rank = static_cast<std::size_t>(
      std::count_if(est.singular_values.begin(), est.singular_values.end(),
                    [&](double s) { return s > est.tolerance_used; }));
  return est;
}

double default_cluster_tolerance(const DenseMatrix& a) {
  return 1e-7 * (1.0 + std::sqrt(frobenius_norm_sq(a)));
}

MultiplicityEstimate geometric_multiplicity(const DenseMatrix& a, Complex lambda, double rel_tol,
                                            std::optional<double> cluster_tol) {
  MultiplicityEstimate est;
  est.eigenvalue = lambda;
  est.rank_of_shift = numerical_rank(shift(a, lambda), rel_tol);
  est.t = a.n() - est.rank_of_shift.rank;
  if (est.t > 0) return est;

  const double tol = cluster_tol.value_or(default_cluster_tolerance(a));
  const Spectrum spec = eigenvalues(a);
  double nearest = std::numeric_limits<double>::infinity();
  for (const auto& ev : spec.eigenvalues) nearest = std::min(nearest, std::abs(ev - lambda));
  if (nearest <= tol) {
    throw RankToleranceError("lambda*I - A has full numerical rank at tolerance " +
                             std::to_string(est.rank_of_shift.tolerance_used) +
                             " although lambda is within " + std::to_string(nearest) +
                             " of an eigenvalue");
  }
  throw NotAnEigenvalueError("lambda is " + std::to_string(nearest) +
                             " away from the nearest eigenvalue (cluster tolerance " +
                             std::to_string(tol) + ")");
}

Spectrum cluster_eigenvalues(Spectrum spec, double cluster_tol) {
  if (!(cluster_tol > 0.0)) throw Error("cluster_eigenvalues: cluster_tol must be positive");
  const std::size_t n = spec.eigenvalues.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (std::abs(spec.eigenvalues[i] - spec.eigenvalues[j]) <= cluster_tol) {
        const std::size_t ri = find(i);
        const std::size_t rj = find(j);
        if (ri != rj) parent[std::max(ri, rj)] = std::min(ri, rj);
      }
    }
  }
  // Roots are the smallest index in each set, so numbering roots in index
  // order gives first-appearance ids.
  std::vector<std::size_t> id_of_root(n, n);
  std::size_t next = 0;
  spec.cluster_ids.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = find(i);
    if (id_of_root[r] == n) id_of_root[r] = next++;
    spec.cluster_ids[i] = id_of_root[r];
  }
  return spec;
}

std::vector<Cluster> clusters_of(const Spectrum& spec) {
  std::size_t count = 0;
  for (auto id : spec.cluster_ids) count = std::max(count, id + 1);
  std::vector<Cluster> out(count);
  for (std::size_t i = 0; i < spec.eigenvalues.size(); ++i) {
    out[spec.cluster_ids[i]].members.push_back(i);
  }
  for (auto& c : out) {
    // Mean taken as an offset from the first member, so coincident members
    // reproduce their exact value.
    const Complex base = spec.eigenvalues[c.members.front()];
    Complex offset{};
    for (auto m : c.members) offset += spec.eigenvalues[m] - base;
    c.representative = base + offset / static_cast<double>(c.members.size());
  }
  return out;
}

}  // namespace eigenbound
