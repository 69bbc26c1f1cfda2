#include "jumpscan/plane2d.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace jumpscan {

namespace {

using cplx = std::complex<double>;

void check_direction(int j) {
  if (j != 1 && j != 2) throw std::invalid_argument("direction must be 1 or 2");
}

void check_order_2d(const CoefficientGrid2D& coeffs, int n) {
  if (n < 2) throw std::invalid_argument("Y_{j,n} needs n >= 2 (log 1 = 0)");
  if (n > coeffs.max_index()) throw std::out_of_range("order exceeds coefficient max_index");
}

double wrap_period(double x) {
  double r = x - two_pi * std::floor(x / two_pi);
  if (r >= two_pi) r -= two_pi;
  return r;
}

int sign_of(int v) { return (v > 0) - (v < 0); }

// Suffix shell masses U[r] = sum_{m=r..n} W_m, so the displayed double sum
//   sum_nu St_{j,||nu||}(x) |c_nu| = sum_mu U[||mu||] * sigma_j(mu, x)
// collapses to a single weighted lattice sum (grouping by shells is exact).
std::vector<double> suffix_shell_masses(const CoefficientGrid2D& coeffs, int n) {
  std::vector<double> u(static_cast<std::size_t>(n) + 2, 0.0);
  for (int r = n; r >= 1; --r) u[r] = u[r + 1] + coeffs.shell_mass(r);
  return u;
}

// Collapsed along-coordinate spectrum of Y_{j,n} on the line with the
// transverse coordinate fixed at t:
//   Y(x) = -Re( sum_a B[a] e^{i a x} ) / (log n * G(n)).
struct SliceEngine {
  int n = 0;
  double inv_norm = 0.0;           // -1/(log n G), 0 in the degenerate case
  std::vector<double> cr, sr;      // cos/sin weights per order m = 1..n

  SliceEngine(const CoefficientGrid2D& coeffs, int j, int n_, double transverse) : n(n_) {
    const double g = coeffs.mass(n);
    cr.assign(static_cast<std::size_t>(n) + 1, 0.0);
    sr.assign(static_cast<std::size_t>(n) + 1, 0.0);
    if (g == 0.0) return;
    inv_norm = -1.0 / (std::log(static_cast<double>(n)) * g);

    const std::vector<double> u = suffix_shell_masses(coeffs, n);
    std::vector<cplx> et(static_cast<std::size_t>(2 * n) + 1);
    for (int q = -n; q <= n; ++q)
      et[static_cast<std::size_t>(q + n)] = std::polar(1.0, q * transverse);

    for (int a = -n; a <= n; ++a) {
      const int s = sign_of(a);
      if (s == 0) continue;
      cplx inner(0.0, 0.0);
      const int abs_a = std::abs(a);
      for (int q = -n; q <= n; ++q) {
        const double w = u[std::max(abs_a, std::abs(q))];
        const cplx c = (j == 1) ? coeffs(a, q) : coeffs(q, a);
        inner += w * c * et[static_cast<std::size_t>(q + n)];
      }
      const cplx b = cplx(0.0, -static_cast<double>(s)) * inner;  // -i sign(a) * inner
      if (a > 0) {
        cr[abs_a] += b.real();
        sr[abs_a] -= b.imag();
      } else {
        cr[abs_a] += b.real();
        sr[abs_a] += b.imag();
      }
    }
  }

  double eval(double x) const {
    if (inv_norm == 0.0) return 0.0;
    const double er = std::cos(x);
    const double ei = std::sin(x);
    double pr = 1.0, pim = 0.0;
    double acc = 0.0;
    for (int m = 1; m <= n; ++m) {
      const double t = pr * er - pim * ei;
      pim = pr * ei + pim * er;
      pr = t;
      if ((m & 511) == 0) {
        pr = std::cos(static_cast<double>(m) * x);
        pim = std::sin(static_cast<double>(m) * x);
      }
      acc += cr[m] * pr + sr[m] * pim;
    }
    return acc * inv_norm;
  }
};

constexpr int n_transverse_slices = 8;

double transverse_slot(int s) {
  return two_pi * (2.0 * s + 1.0) / (2.0 * n_transverse_slices);
}

}  // namespace

CoefficientGrid2D::CoefficientGrid2D(int max_index, std::vector<cplx> values)
    : max_index_(max_index),
      side_(static_cast<std::size_t>(2 * max_index + 1)),
      values_(std::move(values)) {
  if (max_index_ < 0) throw std::invalid_argument("CoefficientGrid2D: max_index must be >= 0");
  if (values_.size() != side_ * side_)
    throw std::invalid_argument("CoefficientGrid2D: need exactly (2N+1)^2 values");
  real_symmetric_ = true;
  for (int a = -max_index_; a <= max_index_ && real_symmetric_; ++a)
    for (int b = -max_index_; b <= max_index_; ++b) {
      const cplx c = (*this)(a, b);
      const cplx d = (*this)(-a, -b);
      if (std::abs(d - std::conj(c)) > 1e-12 * (1.0 + std::abs(c) + std::abs(d))) {
        real_symmetric_ = false;
        break;
      }
    }
}

cplx CoefficientGrid2D::at(int nu1, int nu2) const {
  if (std::abs(nu1) > max_index_ || std::abs(nu2) > max_index_)
    throw std::out_of_range("CoefficientGrid2D: index outside the square");
  return (*this)(nu1, nu2);
}

double CoefficientGrid2D::mass(int n) const {
  if (n < 0 || n > max_index_) throw std::out_of_range("mass: order outside [0, N]");
  double g = 0.0;
  for (int a = -n; a <= n; ++a)
    for (int b = -n; b <= n; ++b) g += std::abs((*this)(a, b));
  return g;
}

double CoefficientGrid2D::shell_mass(int m) const {
  if (m < 0 || m > max_index_) throw std::out_of_range("shell_mass: order outside [0, N]");
  if (m == 0) return std::abs((*this)(0, 0));
  double w = 0.0;
  for (int b = -m; b <= m; ++b) w += std::abs((*this)(m, b)) + std::abs((*this)(-m, b));
  for (int a = -m + 1; a <= m - 1; ++a) w += std::abs((*this)(a, m)) + std::abs((*this)(a, -m));
  return w;
}

CoefficientGrid2D coefficients_2d(const SeparableField2D& field, int N) {
  if (N < 0) throw std::invalid_argument("coefficients_2d: N >= 0 required");
  if (field.empty()) throw std::invalid_argument("coefficients_2d: empty field");
  const std::size_t side = static_cast<std::size_t>(2 * N + 1);
  std::vector<cplx> values(side * side, cplx(0.0, 0.0));
  for (const SeparableTerm& term : field) {
    const CoefficientSet cx = coefficients_analytic(term.x1_factor, N);
    const CoefficientSet cy = coefficients_analytic(term.x2_factor, N);
    for (int a = -N; a <= N; ++a) {
      const cplx ga = cx[a];
      if (ga == cplx(0.0, 0.0)) continue;
      const std::size_t row = static_cast<std::size_t>(a + N) * side;
      for (int b = -N; b <= N; ++b) values[row + static_cast<std::size_t>(b + N)] += ga * cy[b];
    }
  }
  return CoefficientGrid2D(N, std::move(values));
}

CoefficientGrid2D coefficients_2d_from_samples(std::span<const double> samples, std::size_t M1,
                                               std::size_t M2, int N) {
  if (N < 0) throw std::invalid_argument("coefficients_2d_from_samples: N >= 0 required");
  if (samples.size() != M1 * M2)
    throw std::invalid_argument("coefficients_2d_from_samples: samples.size() != M1*M2");
  if (M1 < static_cast<std::size_t>(2 * N + 1) || M2 < static_cast<std::size_t>(2 * N + 1))
    throw std::invalid_argument("coefficients_2d_from_samples: M <= 2N aliases");

  const std::size_t side = static_cast<std::size_t>(2 * N + 1);
  std::vector<cplx> values(side * side);
  std::vector<cplx> row(M2);
  for (int nu1 = 0; nu1 <= N; ++nu1) {
    // collapse the first coordinate
    const cplx step1 = std::polar(1.0, -two_pi * static_cast<double>(nu1) / static_cast<double>(M1));
    std::fill(row.begin(), row.end(), cplx(0.0, 0.0));
    cplx phase(1.0, 0.0);
    for (std::size_t m1 = 0; m1 < M1; ++m1) {
      const double* line = samples.data() + m1 * M2;
      for (std::size_t m2 = 0; m2 < M2; ++m2) row[m2] += line[m2] * phase;
      phase *= step1;
    }
    for (cplx& v : row) v /= static_cast<double>(M1);

    const int lo2 = (nu1 == 0) ? 0 : -N;
    for (int nu2 = lo2; nu2 <= N; ++nu2) {
      const cplx step2 =
          std::polar(1.0, -two_pi * static_cast<double>(nu2) / static_cast<double>(M2));
      cplx acc(0.0, 0.0);
      cplx ph(1.0, 0.0);
      for (std::size_t m2 = 0; m2 < M2; ++m2) {
        acc += row[m2] * ph;
        ph *= step2;
      }
      acc /= static_cast<double>(M2);
      values[static_cast<std::size_t>(nu1 + N) * side + static_cast<std::size_t>(nu2 + N)] = acc;
      values[static_cast<std::size_t>(-nu1 + N) * side + static_cast<std::size_t>(-nu2 + N)] =
          std::conj(acc);
    }
  }
  return CoefficientGrid2D(N, std::move(values));
}

double conjugate_dirichlet_2d(int j, int n, double x1, double x2) {
  check_direction(j);
  if (n < 1) throw std::invalid_argument("conjugate_dirichlet_2d: n >= 1 required");
  return (j == 1) ? conjugate_dirichlet_kernel(n, x1) * dirichlet_kernel(n, x2)
                  : conjugate_dirichlet_kernel(n, x2) * dirichlet_kernel(n, x1);
}

double conjugate_partial_sum_2d(const CoefficientGrid2D& coeffs, int j, int n, double x1,
                                double x2) {
  check_direction(j);
  if (n < 0) throw std::invalid_argument("conjugate_partial_sum_2d: n >= 0 required");
  if (n > coeffs.max_index()) throw std::out_of_range("order exceeds coefficient max_index");

  const double x_along = (j == 1) ? x1 : x2;
  const double x_other = (j == 1) ? x2 : x1;
  std::vector<cplx> e_other(static_cast<std::size_t>(2 * n) + 1);
  for (int q = -n; q <= n; ++q)
    e_other[static_cast<std::size_t>(q + n)] = std::polar(1.0, q * x_other);

  cplx total(0.0, 0.0);
  for (int a = -n; a <= n; ++a) {
    const int s = sign_of(a);
    if (s == 0) continue;
    cplx inner(0.0, 0.0);
    for (int q = -n; q <= n; ++q) {
      const cplx c = (j == 1) ? coeffs(a, q) : coeffs(q, a);
      inner += c * e_other[static_cast<std::size_t>(q + n)];
    }
    total += static_cast<double>(s) * inner * std::polar(1.0, a * x_along);
  }
  const cplx result(total.imag(), -total.real());  // -i * total
  if (coeffs.real_symmetric() &&
      std::fabs(result.imag()) > 1e-9 * std::max(1.0, std::fabs(result.real())))
    throw std::logic_error("2D conjugate sum of a real-symmetric grid has imaginary residue > 1e-9");
  return result.real();
}

double y_jn(const CoefficientGrid2D& coeffs, int j, int n, double x1, double x2, ShellMode mode) {
  check_direction(j);
  check_order_2d(coeffs, n);
  (void)mode;  // the lattice and shell-collapsed weightings coincide on the full square
  const double g = coeffs.mass(n);
  if (g == 0.0) return 0.0;

  std::vector<cplx> e1(static_cast<std::size_t>(2 * n) + 1), e2(e1.size());
  for (int q = -n; q <= n; ++q) {
    e1[static_cast<std::size_t>(q + n)] = std::polar(1.0, q * x1);
    e2[static_cast<std::size_t>(q + n)] = std::polar(1.0, q * x2);
  }

  // literal structure: grow the conjugate sum shell by shell; after shell m
  // the running value is St_{j,m}(x), weighted by that shell's mass W_m.
  auto sigma = [&](int a, int b) {
    const int s = (j == 1) ? sign_of(a) : sign_of(b);
    if (s == 0) return 0.0;
    const cplx v = coeffs(a, b) * e1[static_cast<std::size_t>(a + n)] *
                   e2[static_cast<std::size_t>(b + n)];
    return static_cast<double>(s) * v.imag();  // Re(-i sign * c e^{i mu x})
  };

  double running = 0.0, acc = 0.0;
  for (int m = 1; m <= n; ++m) {
    for (int b = -m; b <= m; ++b) running += sigma(m, b) + sigma(-m, b);
    for (int a = -m + 1; a <= m - 1; ++a) running += sigma(a, m) + sigma(a, -m);
    acc += running * coeffs.shell_mass(m);
  }
  return -acc / (std::log(static_cast<double>(n)) * g);
}

std::vector<double> y_jn_slice(const CoefficientGrid2D& coeffs, int j, int n, double transverse,
                               std::size_t grid_size, ShellMode mode, Exec exec) {
  check_direction(j);
  check_order_2d(coeffs, n);
  (void)mode;
  if (grid_size < static_cast<std::size_t>(16 * n))
    throw std::invalid_argument("y_jn_slice: grid too coarse, need grid_size >= 16 n");

  const SliceEngine engine(coeffs, j, n, transverse);
  std::vector<double> out(grid_size);
  const double step = two_pi / static_cast<double>(grid_size);
  if (exec == Exec::parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::size_t i = 0; i < grid_size; ++i) out[i] = engine.eval(static_cast<double>(i) * step);
  } else {
    for (std::size_t i = 0; i < grid_size; ++i) out[i] = engine.eval(static_cast<double>(i) * step);
  }
  return out;
}

double calibrate_k2(int n) {
  if (n < 2) throw std::invalid_argument("calibrate_k2 needs n >= 2");
  const SeparableField2D reference{
      {make_pulse(two_pi / 3.0, 2.0 * two_pi / 3.0, 1.0), make_constant(1.0)}};
  const CoefficientGrid2D coeffs = coefficients_2d(reference, n);
  double mean = 0.0;
  for (int s = 0; s < n_transverse_slices; ++s)
    mean += y_jn(coeffs, 1, n, two_pi / 3.0, transverse_slot(s));
  mean /= n_transverse_slices;
  const double k2 = two_pi * two_pi * mean;  // J = 1
  if (!(k2 > 0.0) || !std::isfinite(k2))
    throw std::runtime_error("calibrate_k2: degenerate calibration");
  return k2;
}

HyperplaneReport detect_hyperplanes(const CoefficientGrid2D& coeffs, int j, int n,
                                    double threshold_ratio, ShellMode mode) {
  check_direction(j);
  check_order_2d(coeffs, n);
  if (!(threshold_ratio > 0.0 && threshold_ratio < 1.0))
    throw std::invalid_argument("detect_hyperplanes: threshold_ratio must lie in (0, 1)");

  HyperplaneReport report;
  report.direction = j;
  report.n = n;

  const std::size_t grid = static_cast<std::size_t>(16 * n);
  std::vector<double> avg(grid, 0.0);
  for (int s = 0; s < n_transverse_slices; ++s) {
    const std::vector<double> slice = y_jn_slice(coeffs, j, n, transverse_slot(s), grid, mode);
    for (std::size_t i = 0; i < grid; ++i) avg[i] += slice[i];
  }
  for (double& v : avg) v /= n_transverse_slices;

  double max_abs = 0.0;
  for (double v : avg) max_abs = std::max(max_abs, std::fabs(v));
  if (max_abs < 1e-10) return report;  // no hyperplanes in this direction

  const double k2 = calibrate_k2(n);
  report.k_used = k2;

  const double step = two_pi / static_cast<double>(grid);
  for (std::size_t i = 0; i < grid; ++i) {
    const double prev = std::fabs(avg[(i + grid - 1) % grid]);
    const double here = std::fabs(avg[i]);
    const double next = std::fabs(avg[(i + 1) % grid]);
    if (!(here > prev && here >= next)) continue;
    if (here < threshold_ratio * max_abs) continue;

    double delta = 0.0;
    const double denom = prev - 2.0 * here + next;
    if (denom < 0.0) delta = std::clamp(0.5 * (prev - next) / denom, -0.5, 0.5);
    const double offset = wrap_period((static_cast<double>(i) + delta) * step);

    double point_mean = 0.0;
    for (int s = 0; s < n_transverse_slices; ++s)
      point_mean += (j == 1) ? y_jn(coeffs, 1, n, offset, transverse_slot(s), mode)
                             : y_jn(coeffs, 2, n, transverse_slot(s), offset, mode);
    point_mean /= n_transverse_slices;

    HyperplaneEntry entry;
    entry.offset = offset;
    entry.magnitude = two_pi * two_pi * point_mean / k2;
    entry.score = here / max_abs;
    report.entries.push_back(entry);
  }
  std::sort(report.entries.begin(), report.entries.end(),
            [](const HyperplaneEntry& a, const HyperplaneEntry& b) { return a.offset < b.offset; });
  return report;
}

double rectangle_slice_variation(const CoefficientGrid2D& coeffs, int j, const Rect& rect, int n,
                                 ShellMode mode) {
  check_direction(j);
  check_order_2d(coeffs, n);
  (void)mode;
  const double a_along = (j == 1) ? rect.a1 : rect.a2;
  const double b_along = (j == 1) ? rect.b1 : rect.b2;
  const double a_trans = (j == 1) ? rect.a2 : rect.a1;
  const double b_trans = (j == 1) ? rect.b2 : rect.b1;
  if (!(0.0 < a_along && a_along < b_along && b_along < two_pi) ||
      !(0.0 < a_trans && a_trans < b_trans && b_trans < two_pi))
    throw std::invalid_argument("rectangle_slice_variation: degenerate rectangle");

  const std::size_t grid = static_cast<std::size_t>(16 * n);
  const double step = two_pi / static_cast<double>(grid);
  std::vector<double> xs;
  for (std::size_t i = 0; i < grid; ++i) {
    const double x = static_cast<double>(i) * step;
    if (x > a_along && x < b_along) xs.push_back(x);
  }
  if (xs.size() < 2)
    throw std::invalid_argument("rectangle_slice_variation: rectangle too thin for the grid");

  double mean_tv = 0.0;
  std::vector<double> values(xs.size());
  for (int s = 0; s < n_transverse_slices; ++s) {
    const double t = a_trans + (b_trans - a_trans) * (2.0 * s + 1.0) /
                                   (2.0 * n_transverse_slices);
    const SliceEngine engine(coeffs, j, n, t);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::size_t i = 0; i < xs.size(); ++i) values[i] = engine.eval(xs[i]);
    mean_tv += brute_force_variation(values);
  }
  return mean_tv / n_transverse_slices;
}

}  // namespace jumpscan
