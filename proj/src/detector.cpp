#include "jumpscan/detector.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace jumpscan {

namespace {

// Scalar Y_n kernel shared by the point evaluator and both field paths, so
// parallel and serial evaluation are bit-identical point for point.
//
// At each x the conjugate partial sums are accumulated incrementally:
//   St_k = St_{k-1} + Im(c_k e^{ikx}) - Im(c_{-k} e^{-ikx}),
// and the weighted sum acc += St_k |c_k| runs alongside, so one point costs
// O(n). The unit phase e^{ikx} advances by recurrence and is re-seeded from
// sin/cos every 512 steps to hold the accumulated rounding near 1e-13.
struct YnKernel {
  std::vector<double> re_pos, im_pos, re_neg, im_neg, abs_pos;  // index k-1, k = 1..n
  int n = 0;
  double scale = 0.0;  // -1 / (log n * G(n))

  YnKernel(const CoefficientSet& coeffs, int n_, double mass) : n(n_) {
    re_pos.resize(n);
    im_pos.resize(n);
    re_neg.resize(n);
    im_neg.resize(n);
    abs_pos.resize(n);
    for (int k = 1; k <= n; ++k) {
      const std::complex<double> cp = coeffs[k];
      const std::complex<double> cm = coeffs[-k];
      re_pos[k - 1] = cp.real();
      im_pos[k - 1] = cp.imag();
      re_neg[k - 1] = cm.real();
      im_neg[k - 1] = cm.imag();
      abs_pos[k - 1] = std::abs(cp);
    }
    scale = -1.0 / (std::log(static_cast<double>(n)) * mass);
  }

  double eval(double x) const {
    const double er = std::cos(x);
    const double ei = std::sin(x);
    double pr = 1.0, pim = 0.0;  // e^{ikx}
    double st = 0.0, acc = 0.0;
    for (int k = 1; k <= n; ++k) {
      const double t = pr * er - pim * ei;
      pim = pr * ei + pim * er;
      pr = t;
      if ((k & 511) == 0) {
        pr = std::cos(static_cast<double>(k) * x);
        pim = std::sin(static_cast<double>(k) * x);
      }
      const int i = k - 1;
      st += (re_pos[i] * pim + im_pos[i] * pr) - (-re_neg[i] * pim + im_neg[i] * pr);
      acc += st * abs_pos[i];
    }
    return acc * scale;
  }
};

void check_detector_order(const CoefficientSet& coeffs, int n) {
  if (n < 2) throw std::invalid_argument("Y_n needs n >= 2 (log 1 = 0)");
  if (n > coeffs.max_index()) throw std::out_of_range("order exceeds coefficient max_index");
}

double wrap_period(double x) {
  double r = x - two_pi * std::floor(x / two_pi);
  if (r >= two_pi) r -= two_pi;
  return r;
}

}  // namespace

double YnField::max_abs() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::fabs(v));
  return m;
}

double y_n(const CoefficientSet& coeffs, int n, double x) {
  check_detector_order(coeffs, n);
  const double g = coefficient_mass(coeffs, n);
  if (g == 0.0) return 0.0;
  return YnKernel(coeffs, n, g).eval(x);
}

YnField y_n_field(const CoefficientSet& coeffs, int n, std::size_t grid_size, Exec exec) {
  check_detector_order(coeffs, n);
  if (grid_size < static_cast<std::size_t>(16 * n))
    throw std::invalid_argument("y_n_field: grid too coarse, need grid_size >= 16 n");

  YnField field;
  field.n = n;
  field.grid_size = grid_size;
  field.values.assign(grid_size, 0.0);

  const double g = coefficient_mass(coeffs, n);
  field.normalizer = std::log(static_cast<double>(n)) * g;
  if (g == 0.0) return field;  // identically zero by convention

  const YnKernel kernel(coeffs, n, g);
  const double step = two_pi / static_cast<double>(grid_size);
  if (exec == Exec::parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::size_t i = 0; i < grid_size; ++i)
      field.values[i] = kernel.eval(static_cast<double>(i) * step);
  } else {
    for (std::size_t i = 0; i < grid_size; ++i)
      field.values[i] = kernel.eval(static_cast<double>(i) * step);
  }
  return field;
}

double lukacs_jump_estimate(const CoefficientSet& coeffs, int n, double x) {
  if (n < 2) throw std::invalid_argument("lukacs_jump_estimate needs n >= 2");
  // The conjugate sums diverge as -(J/pi) log n at a jump; the minus sign
  // here restores the sign of the jump itself.
  return -pi * conjugate_partial_sum(coeffs, n, x) / std::log(static_cast<double>(n));
}

JumpReport detect_jumps(const CoefficientSet& coeffs, int n, double threshold_ratio,
                        const CalibrationResult& calibration, JumpEstimator estimator) {
  check_detector_order(coeffs, n);
  if (!(threshold_ratio > 0.0 && threshold_ratio < 1.0))
    throw std::invalid_argument("detect_jumps: threshold_ratio must lie in (0, 1)");

  JumpReport report;
  report.n = n;
  report.estimator = (estimator == JumpEstimator::yn_calibrated) ? "yn-calibrated" : "lukacs";
  report.k_used = (estimator == JumpEstimator::yn_calibrated) ? calibration.k_point : 0.0;

  const std::size_t grid = static_cast<std::size_t>(16 * n);
  const YnField field = y_n_field(coeffs, n, grid);
  const double max_abs = field.max_abs();
  if (max_abs < 1e-10) return report;  // no jumps; empty result, not an error

  const double step = two_pi / static_cast<double>(grid);
  for (std::size_t i = 0; i < grid; ++i) {
    const double prev = std::fabs(field.values[(i + grid - 1) % grid]);
    const double here = std::fabs(field.values[i]);
    const double next = std::fabs(field.values[(i + 1) % grid]);
    if (!(here > prev && here >= next)) continue;
    if (here < threshold_ratio * max_abs) continue;

    // 3-point parabolic refinement on |Y|
    double delta = 0.0;
    const double denom = prev - 2.0 * here + next;
    if (denom < 0.0) delta = std::clamp(0.5 * (prev - next) / denom, -0.5, 0.5);
    const double location = wrap_period((static_cast<double>(i) + delta) * step);

    JumpEntry entry;
    entry.location = location;
    entry.score = here / max_abs;
    if (estimator == JumpEstimator::yn_calibrated) {
      entry.magnitude = two_pi * y_n(coeffs, n, location) / calibration.k_point;
    } else {
      entry.magnitude = lukacs_jump_estimate(coeffs, n, location);
    }
    report.entries.push_back(entry);
  }
  std::sort(report.entries.begin(), report.entries.end(),
            [](const JumpEntry& a, const JumpEntry& b) { return a.location < b.location; });
  return report;
}

VariationEstimate interval_variation(const CoefficientSet& coeffs, int n, double a, double b,
                                     std::size_t grid_density) {
  check_detector_order(coeffs, n);
  if (!(0.0 < a && a < b && b < two_pi))
    throw std::invalid_argument("interval_variation: need 0 < a < b < 2*pi");
  if (grid_density < static_cast<std::size_t>(16 * n))
    throw std::invalid_argument("interval_variation: grid too coarse, need >= 16 n per period");

  const YnField field = y_n_field(coeffs, n, grid_density);
  std::vector<double> inside;
  inside.reserve(static_cast<std::size_t>((b - a) / two_pi * static_cast<double>(grid_density)) + 2);
  for (std::size_t i = 0; i < grid_density; ++i) {
    const double x = field.x(i);
    if (x > a && x < b) inside.push_back(field.values[i]);
    if (x >= b) break;
  }
  if (inside.size() < 2)
    throw std::invalid_argument("interval_variation: no grid points inside (a, b)");

  VariationEstimate est;
  est.a = a;
  est.b = b;
  est.n = n;
  est.value = brute_force_variation(inside);
  est.grid_density = grid_density;
  return est;
}

CalibrationResult calibrate_K(int n) {
  if (n < 2) throw std::invalid_argument("calibrate_K needs n >= 2");
  const SignalSpec reference = make_pulse(two_pi / 3.0, 2.0 * two_pi / 3.0, 1.0);
  const CoefficientSet coeffs = coefficients_analytic(reference, n);

  CalibrationResult result;
  result.n = n;
  result.reference = "pulse(2pi/3,4pi/3,1)";
  result.k_point = two_pi * y_n(coeffs, n, two_pi / 3.0);  // J = 1
  // variation route: (1, 3) brackets only the +1 jump at 2pi/3
  result.k_var =
      pi * interval_variation(coeffs, n, 1.0, 3.0, static_cast<std::size_t>(16 * n)).value;
  if (!(result.k_point > 0.0) || !std::isfinite(result.k_point))
    throw std::runtime_error("calibrate_K: degenerate point calibration");
  return result;
}

}  // namespace jumpscan
