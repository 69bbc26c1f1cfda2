#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "jumpscan/spectral.hpp"

namespace jumpscan {

/// Execution policy for grid kernels. Parallel evaluation partitions the
/// grid across threads; every point is computed by the same scalar kernel,
/// so results are bit-identical to serial evaluation.
enum class Exec { serial, parallel };

/**
 * Y_n sampled on a uniform grid over [0, 2pi).
 *
 * Y_n(x) = -(1 / (log n * G(n))) * sum_{k=1..n} St_k(x) |c_k|.
 *
 * Sign convention: the conjugate partial sums diverge at a jump with sign
 * opposite to the jump (St_n ~ -(J/pi) log n), so with the leading minus
 * sign Y_n converges to a POSITIVE multiple of J(x)/(2pi) at jumps. Detected
 * magnitudes therefore carry the sign of the jump itself.
 */
struct YnField {
  int n = 0;
  std::size_t grid_size = 0;
  std::vector<double> values;
  /// log(n) * G(n). Zero only in the degenerate G(n) = 0 case, where the
  /// field is identically zero by convention.
  double normalizer = 0.0;

  /// Same expression the evaluators use, so x(i) reproduces grid abscissas
  /// bit for bit.
  double x(std::size_t i) const {
    return static_cast<double>(i) * (two_pi / static_cast<double>(grid_size));
  }
  double max_abs() const;
};

struct JumpEntry {
  double location = 0.0;   // refined peak position in [0, 2pi)
  double magnitude = 0.0;  // signed jump estimate
  double score = 0.0;      // |field value at peak| / field max, in [threshold, 1]
};

struct JumpReport {
  std::vector<JumpEntry> entries;
  std::string estimator;  // "yn-calibrated" or "lukacs"
  int n = 0;
  double k_used = 0.0;    // calibration constant behind the magnitudes (0 for lukacs)
};

struct VariationEstimate {
  double a = 0.0, b = 0.0;
  int n = 0;
  double value = 0.0;           // discrete TV of Y_n inside (a, b)
  std::size_t grid_density = 0; // per-period grid the field was sampled on
};

/// Empirical estimates of the proportionality constant: k_point from the
/// pointwise limit at a unit jump, k_var from the interval-variation limit.
/// The two routes are calibrated independently.
struct CalibrationResult {
  double k_point = 0.0;
  double k_var = 0.0;
  int n = 0;
  std::string reference;  // identity of the calibration signal
};

enum class JumpEstimator { yn_calibrated, lukacs };

/// Y_n(x); requires 2 <= n <= coeffs.max_index(). Returns 0 when G(n) = 0.
double y_n(const CoefficientSet& coeffs, int n, double x);

/// Y_n on a uniform grid (grid_size >= 16 n so the degree-n polynomial is
/// resolved). Cost O(n * grid_size): the conjugate sums are accumulated
/// incrementally in k at each point.
YnField y_n_field(const CoefficientSet& coeffs, int n, std::size_t grid_size,
                  Exec exec = Exec::parallel);

/// Direct magnitude estimator pi * |St_n|-rate at x: converges to J(x) at
/// jump points and to 0 elsewhere (slowly, at 1/log n scale). Includes the
/// sign compensation described on YnField.
double lukacs_jump_estimate(const CoefficientSet& coeffs, int n, double x);

/// Peak-picks |Y_n| over a 16n grid: local maxima above
/// threshold_ratio * max|Y_n| become entries, locations refined by 3-point
/// parabolic interpolation, magnitudes 2pi * Y_n(x_hat) / k_point.
/// An empty report (max < 1e-10) means "no jumps", not an error.
JumpReport detect_jumps(const CoefficientSet& coeffs, int n, double threshold_ratio,
                        const CalibrationResult& calibration,
                        JumpEstimator estimator = JumpEstimator::yn_calibrated);

/// Discrete total variation of Y_n over (a, b), sampled on a grid of
/// `grid_density` points per period (grid_density >= 16 n).
VariationEstimate interval_variation(const CoefficientSet& coeffs, int n, double a,
                                     double b, std::size_t grid_density);

/// Calibrates against the unit reference pulse(2pi/3, 4pi/3, 1):
/// k_point = 2pi * Y_n(2pi/3), k_var = pi * TV of Y_n over (1, 3).
CalibrationResult calibrate_K(int n);

}  // namespace jumpscan
