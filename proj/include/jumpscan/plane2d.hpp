#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "jumpscan/detector.hpp"
#include "jumpscan/signal.hpp"

namespace jumpscan {

/**
 * Fourier coefficients c_{nu1,nu2} on the index square [-N, N]^2 under the
 * (2pi)^{-2} normalization (the 2D analog of CoefficientSet::convention).
 *
 * Note on normalizers: the 2D coefficient mass G(n) sums |c_nu| over the
 * FULL square including negative indices, unlike the 1D G(n) which runs over
 * non-negative indices only. Both follow their respective definitions.
 */
class CoefficientGrid2D {
public:
  CoefficientGrid2D(int max_index, std::vector<std::complex<double>> values);

  int max_index() const { return max_index_; }
  std::complex<double> at(int nu1, int nu2) const;
  std::complex<double> operator()(int nu1, int nu2) const {
    return values_[static_cast<std::size_t>(nu1 + max_index_) * side_ + static_cast<std::size_t>(nu2 + max_index_)];
  }
  bool real_symmetric() const { return real_symmetric_; }

  /// G(n) = sum over the square max(|nu1|,|nu2|) <= n of |c_nu|.
  double mass(int n) const;
  /// Shell mass W_m = sum over max(|nu1|,|nu2|) == m of |c_nu|.
  double shell_mass(int m) const;

private:
  int max_index_;
  std::size_t side_;
  std::vector<std::complex<double>> values_;
  bool real_symmetric_;
};

/// One separable term g(x1) * h(x2) of a 2D field.
struct SeparableTerm {
  SignalSpec x1_factor;
  SignalSpec x2_factor;
};

/// A field that is a finite sum of separable terms.
using SeparableField2D = std::vector<SeparableTerm>;

/// c_{nu1,nu2} = sum over terms of c^{g}_{nu1} * c^{h}_{nu2} (exact 1D
/// analytic coefficients of each factor).
CoefficientGrid2D coefficients_2d(const SeparableField2D& field, int N);

/// Discrete coefficients from an M1 x M2 uniform sample grid
/// (samples[m1 * M2 + m2] = f(2pi m1/M1, 2pi m2/M2)); requires M1, M2 >= 2N+1.
CoefficientGrid2D coefficients_2d_from_samples(std::span<const double> samples,
                                               std::size_t M1, std::size_t M2, int N);

/// Product kernel: conjugate factor in coordinate j, Dirichlet in the other.
double conjugate_dirichlet_2d(int j, int n, double x1, double x2);

/// Rectangular conjugate partial sum in direction j (sign_j multiplier,
/// sign_j(nu) = 0 when nu_j = 0); real part returned.
double conjugate_partial_sum_2d(const CoefficientGrid2D& coeffs, int j, int n,
                                double x1, double x2);

/// How the order-m terms of Y_{j,n} are weighted. `lattice` follows the
/// displayed double sum (every lattice point contributes the conjugate sum
/// at its own max-norm order); `shell_collapsed` evaluates one term per
/// order m with weight W_m. The two coincide on the full index square,
/// because grouping the lattice sum by shells is exact; the flag exists for
/// sensitivity studies on restricted index sets.
enum class ShellMode { lattice, shell_collapsed };

/// Y_{j,n}(x) = -(1/(log n * G(n))) sum over the square of
/// St_{j,||nu||_inf}(x) |c_nu|. Requires 2 <= n <= N; returns 0 if G(n) = 0.
double y_jn(const CoefficientGrid2D& coeffs, int j, int n, double x1, double x2,
            ShellMode mode = ShellMode::lattice);

/// Y_{j,n} along coordinate j on a uniform grid of grid_size points, with the
/// other coordinate fixed at `transverse`.
std::vector<double> y_jn_slice(const CoefficientGrid2D& coeffs, int j, int n,
                               double transverse, std::size_t grid_size,
                               ShellMode mode = ShellMode::lattice,
                               Exec exec = Exec::parallel);

struct HyperplaneEntry {
  double offset = 0.0;     // alpha of the detected line x_j = alpha
  double magnitude = 0.0;  // signed jump estimate across the line
  double score = 0.0;
};

struct HyperplaneReport {
  int direction = 0;
  std::vector<HyperplaneEntry> entries;
  int n = 0;
  double k_used = 0.0;
};

/// Empirical constant of the 2D pointwise limit K2 * J / (2pi)^2, measured
/// on the unit pulse-in-x reference field.
double calibrate_k2(int n);

/// Averages Y_{j,n} over 8 transverse slices, then peak-picks offsets as the
/// 1D detector does. Magnitudes are (2pi)^2 * Ybar / K2.
HyperplaneReport detect_hyperplanes(const CoefficientGrid2D& coeffs, int j, int n,
                                    double threshold_ratio,
                                    ShellMode mode = ShellMode::lattice);

/// Axis-aligned rectangle (a1,b1) x (a2,b2) inside (0,2pi)^2.
struct Rect {
  double a1 = 0.0, b1 = 0.0;
  double a2 = 0.0, b2 = 0.0;
};

/// Mean over 8 transverse slices (fixed inside the rectangle's transverse
/// extent) of the 1D discrete TV of Y_{j,n} along direction j restricted to
/// the rectangle's j-extent. A per-direction slice surrogate for rectangle
/// variation: for jump-hyperplane fields it carries the same jump mass.
double rectangle_slice_variation(const CoefficientGrid2D& coeffs, int j,
                                 const Rect& rect, int n,
                                 ShellMode mode = ShellMode::lattice);

}  // namespace jumpscan
