#pragma once

#include <complex>
#include <span>
#include <string_view>
#include <vector>

#include "jumpscan/signal.hpp"

namespace jumpscan {

/**
 * Complex Fourier coefficients c_nu for |nu| <= N under the fixed convention
 *
 *     c_nu = (1/2pi) \int_0^{2pi} f(x) e^{-i nu x} dx.
 *
 * The set is total on [-N, N] and immutable. For real-valued signals the
 * stored values satisfy c_{-nu} = conj(c_nu); whether that holds (to 1e-12)
 * is detected at construction and drives the imaginary-residue checks in the
 * partial-sum evaluators.
 */
class CoefficientSet {
public:
  static constexpr std::string_view convention =
      "c_nu = (1/2pi) int_0^2pi f(x) exp(-i nu x) dx";

  /// values[nu + N] holds c_nu; values.size() must equal 2N+1.
  CoefficientSet(int max_index, std::vector<std::complex<double>> values);

  int max_index() const { return max_index_; }
  std::complex<double> at(int nu) const;
  std::complex<double> operator[](int nu) const { return values_[nu + max_index_]; }
  bool real_symmetric() const { return real_symmetric_; }

  /// Multiplies every coefficient by the given scalar (returns a new set).
  CoefficientSet scaled(double factor) const;
  /// Coefficients of x -> f(x - delta): c_nu * e^{-i nu delta}.
  CoefficientSet translated(double delta) const;

private:
  int max_index_;
  std::vector<std::complex<double>> values_;
  bool real_symmetric_;
};

/// Dirichlet kernel D_n(x) = 1/2 + sum_{v=1..n} cos(v x)
///                         = sin((n+1/2)x) / (2 sin(x/2)), D_n(0) = n + 1/2.
double dirichlet_kernel(int n, double x);

/// Conjugate Dirichlet kernel Dt_n(x) = sum_{v=1..n} sin(v x)
///                  = (cos(x/2) - cos((n+1/2)x)) / (2 sin(x/2)), Dt_n(0) = 0.
double conjugate_dirichlet_kernel(int n, double x);

/// Exact coefficients of a piecewise-polynomial signal, by per-piece
/// antidifferentiation of p(x) e^{-i nu x}.
CoefficientSet coefficients_analytic(const SignalSpec& spec, int N);

/// Discrete approximation from M uniform samples f(2pi m / M), m = 0..M-1.
/// Requires M >= 2N+1; error is O(1/M) for signals with jumps.
CoefficientSet coefficients_from_samples(std::span<const double> samples, int N);

/// S_n(x) = sum_{|nu|<=n} c_nu e^{i nu x}, real part (imaginary residue
/// checked against 1e-9 when the set is real-symmetric).
double partial_sum(const CoefficientSet& coeffs, int n, double x);

/// St_n(x) = -i sum_{|nu|<=n} sign(nu) c_nu e^{i nu x}, real part; sign(0)=0.
double conjugate_partial_sum(const CoefficientSet& coeffs, int n, double x);

/// G(n) = sum_{i=0..n} |c_i| (non-negative indices only).
double coefficient_mass(const CoefficientSet& coeffs, int n);

/// S_n sampled at x_i = 2pi i / grid_size. Uses a transform path when
/// grid_size is a power of two >= 2n+1, otherwise direct summation.
std::vector<double> partial_sum_grid(const CoefficientSet& coeffs, int n,
                                     std::size_t grid_size);
std::vector<double> conjugate_partial_sum_grid(const CoefficientSet& coeffs, int n,
                                               std::size_t grid_size);

}  // namespace jumpscan
