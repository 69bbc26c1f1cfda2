#include "jumpscan/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace jumpscan {

namespace {

using cplx = std::complex<double>;

// Below this the closed forms lose digits to cancellation; the direct
// trigonometric sums take over.
constexpr double kernel_series_cutoff = 1e-8;

bool is_pow2(std::size_t m) { return m != 0 && (m & (m - 1)) == 0; }

// In-place radix-2 transform of a, with e^{+i 2pi/M} twiddles (synthesis
// direction, no 1/M scaling).
void synthesis_fft(std::vector<cplx>& a) {
  const std::size_t m = a.size();
  for (std::size_t i = 1, j = 0; i < m; ++i) {
    std::size_t bit = m >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= m; len <<= 1) {
    const double ang = two_pi / static_cast<double>(len);
    const cplx wl = std::polar(1.0, ang);
    for (std::size_t i = 0; i < m; i += len) {
      cplx w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        cplx u = a[i + k];
        cplx v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wl;
      }
    }
  }
}

void check_order(const CoefficientSet& coeffs, int n) {
  if (n < 0) throw std::invalid_argument("partial sum order must be non-negative");
  if (n > coeffs.max_index()) throw std::out_of_range("order exceeds coefficient max_index");
}

double checked_real(cplx sum, bool symmetric) {
  if (symmetric && std::fabs(sum.imag()) > 1e-9 * std::max(1.0, std::fabs(sum.real())))
    throw std::logic_error("partial sum of a real-symmetric set has imaginary residue > 1e-9");
  return sum.real();
}

}  // namespace

CoefficientSet::CoefficientSet(int max_index, std::vector<cplx> values)
    : max_index_(max_index), values_(std::move(values)) {
  if (max_index_ < 0) throw std::invalid_argument("CoefficientSet: max_index must be >= 0");
  if (values_.size() != static_cast<std::size_t>(2 * max_index_ + 1))
    throw std::invalid_argument("CoefficientSet: need exactly 2N+1 values");
  real_symmetric_ = true;
  for (int nu = 0; nu <= max_index_; ++nu) {
    const cplx a = values_[static_cast<std::size_t>(max_index_ + nu)];
    const cplx b = values_[static_cast<std::size_t>(max_index_ - nu)];
    if (std::abs(b - std::conj(a)) > 1e-12 * (1.0 + std::abs(a) + std::abs(b))) {
      real_symmetric_ = false;
      break;
    }
  }
}

cplx CoefficientSet::at(int nu) const {
  if (nu < -max_index_ || nu > max_index_)
    throw std::out_of_range("CoefficientSet: index outside [-N, N]");
  return values_[static_cast<std::size_t>(nu + max_index_)];
}

CoefficientSet CoefficientSet::scaled(double factor) const {
  std::vector<cplx> v(values_);
  for (cplx& c : v) c *= factor;
  return CoefficientSet(max_index_, std::move(v));
}

CoefficientSet CoefficientSet::translated(double delta) const {
  std::vector<cplx> v(values_);
  for (int nu = -max_index_; nu <= max_index_; ++nu)
    v[static_cast<std::size_t>(nu + max_index_)] *= std::polar(1.0, -nu * delta);
  return CoefficientSet(max_index_, std::move(v));
}

double dirichlet_kernel(int n, double x) {
  if (n < 1) throw std::invalid_argument("dirichlet_kernel: n >= 1 required");
  const double half_sin = std::sin(0.5 * x);
  if (std::fabs(half_sin) < kernel_series_cutoff) {
    double s = 0.5;
    for (int v = 1; v <= n; ++v) s += std::cos(v * x);
    return s;
  }
  return std::sin((n + 0.5) * x) / (2.0 * half_sin);
}

double conjugate_dirichlet_kernel(int n, double x) {
  if (n < 1) throw std::invalid_argument("conjugate_dirichlet_kernel: n >= 1 required");
  const double half_sin = std::sin(0.5 * x);
  if (std::fabs(half_sin) < kernel_series_cutoff) {
    double s = 0.0;
    for (int v = 1; v <= n; ++v) s += std::sin(v * x);
    return s;
  }
  return (std::cos(0.5 * x) - std::cos((n + 0.5) * x)) / (2.0 * half_sin);
}

CoefficientSet coefficients_analytic(const SignalSpec& spec, int N) {
  if (N < 0) throw std::invalid_argument("coefficients_analytic: N >= 0 required");
  std::vector<std::vector<Polynomial>> chains;  // p, p', p'', ... per piece
  std::vector<Polynomial> antiderivatives;
  for (const Piece& piece : spec.pieces()) {
    std::vector<Polynomial> chain{piece.poly};
    while (chain.back().degree() > 0) chain.push_back(chain.back().derivative());
    if (chain.back().degree() < 0) chain.pop_back();
    chains.push_back(std::move(chain));
    Polynomial anti;
    anti.coeffs.assign(piece.poly.coeffs.size() + 1, 0.0);
    for (std::size_t k = 0; k < piece.poly.coeffs.size(); ++k)
      anti.coeffs[k + 1] = piece.poly.coeffs[k] / static_cast<double>(k + 1);
    antiderivatives.push_back(std::move(anti));
  }

  std::vector<cplx> values(static_cast<std::size_t>(2 * N + 1));
  for (int nu = -N; nu <= N; ++nu) {
    cplx total(0.0, 0.0);
    if (nu == 0) {
      for (std::size_t i = 0; i < spec.pieces().size(); ++i) {
        const Piece& piece = spec.pieces()[i];
        total += antiderivatives[i](piece.hi) - antiderivatives[i](piece.lo);
      }
    } else {
      // antiderivative of p(x) e^{s x} with s = -i nu:
      //   e^{s x} * sum_j (-1)^j p^(j)(x) / s^{j+1}
      // The phase at the endpoint 2*pi is taken as e^{0}: 2*pi and 0 are the
      // same point of the circle, and this keeps the wrap telescoping exact
      // (constant signals get exactly zero c_nu for nu != 0).
      const cplx s(0.0, -static_cast<double>(nu));
      auto phase = [nu](double x) {
        return std::polar(1.0, x == two_pi ? 0.0 : -static_cast<double>(nu) * x);
      };
      for (std::size_t i = 0; i < spec.pieces().size(); ++i) {
        const Piece& piece = spec.pieces()[i];
        if (chains[i].empty()) continue;  // zero polynomial
        cplx hi_sum(0.0, 0.0), lo_sum(0.0, 0.0);
        cplx s_pow = s;
        double sign = 1.0;
        for (const Polynomial& d : chains[i]) {
          hi_sum += sign * d(piece.hi) / s_pow;
          lo_sum += sign * d(piece.lo) / s_pow;
          s_pow *= s;
          sign = -sign;
        }
        total += phase(piece.hi) * hi_sum - phase(piece.lo) * lo_sum;
      }
    }
    values[static_cast<std::size_t>(nu + N)] = total / two_pi;
  }
  return CoefficientSet(N, std::move(values));
}

CoefficientSet coefficients_from_samples(std::span<const double> samples, int N) {
  if (N < 0) throw std::invalid_argument("coefficients_from_samples: N >= 0 required");
  const std::size_t m = samples.size();
  if (m < static_cast<std::size_t>(2 * N + 1))
    throw std::invalid_argument(
        "coefficients_from_samples: M <= 2N aliases; need M >= 2N+1 samples");
  std::vector<cplx> values(static_cast<std::size_t>(2 * N + 1));
  for (int nu = 0; nu <= N; ++nu) {
    const cplx step = std::polar(1.0, -two_pi * static_cast<double>(nu) / static_cast<double>(m));
    cplx phase(1.0, 0.0);
    cplx acc(0.0, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      acc += samples[i] * phase;
      phase *= step;
    }
    acc /= static_cast<double>(m);
    values[static_cast<std::size_t>(N + nu)] = acc;
    values[static_cast<std::size_t>(N - nu)] = std::conj(acc);
  }
  return CoefficientSet(N, std::move(values));
}

double partial_sum(const CoefficientSet& coeffs, int n, double x) {
  check_order(coeffs, n);
  cplx sum = coeffs[0];
  for (int k = 1; k <= n; ++k) {
    const cplx p = std::polar(1.0, k * x);
    sum += coeffs[k] * p + coeffs[-k] * std::conj(p);
  }
  return checked_real(sum, coeffs.real_symmetric());
}

double conjugate_partial_sum(const CoefficientSet& coeffs, int n, double x) {
  check_order(coeffs, n);
  cplx sum(0.0, 0.0);
  for (int k = 1; k <= n; ++k) {
    const cplx p = std::polar(1.0, k * x);
    sum += coeffs[k] * p - coeffs[-k] * std::conj(p);
  }
  // -i * sum
  return checked_real(cplx(sum.imag(), -sum.real()), coeffs.real_symmetric());
}

double coefficient_mass(const CoefficientSet& coeffs, int n) {
  check_order(coeffs, n);
  double g = 0.0;
  for (int k = 0; k <= n; ++k) g += std::abs(coeffs[k]);
  return g;
}

namespace {

std::vector<double> grid_eval(const CoefficientSet& coeffs, int n, std::size_t grid_size,
                              bool conjugate) {
  if (grid_size == 0) throw std::invalid_argument("grid_size must be positive");
  const bool symmetric = coeffs.real_symmetric();
  std::vector<double> out(grid_size);

  if (is_pow2(grid_size) && grid_size >= static_cast<std::size_t>(2 * n + 1)) {
    std::vector<cplx> spectrum(grid_size, cplx(0.0, 0.0));
    for (int nu = -n; nu <= n; ++nu) {
      cplx c = coeffs[nu];
      if (conjugate) {
        const double s = (nu > 0) ? 1.0 : (nu < 0 ? -1.0 : 0.0);
        c = cplx(s * c.imag(), -s * c.real());  // -i * sign(nu) * c
      }
      const std::size_t slot =
          static_cast<std::size_t>((nu % static_cast<int>(grid_size) + static_cast<int>(grid_size)) %
                                   static_cast<int>(grid_size));
      spectrum[slot] += c;
    }
    synthesis_fft(spectrum);
    for (std::size_t i = 0; i < grid_size; ++i) {
      if (symmetric && std::fabs(spectrum[i].imag()) >
                           1e-9 * std::max(1.0, std::fabs(spectrum[i].real())))
        throw std::logic_error("grid evaluation of a real-symmetric set has imaginary residue > 1e-9");
      out[i] = spectrum[i].real();
    }
    return out;
  }

#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (std::size_t i = 0; i < grid_size; ++i) {
    const double x = two_pi * static_cast<double>(i) / static_cast<double>(grid_size);
    out[i] = conjugate ? conjugate_partial_sum(coeffs, n, x) : partial_sum(coeffs, n, x);
  }
  return out;
}

}  // namespace

std::vector<double> partial_sum_grid(const CoefficientSet& coeffs, int n, std::size_t grid_size) {
  check_order(coeffs, n);
  return grid_eval(coeffs, n, grid_size, false);
}

std::vector<double> conjugate_partial_sum_grid(const CoefficientSet& coeffs, int n,
                                               std::size_t grid_size) {
  check_order(coeffs, n);
  return grid_eval(coeffs, n, grid_size, true);
}

}  // namespace jumpscan
