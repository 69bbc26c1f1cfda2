#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace jumpscan {

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;

/// Polynomial in the absolute coordinate x, coeffs[k] multiplying x^k.
struct Polynomial {
  std::vector<double> coeffs;

  double operator()(double x) const;
  Polynomial derivative() const;
  /// Degree after stripping trailing zero coefficients (-1 for the zero polynomial).
  int degree() const;
};

/// Expands p(t) with t = x - shift into coefficients in x.
Polynomial shifted_polynomial(std::vector<double> local_coeffs, double shift);

/// One piece of a piecewise definition, valid on [lo, hi).
struct Piece {
  double lo = 0.0;
  double hi = 0.0;
  Polynomial poly;
};

/// A jump discontinuity: magnitude = f(x+0) - f(x-0).
struct Jump {
  double location = 0.0;
  double magnitude = 0.0;
};

/**
 * A 2*pi-periodic piecewise-polynomial signal with an explicit jump set.
 *
 * Pieces must partition (0, 2*pi): contiguous, ordered, starting at 0 and
 * ending at 2*pi. Polynomial degree is capped at 5 so both the signal and
 * its derivative have bounded variation. The wrap boundary at 0/2*pi and
 * the point pi must not carry jumps; all other piece boundaries may.
 *
 * Evaluation at a jump location returns the right limit.
 */
class SignalSpec {
public:
  explicit SignalSpec(std::vector<Piece> pieces);

  const std::vector<Piece>& pieces() const { return pieces_; }

  /// Signal value at x (reduced mod 2*pi, right-continuous at jumps).
  double operator()(double x) const;

  /// Interior jump locations with their magnitudes, strictly increasing in x.
  const std::vector<Jump>& jumps() const { return jumps_; }

  /// Sum of |J| over all jumps.
  double jump_mass() const;
  /// Sum of |J| over jumps strictly inside (a, b).
  double jump_mass(double a, double b) const;

private:
  std::vector<Piece> pieces_;
  std::vector<Jump> jumps_;
};

/// Indicator pulse of height h on (a, b); jumps +h at a, -h at b.
SignalSpec make_pulse(double a, double b, double h);

/// 2 * pulse(2pi/5, 6pi/5) + pulse(4pi/5, 8pi/5); four unit-spaced steps.
SignalSpec make_staircase();

/// f identical to `value` everywhere (no jumps).
SignalSpec make_constant(double value);

/// Piecewise cubic/quadratic signal with three comparable jumps, used to
/// exercise non-constant pieces.
SignalSpec make_polywave();

/// Builtin registry for the CLI: constant, pulse, pulse2, staircase, polywave.
std::optional<SignalSpec> builtin_signal(std::string_view name);
std::vector<std::string> builtin_signal_names();

/// Discrete total variation: sum of |v[i+1] - v[i]|. Requires >= 2 values.
double brute_force_variation(std::span<const double> values);

/// Parses the JSON signal description (see README for the schema); interval
/// endpoints are exact rationals "p/q" in units of 2*pi, coefficients decimals.
SignalSpec parse_signal_spec(const std::string& text);
SignalSpec load_signal_spec(const std::filesystem::path& file);

}  // namespace jumpscan
