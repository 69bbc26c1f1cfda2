#include "jumpscan/signal.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace jumpscan {

namespace {

constexpr double boundary_tol = 1e-12;
constexpr int max_degree = 5;

double reduce_mod_period(double x) {
  double r = x - two_pi * std::floor(x / two_pi);
  if (r >= two_pi) r -= two_pi;  // guard against rounding at the seam
  return r;
}

}  // namespace

double Polynomial::operator()(double x) const {
  double v = 0.0;
  for (std::size_t k = coeffs.size(); k-- > 0;) v = v * x + coeffs[k];
  return v;
}

Polynomial Polynomial::derivative() const {
  Polynomial d;
  if (coeffs.size() <= 1) return d;
  d.coeffs.resize(coeffs.size() - 1);
  for (std::size_t k = 1; k < coeffs.size(); ++k)
    d.coeffs[k - 1] = static_cast<double>(k) * coeffs[k];
  return d;
}

int Polynomial::degree() const {
  for (std::size_t k = coeffs.size(); k-- > 0;)
    if (coeffs[k] != 0.0) return static_cast<int>(k);
  return -1;
}

Polynomial shifted_polynomial(std::vector<double> local_coeffs, double shift) {
  // p(x - s) expanded in x via binomial coefficients
  Polynomial out;
  out.coeffs.assign(local_coeffs.size(), 0.0);
  for (std::size_t k = 0; k < local_coeffs.size(); ++k) {
    double binom = 1.0;
    double power = 1.0;
    for (std::size_t j = 0; j <= k; ++j) {
      out.coeffs[k - j] += local_coeffs[k] * binom * power;
      binom *= static_cast<double>(k - j) / static_cast<double>(j + 1);
      power *= -shift;
    }
  }
  return out;
}

SignalSpec::SignalSpec(std::vector<Piece> pieces) : pieces_(std::move(pieces)) {
  if (pieces_.empty()) throw std::invalid_argument("SignalSpec: no pieces");
  if (std::fabs(pieces_.front().lo) > boundary_tol)
    throw std::invalid_argument("SignalSpec: pieces must start at 0");
  if (std::fabs(pieces_.back().hi - two_pi) > boundary_tol)
    throw std::invalid_argument("SignalSpec: pieces must end at 2*pi");
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    const Piece& p = pieces_[i];
    if (!(p.lo < p.hi)) throw std::invalid_argument("SignalSpec: empty piece interval");
    if (p.poly.degree() > max_degree)
      throw std::invalid_argument("SignalSpec: polynomial degree exceeds 5");
    if (i + 1 < pieces_.size() && std::fabs(pieces_[i + 1].lo - p.hi) > boundary_tol)
      throw std::invalid_argument("SignalSpec: pieces do not partition (0, 2*pi)");
  }

  for (std::size_t i = 0; i + 1 < pieces_.size(); ++i) {
    double x = pieces_[i].hi;
    double j = pieces_[i + 1].poly(x) - pieces_[i].poly(x);
    if (std::fabs(x - pi) <= boundary_tol && std::fabs(j) > boundary_tol)
      throw std::invalid_argument("SignalSpec: jump at pi is not allowed");
    if (std::fabs(j) > boundary_tol) jumps_.push_back({x, j});
  }
  double wrap = pieces_.front().poly(0.0) - pieces_.back().poly(two_pi);
  if (std::fabs(wrap) > 1e-9)
    throw std::invalid_argument("SignalSpec: jump at the period seam 0/2*pi is not allowed");
}

double SignalSpec::operator()(double x) const {
  double r = reduce_mod_period(x);
  // right-continuous: the owning piece is the one with lo <= r < hi
  for (const Piece& p : pieces_)
    if (r < p.hi || &p == &pieces_.back()) return p.poly(r);
  return pieces_.back().poly(r);
}

double SignalSpec::jump_mass() const {
  double m = 0.0;
  for (const Jump& j : jumps_) m += std::fabs(j.magnitude);
  return m;
}

double SignalSpec::jump_mass(double a, double b) const {
  double m = 0.0;
  for (const Jump& j : jumps_)
    if (j.location > a && j.location < b) m += std::fabs(j.magnitude);
  return m;
}

SignalSpec make_pulse(double a, double b, double h) {
  if (!(0.0 < a && a < b && b < two_pi))
    throw std::invalid_argument("make_pulse: need 0 < a < b < 2*pi");
  if (std::fabs(a - pi) <= boundary_tol || std::fabs(b - pi) <= boundary_tol)
    throw std::invalid_argument("make_pulse: edges at pi are not allowed");
  if (h == 0.0) throw std::invalid_argument("make_pulse: zero height");
  std::vector<Piece> pieces;
  pieces.push_back({0.0, a, Polynomial{{0.0}}});
  pieces.push_back({a, b, Polynomial{{h}}});
  pieces.push_back({b, two_pi, Polynomial{{0.0}}});
  return SignalSpec(std::move(pieces));
}

SignalSpec make_staircase() {
  const double s = two_pi / 5.0;
  std::vector<Piece> pieces;
  pieces.push_back({0.0, s, Polynomial{{0.0}}});
  pieces.push_back({s, 2 * s, Polynomial{{2.0}}});
  pieces.push_back({2 * s, 3 * s, Polynomial{{3.0}}});
  pieces.push_back({3 * s, 4 * s, Polynomial{{1.0}}});
  pieces.push_back({4 * s, two_pi, Polynomial{{0.0}}});
  return SignalSpec(std::move(pieces));
}

SignalSpec make_constant(double value) {
  return SignalSpec({{0.0, two_pi, Polynomial{{value}}}});
}

SignalSpec make_polywave() {
  // Jumps +1.6, -0.9, -0.7 over gently curved pieces. The jumps sum to zero:
  // a nonzero sum forces a net smooth trend whose ramp-like coefficient mass
  // dilutes the G(n) normalizer and biases every calibrated magnitude low.
  const double b1 = two_pi / 5.0;       // 2pi/5
  const double b2 = 3.0 * two_pi / 5.0; // 6pi/5
  const double b3 = 9.0 * pi / 5.0;     // 9pi/5
  const double len1 = b2 - b1, len2 = b3 - b2;
  const double end0 = 0.5 + 0.05 * b1 + 0.015 * b1 * b1;
  const double start1 = end0 + 1.6;
  const double end1 = start1 - 0.06 * len1 + 0.008 * len1 * len1 + 0.002 * len1 * len1 * len1;
  const double start2 = end1 - 0.9;
  const double end2 = start2 + 0.05 * len2 - 0.012 * len2 * len2;
  const double start3 = end2 - 0.7;
  // last piece returns linearly to the value at 0, so the seam carries no jump
  const double slope3 = (0.5 - start3) / (two_pi - b3);
  std::vector<Piece> pieces;
  pieces.push_back({0.0, b1, Polynomial{{0.5, 0.05, 0.015}}});
  pieces.push_back({b1, b2, shifted_polynomial({start1, -0.06, 0.008, 0.002}, b1)});
  pieces.push_back({b2, b3, shifted_polynomial({start2, 0.05, -0.012}, b2)});
  pieces.push_back({b3, two_pi, shifted_polynomial({start3, slope3}, b3)});
  return SignalSpec(std::move(pieces));
}

std::optional<SignalSpec> builtin_signal(std::string_view name) {
  if (name == "constant") return make_constant(1.0);
  if (name == "pulse") return make_pulse(two_pi / 3.0, 2.0 * two_pi / 3.0, 1.0);
  if (name == "pulse2") return make_pulse(two_pi / 5.0, 3.0 * two_pi / 5.0, 2.0);
  if (name == "staircase") return make_staircase();
  if (name == "polywave") return make_polywave();
  return std::nullopt;
}

std::vector<std::string> builtin_signal_names() {
  return {"constant", "pulse", "pulse2", "staircase", "polywave"};
}

double brute_force_variation(std::span<const double> values) {
  if (values.size() < 2)
    throw std::invalid_argument("brute_force_variation: need at least 2 values");
  double tv = 0.0;
  for (std::size_t i = 1; i < values.size(); ++i)
    tv += std::fabs(values[i] - values[i - 1]);
  return tv;
}

namespace {

// "p/q" in units of 2*pi
double parse_endpoint(const std::string& text) {
  std::size_t slash = text.find('/');
  if (slash == std::string::npos)
    throw std::runtime_error("signal spec: endpoint '" + text + "' is not of the form p/q");
  long p = 0, q = 0;
  try {
    p = std::stol(text.substr(0, slash));
    q = std::stol(text.substr(slash + 1));
  } catch (const std::exception&) {
    throw std::runtime_error("signal spec: endpoint '" + text + "' is not of the form p/q");
  }
  if (q <= 0) throw std::runtime_error("signal spec: endpoint denominator must be positive");
  return static_cast<double>(p) * two_pi / static_cast<double>(q);
}

}  // namespace

SignalSpec parse_signal_spec(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error(std::string("signal spec: ") + e.what());
  }
  if (!doc.contains("pieces") || !doc["pieces"].is_array() || doc["pieces"].empty())
    throw std::runtime_error("signal spec: missing non-empty 'pieces' array");
  std::vector<Piece> pieces;
  for (const auto& item : doc["pieces"]) {
    if (!item.contains("from") || !item.contains("to") || !item.contains("poly"))
      throw std::runtime_error("signal spec: each piece needs 'from', 'to', 'poly'");
    Piece p;
    p.lo = parse_endpoint(item["from"].get<std::string>());
    p.hi = parse_endpoint(item["to"].get<std::string>());
    if (!item["poly"].is_array() || item["poly"].empty())
      throw std::runtime_error("signal spec: 'poly' must be a non-empty coefficient array");
    for (const auto& c : item["poly"]) p.poly.coeffs.push_back(c.get<double>());
    pieces.push_back(std::move(p));
  }
  try {
    return SignalSpec(std::move(pieces));
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(std::string("signal spec: ") + e.what());
  }
}

SignalSpec load_signal_spec(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open signal spec file: " + file.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_signal_spec(buf.str());
}

}  // namespace jumpscan
