// jumpscan: batch front end for conjugate-series jump detection.
//
// Subcommands: analyze | detect | variation | sweep | detect2d.
// Exit codes: 0 success, 2 configuration error, 3 input error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "jumpscan/detector.hpp"
#include "jumpscan/plane2d.hpp"
#include "jumpscan/signal.hpp"
#include "jumpscan/spectral.hpp"

using namespace jumpscan;

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

// angle in radians, given either as a decimal or as "p/q*2pi"
double parse_angle(const std::string& text) {
  const std::string suffix = "*2pi";
  if (text.size() > suffix.size() &&
      text.compare(text.size() - suffix.size(), suffix.size(), suffix) == 0) {
    const std::string frac = text.substr(0, text.size() - suffix.size());
    const std::size_t slash = frac.find('/');
    if (slash == std::string::npos)
      throw std::invalid_argument("angle '" + text + "' must be p/q*2pi");
    try {
      const double p = std::stod(frac.substr(0, slash));
      const double q = std::stod(frac.substr(slash + 1));
      if (q == 0.0) throw std::invalid_argument("zero denominator");
      return p / q * two_pi;
    } catch (const std::exception&) {
      throw std::invalid_argument("angle '" + text + "' must be p/q*2pi");
    }
  }
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("angle '" + text + "' is not a number");
  }
  if (used != text.size()) throw std::invalid_argument("angle '" + text + "' is not a number");
  return v;
}

std::vector<double> load_samples(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open samples file: " + path);
  std::vector<double> samples;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(line, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0)
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": not a number: '" + line +
                               "'");
    samples.push_back(v);
  }
  if (samples.empty()) throw std::runtime_error(path + ": no samples");
  return samples;
}

struct SignalSource {
  std::string signal;   // builtin name or spec file path
  std::string samples;  // samples file path

  // Returns coefficients up to max index N; fills spec when ground truth is known.
  CoefficientSet resolve(int N, std::optional<SignalSpec>& spec) const {
    if (!samples.empty()) {
      const std::vector<double> s = load_samples(samples);
      return coefficients_from_samples(s, N);
    }
    if (signal.empty()) throw std::invalid_argument("need --signal or --samples");
    std::optional<SignalSpec> builtin = builtin_signal(signal);
    spec = builtin ? std::move(builtin) : std::optional<SignalSpec>(load_signal_spec(signal));
    return coefficients_analytic(*spec, N);
  }
};

class RowSink {
public:
  RowSink(const std::string& out_path, bool jsonl, std::vector<std::string> columns)
      : jsonl_(jsonl), columns_(std::move(columns)) {
    if (!out_path.empty()) {
      file_.open(out_path);
      if (!file_) throw std::runtime_error("cannot open output file: " + out_path);
    }
    if (!jsonl_) {
      std::string header;
      for (std::size_t i = 0; i < columns_.size(); ++i) {
        if (i) header += ", ";
        header += columns_[i];
      }
      stream() << header << "\n";
    }
  }

  void row(const std::vector<std::string>& values) {
    std::ostream& out = stream();
    if (jsonl_) {
      out << "{";
      for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out << ", ";
        out << "\"" << columns_[i] << "\": " << values[i];
      }
      out << "}\n";
    } else {
      for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out << ", ";
        out << values[i];
      }
      out << "\n";
    }
  }

  void warning(const std::string& message) {
    if (jsonl_)
      stream() << "{\"warning\": \"" << message << "\"}\n";
    else
      stream() << "# warning: " << message << "\n";
  }

private:
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }
  std::ofstream file_;
  bool jsonl_;
  std::vector<std::string> columns_;
};

struct CommonOpts {
  SignalSource source;
  int n = 1024;
  std::string out;
  std::string format = "csv";

  bool jsonl() const {
    if (format != "csv" && format != "jsonl")
      throw std::invalid_argument("--format must be csv or jsonl");
    return format == "jsonl";
  }
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_samples = true) {
  cmd->add_option("--signal", o.source.signal, "builtin name or signal spec file");
  if (with_samples) cmd->add_option("--samples", o.source.samples, "uniform samples, one per line");
  cmd->add_option("--n", o.n, "partial-sum order");
  cmd->add_option("--out", o.out, "output file (default stdout)");
  cmd->add_option("--format", o.format, "csv or jsonl");
}

void require_n(int n) {
  if (n < 2) throw std::invalid_argument("--n must be at least 2");
}

int run_analyze(const CommonOpts& o, std::size_t grid) {
  require_n(o.n);
  if (grid == 0) grid = static_cast<std::size_t>(16 * o.n);
  if (grid < static_cast<std::size_t>(16 * o.n))
    throw std::invalid_argument("--grid must be at least 16*n");
  std::optional<SignalSpec> spec;
  const CoefficientSet coeffs = o.source.resolve(o.n, spec);
  const YnField field = y_n_field(coeffs, o.n, grid);
  RowSink sink(o.out, o.jsonl(), {"x_rad", "y_n", "n", "normalizer"});
  if (field.normalizer == 0.0) sink.warning("G(n) = 0: Y_n is identically zero by convention");
  for (std::size_t i = 0; i < field.values.size(); ++i)
    sink.row({fmt(field.x(i)), fmt(field.values[i]), std::to_string(o.n), fmt(field.normalizer)});
  return 0;
}

int run_detect(const CommonOpts& o, double threshold) {
  require_n(o.n);
  if (!(threshold > 0.0 && threshold < 1.0))
    throw std::invalid_argument("--threshold must lie in (0, 1)");
  std::optional<SignalSpec> spec;
  const CoefficientSet coeffs = o.source.resolve(o.n, spec);
  RowSink sink(o.out, o.jsonl(), {"location_rad", "magnitude_est", "score", "n", "K_used"});
  if (coefficient_mass(coeffs, o.n) == 0.0) {
    sink.warning("G(n) = 0: no spectral mass, report is empty");
    return 0;
  }
  const CalibrationResult cal = calibrate_K(o.n);
  const JumpReport report = detect_jumps(coeffs, o.n, threshold, cal);
  for (const JumpEntry& e : report.entries)
    sink.row({fmt(e.location), fmt(e.magnitude), fmt(e.score), std::to_string(report.n),
              fmt(report.k_used)});
  return 0;
}

int run_variation(const CommonOpts& o, const std::string& interval, std::size_t grid) {
  require_n(o.n);
  if (interval.empty()) throw std::invalid_argument("variation needs --interval a:b");
  const std::size_t colon = interval.find(':');
  if (colon == std::string::npos)
    throw std::invalid_argument("--interval must be a:b");
  const double a = parse_angle(interval.substr(0, colon));
  const double b = parse_angle(interval.substr(colon + 1));
  if (grid == 0) grid = static_cast<std::size_t>(16 * o.n);
  std::optional<SignalSpec> spec;
  const CoefficientSet coeffs = o.source.resolve(o.n, spec);
  const VariationEstimate est = interval_variation(coeffs, o.n, a, b, grid);
  RowSink sink(o.out, o.jsonl(),
               {"a_rad", "b_rad", "tv", "true_jump_mass", "n", "grid_density"});
  const std::string truth = spec ? fmt(spec->jump_mass(a, b)) : (o.jsonl() ? "null" : "");
  sink.row({fmt(est.a), fmt(est.b), fmt(est.value), truth, std::to_string(est.n),
            std::to_string(est.grid_density)});
  return 0;
}

int run_sweep(const CommonOpts& o, const std::string& n_range,
              const std::vector<std::string>& probe_args) {
  int lo = o.n, hi = o.n, factor = 2;
  if (!n_range.empty()) {
    const std::size_t c1 = n_range.find(':');
    const std::size_t c2 = n_range.find(':', c1 == std::string::npos ? 0 : c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
      throw std::invalid_argument("--n-range must be lo:hi:factor");
    try {
      lo = std::stoi(n_range.substr(0, c1));
      hi = std::stoi(n_range.substr(c1 + 1, c2 - c1 - 1));
      factor = std::stoi(n_range.substr(c2 + 1));
    } catch (const std::exception&) {
      throw std::invalid_argument("--n-range must be lo:hi:factor");
    }
  }
  require_n(lo);
  if (hi < lo || factor < 2) throw std::invalid_argument("--n-range must satisfy lo <= hi, factor >= 2");

  std::optional<SignalSpec> spec;
  const CoefficientSet coeffs = o.source.resolve(hi, spec);

  std::vector<double> probes;
  for (const std::string& p : probe_args) probes.push_back(parse_angle(p));
  if (probes.empty() && spec)
    for (const Jump& j : spec->jumps()) probes.push_back(j.location);
  if (probes.empty())
    throw std::invalid_argument("sweep needs --probe (sample inputs have no known jump set)");

  RowSink sink(o.out, o.jsonl(),
               {"n", "probe_x", "conj_partial_sum", "y_n", "g_n", "tv_full_period"});
  for (long n = lo; n <= hi; n *= factor) {
    const int ni = static_cast<int>(n);
    const double g = coefficient_mass(coeffs, ni);
    double tv = 0.0;
    if (g > 0.0) {
      const YnField field = y_n_field(coeffs, ni, static_cast<std::size_t>(16 * n));
      tv = brute_force_variation(field.values);
    } else {
      sink.warning("G(" + std::to_string(n) + ") = 0: Y_n is identically zero");
    }
    for (double x : probes)
      sink.row({std::to_string(n), fmt(x), fmt(conjugate_partial_sum(coeffs, ni, x)),
                fmt(y_n(coeffs, ni, x)), fmt(g), fmt(tv)});
  }
  return 0;
}

int run_detect2d(const CommonOpts& o, double threshold, int direction) {
  require_n(o.n);
  if (!(threshold > 0.0 && threshold < 1.0))
    throw std::invalid_argument("--threshold must lie in (0, 1)");
  if (direction < 0 || direction > 2)
    throw std::invalid_argument("--direction must be 1 or 2");
  if (!o.source.samples.empty())
    throw std::invalid_argument("detect2d works on separable fields, not sample files");
  if (o.source.signal.empty()) throw std::invalid_argument("detect2d needs --signal");

  SeparableField2D field;
  if (o.source.signal == "cross") {
    field = {{make_pulse(two_pi / 3, 2 * two_pi / 3, 1.0), make_constant(1.0)},
             {make_constant(1.0), make_pulse(two_pi / 5, 3 * two_pi / 5, 1.0)}};
  } else {
    std::optional<SignalSpec> builtin = builtin_signal(o.source.signal);
    SignalSpec g = builtin ? *std::move(builtin) : load_signal_spec(o.source.signal);
    field = {{std::move(g), make_constant(1.0)}};  // x-only embedding
  }
  const CoefficientGrid2D coeffs = coefficients_2d(field, o.n);

  RowSink sink(o.out, o.jsonl(),
               {"direction", "offset_rad", "magnitude_est", "score", "n", "K_used"});
  if (coeffs.mass(o.n) == 0.0) {
    sink.warning("G(n) = 0: no spectral mass, report is empty");
    return 0;
  }
  std::vector<int> directions;
  if (direction == 0)
    directions = {1, 2};
  else
    directions = {direction};
  for (int j : directions) {
    const HyperplaneReport report = detect_hyperplanes(coeffs, j, o.n, threshold);
    for (const HyperplaneEntry& e : report.entries)
      sink.row({std::to_string(j), fmt(e.offset), fmt(e.magnitude), fmt(e.score),
                std::to_string(report.n), fmt(report.k_used)});
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"jumpscan: locate and size jump discontinuities of periodic signals "
               "from their Fourier coefficients"};
  app.require_subcommand(1);

  CommonOpts an, de, va, sw, d2;
  std::size_t an_grid = 0, va_grid = 0;
  double de_threshold = 0.25, d2_threshold = 0.25;
  std::string va_interval, sw_range;
  std::vector<std::string> sw_probes;
  int d2_direction = 0;

  CLI::App* analyze = app.add_subcommand("analyze", "emit the Y_n field as rows");
  add_common(analyze, an);
  analyze->add_option("--grid", an_grid, "field grid size (default 16*n)");

  CLI::App* detect = app.add_subcommand("detect", "report jump locations and magnitudes");
  add_common(detect, de);
  detect->add_option("--threshold", de_threshold, "peak threshold ratio in (0,1)");

  CLI::App* variation = app.add_subcommand("variation", "total variation of Y_n over an interval");
  add_common(variation, va);
  variation->add_option("--interval", va_interval, "a:b in radians or p/q*2pi");
  variation->add_option("--grid", va_grid, "grid density per period (default 16*n)");

  CLI::App* sweep = app.add_subcommand("sweep", "per-n divergence and variation traces");
  add_common(sweep, sw);
  sweep->add_option("--n-range", sw_range, "lo:hi:factor (dyadic: 256:16384:2)");
  sweep->add_option("--probe", sw_probes, "probe point (radians or p/q*2pi); repeatable");

  CLI::App* detect2d = app.add_subcommand("detect2d", "jump-line detection on the 2-torus");
  add_common(detect2d, d2, false);
  detect2d->add_option("--threshold", d2_threshold, "peak threshold ratio in (0,1)");
  detect2d->add_option("--direction", d2_direction, "1 or 2 (default: both)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*analyze) return run_analyze(an, an_grid);
    if (*detect) return run_detect(de, de_threshold);
    if (*variation) return run_variation(va, va_interval, va_grid);
    if (*sweep) return run_sweep(sw, sw_range, sw_probes);
    if (*detect2d) return run_detect2d(d2, d2_threshold, d2_direction);
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::out_of_range& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
