#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "jumpscan/plane2d.hpp"
#include "test_support.hpp"

using namespace jumpscan;

namespace {

SeparableField2D pulse_in_x() {
  return {{make_pulse(two_pi / 3, 2 * two_pi / 3, 1.0), make_constant(1.0)}};
}

SeparableField2D cross_field() {
  return {{make_pulse(two_pi / 3, 2 * two_pi / 3, 1.0), make_constant(1.0)},
          {make_constant(1.0), make_pulse(two_pi / 5, 3 * two_pi / 5, 1.0)}};
}

CoefficientGrid2D random_hermitian_grid(int N, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  const std::size_t side = static_cast<std::size_t>(2 * N + 1);
  std::vector<std::complex<double>> v(side * side);
  auto slot = [&](int a, int b) -> std::complex<double>& {
    return v[static_cast<std::size_t>(a + N) * side + static_cast<std::size_t>(b + N)];
  };
  slot(0, 0) = {unif(rng), 0.0};
  for (int a = -N; a <= N; ++a)
    for (int b = -N; b <= N; ++b) {
      if (a < 0 || (a == 0 && b <= 0)) continue;
      const double decay = 1.0 / (1.0 + std::max(std::abs(a), std::abs(b)));
      const std::complex<double> c(unif(rng) * decay, unif(rng) * decay);
      slot(a, b) = c;
      slot(-a, -b) = std::conj(c);
    }
  return CoefficientGrid2D(N, std::move(v));
}

// literal displayed sum: every lattice point contributes the conjugate
// partial sum at its own max-norm order, recomputed from scratch
double y_jn_literal(const CoefficientGrid2D& c, int j, int n, double x1, double x2) {
  double g = 0.0, acc = 0.0;
  for (int a = -n; a <= n; ++a)
    for (int b = -n; b <= n; ++b) {
      const double w = std::abs(c(a, b));
      g += w;
      const int m = std::max(std::abs(a), std::abs(b));
      if (m >= 1) acc += conjugate_partial_sum_2d(c, j, m, x1, x2) * w;
    }
  if (g == 0.0) return 0.0;
  return -acc / (std::log(static_cast<double>(n)) * g);
}

}  // namespace

TEST_CASE("2D coefficients of separable fields") {
  SUBCASE("x-only pulse: nu2 != 0 rows vanish, nu2 = 0 row is the 1D set") {
    const CoefficientGrid2D c = coefficients_2d(pulse_in_x(), 16);
    const CoefficientSet d1 =
        coefficients_analytic(make_pulse(two_pi / 3, 2 * two_pi / 3, 1.0), 16);
    for (int a = -16; a <= 16; ++a) {
      CHECK(std::abs(c.at(a, 0) - d1[a]) <= 1e-14);
      for (int b = -16; b <= 16; ++b)
        if (b != 0) CHECK(std::abs(c.at(a, b)) <= 1e-15);
    }
  }
  SUBCASE("constant field: only c_00") {
    const CoefficientGrid2D c =
        coefficients_2d({{make_constant(1.0), make_constant(1.0)}}, 8);
    CHECK(std::abs(c.at(0, 0) - std::complex<double>(1.0, 0.0)) <= 1e-14);
    CHECK(std::abs(c.at(3, 0)) <= 1e-14);
    CHECK(std::abs(c.at(0, -2)) <= 1e-14);
  }
  SUBCASE("cross field matches the quadrature oracle at sampled indices") {
    const CoefficientGrid2D c = coefficients_2d(cross_field(), 12);
    const SignalSpec g = make_pulse(two_pi / 3, 2 * two_pi / 3, 1.0);
    const SignalSpec h = make_pulse(two_pi / 5, 3 * two_pi / 5, 1.0);
    const SignalSpec one = make_constant(1.0);
    const int idx[8][2] = {{0, 0}, {1, 0}, {0, 1}, {3, -2}, {-5, 0}, {0, -7}, {12, 12}, {-2, 9}};
    for (const auto& nu : idx) {
      const std::complex<double> expected =
          oracle::coefficient_quadrature(g, nu[0]) * oracle::coefficient_quadrature(one, nu[1]) +
          oracle::coefficient_quadrature(one, nu[0]) * oracle::coefficient_quadrature(h, nu[1]);
      CHECK(std::abs(c.at(nu[0], nu[1]) - expected) <= 1e-10);
    }
  }
  SUBCASE("grids are conjugate-symmetric for real fields") {
    CHECK(coefficients_2d(cross_field(), 10).real_symmetric());
  }
}

TEST_CASE("2D coefficients from samples") {
  SUBCASE("band-limited field is exact") {
    const std::size_t M = 16;
    std::vector<double> samples(M * M);
    for (std::size_t m1 = 0; m1 < M; ++m1)
      for (std::size_t m2 = 0; m2 < M; ++m2)
        samples[m1 * M + m2] = std::cos(two_pi * static_cast<double>(m1) / M) *
                               std::cos(2.0 * two_pi * static_cast<double>(m2) / M);
    const CoefficientGrid2D c = coefficients_2d_from_samples(samples, M, M, 4);
    CHECK(std::abs(c.at(1, 2) - std::complex<double>(0.25, 0.0)) <= 1e-12);
    CHECK(std::abs(c.at(-1, 2) - std::complex<double>(0.25, 0.0)) <= 1e-12);
    CHECK(std::abs(c.at(1, 1)) <= 1e-12);
    CHECK(c.real_symmetric());
  }
  SUBCASE("sampled pulse-in-x approaches the separable coefficients") {
    const SignalSpec g = make_pulse(two_pi / 3, 2 * two_pi / 3, 1.0);
    const std::size_t M = 512;
    std::vector<double> samples(M * M);
    for (std::size_t m1 = 0; m1 < M; ++m1) {
      const double v = g(two_pi * static_cast<double>(m1) / M);
      for (std::size_t m2 = 0; m2 < M; ++m2) samples[m1 * M + m2] = v;
    }
    const CoefficientGrid2D sampled = coefficients_2d_from_samples(samples, M, M, 8);
    const CoefficientGrid2D exact = coefficients_2d(pulse_in_x(), 8);
    for (int a = -8; a <= 8; ++a)
      for (int b = -8; b <= 8; ++b)
        CHECK(std::abs(sampled.at(a, b) - exact.at(a, b)) <= 10.0 / static_cast<double>(M));
  }
  SUBCASE("aliasing is rejected") {
    const std::vector<double> samples(9 * 9, 1.0);
    CHECK_THROWS_AS(coefficients_2d_from_samples(samples, 9, 9, 5), std::invalid_argument);
  }
}

TEST_CASE("2D conjugate Dirichlet kernel") {
  CHECK(conjugate_dirichlet_2d(1, 3, 0.0, 1.2) == doctest::Approx(0.0));
  CHECK(conjugate_dirichlet_2d(2, 3, 1.2, 0.0) == doctest::Approx(0.0));
  CHECK(conjugate_dirichlet_2d(1, 1, pi, 0.0) == doctest::Approx(0.0).epsilon(1e-12));

  // term-by-term lattice oracle: Dt_{j,n}(x) = (1/4) sum -i sign_j(nu) e^{i nu.x}
  const int n = 4;
  const double x1 = 0.5, x2 = 0.9;
  std::complex<double> lattice(0.0, 0.0);
  for (int a = -n; a <= n; ++a)
    for (int b = -n; b <= n; ++b) {
      const double s = (a > 0) - (a < 0);
      lattice += std::complex<double>(0.0, -s) * std::polar(1.0, a * x1 + b * x2);
    }
  CHECK(conjugate_dirichlet_2d(1, n, x1, x2) ==
        doctest::Approx(lattice.real() / 4.0).epsilon(1e-10));
  CHECK_THROWS_AS(conjugate_dirichlet_2d(3, 2, 0.1, 0.2), std::invalid_argument);
}

TEST_CASE("2D conjugate partial sums") {
  SUBCASE("direction without variation gives zero") {
    const CoefficientGrid2D c = coefficients_2d(pulse_in_x(), 16);
    for (double x1 : {0.3, 2.0})
      for (double x2 : {0.0, 3.3})
        CHECK(conjugate_partial_sum_2d(c, 2, 16, x1, x2) == doctest::Approx(0.0));
  }
  SUBCASE("embedded cosine conjugates to sine") {
    // f(x1, x2) = cos x1
    const int N = 6;
    const std::size_t side = static_cast<std::size_t>(2 * N + 1);
    std::vector<std::complex<double>> v(side * side, {0.0, 0.0});
    v[static_cast<std::size_t>(N + 1) * side + N] = {0.5, 0.0};
    v[static_cast<std::size_t>(N - 1) * side + N] = {0.5, 0.0};
    const CoefficientGrid2D c(N, std::move(v));
    for (double x1 : {0.0, 1.1, 4.0})
      CHECK(conjugate_partial_sum_2d(c, 1, 6, x1, 2.2) ==
            doctest::Approx(std::sin(x1)).epsilon(1e-12));
  }
  SUBCASE("log divergence on the jump line at the classical -J/pi rate") {
    const CoefficientGrid2D c = coefficients_2d(pulse_in_x(), 2048);
    const double slope = oracle::log_slope(
        [&](int n) { return conjugate_partial_sum_2d(c, 1, n, two_pi / 3, 2.0); }, 128, 2048);
    CHECK(slope == doctest::Approx(-1.0 / pi).epsilon(0.05));
  }
}

TEST_CASE("y_jn") {
  SUBCASE("transverse direction of an x-only field is identically zero") {
    const CoefficientGrid2D c = coefficients_2d(pulse_in_x(), 32);
    for (double x1 : {0.4, two_pi / 3})
      for (double x2 : {0.9, 4.4}) CHECK(y_jn(c, 2, 32, x1, x2) == 0.0);
  }
  SUBCASE("matches the literal lattice evaluation") {
    const CoefficientGrid2D c = random_hermitian_grid(9, 42);
    for (int n : {2, 5, 9})
      for (double x1 : {0.7, 3.9}) {
        const double fast = y_jn(c, 1, n, x1, 1.3);
        const double lit = y_jn_literal(c, 1, n, x1, 1.3);
        CHECK(fast == doctest::Approx(lit).scale(1).epsilon(1e-10));
        CHECK(y_jn(c, 2, n, x1, 1.3) ==
              doctest::Approx(y_jn_literal(c, 2, n, x1, 1.3)).scale(1).epsilon(1e-10));
      }
  }
  SUBCASE("shell modes coincide on the full square") {
    const CoefficientGrid2D c = random_hermitian_grid(7, 5);
    for (double x1 : {0.2, 5.1})
      CHECK(y_jn(c, 1, 7, x1, 2.0, ShellMode::lattice) ==
            y_jn(c, 1, 7, x1, 2.0, ShellMode::shell_collapsed));
  }
  SUBCASE("slice evaluation agrees with pointwise evaluation") {
    const CoefficientGrid2D c = coefficients_2d(cross_field(), 64);
    const std::size_t grid = 1024;
    const std::vector<double> slice = y_jn_slice(c, 1, 64, 2.7, grid);
    const double step = two_pi / static_cast<double>(grid);
    for (std::size_t i : {3ul, 341ul, 1000ul})
      CHECK(slice[i] ==
            doctest::Approx(y_jn(c, 1, 64, static_cast<double>(i) * step, 2.7))
                .scale(1)
                .epsilon(1e-10));
  }
  SUBCASE("parallel slice equals serial slice bit for bit") {
    const CoefficientGrid2D c = coefficients_2d(cross_field(), 48);
    const std::vector<double> par = y_jn_slice(c, 1, 48, 1.0, 768, ShellMode::lattice, Exec::parallel);
    const std::vector<double> ser = y_jn_slice(c, 1, 48, 1.0, 768, ShellMode::lattice, Exec::serial);
    for (std::size_t i = 0; i < par.size(); ++i) CHECK(par[i] == ser[i]);
  }
  SUBCASE("peaks sit on the jump lines") {
    const int n = 512;
    const CoefficientGrid2D c = coefficients_2d(pulse_in_x(), n);
    const std::size_t grid = 16 * n;
    const std::vector<double> slice = y_jn_slice(c, 1, n, 1.7, grid);
    std::size_t argmax = 0;
    for (std::size_t i = 0; i < grid; ++i)
      if (std::fabs(slice[i]) > std::fabs(slice[argmax])) argmax = i;
    const double x = static_cast<double>(argmax) * two_pi / static_cast<double>(grid);
    const double d1 = std::fabs(x - two_pi / 3), d2 = std::fabs(x - 2 * two_pi / 3);
    CHECK(std::min(d1, d2) <= two_pi / static_cast<double>(grid));
  }
  SUBCASE("degenerate embedding is proportional to the 1D structure") {
    // f(x1, x2) = g(x1): Y_{1,n} along x1 must be a constant multiple of the
    // 1D weighted conjugate-sum field of g
    const int n = 128;
    const CoefficientGrid2D c2 = coefficients_2d(pulse_in_x(), n);
    const CoefficientSet c1 =
        coefficients_analytic(make_pulse(two_pi / 3, 2 * two_pi / 3, 1.0), n);
    const std::vector<double> slice = y_jn_slice(c2, 1, n, 0.8, 16 * n);
    double ratio = 0.0;
    bool first = true;
    const double step = two_pi / static_cast<double>(16 * n);
    for (std::size_t i = 40; i < static_cast<std::size_t>(16 * n); i += 97) {
      const double y1 = y_n(c1, n, static_cast<double>(i) * step);
      if (std::fabs(y1) < 1e-3) continue;
      const double r = slice[i] / y1;
      if (first) {
        ratio = r;
        first = false;
      } else {
        CHECK(r == doctest::Approx(ratio).epsilon(1e-6));
      }
    }
    CHECK(!first);
  }
  SUBCASE("transverse invariance for jump-line fields") {
    const CoefficientGrid2D c = coefficients_2d(pulse_in_x(), 64);
    const std::vector<double> a = y_jn_slice(c, 1, 64, 0.5, 1024);
    const std::vector<double> b = y_jn_slice(c, 1, 64, 5.1, 1024);
    for (std::size_t i = 0; i < a.size(); i += 11)
      CHECK(a[i] == doctest::Approx(b[i]).scale(1).epsilon(1e-9));
  }
  SUBCASE("preconditions") {
    const CoefficientGrid2D c = random_hermitian_grid(6, 1);
    CHECK_THROWS_AS(y_jn(c, 1, 1, 0.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(y_jn(c, 1, 7, 0.0, 0.0), std::out_of_range);
    CHECK_THROWS_AS(y_jn(c, 0, 4, 0.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(y_jn_slice(c, 1, 6, 0.0, 64), std::invalid_argument);
  }
}

TEST_CASE("detect_hyperplanes") {
  SUBCASE("constant field is empty in both directions") {
    const CoefficientGrid2D c =
        coefficients_2d({{make_constant(1.0), make_constant(1.0)}}, 32);
    CHECK(detect_hyperplanes(c, 1, 32, 0.25).entries.empty());
    CHECK(detect_hyperplanes(c, 2, 32, 0.25).entries.empty());
  }
  SUBCASE("pulse-in-x: two lines in direction 1, none in direction 2") {
    const int n = 512;
    const CoefficientGrid2D c = coefficients_2d(pulse_in_x(), n);
    const HyperplaneReport r1 = detect_hyperplanes(c, 1, n, 0.25);
    REQUIRE(r1.entries.size() == 2);
    CHECK(std::fabs(r1.entries[0].offset - two_pi / 3) <= pi / n);
    CHECK(std::fabs(r1.entries[1].offset - 2 * two_pi / 3) <= pi / n);
    CHECK(r1.entries[0].magnitude > 0.0);
    CHECK(r1.entries[1].magnitude < 0.0);
    CHECK(r1.entries[0].magnitude == doctest::Approx(1.0).epsilon(0.25));
    CHECK(r1.direction == 1);
    CHECK(r1.k_used > 0.0);

    const HyperplaneReport r2 = detect_hyperplanes(c, 2, n, 0.25);
    CHECK(r2.entries.empty());
  }
  SUBCASE("cross field: per-direction offsets recovered independently") {
    const int n = 256;
    const CoefficientGrid2D c = coefficients_2d(cross_field(), n);
    const HyperplaneReport r1 = detect_hyperplanes(c, 1, n, 0.25);
    const HyperplaneReport r2 = detect_hyperplanes(c, 2, n, 0.25);
    REQUIRE(r1.entries.size() == 2);
    REQUIRE(r2.entries.size() == 2);
    CHECK(std::fabs(r1.entries[0].offset - two_pi / 3) <= pi / n);
    CHECK(std::fabs(r1.entries[1].offset - 2 * two_pi / 3) <= pi / n);
    CHECK(std::fabs(r2.entries[0].offset - two_pi / 5) <= pi / n);
    CHECK(std::fabs(r2.entries[1].offset - 3 * two_pi / 5) <= pi / n);
  }
}

TEST_CASE("calibrate_k2 is positive and stable-ish") {
  const double k256 = calibrate_k2(256);
  const double k512 = calibrate_k2(512);
  CHECK(k256 > 0.0);
  CHECK(std::fabs(k512 - k256) <= 0.15 * k512);
}

TEST_CASE("rectangle_slice_variation") {
  SUBCASE("constant field has zero slice variation") {
    const CoefficientGrid2D c =
        coefficients_2d({{make_constant(2.0), make_constant(1.0)}}, 32);
    CHECK(rectangle_slice_variation(c, 1, {1.0, 3.0, 1.0, 3.0}, 32) == 0.0);
  }
  SUBCASE("one line carries half the mass of two lines") {
    const int n = 2048;
    const CoefficientGrid2D c = coefficients_2d(pulse_in_x(), n);
    const double one = rectangle_slice_variation(c, 1, {1.5, 2.7, 1.0, 5.0}, n);
    const double two = rectangle_slice_variation(c, 1, {1.5, 4.8, 1.0, 5.0}, n);
    CHECK(std::fabs(one / two - 0.5) <= 0.1);
  }
  SUBCASE("line-free rectangles carry less variation, but not none") {
    // the off-line background TV decays only like 1/log n; measured ~0.45 of
    // a one-line rectangle at n = 512 (dense-slice TV oracle)
    const int n = 512;
    const CoefficientGrid2D c = coefficients_2d(cross_field(), n);
    const double none = rectangle_slice_variation(c, 1, {2.7, 3.9, 1.0, 5.0}, n);
    const double one = rectangle_slice_variation(c, 1, {1.5, 2.7, 1.0, 5.0}, n);
    CHECK(none < 0.6 * one);
    CHECK(none > 0.0);
  }
  SUBCASE("degenerate rectangles are rejected") {
    const CoefficientGrid2D c = random_hermitian_grid(8, 3);
    CHECK_THROWS_AS(rectangle_slice_variation(c, 1, {2.0, 2.0, 1.0, 3.0}, 8),
                    std::invalid_argument);
    CHECK_THROWS_AS(rectangle_slice_variation(c, 1, {1.0, 3.0, 3.0, 1.0}, 8),
                    std::invalid_argument);
    CHECK_THROWS_AS(rectangle_slice_variation(c, 1, {0.0, 3.0, 1.0, 2.0}, 8),
                    std::invalid_argument);
  }
}

TEST_CASE("2D grid plumbing") {
  const CoefficientGrid2D c = random_hermitian_grid(5, 11);
  CHECK(c.max_index() == 5);
  CHECK_THROWS_AS(c.at(6, 0), std::out_of_range);
  CHECK_THROWS_AS(CoefficientGrid2D(2, std::vector<std::complex<double>>(24)),
                  std::invalid_argument);
  // shell masses tile the square mass
  double total = 0.0;
  for (int m = 0; m <= 5; ++m) total += c.shell_mass(m);
  CHECK(total == doctest::Approx(c.mass(5)).epsilon(1e-12));
}
