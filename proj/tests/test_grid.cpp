#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "qikdv/errors.hpp"
#include "qikdv/grid.hpp"

using namespace qikdv;

TEST_CASE("grid validation names the key") {
  try {
    validate_grid(40.0, 500, "grid");
    FAIL("no throw");
  } catch (const ValidationError& e) {
    CHECK(e.key() == "grid.n");
  }
  CHECK_THROWS_AS(validate_grid(-1.0, 64), ValidationError);
  CHECK_THROWS_AS(validate_grid(1.0, 8), ValidationError);
  GridField f{10.0, std::vector<double>(64, 0.0)};
  f.values[3] = NAN;
  CHECK_THROWS_AS(f.validate(), ValidationError);
}

TEST_CASE("spectral derivatives of a trigonometric mode are exact") {
  const double L = 2 * std::numbers::pi * 3;
  const double k = 5.0 / 3.0;
  auto u = sample(L, 128, [&](double x) { return std::sin(k * x); });
  for (int order = 1; order <= 3; ++order) {
    const auto d = derivative(u, order);
    double err = 0.0;
    for (std::size_t j = 0; j < u.n(); ++j) {
      const double x = u.x(j);
      const double exact = order == 1 ? k * std::cos(k * x) : order == 2 ? -k * k * std::sin(k * x) : -k * k * k * std::cos(k * x);
      err = std::max(err, std::abs(d.values[j] - exact));
    }
    CHECK(err < 1e-11);
  }
}

TEST_CASE("odd derivatives drop the Nyquist mode") {
  auto u = sample(2.0, 16, [](double) { return 0.0; });
  for (std::size_t j = 0; j < 16; ++j) u.values[j] = (j % 2) ? -1.0 : 1.0;
  CHECK(max_abs(derivative(u, 1).values) < 1e-12);
  CHECK(max_abs(derivative(u, 2).values) > 1.0);
}

TEST_CASE("trapezoid is spectrally accurate on periodic data") {
  auto u = sample(40.0, 256, [](double x) { return std::exp(-x * x); });
  CHECK(trapezoid(u.values, u.dx()) == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-14));
}

TEST_CASE("refinement and off-grid evaluation reproduce a band-limited field") {
  const double L = 10.0;
  auto f = [&](double x) { return std::cos(2 * std::numbers::pi * 2 * x / L) + 0.5 * std::sin(2 * std::numbers::pi * 5 * x / L); };
  auto u = sample(L, 32, f);
  const auto fine = refine(u.values, 4);
  REQUIRE(fine.size() == 128);
  double err = 0.0;
  for (std::size_t j = 0; j < fine.size(); ++j) err = std::max(err, std::abs(fine[j] - f(-0.5 * L + j * L / 128.0)));
  CHECK(err < 1e-13);
  const std::vector<double> xs{-4.9, 0.123, 3.3};
  const auto vals = fourier_evaluate(to_complex(u), xs);
  for (std::size_t i = 0; i < xs.size(); ++i) CHECK(std::abs(vals[i] - f(xs[i])) < 1e-13);
}

TEST_CASE("top-third energy separates smooth data from noise") {
  auto smooth = sample(40.0, 256, [](double x) { return 1.0 / std::cosh(x); });
  CHECK(top_third_energy_fraction(smooth) < 1e-15);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n;
  GridField noise{40.0, std::vector<double>(256)};
  for (auto& v : noise.values) v = n(rng);
  CHECK(top_third_energy_fraction(noise) > 0.1);
}

TEST_CASE("forward then backward is the identity") {
  Spectral sp(7.0, 64);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> d(-1, 1);
  std::vector<double> f(64), g;
  for (auto& v : f) v = d(rng);
  std::vector<cplx> h;
  sp.forward(f, h);
  CHECK(h.size() == 33);
  sp.backward(h, g);
  CHECK(max_abs_diff(f, g) < 1e-14);
}
