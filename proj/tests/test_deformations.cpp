#include <cmath>
#include <random>

#include "doctest.h"
#include "qikdv/deformations.hpp"
#include "qikdv/errors.hpp"
#include "qikdv/solitons.hpp"

using namespace qikdv;

namespace {

GridField random_smooth(std::mt19937_64& rng, double L, std::size_t n, double offset = 0.0) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  std::vector<double> a(6), p(6);
  for (int k = 0; k < 6; ++k) {
    a[k] = d(rng) / (1 + k);
    p[k] = 3.0 * d(rng);
  }
  return sample(L, n, [&](double x) {
    double s = offset;
    for (int k = 0; k < 6; ++k) s += 0.3 * a[k] * std::cos(2 * M_PI * (k + 1) * x / L + p[k]);
    return s;
  });
}

std::vector<DeformationSpec> families() {
  return {DeformationSpec::uuxx(0.07), DeformationSpec::power_ux(3, 0.05), DeformationSpec::power_ux(4, -0.03),
          DeformationSpec::ud2n(2, 0.02), DeformationSpec::power_def(0.01), DeformationSpec::none()};
}

}  // namespace

TEST_CASE("anomaly closed form equals 2u^2 + 2/3 (dH/du + u_xx)") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    const auto u = random_smooth(rng, 12.0, 128, 1.0);
    const auto uxx = derivative(u, 2);
    for (const auto& spec : families()) {
      const auto X = anomaly(u, spec);
      const auto dH = functional_derivative(u, spec);
      double err = 0.0, scale = 0.0;
      for (std::size_t j = 0; j < u.n(); ++j) {
        const double ref = 2 * u.values[j] * u.values[j] + 2.0 / 3.0 * (dH.values[j] + uxx.values[j]);
        err = std::max(err, std::abs(X.values[j] - ref));
        scale = std::max(scale, std::abs(dH.values[j]));
      }
      CHECK(err <= 1e-12 * std::max(scale, 1.0));
    }
  }
}

TEST_CASE("functional derivative matches a finite difference of H") {
  std::mt19937_64 rng(8);
  const auto u = random_smooth(rng, 10.0, 64, 1.0);
  const auto h = random_smooth(rng, 10.0, 64, 0.0);
  for (const auto& spec : families()) {
    const double d = 1e-4;
    GridField up = u, um = u;
    for (std::size_t j = 0; j < u.n(); ++j) {
      up.values[j] += d * h.values[j];
      um.values[j] -= d * h.values[j];
    }
    const double fd = (hamiltonian(up, spec) - hamiltonian(um, spec)) / (2 * d);
    const auto g = functional_derivative(u, spec);
    std::vector<double> prod(u.n());
    for (std::size_t j = 0; j < u.n(); ++j) prod[j] = g.values[j] * h.values[j];
    CHECK(trapezoid(prod, u.dx()) == doctest::Approx(fd).epsilon(1e-7));
  }
}

TEST_CASE("uuxx anomaly is eps u_xx") {
  std::mt19937_64 rng(9);
  const auto u = random_smooth(rng, 8.0, 64);
  const auto X = anomaly(u, DeformationSpec::uuxx(0.05));
  const auto uxx = derivative(u, 2);
  for (std::size_t j = 0; j < u.n(); ++j) CHECK(X.values[j] == doctest::Approx(0.05 * uxx.values[j]).epsilon(1e-13));
}

TEST_CASE("power deformation refuses nonpositive data") {
  auto u = sample(10.0, 32, [](double x) { return std::cos(x); });
  try {
    anomaly(u, DeformationSpec::power_def(0.01));
    FAIL("no throw");
  } catch (const DomainError& e) {
    CHECK(e.index() >= 0);
    CHECK(u.values[e.index()] <= 0.0);
  }
  CHECK_THROWS_AS(hamiltonian(u, DeformationSpec::power_def(0.01)), DomainError);
  CHECK_THROWS_AS(anomaly_first_order(u, 0.01), DomainError);
  CHECK_NOTHROW(anomaly(u, DeformationSpec::uuxx(0.01)));
}

TEST_CASE("first-order expansion of the power anomaly is second-order accurate") {
  auto s = soliton_kdv(4.0, 0.0, 0.0, 0.0);
  auto u = s.sample(40.0, 256, 0.0);
  for (auto& v : u.values) v += 0.05;
  std::vector<double> errs;
  for (double e : {0.005, 0.01, 0.02}) {
    const auto ex = anomaly(u, DeformationSpec::power_def(e));
    const auto fo = anomaly_first_order(u, e);
    errs.push_back(max_abs_diff(ex.values, fo.values));
  }
  CHECK(std::log2(errs[1] / errs[0]) == doctest::Approx(2.0).epsilon(0.1));
  CHECK(std::log2(errs[2] / errs[1]) == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("soliton energy") {
  for (double c : {1.0, 4.0}) {
    const auto u = soliton_kdv(c, 0.0, 0.0, 0.0).sample(60.0, 512, 0.0);
    CHECK(hamiltonian(u, DeformationSpec::none()) == doctest::Approx(-std::pow(c, 2.5) / 5.0).epsilon(1e-10));
  }
}

TEST_CASE("spec validation names the parameter") {
  try {
    DeformationSpec::power_ux(2, 0.1).validate();
    FAIL("no throw");
  } catch (const ValidationError& e) {
    CHECK(e.key() == "deformation.m");
  }
  CHECK_THROWS_AS(DeformationSpec::ud2n(0, 0.1).validate(), ValidationError);
  CHECK_THROWS_AS(DeformationSpec::power_def(-0.5).validate(), ValidationError);
  CHECK_THROWS_AS(DeformationSpec::uuxx(NAN).validate(), ValidationError);
}

TEST_CASE("parity of an even field about its centre") {
  const auto u = soliton_kdv(4.0, 0.0, 1.5, 0.0).sample(40.0, 256, 0.0);
  CHECK(parity_check(u, 1.5) < 1e-10);
}
