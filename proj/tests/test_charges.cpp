#include <cmath>
#include <numbers>

#include "doctest.h"
#include "qikdv/charges.hpp"
#include "qikdv/errors.hpp"
#include "qikdv/solitons.hpp"

using namespace qikdv;

namespace {

GridField constant(double c, double L = 10.0, std::size_t n = 256) { return sample(L, n, [&](double) { return c; }); }

GridField trough(double L, std::size_t n) {
  return sample(L, n, [](double x) { return -0.5 / std::pow(std::cosh(x / 4.0), 2); });
}

}  // namespace

TEST_CASE("zero field carries zero charge") {
  const auto u = constant(0.0);
  const auto c = solve_gauge(u, {});
  CHECK(charge_Q0(u, c.a_minus0) == 0.0);
  const auto ci = classical_invariants(u);
  CHECK(ci.mass == 0.0);
  CHECK(ci.energy == 0.0);
}

TEST_CASE("classical invariants of the soliton") {
  for (double c : {1.0, 4.0}) {
    const auto u = soliton_kdv(c, 0.0, 0.0, 0.0).sample(60.0, 512, 0.0);
    const auto ci = classical_invariants(u);
    CHECK(ci.mass == doctest::Approx(2 * std::sqrt(c)).epsilon(1e-10));
    CHECK(ci.momentum == doctest::Approx(2 * std::pow(c, 1.5) / 3).epsilon(1e-10));
    CHECK(ci.energy == doctest::Approx(-std::pow(c, 2.5) / 5).epsilon(1e-10));
  }
}

TEST_CASE("Q0 of a constant field against the closed form") {
  // w'' = -u w with w(0)=1, w'(0)=0 so Q0 = ln|w(L)/w(0)|
  const auto neg = constant(-0.25);
  const auto cn = solve_gauge(neg, {});
  const double exact = std::log(std::cosh(0.5 * 10.0));
  CHECK(charge_Q0_pv(cn) == doctest::Approx(exact).epsilon(1e-10));
  CHECK(charge_Q0(neg, cn) == doctest::Approx(exact).epsilon(5e-3));

  const auto pos = constant(0.5);
  const auto cp = solve_gauge(pos, {});
  REQUIRE(cp.singular.has_value());
  CHECK(charge_Q0_pv(cp) == doctest::Approx(std::log(std::abs(std::cos(std::sqrt(0.5) * 10.0)))).epsilon(1e-9));
  CHECK_THROWS_AS(charge_Q0(pos, cp), SingularGaugeError);
}

TEST_CASE("trapezoid Q0 converges to the principal value under refinement") {
  // a_- is not periodic on a constant field, so the periodic rule is first order here
  std::vector<double> err;
  for (std::size_t n : {64, 128, 256}) {
    const auto u = constant(-0.25, 10.0, n);
    const auto c = solve_gauge(u, {});
    err.push_back(std::abs(charge_Q0(u, c) - charge_Q0_pv(c)));
  }
  CHECK(err[0] / err[1] == doctest::Approx(2.0).epsilon(0.05));
  CHECK(err[1] / err[2] == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("Q0 agrees with the integral of beta^A_0") {
  const auto u = trough(80.0, 256);
  const auto c = solve_gauge(u, {});
  REQUIRE(c.full());
  const auto r = assemble_rotated(u, c, DeformationSpec::none());
  CHECK(charge_Qn(r, 0) == doctest::Approx(charge_Q0(u, c)).epsilon(1e-12));
  CHECK(charge_Q0_pv(c) == doctest::Approx(charge_Q0(u, c)).epsilon(1e-6));
  CHECK(std::isfinite(charge_Qn(r, 2)));
  CHECK(anomaly_rate(r, 0) == 0.0);
}

TEST_CASE("anomaly rate of a total derivative vanishes at order 0") {
  const auto u = trough(80.0, 256);
  const auto spec = DeformationSpec::uuxx(0.05);
  const auto c = solve_gauge(u, {});
  const auto r = assemble_rotated(u, c, spec);
  CHECK(std::abs(anomaly_rate(r, 0)) < 1e-12);
  CHECK(anomaly_rate(u, r, spec, 0) == doctest::Approx(anomaly_rate(r, 0)));
}

TEST_CASE("charges above the computed order are refused") {
  const auto u = trough(80.0, 128);
  GaugeOptions o;
  o.order = 1;
  const auto r = assemble_rotated(u, solve_gauge(u, o), DeformationSpec::none());
  CHECK_THROWS_AS(charge_Qn(r, 2), ValidationError);
}

TEST_CASE("time derivative") {
  std::vector<double> t{0.0, 0.1, 0.2, 0.3, 0.4}, q;
  for (double s : t) q.push_back(s * s);
  const auto d = time_derivative(t, q);
  for (std::size_t i = 1; i + 1 < t.size(); ++i) CHECK(d[i] == doctest::Approx(2 * t[i]));
  CHECK(d.front() == doctest::Approx(0.1));
  CHECK(d.back() == doctest::Approx(0.7));
}

TEST_CASE("relative drift") {
  CHECK(relative_drift({2.0, 2.5, 1.0}) == doctest::Approx(0.5));
  CHECK(relative_drift({0.1, 0.2}) == doctest::Approx(0.1));
  CHECK(std::isnan(relative_drift({1.0, NAN, 1.0})));
  CHECK(relative_drift({3.0}) == 0.0);
}

TEST_CASE("equation anomalies") {
  const auto u = soliton_kdv(2.0, 0.0, 0.0, 0.0).sample(30.0, 128, 0.0);
  GridField pos = u;
  for (auto& v : pos.values) v += 0.1;
  EvolutionProblem p;

  p.equation = Equation::SCALED_KDV;
  p.epsilon = 0.1;
  const auto uxx = derivative(u, 2);
  const auto xs = equation_anomaly(p)(u);
  for (std::size_t j = 0; j < u.n(); ++j) CHECK(xs.values[j] == doctest::Approx(0.1 * uxx.values[j]));

  p.equation = Equation::LOG_KDV;
  p.epsilon = 0.05;
  p.drop_log = true;
  const auto xl = equation_anomaly(p)(pos);
  for (std::size_t j = 0; j < u.n(); ++j) CHECK(xl.values[j] == doctest::Approx(-0.25 * pos.values[j] * pos.values[j]));
  p.drop_log = false;
  CHECK(max_abs_diff(equation_anomaly(p)(pos).values, anomaly_first_order(pos, 0.05).values) == 0.0);

  p.equation = Equation::KDV;
  CHECK(max_abs(equation_anomaly(p)(u).values) == 0.0);
  p.equation = Equation::NLS;
  CHECK_THROWS_AS(equation_anomaly(p), ValidationError);
}

TEST_CASE("charges along a short undeformed run") {
  EvolutionProblem p;
  p.dt = 1e-3;
  p.t_end = 0.2;
  const auto tr = evolve(trough(80.0, 256), p, 50);
  std::vector<double> times;
  std::vector<GridField> fields;
  for (const auto& s : tr) {
    times.push_back(s.t);
    fields.push_back(std::get<GridField>(s.field));
  }
  const auto cs = track_charges(times, fields, DeformationSpec::none(), 2);
  CHECK(cs.q0_method == "trapezoid");
  CHECK(cs.singular_at.empty());
  CHECK(relative_drift(cs.mass) < 1e-12);
  CHECK(relative_drift(cs.momentum) < 1e-10);
  CHECK(relative_drift(cs.energy) < 1e-8);
  CHECK(relative_drift(cs.Q[0]) < 1e-6);
  const auto rows = charge_csv_rows(cs);
  CHECK(rows.size() == times.size());
  CHECK(rows.front().size() == charge_csv_header().size());
  CHECK_THROWS_AS(track_charges(times, fields, DeformationSpec::none(), 3), ValidationError);
}

TEST_CASE("a pole switches Q0 to the principal value") {
  const auto u = soliton_kdv(4.0, 0.0, 0.0, 0.0).sample(40.0, 256, 0.0);
  const auto cs = track_charges({0.0}, {u}, DeformationSpec::none(), 1);
  CHECK(cs.q0_method == "principal_value");
  CHECK(cs.singular_at.size() == 1);
  CHECK(std::isfinite(cs.Q[0][0]));
  CHECK(std::isnan(cs.Q[1][0]));
}
