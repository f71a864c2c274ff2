#pragma once

// Symbolic/numeric assembly of the abelianizing gauge through the loop algebra,
// used to cross-check the closed-form coefficient formulas.

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "qikdv/loop_algebra.hpp"

namespace qikdv {

template <class S>
struct GaugeSample {
  S u, e, einv, inv_sqrt2;
  std::array<S, 3> a1, a2;
};

inline GaugeSample<Symbolic> symbolic_gauge_sample() {
  GaugeSample<Symbolic> g;
  g.u = Symbolic::atom("u");
  g.e = Symbolic::atom("e");
  g.einv = Symbolic::atom("e", -1);
  g.inv_sqrt2 = Symbolic::sqrt2() * Symbolic(Rational(1, 2));
  for (int n = 0; n < 3; ++n) {
    g.a1[n] = Symbolic::atom("a1_" + std::to_string(n));
    g.a2[n] = Symbolic::atom("a2_" + std::to_string(n));
  }
  return g;
}

inline GaugeSample<double> numeric_gauge_sample(double u, const std::array<double, 3>& a1, const std::array<double, 3>& a2) {
  GaugeSample<double> g;
  g.u = u;
  g.e = std::numbers::e;
  g.einv = 1.0 / std::numbers::e;
  g.inv_sqrt2 = 1.0 / std::numbers::sqrt2;
  g.a1 = a1;
  g.a2 = a2;
  return g;
}

/// Abar = (u/e) s+ - e s-  written as (u/(sqrt2 e))(F1^-1 + F2^-1) + (e/sqrt2)(F1^0 - F2^0).
template <class S>
LoopElement<S> abar_element(const GaugeSample<S>& g) {
  const S up = g.u * g.einv * g.inv_sqrt2;
  const S lo = g.e * g.inv_sqrt2;
  LoopElement<S> a;
  a.add({GenKind::F1, -1}, up);
  a.add({GenKind::F2, -1}, up);
  a.add({GenKind::F1, 0}, lo);
  a.add({GenKind::F2, 0}, -lo);
  return a;
}

/// G = sum_{n<=order} a1^n F1^n + a2^n F2^n.
template <class S>
LoopElement<S> gauge_exponent(const GaugeSample<S>& g, int order) {
  LoopElement<S> x;
  for (int n = 0; n <= order; ++n) {
    x.add({GenKind::F1, n}, g.a1[n]);
    x.add({GenKind::F2, n}, g.a2[n]);
  }
  return x;
}

/// b^n coefficients (n = 0..max_grade) of e^{ad G} Abar truncated at `depth`.
template <class S>
std::vector<S> engine_betaA(const GaugeSample<S>& g, int gauge_order, int depth, int max_grade, GradeWindow w = {-2, 24}) {
  auto series = bch_conjugate(gauge_exponent(g, gauge_order), abar_element(g), depth, w);
  auto b = project(series.sum(), GenKind::B);
  std::vector<S> out;
  for (int n = 0; n <= max_grade; ++n) out.push_back(b.coefficient(GenKind::B, n));
  return out;
}

/// b^n coefficients of e^{ad G} b^0.
template <class S>
std::vector<S> engine_f0(const GaugeSample<S>& g, int gauge_order, int depth, int max_grade, GradeWindow w = {-2, 24}) {
  auto series = bch_conjugate(gauge_exponent(g, gauge_order), LoopElement<S>::gen(GenKind::B, 0), depth, w);
  auto b = project(series.sum(), GenKind::B);
  std::vector<S> out;
  for (int n = 0; n <= max_grade; ++n) out.push_back(b.coefficient(GenKind::B, n));
  return out;
}

/// Closed-form beta^A_0..2 (the n=2 line without its trailing dots).
template <class S>
std::array<S, 3> closed_form_betaA(const GaugeSample<S>& g) {
  const auto& a1 = g.a1;
  const auto& a2 = g.a2;
  const S k = g.inv_sqrt2 * g.u * g.einv;
  const S third = from_rational<S>(Rational(1, 3));
  const S two = from_rational<S>(Rational(2));
  const S am0 = a1[0] - a2[0], am1 = a1[1] - a2[1], am2 = a1[2] - a2[2];
  const S ap0 = a1[0] + a2[0], ap1 = a1[1] + a2[1];
  const S A00 = a1[0] * a1[0] - a2[0] * a2[0];
  const S A01 = a1[0] * a1[1] - a2[0] * a2[1];
  const S E = g.e * g.inv_sqrt2;
  return {k * am0, k * am1 - E * ap0 - third * k * A00 * am0,
          k * am2 - E * ap1 - third * k * (two * A01 * am0 + A00 * am1) + third * E * A00 * ap0};
}

/// f0^0..2 and the second block labelled f0^2 (grade 3).
template <class S>
std::array<S, 4> closed_form_f0(const GaugeSample<S>& g) {
  const auto& a1 = g.a1;
  const auto& a2 = g.a2;
  const S A00 = a1[0] * a1[0] - a2[0] * a2[0];
  const S A01 = a1[0] * a1[1] - a2[0] * a2[1];
  const S A02 = a1[0] * a1[2] - a2[0] * a2[2];
  const S A11 = a1[1] * a1[1] - a2[1] * a2[1];
  const S two = from_rational<S>(Rational(2));
  return {from_rational<S>(Rational(1)), -A00, -two * A01 + from_rational<S>(Rational(1, 6)) * A00 * A00,
          -two * A02 - A11 + from_rational<S>(Rational(2, 3)) * A00 * (A01 - from_rational<S>(Rational(1, 60)) * A00 * A00)};
}

}  // namespace qikdv
