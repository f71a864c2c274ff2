#include "qikdv/loop_algebra.hpp"

#include <cmath>

namespace qikdv {

std::string to_string(const Generator& g) {
  const char* names[] = {"b", "F1", "F2"};
  return std::string(names[static_cast<int>(g.kind)]) + "^" + std::to_string(g.power);
}

Mat2 generator_matrix(const Generator& g, double lambda) {
  const double ln = std::pow(lambda, g.power);
  const double r = 1.0 / std::sqrt(2.0);
  switch (g.kind) {
    case GenKind::B:
      return {ln, 0.0, 0.0, -ln};
    case GenKind::F1:
      return {0.0, r * ln * lambda, -r * ln, 0.0};
    case GenKind::F2:
      return {0.0, r * ln * lambda, r * ln, 0.0};
  }
  return {};
}

Mat2 mat_mul(const Mat2& a, const Mat2& b) {
  return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

Mat2 mat_add(const Mat2& a, const Mat2& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]}; }

Mat2 mat_scale(const Mat2& a, std::complex<double> s) { return {a[0] * s, a[1] * s, a[2] * s, a[3] * s}; }

double mat_norm(const Mat2& a) {
  double s = 0.0;
  for (const auto& z : a) s += std::norm(z);
  return std::sqrt(s);
}

Mat2 mat_exp(const Mat2& a) {
  // e^A = e^{t}(cosh d I + sinh(d)/d (A - t I)), t = tr/2, d^2 = ((a00-a11)/2)^2 + a01 a10
  const std::complex<double> t = 0.5 * (a[0] + a[3]);
  const std::complex<double> h = 0.5 * (a[0] - a[3]);
  const std::complex<double> d = std::sqrt(h * h + a[1] * a[2]);
  std::complex<double> c, s;
  if (std::abs(d) < 1e-4) {
    const auto d2 = d * d;
    c = 1.0 + d2 / 2.0 + d2 * d2 / 24.0 + d2 * d2 * d2 / 720.0;
    s = 1.0 + d2 / 6.0 + d2 * d2 / 120.0 + d2 * d2 * d2 / 5040.0;
  } else {
    c = std::cosh(d);
    s = std::sinh(d) / d;
  }
  const std::complex<double> et = std::exp(t);
  return {et * (c + s * h), et * s * a[1], et * s * a[2], et * (c - s * h)};
}

LoopElement<Rational> random_element(std::mt19937_64& rng, int glo, int ghi, int cmax, int max_terms) {
  LoopElement<Rational> e;
  const int nterms = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_terms));
  for (int i = 0; i < nterms; ++i) {
    auto kind = static_cast<GenKind>(rng() % 3);
    int grade = glo + static_cast<int>(rng() % static_cast<std::uint64_t>(ghi - glo + 1));
    std::int64_t c = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(2 * cmax + 1)) - cmax;
    std::int64_t d = 1 + static_cast<std::int64_t>(rng() % 3);
    e.add(Generator{kind, grade}, Rational(c, d));
  }
  return e;
}

LoopElement<double> to_double(const LoopElement<Rational>& e) {
  LoopElement<double> r;
  for (const auto& [g, c] : e.terms()) r.add(g, c.to_double());
  return r;
}

AlgebraReport verify_identities(std::uint64_t seed, int samples, const CommutatorTable& table) {
  std::mt19937_64 rng(seed);
  AlgebraReport rep;
  // grades in [0,2] keep double commutators inside the default window
  GradeWindow w;
  for (int i = 0; i < samples; ++i) {
    auto x = random_element(rng, 0, 2, 5, 4);
    auto y = random_element(rng, 0, 2, 5, 4);
    auto z = random_element(rng, 0, 2, 5, 4);
    auto xy = commutator(x, y, w, table);
    auto yx = commutator(y, x, w, table);
    (xy + yx).is_zero() ? ++rep.antisymmetry_pass : ++rep.antisymmetry_fail;
    auto j = commutator(x, commutator(y, z, w, table), w, table) + commutator(y, commutator(z, x, w, table), w, table) +
             commutator(z, commutator(x, y, w, table), w, table);
    j.is_zero() ? ++rep.jacobi_pass : ++rep.jacobi_fail;

    bool grades_ok = true;
    for (const auto& [gx, cx] : x.terms()) {
      for (const auto& [gy, cy] : y.terms()) {
        auto c = commutator(LoopElement<Rational>::gen(gx.kind, gx.power), LoopElement<Rational>::gen(gy.kind, gy.power), w,
                            table);
        for (const auto& [g, v] : c.terms()) {
          int extra = g.power - gx.power - gy.power;
          if (extra != 0 && extra != 1) grades_ok = false;
        }
      }
    }
    grades_ok ? ++rep.grade_pass : ++rep.grade_fail;
  }
  return rep;
}

BchReport verify_bch(std::uint64_t seed, int samples, int depth, double lambda) {
  if (samples < 1) throw ValidationError("algebra.bch_samples", "must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> radius(0.05, 0.5);
  const GradeWindow w{-4, 64};
  BchReport rep;
  for (int i = 0; i < samples; ++i) {
    auto x = to_double(random_element(rng, 0, 2, 5, 4));
    auto y = to_double(random_element(rng, 0, 2, 5, 4));
    if (x.is_zero() || y.is_zero()) {
      --i;
      continue;
    }
    const double r = radius(rng);
    x = x * (r / mat_norm(to_matrix(x, lambda)));
    y = y * (1.0 / mat_norm(to_matrix(y, lambda)));
    const Mat2 X = to_matrix(x, lambda);
    const Mat2 dense = mat_mul(mat_mul(mat_exp(X), to_matrix(y, lambda)), mat_exp(mat_scale(X, -1.0)));
    const Mat2 series = to_matrix(bch_conjugate(x, y, depth, w).sum(), lambda);
    const double err = mat_norm(mat_add(series, mat_scale(dense, -1.0)));
    const double ratio = err / std::pow(r, depth + 1);
    rep.worst_ratio = std::max(rep.worst_ratio, ratio);
    ratio < 1.0 ? ++rep.pass : ++rep.fail;
  }
  return rep;
}

}  // namespace qikdv
