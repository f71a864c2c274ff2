#pragma once

#include <array>
#include <complex>
#include <compare>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "qikdv/errors.hpp"
#include "qikdv/rational.hpp"
#include "qikdv/symbolic.hpp"

namespace qikdv {

enum class GenKind { B = 0, F1 = 1, F2 = 2 };

struct Generator {
  GenKind kind;
  int power;
  auto operator<=>(const Generator&) const = default;
};

std::string to_string(const Generator& g);

struct GradeWindow {
  int lo = -2;
  int hi = 8;
  bool contains(int g) const { return g >= lo && g <= hi; }
};

/// One row of the structure constants: [g_i^n, g_j^m] = coeff * g_k^{n+m+shift}.
struct CommutatorEntry {
  int coeff = 0;
  GenKind result = GenKind::B;
  int shift = 0;
};

struct CommutatorTable {
  std::array<std::array<CommutatorEntry, 3>, 3> e{};
  static CommutatorTable standard();
  /// Breaks antisymmetry of [F2, F1]; only for exercising failure reporting.
  static CommutatorTable corrupted();
};

inline CommutatorTable CommutatorTable::standard() {
  CommutatorTable t;
  auto B = GenKind::B, F1 = GenKind::F1, F2 = GenKind::F2;
  t.e[0][1] = {2, F2, 0};
  t.e[0][2] = {2, F1, 0};
  t.e[1][0] = {-2, F2, 0};
  t.e[2][0] = {-2, F1, 0};
  t.e[1][2] = {1, B, 1};
  t.e[2][1] = {-1, B, 1};
  return t;
}

inline CommutatorTable CommutatorTable::corrupted() {
  CommutatorTable t = standard();
  t.e[2][1].coeff = 1;
  return t;
}

template <class S>
S from_rational(const Rational& r);
template <>
inline double from_rational<double>(const Rational& r) { return r.to_double(); }
template <>
inline Rational from_rational<Rational>(const Rational& r) { return r; }
template <>
inline Symbolic from_rational<Symbolic>(const Rational& r) { return Symbolic(r); }
template <>
inline std::complex<double> from_rational<std::complex<double>>(const Rational& r) { return {r.to_double(), 0.0}; }

inline bool is_zero(const std::complex<double>& z) { return z == std::complex<double>(0.0, 0.0); }

/// Finite combination of loop generators in canonical sparse form.
template <class S>
class LoopElement {
 public:
  LoopElement() = default;
  static LoopElement gen(GenKind k, int power, const S& c = from_rational<S>(Rational(1))) {
    LoopElement r;
    r.add(Generator{k, power}, c);
    return r;
  }

  void add(const Generator& g, const S& c) {
    if (qikdv::is_zero(c)) return;
    auto it = terms_.find(g);
    if (it == terms_.end()) {
      terms_.emplace(g, c);
      return;
    }
    it->second = it->second + c;
    if (qikdv::is_zero(it->second)) terms_.erase(it);
  }

  S coefficient(GenKind k, int power) const {
    auto it = terms_.find(Generator{k, power});
    return it == terms_.end() ? from_rational<S>(Rational(0)) : it->second;
  }

  const std::map<Generator, S>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  friend LoopElement operator+(const LoopElement& a, const LoopElement& b) {
    LoopElement r = a;
    for (const auto& [g, c] : b.terms_) r.add(g, c);
    return r;
  }
  friend LoopElement operator-(const LoopElement& a, const LoopElement& b) { return a + b * from_rational<S>(Rational(-1)); }
  friend LoopElement operator*(const LoopElement& a, const S& s) {
    LoopElement r;
    for (const auto& [g, c] : a.terms_) r.add(g, c * s);
    return r;
  }
  friend LoopElement operator*(const S& s, const LoopElement& a) { return a * s; }
  friend bool operator==(const LoopElement& a, const LoopElement& b) { return a.terms_ == b.terms_; }

 private:
  std::map<Generator, S> terms_;
};

template <class S>
LoopElement<S> commutator(const LoopElement<S>& x, const LoopElement<S>& y, GradeWindow w = {},
                          const CommutatorTable& table = CommutatorTable::standard()) {
  LoopElement<S> r;
  for (const auto& [gx, cx] : x.terms()) {
    for (const auto& [gy, cy] : y.terms()) {
      const CommutatorEntry& e = table.e[static_cast<int>(gx.kind)][static_cast<int>(gy.kind)];
      if (e.coeff == 0) continue;
      int grade = gx.power + gy.power + e.shift;
      if (!w.contains(grade)) throw GradeOverflowError(grade, w.lo, w.hi);
      r.add(Generator{e.result, grade}, cx * cy * from_rational<S>(Rational(e.coeff)));
    }
  }
  return r;
}

template <class S>
LoopElement<S> project(const LoopElement<S>& e, GenKind kind) {
  LoopElement<S> r;
  for (const auto& [g, c] : e.terms())
    if (g.kind == kind) r.add(g, c);
  return r;
}

template <class S>
struct BchSeries {
  int depth = 0;
  std::vector<LoopElement<S>> terms;  // terms[k] = ad_X^k Y / k!
  LoopElement<S> sum() const {
    LoopElement<S> r;
    for (const auto& t : terms) r = r + t;
    return r;
  }
};

/// Truncation of e^X Y e^{-X} after `depth` nested commutators.
template <class S>
BchSeries<S> bch_conjugate(const LoopElement<S>& x, const LoopElement<S>& y, int depth, GradeWindow w = {}) {
  if (depth < 1) throw ValidationError("depth", "must be >= 1");
  BchSeries<S> s;
  s.depth = depth;
  s.terms.push_back(y);
  LoopElement<S> cur = y;
  for (int k = 1; k <= depth; ++k) {
    cur = commutator(x, cur, w) * from_rational<S>(Rational(1, k));
    s.terms.push_back(cur);
  }
  return s;
}

// ---- 2x2 representation at a numeric spectral parameter ----

using Mat2 = std::array<std::complex<double>, 4>;  // row major

Mat2 generator_matrix(const Generator& g, double lambda);
Mat2 mat_mul(const Mat2& a, const Mat2& b);
Mat2 mat_add(const Mat2& a, const Mat2& b);
Mat2 mat_scale(const Mat2& a, std::complex<double> s);
double mat_norm(const Mat2& a);  // Frobenius
/// Closed-form exponential of a 2x2 matrix.
Mat2 mat_exp(const Mat2& a);

template <class S>
Mat2 to_matrix(const LoopElement<S>& e, double lambda) {
  Mat2 m{};
  for (const auto& [g, c] : e.terms()) m = mat_add(m, mat_scale(generator_matrix(g, lambda), std::complex<double>(c)));
  return m;
}

/// Random element with integer coefficients in [-cmax, cmax] and grades in [glo, ghi].
LoopElement<Rational> random_element(std::mt19937_64& rng, int glo, int ghi, int cmax, int max_terms);
LoopElement<double> to_double(const LoopElement<Rational>& e);

struct AlgebraReport {
  int antisymmetry_pass = 0, antisymmetry_fail = 0;
  int jacobi_pass = 0, jacobi_fail = 0;
  int grade_pass = 0, grade_fail = 0;
};

/// Antisymmetry, Jacobi and grade additivity over `samples` seeded random triples.
AlgebraReport verify_identities(std::uint64_t seed, int samples, const CommutatorTable& table = CommutatorTable::standard());

struct BchReport {
  int pass = 0, fail = 0;
  double worst_ratio = 0.0;  // max error / |X|^(depth+1)
};

/// Truncated e^X Y e^{-X} against the dense 2x2 conjugation at `lambda`, for seeded X with
/// |X| in [0.05, 0.5] and |Y| = 1. A sample passes when the error is below |X|^(depth+1).
BchReport verify_bch(std::uint64_t seed, int samples, int depth, double lambda = 0.7);

}  // namespace qikdv
