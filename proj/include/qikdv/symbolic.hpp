#pragma once

#include <map>
#include <string>
#include <vector>

#include "qikdv/rational.hpp"

namespace qikdv {

/// Laurent polynomial in named atoms with rational coefficients.
///
/// The atom "r2" stands for sqrt(2) and is kept reduced to exponent 0 or 1.
/// Every other atom may carry negative powers, so "e" and its inverse cancel.
class Symbolic {
 public:
  using Monomial = std::vector<std::pair<std::string, int>>;  // sorted by name, no zero powers

  Symbolic() = default;
  Symbolic(Rational c);        // NOLINT implicit
  Symbolic(std::int64_t c);    // NOLINT implicit
  static Symbolic atom(const std::string& name, int power = 1);
  static Symbolic sqrt2() { return atom("r2"); }

  friend Symbolic operator+(const Symbolic& a, const Symbolic& b);
  friend Symbolic operator-(const Symbolic& a, const Symbolic& b);
  friend Symbolic operator*(const Symbolic& a, const Symbolic& b);
  Symbolic operator-() const;
  Symbolic& operator+=(const Symbolic& o) { return *this = *this + o; }
  Symbolic& operator-=(const Symbolic& o) { return *this = *this - o; }
  Symbolic& operator*=(const Symbolic& o) { return *this = *this * o; }

  friend bool operator==(const Symbolic& a, const Symbolic& b) { return a.terms_ == b.terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  /// Substitute numeric values for atoms; unknown atoms throw.
  double evaluate(const std::map<std::string, double>& values) const;
  std::string str() const;

 private:
  void add(const Monomial& m, const Rational& c);
  std::map<Monomial, Rational> terms_;
};

inline bool is_zero(const Symbolic& s) { return s.is_zero(); }

}  // namespace qikdv
