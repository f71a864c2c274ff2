#include "qikdv/symbolic.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace qikdv {

namespace {

// Merge two sorted monomials; returns the extra rational factor from r2 reduction.
Rational multiply_monomials(const Symbolic::Monomial& a, const Symbolic::Monomial& b, Symbolic::Monomial& out) {
  out.clear();
  std::size_t i = 0, j = 0;
  auto push = [&](const std::string& name, int p) {
    if (p != 0) out.emplace_back(name, p);
  };
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      push(a[i].first, a[i].second);
      ++i;
    } else if (i == a.size() || b[j].first < a[i].first) {
      push(b[j].first, b[j].second);
      ++j;
    } else {
      push(a[i].first, a[i].second + b[j].second);
      ++i;
      ++j;
    }
  }
  Rational factor(1);
  for (auto it = out.begin(); it != out.end(); ++it) {
    if (it->first != "r2") continue;
    int p = it->second;
    int rem = ((p % 2) + 2) % 2;
    int half = (p - rem) / 2;
    for (int k = 0; k < std::abs(half); ++k) factor = half > 0 ? factor * Rational(2) : factor * Rational(1, 2);
    if (rem == 0)
      out.erase(it);
    else
      it->second = 1;
    break;
  }
  return factor;
}

}  // namespace

Symbolic::Symbolic(Rational c) {
  if (!c.is_zero()) terms_[{}] = c;
}

Symbolic::Symbolic(std::int64_t c) : Symbolic(Rational(c)) {}

Symbolic Symbolic::atom(const std::string& name, int power) {
  Symbolic s;
  Monomial m;
  Monomial one{{name, power}};
  Rational f = multiply_monomials(one, {}, m);
  s.add(m, f);
  return s;
}

void Symbolic::add(const Monomial& m, const Rational& c) {
  if (c.is_zero()) return;
  auto it = terms_.find(m);
  if (it == terms_.end()) {
    terms_.emplace(m, c);
    return;
  }
  it->second += c;
  if (it->second.is_zero()) terms_.erase(it);
}

Symbolic operator+(const Symbolic& a, const Symbolic& b) {
  Symbolic r = a;
  for (const auto& [m, c] : b.terms_) r.add(m, c);
  return r;
}

Symbolic operator-(const Symbolic& a, const Symbolic& b) { return a + (-b); }

Symbolic Symbolic::operator-() const {
  Symbolic r;
  for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
  return r;
}

Symbolic operator*(const Symbolic& a, const Symbolic& b) {
  Symbolic r;
  Symbolic::Monomial m;
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) {
      Rational f = multiply_monomials(ma, mb, m);
      r.add(m, ca * cb * f);
    }
  }
  return r;
}

double Symbolic::evaluate(const std::map<std::string, double>& values) const {
  double total = 0.0;
  for (const auto& [m, c] : terms_) {
    double v = c.to_double();
    for (const auto& [name, p] : m) {
      double base;
      if (name == "r2") {
        base = std::sqrt(2.0);
      } else {
        auto it = values.find(name);
        if (it == values.end()) throw std::invalid_argument("no value for atom " + name);
        base = it->second;
      }
      v *= std::pow(base, p);
    }
    total += v;
  }
  return total;
}

std::string Symbolic::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << c;
    for (const auto& [name, p] : m) {
      os << "*" << name;
      if (p != 1) os << "^" << p;
    }
  }
  return os.str();
}

}  // namespace qikdv
