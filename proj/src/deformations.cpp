#include "qikdv/deformations.hpp"

#include <cmath>
#include <sstream>

#include "qikdv/errors.hpp"

namespace qikdv {

void DeformationSpec::validate(const std::string& key) const {
  if (!std::isfinite(epsilon)) throw ValidationError(key + ".epsilon", "must be finite");
  if (kind == DeformKind::LocalTerm) {
    if (family == LocalFamily::POWER_UX && m < 3) throw ValidationError(key + ".m", "POWER_UX needs m >= 3");
    if (family == LocalFamily::UD2N && n < 1) throw ValidationError(key + ".n", "UD2N needs n >= 1");
  }
  if (kind == DeformKind::PowerDef && !(epsilon > -1.0 / 3.0))
    throw ValidationError(key + ".epsilon", "power deformation needs 3+3*eps > 2");
}

std::string DeformationSpec::describe() const {
  std::ostringstream os;
  switch (kind) {
    case DeformKind::None:
      return "none";
    case DeformKind::PowerDef:
      os << "power_def(eps=" << epsilon << ")";
      return os.str();
    case DeformKind::LocalTerm:
      break;
  }
  switch (family) {
    case LocalFamily::UUXX:
      os << "uuxx(eps=" << epsilon << ")";
      break;
    case LocalFamily::POWER_UX:
      os << "power_ux(m=" << m << ",eps=" << epsilon << ")";
      break;
    case LocalFamily::UD2N:
      os << "ud2n(n=" << n << ",eps=" << epsilon << ")";
      break;
  }
  return os.str();
}

void require_positive(const std::vector<double>& u, const std::string& what) {
  for (std::size_t j = 0; j < u.size(); ++j)
    if (!(u[j] > kPowerDefFloor)) throw DomainError(what + " needs u > " + std::to_string(kPowerDefFloor), static_cast<long>(j));
}

double hamiltonian(const GridField& u, const DeformationSpec& spec) {
  Spectral sp(u.length, u.n());
  const auto& v = u.values;
  const auto ux = sp.derivative(v, 1);
  std::vector<double> dens(u.n());
  if (spec.kind == DeformKind::PowerDef) {
    require_positive(v, "power deformation");
    for (std::size_t j = 0; j < u.n(); ++j) dens[j] = 0.5 * ux[j] * ux[j] - std::pow(v[j], 3.0 + 3.0 * spec.epsilon);
    return trapezoid(dens, u.dx());
  }
  for (std::size_t j = 0; j < u.n(); ++j) dens[j] = 0.5 * ux[j] * ux[j] - v[j] * v[j] * v[j];
  if (spec.kind == DeformKind::LocalTerm) {
    const double e = spec.epsilon;
    switch (spec.family) {
      case LocalFamily::UUXX: {
        auto uxx = sp.derivative(v, 2);
        for (std::size_t j = 0; j < u.n(); ++j) dens[j] += e * 0.75 * v[j] * uxx[j];
        break;
      }
      case LocalFamily::POWER_UX:
        for (std::size_t j = 0; j < u.n(); ++j) dens[j] += -e * 1.5 / spec.m * std::pow(ux[j], spec.m);
        break;
      case LocalFamily::UD2N: {
        auto d = sp.derivative(v, 2 * spec.n);
        for (std::size_t j = 0; j < u.n(); ++j) dens[j] += e * 0.75 * v[j] * d[j];
        break;
      }
    }
  }
  return trapezoid(dens, u.dx());
}

namespace {

template <class T>
std::vector<T> local_gradient(Spectral& sp, const std::vector<T>& v, const DeformationSpec& spec) {
  const double e = spec.epsilon;
  std::vector<T> g(v.size(), T(0.0));
  switch (spec.family) {
    case LocalFamily::UUXX: {
      auto d = sp.derivative(v, 2);
      for (std::size_t j = 0; j < v.size(); ++j) g[j] = 1.5 * e * d[j];
      break;
    }
    case LocalFamily::POWER_UX: {
      auto ux = sp.derivative(v, 1);
      std::vector<T> p(v.size());
      for (std::size_t j = 0; j < v.size(); ++j) p[j] = std::pow(ux[j], spec.m - 1);
      auto d = sp.derivative(p, 1);
      for (std::size_t j = 0; j < v.size(); ++j) g[j] = 1.5 * e * d[j];
      break;
    }
    case LocalFamily::UD2N: {
      auto d = sp.derivative(v, 2 * spec.n);
      for (std::size_t j = 0; j < v.size(); ++j) g[j] = 1.5 * e * d[j];
      break;
    }
  }
  return g;
}

}  // namespace

GridField deformation_gradient(const GridField& u, const DeformationSpec& spec) {
  GridField g{u.length, std::vector<double>(u.n(), 0.0)};
  if (spec.kind == DeformKind::None) return g;
  if (spec.kind == DeformKind::PowerDef) {
    require_positive(u.values, "power deformation");
    for (std::size_t j = 0; j < u.n(); ++j) {
      double v = u.values[j];
      g.values[j] = -3.0 * (1.0 + spec.epsilon) * std::pow(v, 2.0 + 3.0 * spec.epsilon) + 3.0 * v * v;
    }
    return g;
  }
  Spectral sp(u.length, u.n());
  g.values = local_gradient(sp, u.values, spec);
  return g;
}

ComplexField deformation_gradient(const ComplexField& q, const DeformationSpec& spec) {
  ComplexField g{q.length, std::vector<cplx>(q.n(), 0.0)};
  if (spec.kind == DeformKind::None) return g;
  if (spec.kind == DeformKind::PowerDef) {
    for (std::size_t j = 0; j < q.n(); ++j) {
      if (std::abs(q.values[j].imag()) > 0.0 || !(q.values[j].real() > kPowerDefFloor))
        throw DomainError("power deformation needs real positive amplitude", static_cast<long>(j));
      double v = q.values[j].real();
      g.values[j] = -3.0 * (1.0 + spec.epsilon) * std::pow(v, 2.0 + 3.0 * spec.epsilon) + 3.0 * v * v;
    }
    return g;
  }
  Spectral sp(q.length, q.n());
  g.values = local_gradient(sp, q.values, spec);
  return g;
}

GridField functional_derivative(const GridField& u, const DeformationSpec& spec) {
  Spectral sp(u.length, u.n());
  auto uxx = sp.derivative(u.values, 2);
  GridField d = deformation_gradient(u, spec);
  for (std::size_t j = 0; j < u.n(); ++j) d.values[j] += -3.0 * u.values[j] * u.values[j] - uxx[j];
  return d;
}

GridField anomaly(const GridField& u, const DeformationSpec& spec) {
  GridField x{u.length, std::vector<double>(u.n(), 0.0)};
  const double e = spec.epsilon;
  switch (spec.kind) {
    case DeformKind::None:
      return x;
    case DeformKind::PowerDef:
      require_positive(u.values, "power deformation");
      for (std::size_t j = 0; j < u.n(); ++j) {
        double v = u.values[j];
        x.values[j] = 2.0 * v * v - 2.0 * (1.0 + e) * std::pow(v, 2.0 + 3.0 * e);
      }
      return x;
    case DeformKind::LocalTerm:
      break;
  }
  Spectral sp(u.length, u.n());
  switch (spec.family) {
    case LocalFamily::UUXX:
      x.values = sp.derivative(u.values, 2);
      break;
    case LocalFamily::POWER_UX: {
      auto ux = sp.derivative(u.values, 1);
      for (auto& v : ux) v = std::pow(v, spec.m - 1);
      x.values = sp.derivative(ux, 1);
      break;
    }
    case LocalFamily::UD2N:
      x.values = sp.derivative(u.values, 2 * spec.n);
      break;
  }
  for (auto& v : x.values) v *= e;
  return x;
}

GridField anomaly_first_order(const GridField& u, double epsilon) {
  require_positive(u.values, "first-order anomaly");
  GridField x{u.length, std::vector<double>(u.n())};
  for (std::size_t j = 0; j < u.n(); ++j) {
    double v = u.values[j];
    x.values[j] = -2.0 * epsilon * v * v * (1.0 + 3.0 * std::log(v));
  }
  return x;
}

double parity_check(const GridField& f, double center) {
  const std::size_t n = f.n();
  const double h = f.dx();
  double s = (center - f.x(0)) / h;
  long jc = std::lround(s);
  std::vector<double> v = f.values;
  if (std::abs(s - static_cast<double>(jc)) > 1e-9) {
    // move the centre onto the nearest grid point by a spectral shift
    Spectral sp(f.length, n);
    std::vector<cplx> hh;
    sp.forward(v, hh);
    const double shift = (s - static_cast<double>(jc)) * h;
    for (std::size_t j = 0; j < hh.size(); ++j)
      hh[j] *= sp.is_nyquist(j) ? cplx(std::cos(sp.k_half(j) * shift)) : std::polar(1.0, sp.k_half(j) * shift);
    sp.backward(hh, v);
  }
  const long N = static_cast<long>(n);
  jc = ((jc % N) + N) % N;
  double diff = 0.0, mx = 0.0;
  for (long i = 0; i < N; ++i) {
    double a = v[static_cast<std::size_t>((jc + i) % N)];
    double b = v[static_cast<std::size_t>(((jc - i) % N + N) % N)];
    diff = std::max(diff, std::abs(a - b));
    mx = std::max(mx, std::abs(a));
  }
  return diff / std::max(1.0, mx);
}

cplx anomaly_linear_symbol(const DeformationSpec& spec, double k, bool nyquist) {
  if (spec.kind != DeformKind::LocalTerm) return 0.0;
  switch (spec.family) {
    case LocalFamily::UUXX:
      return spec.epsilon * derivative_symbol(k, 3, nyquist);
    case LocalFamily::UD2N:
      return spec.epsilon * derivative_symbol(k, 2 * spec.n + 1, nyquist);
    case LocalFamily::POWER_UX:
      return 0.0;
  }
  return 0.0;
}

std::vector<double> anomaly_nonlinear(Spectral& sp, const std::vector<double>& u, const DeformationSpec& spec) {
  std::vector<double> x(u.size(), 0.0);
  const double e = spec.epsilon;
  if (spec.kind == DeformKind::PowerDef) {
    require_positive(u, "power deformation");
    for (std::size_t j = 0; j < u.size(); ++j) x[j] = 2.0 * u[j] * u[j] - 2.0 * (1.0 + e) * std::pow(u[j], 2.0 + 3.0 * e);
  } else if (spec.kind == DeformKind::LocalTerm && spec.family == LocalFamily::POWER_UX) {
    auto ux = sp.derivative(u, 1);
    for (auto& v : ux) v = std::pow(v, spec.m - 1);
    x = sp.derivative(ux, 1);
    for (auto& v : x) v *= e;
  }
  return x;
}

}  // namespace qikdv
