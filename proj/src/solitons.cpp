#include "qikdv/solitons.hpp"

#include <cmath>

#include "qikdv/errors.hpp"

namespace qikdv {

double KdvSoliton::speed() const { return form == KdvSolitonForm::Scaled ? c : beta() * c; }

double KdvSoliton::width_factor() const {
  return form == KdvSolitonForm::Scaled ? std::sqrt(c / (4.0 * (1.0 - eps))) : 0.5 * std::sqrt(c * beta());
}

double KdvSoliton::operator()(double x, double t) const {
  const double s = 1.0 / std::cosh(width_factor() * (x - center(t)));
  return 0.5 * c * s * s;
}

GridField KdvSoliton::sample(double length, std::size_t n, double t) const {
  const double xc = center(t);
  return qikdv::sample(length, n, [&](double x) {
    double d = std::remainder(x - xc, length);
    const double s = 1.0 / std::cosh(width_factor() * d);
    return 0.5 * c * s * s;
  });
}

KdvSoliton soliton_kdv(double c, double eps, double x0, double t0, KdvSolitonForm form) {
  if (!(c > 0.0)) throw ValidationError("soliton.c", "must be positive");
  if (form == KdvSolitonForm::Scaled && !(eps < 1.0)) throw ValidationError("soliton.eps", "scaled form needs eps < 1");
  if (form == KdvSolitonForm::Log && !(1.0 + 5.0 * eps / 3.0 > 0.0)) throw ValidationError("soliton.eps", "beta must be positive");
  return KdvSoliton{c, eps, x0, t0, form};
}

cplx NlsSoliton::lambda1() const { return cplx(0.0, std::sqrt(3.0 * beta / k0)); }
cplx NlsSoliton::lambda2() const { return cplx(0.0, -1.0 / std::sqrt(3.0 * k0)); }

cplx NlsSoliton::closed_form(double X, double T) const {
  const double xt = X - X0, tt = T - T0;
  const cplx l1 = lambda1(), l2 = lambda2();
  const cplx arg = l1 * K * (l2 * xt - V * tt);
  const cplx i(0.0, 1.0);
  const cplx phase = 0.5 * i * l2 * V * xt + 0.25 * i * (l1 * l1 * K * K - V * V) * tt;
  return K / std::cosh(arg) * std::exp(phase);
}

cplx NlsSoliton::standard(double X, double T) const {
  const double kappa = K * std::sqrt(beta) / std::abs(k0);
  const double a = -V / (6.0 * k0);
  const double omega = 3.0 * k0 * (kappa * kappa - a * a);
  const double xi = X - X0 - V * (T - T0);
  return K / std::cosh(kappa * xi) * std::polar(1.0, a * (X - X0) - omega * (T - T0));
}

ComplexField NlsSoliton::sample_closed_form(double length, std::size_t n, double T) const {
  return sample_complex(length, n, [&](double X) { return closed_form(X, T); });
}

ComplexField NlsSoliton::sample_standard(double length, std::size_t n, double T) const {
  return sample_complex(length, n, [&](double X) { return standard(X, T); });
}

NlsSoliton soliton_nls(double K, double V, double k0, double beta, double X0, double T0) {
  if (!(K > 0.0)) throw ValidationError("soliton.K", "must be positive");
  if (!(k0 > 0.0)) throw ValidationError("soliton.k0", "closed form square roots need k0 > 0");
  if (!(beta > 0.0)) throw ValidationError("soliton.beta", "must be positive");
  return NlsSoliton{K, V, k0, beta, X0, T0};
}

}  // namespace qikdv
