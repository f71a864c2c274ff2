#pragma once

#include "qikdv/grid.hpp"

namespace qikdv {

/// Scaled: (c/2) sech^2[sqrt(c/(4(1-eps))) (x - c(t-t0) - x0)], exact for SCALED_KDV.
/// Log:    (c/2) sech^2[sqrt(c beta)/2 (x - x0 - beta c (t-t0))], beta = 1 + 5 eps/3,
///         exact for LOG_KDV with the log term dropped.
enum class KdvSolitonForm { Scaled, Log };

struct KdvSoliton {
  double c = 4.0;
  double eps = 0.0;
  double x0 = 0.0;
  double t0 = 0.0;
  KdvSolitonForm form = KdvSolitonForm::Scaled;

  double beta() const { return 1.0 + 5.0 * eps / 3.0; }
  double speed() const;
  double width_factor() const;
  double center(double t) const { return x0 + speed() * (t - t0); }
  double operator()(double x, double t) const;
  /// Samples the periodic image nearest to each grid point.
  GridField sample(double length, std::size_t n, double t) const;
};

KdvSoliton soliton_kdv(double c, double eps, double x0, double t0, KdvSolitonForm form = KdvSolitonForm::Scaled);

/// NLS one-soliton for phi_T + 3i k0 phi_XX + i beta (6/k0)|phi|^2 phi = 0.
///
/// `closed_form` evaluates the closed form with Lambda1 = i sqrt(3 beta/k0),
/// Lambda2 = -i/sqrt(3 k0) literally (complex arithmetic throughout).
/// `standard` is the travelling solution of the same equation with envelope speed V:
///   K sech(kappa (X - X0 - V T)) exp(i(a X - Omega T)), kappa = K sqrt(beta)/|k0|,
///   a = -V/(6 k0), Omega = 3 k0 (kappa^2 - a^2).
struct NlsSoliton {
  double K = 1.0;
  double V = 0.0;
  double k0 = 1.0;
  double beta = 1.0;
  double X0 = 0.0;
  double T0 = 0.0;

  cplx lambda1() const;
  cplx lambda2() const;
  cplx closed_form(double X, double T) const;
  cplx standard(double X, double T) const;
  ComplexField sample_closed_form(double length, std::size_t n, double T) const;
  ComplexField sample_standard(double length, std::size_t n, double T) const;
};

NlsSoliton soliton_nls(double K, double V, double k0, double beta, double X0 = 0.0, double T0 = 0.0);

/// max |phi_T + 3i k0 phi_XX + i s beta (6/k0)|phi|^2 phi| over the given points,
/// derivatives by fourth-order central differences of the sampler.
template <class F>
double nls_residual(const F& phi, double k0, double beta, double sign, const std::vector<double>& Xs, double T, double h = 1e-3);

}  // namespace qikdv

#include <cmath>

namespace qikdv {
template <class F>
double nls_residual(const F& phi, double k0, double beta, double sign, const std::vector<double>& Xs, double T, double h) {
  double worst = 0.0;
  for (double X : Xs) {
    const cplx p = phi(X, T);
    const cplx pt = (-phi(X, T + 2 * h) + 8.0 * phi(X, T + h) - 8.0 * phi(X, T - h) + phi(X, T - 2 * h)) / (12.0 * h);
    const cplx pxx =
        (-phi(X + 2 * h, T) + 16.0 * phi(X + h, T) - 30.0 * p + 16.0 * phi(X - h, T) - phi(X - 2 * h, T)) / (12.0 * h * h);
    const cplx r = pt + cplx(0.0, 3.0 * k0) * pxx + cplx(0.0, sign * beta * 6.0 / k0) * std::norm(p) * p;
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}
}  // namespace qikdv
