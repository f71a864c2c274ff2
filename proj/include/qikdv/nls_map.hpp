#pragma once

#include <vector>

#include "qikdv/grid.hpp"

namespace qikdv {

/// Multiscale embedding of an NLS envelope into a KdV field:
///   theta = k0 (x-x0) + k0^3 (t-t0)
///   X = X0 + eps ((x-x0) + 3 k0^2 (t-t0)),  T = T0 + eps^2 (t-t0)
struct WeakCouplingParams {
  double epsilon_wc = 0.05;
  double k0 = 1.0;
  double x0 = 0.0, t0 = 0.0, X0 = 0.0, T0 = 0.0;

  double omega0() const { return k0 * k0 * k0; }
  double theta(double x, double t) const { return k0 * (x - x0) + omega0() * (t - t0); }
  double X(double x, double t) const { return X0 + epsilon_wc * ((x - x0) + 3.0 * k0 * k0 * (t - t0)); }
  double T(double t) const { return T0 + epsilon_wc * epsilon_wc * (t - t0); }
  void validate(const std::string& key = "map") const;
};

/// u = eps(phi e^{i theta} + cc) + (eps/k0)^2 (phi^2 e^{2 i theta} + cc) - 2 (eps/k0)^2 |phi|^2
/// on the x-grid of length phi.length/eps with n_x points. phi is Fourier-interpolated.
GridField kdv_from_envelope(const ComplexField& phi, const WeakCouplingParams& p, double t, std::size_t n_x);
/// Same map evaluated at arbitrary x, returning the complex value (imaginary part is round-off).
std::vector<cplx> kdv_from_envelope_complex(const ComplexField& phi, const WeakCouplingParams& p, double t,
                                            const std::vector<double>& xs);

/// sup over matched samples of || u(t) - reconstruction(phi(t)) ||_inf.
double correspondence_error(const std::vector<ComplexField>& phi_traj, const std::vector<GridField>& u_traj,
                            const std::vector<double>& times, const WeakCouplingParams& p);

struct CorrespondenceSetup {
  double LX = 40.0;        // envelope domain
  std::size_t NX = 512;    // envelope grid
  std::size_t n_x = 4096;  // KdV grid
  double dt = 0.01;        // KdV time step; the envelope uses eps^2 dt
  double t_end = 1.0;
  int compare_every = 0;   // steps between comparisons; 0 compares at t_end only
  double amplitude = 0.5;  // phi(X,0) = amplitude * sech(X)
  double nls_sign = -1.0;  // sign of the NLS nonlinearity, see README
  double eps_def = 0.0;    // deformation of the pairing, beta = 1 + 5 eps_def/3
  bool include_log = false;
};

struct CorrespondenceResult {
  double epsilon_wc = 0.0;
  double k0 = 0.0;  // after snapping to the KdV domain
  double beta = 1.0;
  double error = 0.0;
};

/// Carrier wavenumber nearest to k0 that is periodic on a domain of length L.
double commensurate_k0(double k0, double L);

/// Evolves u under KDV (or LOG_KDV when eps_def != 0) and phi under NLS from matched data.
CorrespondenceResult run_correspondence(double epsilon_wc, double k0, const CorrespondenceSetup& s);

struct ScalingStudy {
  std::vector<CorrespondenceResult> rows;
  double slope = 0.0;
};

/// Least-squares slope of log(error) against log(eps). Needs at least two values.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);
ScalingStudy scaling_study(const std::vector<double>& eps_list, double k0, const CorrespondenceSetup& s);

/// d/d rho of (1/2) rho^{2(1+et)}, the potential derivative with rho = |phi|^2.
double potential_derivative(double rho, double eps_tilde);

}  // namespace qikdv
