#include "qikdv/nls_map.hpp"

#include <cmath>
#include <numbers>

#include "qikdv/errors.hpp"
#include "qikdv/pde.hpp"

namespace qikdv {

void WeakCouplingParams::validate(const std::string& key) const {
  if (!(epsilon_wc >= 0.0 && epsilon_wc <= 0.1)) throw ValidationError(key + ".epsilon_wc", "must lie in [0, 0.1]");
  if (k0 == 0.0 || !std::isfinite(k0)) throw ValidationError(key + ".k0", "must be nonzero");
}

std::vector<cplx> kdv_from_envelope_complex(const ComplexField& phi, const WeakCouplingParams& p, double t,
                                            const std::vector<double>& xs) {
  p.validate();
  const double e = p.epsilon_wc;
  std::vector<double> Xs(xs.size());
  for (std::size_t j = 0; j < xs.size(); ++j) Xs[j] = p.X(xs[j], t);
  const auto ph = fourier_evaluate(phi, Xs);
  const double c2 = e * e / (p.k0 * p.k0);
  std::vector<cplx> u(xs.size());
  for (std::size_t j = 0; j < xs.size(); ++j) {
    const cplx a = ph[j] * std::polar(1.0, p.theta(xs[j], t));
    const cplx b = std::conj(a);
    u[j] = e * (a + b) + c2 * (a * a + b * b) - 2.0 * c2 * std::norm(ph[j]);
  }
  return u;
}

GridField kdv_from_envelope(const ComplexField& phi, const WeakCouplingParams& p, double t, std::size_t n_x) {
  p.validate();
  if (p.epsilon_wc == 0.0) throw ValidationError("map.epsilon_wc", "zero coupling has no x-grid");
  GridField u{phi.length / p.epsilon_wc, {}};
  std::vector<double> xs(n_x);
  for (std::size_t j = 0; j < n_x; ++j) xs[j] = -0.5 * u.length + static_cast<double>(j) * u.length / static_cast<double>(n_x);
  auto z = kdv_from_envelope_complex(phi, p, t, xs);
  u.values.resize(n_x);
  for (std::size_t j = 0; j < n_x; ++j) u.values[j] = z[j].real();
  return u;
}

double correspondence_error(const std::vector<ComplexField>& phi_traj, const std::vector<GridField>& u_traj,
                            const std::vector<double>& times, const WeakCouplingParams& p) {
  if (phi_traj.size() != u_traj.size() || times.size() != u_traj.size())
    throw ValidationError("trajectory", "phi and u samples do not match");
  double worst = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const auto& u = u_traj[i];
    if (std::abs(u.length * p.epsilon_wc - phi_traj[i].length) > 1e-9 * u.length)
      throw ValidationError("grid", "x-domain does not match X-domain / eps");
    auto r = kdv_from_envelope(phi_traj[i], p, times[i], u.n());
    worst = std::max(worst, max_abs_diff(u.values, r.values));
  }
  return worst;
}

double commensurate_k0(double k0, double L) {
  const double m = std::round(k0 * L / (2.0 * std::numbers::pi));
  if (m == 0.0) throw ValidationError("map.k0", "carrier shorter than one period of the domain");
  return 2.0 * std::numbers::pi * m / L;
}

CorrespondenceResult run_correspondence(double epsilon_wc, double k0, const CorrespondenceSetup& s) {
  CorrespondenceResult res;
  res.epsilon_wc = epsilon_wc;
  res.beta = 1.0 + 5.0 * s.eps_def / 3.0;
  if (epsilon_wc == 0.0) {
    res.k0 = k0;
    return res;  // both sides are identically zero
  }
  const double Lx = s.LX / epsilon_wc;
  WeakCouplingParams p;
  p.epsilon_wc = epsilon_wc;
  p.k0 = commensurate_k0(k0, Lx);
  p.validate();
  res.k0 = p.k0;

  ComplexField phi = sample_complex(s.LX, s.NX, [&](double X) { return cplx(s.amplitude / std::cosh(X), 0.0); });
  GridField u = kdv_from_envelope(phi, p, 0.0, s.n_x);

  EvolutionProblem kp;
  kp.dt = s.dt;
  kp.t_end = s.t_end;
  if (s.eps_def != 0.0 || s.include_log) {
    kp.equation = Equation::LOG_KDV;
    kp.epsilon = s.eps_def;
    kp.drop_log = !s.include_log;
  }
  EvolutionProblem np;
  np.equation = Equation::NLS;
  np.k0 = p.k0;
  np.beta = res.beta;
  np.nls_sign = s.nls_sign;
  np.dt = epsilon_wc * epsilon_wc * s.dt;
  np.t_end = epsilon_wc * epsilon_wc * s.t_end;

  Stepper ks(kp, u.length, u.n());
  Stepper ns(np, phi.length, phi.n());
  auto vu = ks.pack(u);
  auto vp = ns.pack(phi);
  const long nsteps = std::lround(s.t_end / s.dt);
  for (long i = 1; i <= nsteps; ++i) {
    ks.step_spectral(vu);
    ns.step_spectral(vp);
    const bool cmp = i == nsteps || (s.compare_every > 0 && i % s.compare_every == 0);
    if (!cmp) continue;
    const double t = static_cast<double>(i) * s.dt;
    auto uu = std::get<GridField>(ks.unpack(vu));
    auto pp = std::get<ComplexField>(ns.unpack(vp));
    for (const auto& z : uu.values)
      if (!std::isfinite(z)) throw BlowUpError(t, {});
    res.error = std::max(res.error, correspondence_error({pp}, {uu}, {t}, p));
  }
  return res;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() < 2 || x.size() != y.size()) throw ValidationError("map.epsilons", "need >=2 points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw ValidationError("map.epsilons", "log-log fit needs positive values");
    const double a = std::log(x[i]), b = std::log(y[i]);
    sx += a;
    sy += b;
    sxx += a * a;
    sxy += a * b;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

ScalingStudy scaling_study(const std::vector<double>& eps_list, double k0, const CorrespondenceSetup& s) {
  if (eps_list.size() < 2) throw ValidationError("map.epsilons", "need >=2 points");
  ScalingStudy st;
  std::vector<double> xs, ys;
  for (double e : eps_list) {
    st.rows.push_back(run_correspondence(e, k0, s));
    xs.push_back(e);
    ys.push_back(st.rows.back().error);
  }
  st.slope = loglog_slope(xs, ys);
  return st;
}

double potential_derivative(double rho, double eps_tilde) {
  if (rho <= 0.0) return 0.0;
  return (1.0 + eps_tilde) * std::pow(rho, 1.0 + 2.0 * eps_tilde);
}

}  // namespace qikdv
