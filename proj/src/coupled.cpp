#include "qikdv/coupled.hpp"

#include <cmath>
#include <limits>

#include "qikdv/errors.hpp"

namespace qikdv {

namespace {

const cplx kNaN(std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN());

struct Parts {
  std::vector<cplx> q, qb, qx, qbx, qxx, qbxx, D, Db;
};

Parts parts(const CoupledState& s, const CoupledSpecs& specs) {
  validate_coupled(s);
  Spectral sp(s.q.length, s.q.n());
  Parts p;
  p.q = s.q.values;
  p.qb = s.qbar.values;
  p.qx = sp.derivative(p.q, 1);
  p.qbx = sp.derivative(p.qb, 1);
  p.qxx = sp.derivative(p.q, 2);
  p.qbxx = sp.derivative(p.qb, 2);
  p.D = deformation_gradient(s.q, specs.q).values;
  p.Db = deformation_gradient(s.qbar, specs.qbar).values;
  return p;
}

// dH/dq + q_xx = -3 q^2 + D
cplx bracket(cplx q, cplx D) { return -3.0 * q * q + D; }

}  // namespace

void validate_coupled(const CoupledState& s, const std::string& key) {
  s.q.validate(key + ".q");
  s.qbar.validate(key + ".qbar");
  if (s.q.n() != s.qbar.n() || s.q.length != s.qbar.length)
    throw ValidationError(key + ".qbar", "grid differs from q");
}

ComplexField anomaly_Xc(const CoupledState& s, const CoupledSpecs& specs) {
  const auto p = parts(s, specs);
  ComplexField X{s.q.length, std::vector<cplx>(s.q.n())};
  for (std::size_t j = 0; j < X.n(); ++j)
    X.values[j] = 2.0 / 3.0 * (p.q[j] * p.q[j] * bracket(p.qb[j], p.Db[j]) - p.qb[j] * p.qb[j] * bracket(p.q[j], p.D[j]));
  return X;
}

ComplexField anomaly_Xc_plus(const CoupledState& s, const CoupledSpecs& specs) {
  const auto p = parts(s, specs);
  ComplexField X{s.q.length, std::vector<cplx>(s.q.n())};
  for (std::size_t j = 0; j < X.n(); ++j)
    X.values[j] = 2.0 / 3.0 * (p.q[j] * p.q[j] * bracket(p.qb[j], p.Db[j]) + p.qb[j] * p.qb[j] * bracket(p.q[j], p.D[j]));
  return X;
}

LaxData coupled_lax_data(const CoupledState& s, const CoupledSpecs& specs) {
  const auto p = parts(s, specs);
  const std::size_t n = s.q.n();
  LaxData d;
  d.length = s.q.length;
  d.upper = p.qb;
  d.lower = p.q;
  d.b3.resize(n);
  d.Fbar.resize(n);
  d.Flow.resize(n);
  d.X.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    d.b3[j] = p.qb[j] * p.qx[j] - p.q[j] * p.qbx[j];
    d.Fbar[j] = p.qbxx[j] - 2.0 / 3.0 * p.q[j] * bracket(p.qb[j], p.Db[j]);
    d.Flow[j] = p.qxx[j] - 2.0 / 3.0 * p.qb[j] * bracket(p.q[j], p.D[j]);
    d.X[j] = 2.0 / 3.0 * (p.q[j] * p.q[j] * bracket(p.qb[j], p.Db[j]) - p.qb[j] * p.qb[j] * bracket(p.q[j], p.D[j]));
  }
  return d;
}

std::vector<TrajectorySample> evolve_coupled(const CoupledState& s0, const CoupledSpecs& specs, double dt,
                                             double t_end, int sample_every, bool flipped_signs) {
  EvolutionProblem p;
  p.equation = Equation::COUPLED_KDV;
  p.deformation = specs.qbar;
  p.deformation_q = specs.q;
  p.dt = dt;
  p.t_end = t_end;
  p.coupled_flipped = flipped_signs;
  auto diag = [](TrajectorySample& s) {
    s.diagnostics["conjugacy_defect"] = conjugacy_defect(std::get<CoupledState>(s.field));
  };
  return evolve(State{s0}, p, sample_every, diag);
}

double conjugacy_defect(const CoupledState& s) {
  double m = 0.0;
  for (std::size_t j = 0; j < s.q.n(); ++j) m = std::max(m, std::abs(s.qbar.values[j] - std::conj(s.q.values[j])));
  return m;
}

CoupledResiduals coupled_zeroth_system(const CoupledState& before, const CoupledState& after, double dt,
                                       const CoupledSpecs& specs, const GaugeOptions& opt) {
  CoupledResiduals r;
  const auto d0 = coupled_lax_data(before, specs);
  const auto d1 = coupled_lax_data(after, specs);
  r.adapter = zeroth_system(d0, d1, dt, opt);

  auto flipped = [&](const CoupledState& s, LaxData d) {
    const auto p = parts(s, specs);
    const auto Xp = anomaly_Xc_plus(s, specs);
    for (std::size_t j = 0; j < d.n(); ++j) {
      d.b3[j] = -d.b3[j];
      d.Flow[j] = 2.0 * (p.qxx[j] + 2.0 / 3.0 * p.qb[j] * bracket(p.q[j], p.D[j]));
      d.X[j] = Xp.values[j];
    }
    return d;
  };
  r.flipped = zeroth_system(flipped(before, d0), flipped(after, d1), dt, opt);
  return r;
}

cplx charge_R0_pv(const GaugeSolution& g) {
  const std::size_t n = g.w.size();
  bool real = true;
  for (const auto& z : g.w)
    if (std::abs(z.imag()) > 1e-10 * std::abs(z)) real = false;
  if (real) return std::log(std::abs(g.w_right / g.w_left));
  const auto w = unwrap(g.w, g.start_index);
  cplx total = std::log(w[0] / g.w_left);
  for (std::size_t i = 0; i + 1 < n; ++i) total += std::log(w[i + 1] / w[i]);
  total += std::log(g.w_right / w[n - 1]);
  return total;
}

cplx charge_Rn(const RotatedLaxC& r, const GaugeSolution& g, int n) {
  if (n < 0 || n > r.order) throw ValidationError("charges.orders", "order " + std::to_string(n) + " not computed");
  if (g.singular) throw SingularGaugeError(*g.singular);
  return trapezoid(r.betaA[n], g.length / static_cast<double>(g.w.size()));
}

cplx anomaly_rate_c(const RotatedLaxC& r, const GaugeSolution& g, int n) {
  if (n < 0 || n > r.order) throw ValidationError("charges.orders", "order " + std::to_string(n) + " not computed");
  if (n > 0 && g.singular) throw SingularGaugeError(*g.singular);
  std::vector<cplx> f(r.X.size());
  for (std::size_t j = 0; j < f.size(); ++j) f[j] = r.X[j] * (n == 0 ? cplx(1.0) : r.f0[n][j]);
  return trapezoid(f, g.length / static_cast<double>(g.w.size()));
}

CoupledSeries track_coupled_charges(const std::vector<TrajectorySample>& traj, const CoupledSpecs& specs, int orders,
                                    const GaugeOptions& opt) {
  if (orders < 0 || orders > 2) throw ValidationError("charges.orders", "must be 0, 1 or 2");
  CoupledSeries s;
  s.orders = orders;
  GaugeOptions o = opt;
  o.order = orders;
  std::vector<cplx> trap, pv;
  for (const auto& smp : traj) {
    const auto& st = std::get<CoupledState>(smp.field);
    const auto d = coupled_lax_data(st, specs);
    const auto g = solve_gauge(d, o);
    const auto r = assemble_rotated(d, g);
    s.times.push_back(smp.t);
    if (g.singular) s.singular_at.push_back(smp.t);
    pv.push_back(charge_R0_pv(g));
    trap.push_back(g.singular ? kNaN : charge_Rn(r, g, 0));
    for (int n = 0; n < 3; ++n) {
      const bool ok = n <= orders && (n == 0 || g.full());
      if (n > 0) s.R[n].push_back(ok ? charge_Rn(r, g, n) : kNaN);
      s.Lambda[n].push_back(ok ? anomaly_rate_c(r, g, n) : kNaN);
    }
    double nq = 0.0, nqb = 0.0;
    for (std::size_t j = 0; j < st.q.n(); ++j) {
      nq += std::norm(st.q.values[j]);
      nqb += std::norm(st.qbar.values[j]);
    }
    s.q_norm.push_back(nq * st.q.dx());
    s.qbar_norm.push_back(nqb * st.q.dx());
    s.conjugacy.push_back(conjugacy_defect(st));
  }
  if (s.singular_at.empty()) {
    s.R[0] = trap;
  } else {
    s.r0_method = "principal_value";
    s.R[0] = pv;
  }
  return s;
}

std::vector<std::string> coupled_csv_header() {
  return {"t",          "R0_re",      "R0_im",      "R1_re",       "R1_im",          "R2_re",       "R2_im",
          "Lambda0_re", "Lambda0_im", "Lambda1_re", "Lambda1_im",  "Lambda2_re",     "Lambda2_im",  "q_norm",
          "qbar_norm",  "conjugacy_defect"};
}

std::vector<std::vector<double>> coupled_csv_rows(const CoupledSeries& s) {
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < s.times.size(); ++i) {
    std::vector<double> r{s.times[i]};
    for (int n = 0; n < 3; ++n) {
      r.push_back(s.R[n][i].real());
      r.push_back(s.R[n][i].imag());
    }
    for (int n = 0; n < 3; ++n) {
      r.push_back(s.Lambda[n][i].real());
      r.push_back(s.Lambda[n][i].imag());
    }
    r.push_back(s.q_norm[i]);
    r.push_back(s.qbar_norm[i]);
    r.push_back(s.conjugacy[i]);
    rows.push_back(r);
  }
  return rows;
}

}  // namespace qikdv
