#include "qikdv/pde.hpp"

#include <cmath>
#include <limits>

#include "qikdv/errors.hpp"

namespace qikdv {

namespace {
const char* kNames[] = {"KDV", "DEFORMED_KDV", "SCALED_KDV", "HIGHER_DERIV_POWER", "HIGHER_DERIV_ORDER", "LOG_KDV", "NLS", "COUPLED_KDV"};
}

std::string to_string(Equation e) { return kNames[static_cast<int>(e)]; }

Equation equation_from_string(const std::string& s) {
  for (int i = 0; i < 8; ++i)
    if (s == kNames[i]) return static_cast<Equation>(i);
  throw ValidationError("equation.name", "unknown equation '" + s + "'");
}

void EvolutionProblem::validate(const std::string& key) const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError(key + ".dt", "must be positive");
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw ValidationError(key + ".t_end", "must be >= 0");
  const double steps = t_end / dt;
  if (std::abs(steps - std::round(steps)) > 1e-6 * std::max(1.0, steps))
    throw ValidationError(key + ".t_end", "must be an integer multiple of dt");
  if (!std::isfinite(epsilon)) throw ValidationError(key + ".epsilon", "must be finite");
  switch (equation) {
    case Equation::SCALED_KDV:
      if (!(epsilon < 1.0)) throw ValidationError(key + ".epsilon", "scaled KdV needs epsilon < 1");
      break;
    case Equation::HIGHER_DERIV_POWER:
      if (m < 3) throw ValidationError(key + ".m", "must be >= 3");
      break;
    case Equation::HIGHER_DERIV_ORDER:
      if (n_order < 1) throw ValidationError(key + ".n", "must be >= 1");
      break;
    case Equation::LOG_KDV:
      if (std::abs(epsilon) > 0.2) throw ValidationError(key + ".epsilon", "LOG_KDV needs |epsilon| <= 0.2");
      break;
    case Equation::NLS:
      if (k0 == 0.0 || !std::isfinite(k0)) throw ValidationError(key + ".k0", "must be nonzero");
      if (!std::isfinite(beta)) throw ValidationError(key + ".beta", "must be finite");
      break;
    case Equation::DEFORMED_KDV:
      deformation.validate(key + ".deformation");
      break;
    case Equation::COUPLED_KDV:
      deformation.validate(key + ".deformation_qbar");
      deformation_q.validate(key + ".deformation_q");
      break;
    case Equation::KDV:
      break;
  }
}

DeformationSpec EvolutionProblem::effective_deformation() const {
  switch (equation) {
    case Equation::DEFORMED_KDV:
      return deformation;
    case Equation::HIGHER_DERIV_POWER:
      return DeformationSpec::power_ux(m, epsilon);
    case Equation::HIGHER_DERIV_ORDER:
      return DeformationSpec::ud2n(n_order, epsilon);
    default:
      return DeformationSpec::none();
  }
}

Stepper::Stepper(const EvolutionProblem& p, double length, std::size_t n)
    : p_(p), length_(length), n_(n), sp_(std::make_unique<Spectral>(length, n)) {
  p_.validate();
  complex_ = p.equation == Equation::NLS;
  coupled_ = p.equation == Equation::COUPLED_KDV;
  def_ = p.effective_deformation();
  const std::size_t modes = coupled_ ? 2 * n : (complex_ ? n : n / 2 + 1);
  lin_.assign(modes, 0.0);
  for (std::size_t j = 0; j < modes; ++j) {
    const std::size_t jj = coupled_ ? j % n : j;
    const double k = (complex_ || coupled_) ? sp_->k_full(jj) : sp_->k_half(jj);
    const bool nyq = sp_->is_nyquist(jj);
    const cplx d3 = derivative_symbol(k, 3, nyq);
    switch (p.equation) {
      case Equation::NLS:
        lin_[j] = cplx(0.0, -3.0 * p.k0) * derivative_symbol(k, 2, nyq);
        break;
      case Equation::SCALED_KDV:
        lin_[j] = -d3 + p.epsilon * d3;
        break;
      default:
        lin_[j] = -d3 + anomaly_linear_symbol(def_, k, nyq);
        break;
    }
  }
  e1_.resize(modes);
  e2_.resize(modes);
  for (std::size_t j = 0; j < modes; ++j) {
    e1_[j] = std::exp(lin_[j] * (0.5 * p.dt));
    e2_[j] = e1_[j] * e1_[j];
  }
}

Stepper::~Stepper() = default;

std::vector<cplx> Stepper::pack(const State& s) {
  std::vector<cplx> v;
  if (coupled_) {
    const auto& c = std::get<CoupledState>(s);
    std::vector<cplx> a, b;
    sp_->forward(c.qbar.values, a);
    sp_->forward(c.q.values, b);
    v = a;
    v.insert(v.end(), b.begin(), b.end());
  } else if (complex_) {
    sp_->forward(std::get<ComplexField>(s).values, v);
  } else {
    sp_->forward(std::get<GridField>(s).values, v);
  }
  return v;
}

State Stepper::unpack(const std::vector<cplx>& v) const {
  if (coupled_) {
    CoupledState c{ComplexField{length_, {}}, ComplexField{length_, {}}};
    std::vector<cplx> a(v.begin(), v.begin() + static_cast<long>(n_)), b(v.begin() + static_cast<long>(n_), v.end());
    sp_->backward(a, c.qbar.values);
    sp_->backward(b, c.q.values);
    return c;
  }
  if (complex_) {
    ComplexField z{length_, {}};
    sp_->backward(v, z.values);
    return z;
  }
  GridField u{length_, {}};
  sp_->backward(v, u.values);
  return u;
}

void Stepper::nonlinear(const std::vector<cplx>& v, std::vector<cplx>& out, bool dealias) {
  const std::size_t n = n_;
  Spectral& sp = *sp_;
  auto d1 = [&](std::size_t j, bool full) {
    return derivative_symbol(full ? sp.k_full(j) : sp.k_half(j), 1, sp.is_nyquist(j));
  };
  if (coupled_) {
    std::vector<cplx> a(v.begin(), v.begin() + static_cast<long>(n)), b(v.begin() + static_cast<long>(n), v.end());
    std::vector<cplx> qb, q, qbx, qx, ta(n), tb(n);
    sp.backward(a, qb);
    sp.backward(b, q);
    for (std::size_t j = 0; j < n; ++j) {
      ta[j] = a[j] * d1(j, true);
      tb[j] = b[j] * d1(j, true);
    }
    sp.backward(ta, qbx);
    sp.backward(tb, qx);
    ComplexField dbar = deformation_gradient(ComplexField{length_, qb}, p_.deformation);
    ComplexField dq = deformation_gradient(ComplexField{length_, q}, p_.deformation_q);
    const double qsign = p_.coupled_flipped ? 1.0 : -1.0;
    std::vector<cplx> pa(n), pb(n), fa(n), fb(n);
    for (std::size_t j = 0; j < n; ++j) {
      pa[j] = -6.0 * q[j] * qb[j] * qbx[j];
      pb[j] = qsign * 6.0 * q[j] * qb[j] * qx[j];
      fa[j] = (2.0 / 3.0) * q[j] * dbar.values[j];
      fb[j] = -qsign * (2.0 / 3.0) * qb[j] * dq.values[j];
    }
    std::vector<cplx> ha, hb, ga, gb;
    sp.forward(pa, ha);
    sp.forward(pb, hb);
    sp.forward(fa, ga);
    sp.forward(fb, gb);
    out.resize(2 * n);
    for (std::size_t j = 0; j < n; ++j) {
      const cplx dd = d1(j, true);
      const bool k = !dealias || sp.keep(j);
      out[j] = k ? ha[j] + dd * ga[j] : 0.0;
      out[n + j] = k ? hb[j] + dd * gb[j] : 0.0;
    }
    return;
  }
  if (complex_) {
    std::vector<cplx> phi;
    sp.backward(v, phi);
    const cplx c(0.0, -p_.nls_sign * p_.beta * 6.0 / p_.k0);
    for (auto& z : phi) z = c * std::norm(z) * z;
    sp.forward(phi, out);
    if (dealias)
      for (std::size_t j = 0; j < n; ++j)
        if (!sp.keep(j)) out[j] = 0.0;
    return;
  }
  std::vector<double> u;
  sp.backward(v, u);
  const std::size_t h = n / 2 + 1;
  out.resize(h);
  if (p_.equation == Equation::LOG_KDV && !p_.drop_log) {
    for (std::size_t j = 0; j < n; ++j)
      if (!(u[j] > 0.0)) throw DomainError("LOG_KDV needs u > 0", static_cast<long>(j));
    std::vector<cplx> t(h);
    for (std::size_t j = 0; j < h; ++j) t[j] = v[j] * d1(j, false);
    std::vector<double> ux;
    sp.backward(t, ux);
    const double e = p_.epsilon;
    std::vector<double> g(n);
    for (std::size_t j = 0; j < n; ++j) g[j] = -(6.0 + 10.0 * e + 12.0 * e * std::log(u[j])) * u[j] * ux[j];
    sp.forward(g, out);
  } else {
    const double c = p_.equation == Equation::LOG_KDV ? -(3.0 + 5.0 * p_.epsilon) : -3.0;
    std::vector<double> sq(n);
    for (std::size_t j = 0; j < n; ++j) sq[j] = u[j] * u[j];
    std::vector<cplx> hs;
    sp.forward(sq, hs);
    for (std::size_t j = 0; j < h; ++j) out[j] = c * d1(j, false) * hs[j];
    if (def_.kind == DeformKind::PowerDef || (def_.kind == DeformKind::LocalTerm && def_.family == LocalFamily::POWER_UX)) {
      auto x = anomaly_nonlinear(sp, u, def_);
      std::vector<cplx> hx;
      sp.forward(x, hx);
      for (std::size_t j = 0; j < h; ++j) out[j] += d1(j, false) * hx[j];
    }
  }
  if (dealias)
    for (std::size_t j = 0; j < h; ++j)
      if (!sp.keep(j)) out[j] = 0.0;
}

void Stepper::step_spectral(std::vector<cplx>& v) {
  const std::size_t m = v.size();
  const double dt = p_.dt;
  std::vector<cplx> a, b, c, d, tmp(m);
  nonlinear(v, a, true);
  for (std::size_t j = 0; j < m; ++j) tmp[j] = e1_[j] * (v[j] + 0.5 * dt * a[j]);
  nonlinear(tmp, b, true);
  for (std::size_t j = 0; j < m; ++j) tmp[j] = e1_[j] * v[j] + 0.5 * dt * b[j];
  nonlinear(tmp, c, true);
  for (std::size_t j = 0; j < m; ++j) tmp[j] = e2_[j] * v[j] + dt * e1_[j] * c[j];
  nonlinear(tmp, d, true);
  for (std::size_t j = 0; j < m; ++j)
    v[j] = e2_[j] * v[j] + (dt / 6.0) * (e2_[j] * a[j] + 2.0 * e1_[j] * (b[j] + c[j]) + d[j]);
}

State Stepper::step(const State& s) {
  auto v = pack(s);
  step_spectral(v);
  return unpack(v);
}

State Stepper::rhs(const State& s) {
  auto v = pack(s);
  std::vector<cplx> nl;
  nonlinear(v, nl, false);
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = lin_[j] * v[j] + nl[j];
  return unpack(v);
}

double state_max_abs(const State& s) {
  if (const auto* u = std::get_if<GridField>(&s)) return max_abs(u->values);
  if (const auto* z = std::get_if<ComplexField>(&s)) return max_abs(z->values);
  const auto& c = std::get<CoupledState>(s);
  return std::max(max_abs(c.q.values), max_abs(c.qbar.values));
}

void validate_state(const State& s, const EvolutionProblem& p) {
  switch (p.equation) {
    case Equation::NLS:
      if (!std::holds_alternative<ComplexField>(s)) throw ValidationError("initial", "NLS needs a complex field");
      std::get<ComplexField>(s).validate("initial");
      break;
    case Equation::COUPLED_KDV: {
      if (!std::holds_alternative<CoupledState>(s)) throw ValidationError("initial", "COUPLED_KDV needs a (q, qbar) pair");
      const auto& c = std::get<CoupledState>(s);
      c.q.validate("initial.q");
      c.qbar.validate("initial.qbar");
      if (c.q.n() != c.qbar.n() || c.q.length != c.qbar.length) throw ValidationError("initial", "q and qbar grids differ");
      break;
    }
    default:
      if (!std::holds_alternative<GridField>(s)) throw ValidationError("initial", "KdV family needs a real field");
      std::get<GridField>(s).validate("initial");
      break;
  }
}

namespace {
std::pair<double, std::size_t> grid_of(const State& s) {
  if (const auto* u = std::get_if<GridField>(&s)) return {u->length, u->n()};
  if (const auto* z = std::get_if<ComplexField>(&s)) return {z->length, z->n()};
  const auto& c = std::get<CoupledState>(s);
  return {c.q.length, c.q.n()};
}
bool finite(const std::vector<cplx>& v) {
  for (const auto& z : v)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  return true;
}
}  // namespace

std::vector<TrajectorySample> evolve(const State& u0, const EvolutionProblem& p, int sample_every, const DiagnosticsFn& diag) {
  p.validate();
  validate_state(u0, p);
  if (sample_every < 1) throw ValidationError("output.sample_every", "must be >= 1");
  auto [length, n] = grid_of(u0);
  Stepper st(p, length, n);
  const long nsteps = std::lround(p.t_end / p.dt);
  std::vector<TrajectorySample> out;
  auto record = [&](double t, State s) {
    TrajectorySample smp{t, std::move(s), {}};
    smp.diagnostics["max_abs"] = state_max_abs(smp.field);
    if (diag) diag(smp);
    out.push_back(std::move(smp));
  };
  record(0.0, u0);
  auto v = st.pack(u0);
  for (long i = 1; i <= nsteps; ++i) {
    st.step_spectral(v);
    if (!finite(v)) throw BlowUpError(static_cast<double>(i) * p.dt, out.back().diagnostics);
    if (i % sample_every == 0 || i == nsteps) record(static_cast<double>(i) * p.dt, st.unpack(v));
  }
  return out;
}

}  // namespace qikdv
