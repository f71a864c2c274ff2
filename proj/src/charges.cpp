#include "qikdv/charges.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "qikdv/errors.hpp"

namespace qikdv {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require_full(const RotatedLax& r) {
  if (r.partial) throw SingularGaugeError(r.singular.value_or(kNaN));
}

void require_order(const RotatedLax& r, int n) {
  if (n < 0 || n > r.order) throw ValidationError("charges.orders", "order " + std::to_string(n) + " not computed");
}

}  // namespace

double charge_Q0(const GridField& u, const GridField& a_minus0) {
  if (u.n() != a_minus0.n()) throw ValidationError("charges", "u and a_minus0 grids differ");
  std::vector<double> f(u.n());
  for (std::size_t j = 0; j < u.n(); ++j) f[j] = u.values[j] * a_minus0.values[j];
  return trapezoid(f, u.dx()) / (std::numbers::sqrt2 * std::numbers::e);
}

double charge_Q0(const GridField& u, const GaugeCoefficients& c) {
  if (c.singular) throw SingularGaugeError(*c.singular);
  return charge_Q0(u, c.a_minus0);
}

double charge_Q0_pv(const GaugeSolution& g) { return std::log(std::abs(g.w_right / g.w_left)); }

double charge_Q0_pv(const GaugeCoefficients& c) { return std::log(std::abs(c.w_right / c.w_left)); }

double charge_Qn(const RotatedLax& r, int n) {
  require_order(r, n);
  require_full(r);
  return trapezoid(r.betaA[n].values, r.betaA[n].dx());
}

double anomaly_rate(const RotatedLax& r, int n) {
  require_order(r, n);
  if (n > 0) require_full(r);
  std::vector<double> f(r.X.n());
  for (std::size_t j = 0; j < f.size(); ++j) f[j] = r.X.values[j] * (n == 0 ? 1.0 : r.f0[n].values[j]);
  return trapezoid(f, r.X.dx());
}

double anomaly_rate(const GridField& u, const RotatedLax& r, const DeformationSpec& spec, int n) {
  if (u.n() != r.X.n()) throw ValidationError("charges", "u and rotated grids differ");
  RotatedLax q = r;
  q.X = anomaly(u, spec);
  return anomaly_rate(q, n);
}

ClassicalInvariants classical_invariants(const GridField& u) {
  u.validate("u");
  const auto ux = derivative(u, 1);
  std::vector<double> u2(u.n()), h(u.n());
  for (std::size_t j = 0; j < u.n(); ++j) {
    const double v = u.values[j];
    u2[j] = v * v;
    h[j] = 0.5 * ux.values[j] * ux.values[j] - v * v * v;
  }
  return {trapezoid(u.values, u.dx()), trapezoid(u2, u.dx()), trapezoid(h, u.dx())};
}

std::vector<double> time_derivative(const std::vector<double>& t, const std::vector<double>& q) {
  const std::size_t n = t.size();
  if (q.size() != n) throw ValidationError("charges", "series lengths differ");
  std::vector<double> d(n, kNaN);
  if (n < 2) return d;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t a = i == 0 ? 0 : i - 1;
    const std::size_t b = i + 1 == n ? i : i + 1;
    d[i] = (q[b] - q[a]) / (t[b] - t[a]);
  }
  return d;
}

double relative_drift(const std::vector<double>& q) {
  if (q.empty()) return 0.0;
  const double ref = std::max(std::abs(q.front()), 1.0);
  double worst = 0.0;
  for (double v : q) {
    if (std::isnan(v)) return std::numeric_limits<double>::quiet_NaN();
    worst = std::max(worst, std::abs(v - q.front()));
  }
  return worst / ref;
}

ChargeSeries track_charges(const std::vector<double>& times, const std::vector<GridField>& fields,
                           const DeformationSpec& spec, int orders, const GaugeOptions& opt) {
  return track_charges(times, fields, [&](const GridField& u) { return anomaly(u, spec); }, orders, opt);
}

AnomalyFn equation_anomaly(const EvolutionProblem& p) {
  switch (p.equation) {
    case Equation::SCALED_KDV: {
      const auto spec = DeformationSpec::uuxx(p.epsilon);
      return [spec](const GridField& u) { return anomaly(u, spec); };
    }
    case Equation::LOG_KDV: {
      const double eps = p.epsilon;
      if (!p.drop_log) return [eps](const GridField& u) { return anomaly_first_order(u, eps); };
      return [eps](const GridField& u) {
        GridField x{u.length, u.values};
        for (auto& v : x.values) v = -5.0 * eps * v * v;
        return x;
      };
    }
    case Equation::NLS:
    case Equation::COUPLED_KDV:
      throw ValidationError("equation.name", "no real anomaly for " + to_string(p.equation));
    default: {
      const auto spec = p.effective_deformation();
      return [spec](const GridField& u) { return anomaly(u, spec); };
    }
  }
}

ChargeSeries track_charges(const std::vector<double>& times, const std::vector<GridField>& fields,
                           const AnomalyFn& anomaly_of, int orders, const GaugeOptions& opt) {
  if (times.size() != fields.size()) throw ValidationError("charges", "times and fields differ in length");
  if (orders < 0 || orders > 2) throw ValidationError("charges.orders", "must be 0, 1 or 2");
  ChargeSeries s;
  s.orders = orders;
  s.times = times;
  GaugeOptions o = opt;
  o.order = orders;
  std::vector<double> trap, pv;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    const auto& u = fields[i];
    const auto c = solve_gauge(u, o);
    const auto r = assemble_rotated(u, c, anomaly_of(u));
    if (c.singular) s.singular_at.push_back(times[i]);
    pv.push_back(charge_Q0_pv(c));
    trap.push_back(c.singular ? kNaN : charge_Q0(u, c.a_minus0));
    for (int n = 0; n < 3; ++n) {
      const bool ok = n <= orders && (n == 0 || c.full());
      if (n > 0) s.Q[n].push_back(ok ? charge_Qn(r, n) : kNaN);
      s.Lambda[n].push_back(ok ? anomaly_rate(r, n) : kNaN);
    }
    const auto ci = classical_invariants(u);
    s.mass.push_back(ci.mass);
    s.momentum.push_back(ci.momentum);
    s.energy.push_back(ci.energy);
  }
  if (s.singular_at.empty()) {
    s.Q[0] = trap;
  } else {
    s.q0_method = "principal_value";
    s.Q[0] = pv;
  }
  for (int n = 0; n < 3; ++n) s.dQ_dt_numeric[n] = time_derivative(s.times, s.Q[n]);
  return s;
}

std::vector<std::string> charge_csv_header() {
  return {"t", "Q0", "Q1", "Q2", "Lambda0", "Lambda1", "Lambda2", "mass", "momentum", "energy"};
}

std::vector<std::vector<double>> charge_csv_rows(const ChargeSeries& s) {
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < s.times.size(); ++i)
    rows.push_back({s.times[i], s.Q[0][i], s.Q[1][i], s.Q[2][i], s.Lambda[0][i], s.Lambda[1][i], s.Lambda[2][i],
                    s.mass[i], s.momentum[i], s.energy[i]});
  return rows;
}

}  // namespace qikdv
