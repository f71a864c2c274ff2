#include "qikdv/abelianization.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "qikdv/errors.hpp"

namespace qikdv {

namespace {

constexpr double kE = std::numbers::e;
constexpr double kS2 = std::numbers::sqrt2;
const cplx kNaN(std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN());

std::vector<cplx> refine_c(const std::vector<cplx>& f, std::size_t factor) {
  std::vector<double> re(f.size()), im(f.size());
  for (std::size_t j = 0; j < f.size(); ++j) {
    re[j] = f[j].real();
    im[j] = f[j].imag();
  }
  auto r = refine(re, factor);
  auto i = refine(im, factor);
  std::vector<cplx> out(r.size());
  for (std::size_t j = 0; j < r.size(); ++j) out[j] = {r[j], i[j]};
  return out;
}

bool all_real(const std::vector<cplx>& f) {
  for (const auto& z : f)
    if (z.imag() != 0.0) return false;
  return true;
}

// State: w, v, a_+^0, a_1^1, a_2^1, a_1^2, a_2^2.
using Y = std::array<cplx, 7>;

struct Rhs {
  double il;
  int order;
  bool higher;  // integrate a_+ and the higher orders

  Y operator()(cplx U, cplx Lo, const Y& y) const {
    Y d{};
    const cplx ku = U / (kS2 * kE);
    d[0] = ku * y[1];
    d[1] = -kS2 * kE * Lo * y[0];
    if (!higher) return d;
    const cplx am = y[1] / y[0], ap = y[2];
    const cplx a1 = 0.5 * (ap + am), a2 = 0.5 * (ap - am);
    d[2] = ku * am * ap - kS2 * U * il / kE;
    if (order < 1) return d;
    const cplx eL = kE * Lo / kS2;
    const cplx b1 = y[3], b2 = y[4], bm = b1 - b2, bp = b1 + b2;
    d[3] = ku * (am * b2 + bm * a2) - eL * ap * a2;
    d[4] = ku * (am * b1 + bm * a1) - eL * ap * a1;
    if (order < 2) return d;
    const cplx c1 = y[5], c2 = y[6], cm = c1 - c2;
    const cplx A00 = a1 * a1 - a2 * a2, A01 = a1 * b1 - a2 * b2;
    auto top = [&](cplx s0, cplx s1, cplx s2) {
      return ku * (am * s2 + bm * s1 + cm * s0) - eL * (ap * s1 + bp * s0) -
             ku / 6.0 * (2.0 * A01 * am * s0 + A00 * (bm * s0 + am * s1)) + eL / 6.0 * A00 * ap * s0;
    };
    d[5] = top(a2, b2, c2);
    d[6] = top(a1, b1, c1);
    return d;
  }
};

Y axpy(const Y& y, double h, const Y& k) {
  Y r;
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = y[i] + h * k[i];
  return r;
}

}  // namespace

LaxData lax_data(const GridField& u, const DeformationSpec& spec) { return lax_data(u, anomaly(u, spec)); }

LaxData lax_data(const GridField& u, const GridField& X) {
  u.validate("u");
  if (X.n() != u.n()) throw ValidationError("anomaly", "grid does not match u");
  Spectral sp(u.length, u.n());
  const auto ux = sp.derivative(u.values, 1);
  const auto uxx = sp.derivative(u.values, 2);
  LaxData d;
  d.length = u.length;
  const std::size_t n = u.n();
  d.upper.resize(n);
  d.lower.assign(n, 1.0);
  d.b3.resize(n);
  d.Fbar.resize(n);
  d.Flow.resize(n);
  d.X.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double uj = u.values[j];
    d.upper[j] = uj;
    d.b3[j] = -ux[j];
    d.Fbar[j] = uxx[j] - X.values[j] + 2.0 * uj * uj;
    d.Flow[j] = 2.0 * uj;
    d.X[j] = X.values[j];
  }
  return d;
}

std::vector<cplx> unwrap(const std::vector<cplx>& f, std::size_t start) {
  std::vector<cplx> out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = f[(start + i) % f.size()];
  return out;
}

GaugeSolution solve_gauge(const LaxData& d, const GaugeOptions& opt) {
  const std::size_t n = d.n();
  validate_grid(d.length, n, "gauge.grid");
  if (d.lower.size() != n) throw ValidationError("gauge.lower", "size does not match upper");
  if (opt.start_index >= n) throw ValidationError("gauge.start_index", "outside the grid");
  if (opt.substeps < 1) throw ValidationError("gauge.substeps", "must be >= 1");
  if (opt.order < 0 || opt.order > 2) throw ValidationError("gauge.order", "must be 0, 1 or 2");
  if (!(opt.blowup_threshold > 0.0)) throw ValidationError("gauge.blowup_threshold", "must be positive");

  const std::size_t sub = static_cast<std::size_t>(opt.substeps);
  const std::size_t m = 2 * sub;
  const auto Uf = refine_c(d.upper, m);
  const auto Lf = refine_c(d.lower, m);
  const std::size_t nf = n * m;
  const double h = d.dx() / static_cast<double>(sub);
  const bool real = all_real(d.upper) && all_real(d.lower) && opt.a_minus0.imag() == 0.0 && opt.a_plus0.imag() == 0.0;

  GaugeSolution g;
  g.length = d.length;
  g.start_index = opt.start_index;
  g.order = opt.order;
  g.inverse_lambda = opt.inverse_lambda;
  g.w.assign(n, 0.0);
  g.v.assign(n, 0.0);
  g.a_minus0.assign(n, 0.0);
  g.a1.assign(static_cast<std::size_t>(opt.order) + 1, std::vector<cplx>(n, kNaN));
  g.a2 = g.a1;

  Rhs f{opt.inverse_lambda, opt.order, true};
  Y y{};
  y[0] = 1.0;
  y[1] = opt.a_minus0;
  y[2] = opt.a_plus0;
  bool alive = true, above = false;

  auto record = [&](std::size_t i) {
    const std::size_t j = (opt.start_index + i) % n;
    g.w[j] = y[0];
    g.v[j] = y[1];
    g.a_minus0[j] = y[1] / y[0];
    if (!alive) return;
    const cplx am = y[1] / y[0], ap = y[2];
    g.a1[0][j] = 0.5 * (ap + am);
    g.a2[0][j] = 0.5 * (ap - am);
    if (opt.order >= 1) {
      g.a1[1][j] = y[3];
      g.a2[1][j] = y[4];
    }
    if (opt.order >= 2) {
      g.a1[2][j] = y[5];
      g.a2[2][j] = y[6];
    }
    g.defined_steps = i + 1;
  };
  record(0);

  const double x0 = -0.5 * d.length + static_cast<double>(opt.start_index) * d.dx();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t s = 0; s < sub; ++s) {
      const std::size_t i0 = (opt.start_index * m + i * m + 2 * s) % nf;
      const std::size_t i1 = (i0 + 1) % nf, i2 = (i0 + 2) % nf;
      f.higher = alive;
      const Y k1 = f(Uf[i0], Lf[i0], y);
      const Y k2 = f(Uf[i1], Lf[i1], axpy(y, 0.5 * h, k1));
      const Y k3 = f(Uf[i1], Lf[i1], axpy(y, 0.5 * h, k2));
      const Y k4 = f(Uf[i2], Lf[i2], axpy(y, h, k3));
      Y next;
      for (std::size_t c = 0; c < next.size(); ++c) next[c] = y[c] + h / 6.0 * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]);
      // renormalize the projective pair; a_- = v/w is unchanged
      const double scale = std::max(std::abs(next[0]), std::abs(next[1]));
      const double xa = x0 + (static_cast<double>(i * sub + s)) * h;
      bool pole = false;
      double xp = xa + h;
      // w turning by more than a right angle in one substep means it passed (near) zero
      const double p0 = std::norm(y[0]), p1 = (next[0] * std::conj(y[0])).real();
      if (p1 < 0.0) {
        pole = true;
        xp = xa + h * p0 / (p0 - p1);
      }
      if (!real) {
        const bool big = std::abs(next[1]) > opt.blowup_threshold * std::abs(next[0]);
        if (big && !above) pole = true;
        above = big;
      }
      if (pole) {
        g.poles.push_back(xp);
        if (!g.singular) g.singular = xp;
        alive = false;
      }
      if (alive) {
        for (std::size_t c = 2; c < next.size(); ++c)
          if (!std::isfinite(next[c].real()) || !std::isfinite(next[c].imag())) alive = false;
      }
      if (scale > 1e100) {
        g.w_right *= scale;
        next[0] /= scale;
        next[1] /= scale;
      }
      y = next;
    }
    if (i + 1 < n) record(i + 1);
  }
  g.w_left = 1.0;
  g.w_right *= y[0];
  return g;
}

GaugeRates gauge_rates(const GaugeSolution& before, const GaugeSolution& after, double dt) {
  if (before.order != after.order || before.w.size() != after.w.size())
    throw ValidationError("gauge", "frames have different shapes");
  if (!(dt > 0.0)) throw ValidationError("dt", "must be positive");
  GaugeRates r;
  const std::size_t k = static_cast<std::size_t>(before.order) + 1;
  r.a1t.assign(k, {});
  r.a2t.assign(k, {});
  for (std::size_t o = 0; o < k; ++o) {
    r.a1t[o].resize(before.w.size());
    r.a2t[o].resize(before.w.size());
    for (std::size_t j = 0; j < before.w.size(); ++j) {
      r.a1t[o][j] = (after.a1[o][j] - before.a1[o][j]) / dt;
      r.a2t[o][j] = (after.a2[o][j] - before.a2[o][j]) / dt;
    }
  }
  return r;
}

RotatedLaxC assemble_rotated(const LaxData& d, const GaugeSolution& g, const GaugeRates* rates) {
  const std::size_t n = d.n();
  if (g.w.size() != n) throw ValidationError("gauge", "solution grid does not match Lax data");
  RotatedLaxC r;
  r.order = g.order;
  r.has_phi = rates != nullptr;
  r.X = d.X;
  const double il = g.inverse_lambda;
  const int N = g.order;
  for (int o = 0; o <= 2; ++o) {
    const std::size_t sz = o <= N ? n : 0;
    for (auto* a : {&r.betaA, &r.betaB, &r.f0, &r.f1, &r.f2}) (*a)[o].assign(sz, kNaN);
    for (auto* a : {&r.phi1, &r.phi2}) (*a)[o].assign(r.has_phi ? sz : 0, kNaN);
  }
  r.f0_3_presumed.assign(N >= 2 ? n : 0, kNaN);

  for (std::size_t j = 0; j < n; ++j) {
    const cplx U = d.upper[j], Lo = d.lower[j], b3 = d.b3[j], Fb = d.Fbar[j], Fl = d.Flow[j];
    const cplx ku = U / (kS2 * kE);     // U/(sqrt2 e)
    const cplx eL = kE * Lo / kS2;      // e Lo/sqrt2
    const cplx kf = Fb / (kS2 * kE);    // Fbar/(sqrt2 e)
    const cplx eF = kE * Fl / kS2;      // e Flow/sqrt2
    const cplx am0 = g.a_minus0[j];
    const cplx a10 = g.a1[0][j], a20 = g.a2[0][j];
    const cplx ap0 = a10 + a20;
    const cplx A00 = a10 * a10 - a20 * a20;

    r.betaA[0][j] = ku * am0;
    r.betaB[0][j] = b3 - kf * am0;
    r.f0[0][j] = 1.0;
    r.f1[0][j] = -2.0 * a20;
    r.f2[0][j] = -2.0 * a10;
    if (rates) {
      r.phi1[0][j] = rates->a1t[0][j] - (kf * il + eF) - 2.0 * b3 * a10;
      r.phi2[0][j] = rates->a2t[0][j] - (kf * il - eF) - 2.0 * b3 * a20;
    }
    if (N < 1) continue;

    const cplx a11 = g.a1[1][j], a21 = g.a2[1][j];
    const cplx am1 = a11 - a21, ap1 = a11 + a21;
    const cplx A01 = a10 * a11 - a20 * a21;
    r.betaA[1][j] = ku * am1 - eL * ap0 - ku / 3.0 * A00 * am0;
    r.betaB[1][j] = -kf * am1 + eF * ap0;
    r.f0[1][j] = -A00;
    r.f1[1][j] = 2.0 * (-a21 + A00 * a20 / 3.0);
    r.f2[1][j] = 2.0 * (-a11 + A00 * a10 / 3.0);
    if (rates) {
      r.phi1[1][j] = rates->a1t[1][j] - 2.0 * b3 * a11 + kf * (am0 * a21 + am1 * a20) - eF * ap0 * a20;
      r.phi2[1][j] = rates->a2t[1][j] - 2.0 * b3 * a21 + kf * (am0 * a11 + am1 * a10) - eF * ap0 * a10;
    }
    if (N < 2) continue;

    const cplx a12 = g.a1[2][j], a22 = g.a2[2][j];
    const cplx am2 = a12 - a22;
    const cplx A02 = a10 * a12 - a20 * a22, A11 = a11 * a11 - a21 * a21;
    r.betaA[2][j] = ku * am2 - eL * ap1 - ku / 3.0 * (2.0 * A01 * am0 + A00 * am1) + eL / 3.0 * A00 * ap0;
    r.betaB[2][j] = -kf * am2 + eF * ap1 + kf / 3.0 * (2.0 * A01 * am0 + A00 * am1) - eF / 3.0 * A00 * ap0;
    r.f0[2][j] = -2.0 * A01 + A00 * A00 / 6.0;
    r.f0_3_presumed[j] = -2.0 * A02 - A11 + 2.0 / 3.0 * A00 * (A01 - A00 * A00 / 60.0);
    r.f1[2][j] = 2.0 * (-a22 + 2.0 / 3.0 * A01 * a20 + A00 * a21 / 3.0 - A00 * A00 * a20 / 30.0);
    r.f2[2][j] = 2.0 * (-a12 + 2.0 / 3.0 * A01 * a10 + A00 * a11 / 3.0 - A00 * A00 * a10 / 30.0);
    if (rates) {
      auto phi2n = [&](cplx at, cplx s0, cplx s1, cplx s2, cplx self2) {
        return at - 2.0 * b3 * self2 + kf * (am0 * s2 + am1 * s1 + am2 * s0) - eF * (ap1 * s0 + ap0 * s1) +
               eF / 6.0 * A00 * ap0 * s0 + kf / 6.0 * (2.0 * A01 * (-am0) * s0 + A00 * ((-am1) * s0 + (-am0) * s1));
      };
      r.phi1[2][j] = phi2n(rates->a1t[2][j], a20, a21, a22, a12);
      r.phi2[2][j] = phi2n(rates->a2t[2][j], a10, a11, a12, a22);
    }
  }
  return r;
}

// ---- real front end ----

namespace {

std::size_t grid_index(const GridField& u, double x) {
  const double s = (x + 0.5 * u.length) / u.dx();
  const double r = std::round(s);
  if (std::abs(s - r) > 1e-9 || r < 0.0 || r >= static_cast<double>(u.n()))
    throw ValidationError("gauge.x_start", "not a grid point");
  return static_cast<std::size_t>(r);
}

GridField re_field(double L, const std::vector<cplx>& z) {
  GridField f{L, std::vector<double>(z.size())};
  for (std::size_t j = 0; j < z.size(); ++j) f.values[j] = z[j].real();
  return f;
}

LaxData minimal_lax(const GridField& u) {
  LaxData d;
  d.length = u.length;
  d.upper.assign(u.values.begin(), u.values.end());
  d.lower.assign(u.n(), 1.0);
  return d;
}

}  // namespace

RiccatiResult solve_riccati_zeroth(const GridField& u, double x_start, double a0, const GaugeOptions& opt) {
  u.validate("u");
  GaugeOptions o = opt;
  o.start_index = grid_index(u, x_start);
  o.a_minus0 = a0;
  o.order = 0;
  const auto g = solve_gauge(minimal_lax(u), o);
  RiccatiResult r;
  r.a_minus = re_field(u.length, g.a_minus0);
  r.w.resize(u.n());
  r.v.resize(u.n());
  for (std::size_t j = 0; j < u.n(); ++j) {
    r.w[j] = g.w[j].real();
    r.v[j] = g.v[j].real();
  }
  r.w_left = g.w_left.real();
  r.w_right = g.w_right.real();
  r.singular = g.singular;
  r.poles = g.poles;
  r.start_index = g.start_index;
  return r;
}

GaugeCoefficients to_real(const GaugeSolution& s) {
  GaugeCoefficients c;
  c.order = s.order;
  for (int o = 0; o <= s.order; ++o) {
    c.a1.push_back(re_field(s.length, s.a1[o]));
    c.a2.push_back(re_field(s.length, s.a2[o]));
  }
  c.a_minus0 = re_field(s.length, s.a_minus0);
  c.singular = s.singular;
  c.poles = s.poles;
  c.w_left = s.w_left.real();
  c.w_right = s.w_right.real();
  c.raw = s;
  return c;
}

GaugeCoefficients solve_higher_orders(const GridField& u, const RiccatiResult& zeroth, int order,
                                      const GaugeOptions& opt) {
  if (order < 1 || order > 2) throw ValidationError("gauge.order", "higher orders are 1 or 2");
  if (zeroth.a_minus.n() != u.n()) throw ValidationError("gauge.zeroth", "grid does not match u");
  GaugeOptions o = opt;
  o.order = order;
  o.start_index = zeroth.start_index;
  o.a_minus0 = zeroth.a_minus.values[zeroth.start_index];
  return solve_gauge(u, o);
}

GaugeCoefficients solve_gauge(const GridField& u, const GaugeOptions& opt) {
  u.validate("u");
  return to_real(solve_gauge(minimal_lax(u), opt));
}

RotatedLax assemble_rotated(const GridField& u, const GaugeCoefficients& coeffs, const DeformationSpec& spec,
                            const GaugeRates* rates) {
  return assemble_rotated(u, coeffs, anomaly(u, spec), rates);
}

RotatedLax assemble_rotated(const GridField& u, const GaugeCoefficients& coeffs, const GridField& X,
                            const GaugeRates* rates) {
  const auto d = lax_data(u, X);
  const auto c = assemble_rotated(d, coeffs.raw, rates);
  RotatedLax r;
  r.order = c.order;
  r.has_phi = c.has_phi;
  r.partial = !coeffs.full();
  r.singular = coeffs.singular;
  const double L = u.length;
  for (int o = 0; o < 3; ++o) {
    r.betaA[o] = re_field(L, c.betaA[o]);
    r.betaB[o] = re_field(L, c.betaB[o]);
    r.phi1[o] = re_field(L, c.phi1[o]);
    r.phi2[o] = re_field(L, c.phi2[o]);
    r.f0[o] = re_field(L, c.f0[o]);
    r.f1[o] = re_field(L, c.f1[o]);
    r.f2[o] = re_field(L, c.f2[o]);
  }
  r.f0_3_presumed = re_field(L, c.f0_3_presumed);
  r.X = re_field(L, c.X);
  return r;
}

// ---- residual checks ----

std::vector<cplx> fd_derivative(const std::vector<cplx>& f, double h) {
  const std::size_t n = f.size();
  std::vector<cplx> d(n, 0.0);
  if (n < 2) return d;
  for (std::size_t i = 0; i < n; ++i) {
    if (i >= 3 && i + 3 < n) {
      d[i] = (45.0 * (f[i + 1] - f[i - 1]) - 9.0 * (f[i + 2] - f[i - 2]) + (f[i + 3] - f[i - 3])) / (60.0 * h);
    } else if (i >= 2 && i + 2 < n) {
      d[i] = (8.0 * (f[i + 1] - f[i - 1]) - (f[i + 2] - f[i - 2])) / (12.0 * h);
    } else if (i >= 1 && i + 1 < n) {
      d[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
    } else if (i == 0) {
      d[i] = n > 2 ? (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h) : (f[1] - f[0]) / h;
    } else {
      d[i] = n > 2 ? (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h) : (f[n - 1] - f[n - 2]) / h;
    }
  }
  return d;
}

namespace {

constexpr std::size_t kEdge = 3;  // points dropped at each end of a non-periodic segment

std::vector<cplx> midpoint(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  std::vector<cplx> m(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) m[j] = 0.5 * (a[j] + b[j]);
  return m;
}

LaxData midpoint(const LaxData& a, const LaxData& b) {
  if (a.n() != b.n() || a.length != b.length) throw ValidationError("frames", "grids differ");
  LaxData m;
  m.length = a.length;
  m.upper = midpoint(a.upper, b.upper);
  m.lower = midpoint(a.lower, b.lower);
  m.b3 = midpoint(a.b3, b.b3);
  m.Fbar = midpoint(a.Fbar, b.Fbar);
  m.Flow = midpoint(a.Flow, b.Flow);
  m.X = midpoint(a.X, b.X);
  return m;
}

double sup_interior(const std::vector<cplx>& r, std::size_t count) {
  double s = 0.0;
  for (std::size_t i = kEdge; i + kEdge < count; ++i) s = std::max(s, std::abs(r[i]));
  return s;
}

void require_full(const GaugeSolution& g) {
  if (g.singular) throw SingularGaugeError(*g.singular);
}

}  // namespace

QuasiContinuity verify_quasi_continuity(const LaxData& before, const LaxData& after, double dt,
                                        const GaugeOptions& opt) {
  if (!(dt > 0.0)) throw ValidationError("dt", "must be positive");
  const auto g0 = solve_gauge(before, opt);
  const auto g1 = solve_gauge(after, opt);
  require_full(g0);
  require_full(g1);
  const auto r0 = assemble_rotated(before, g0);
  const auto r1 = assemble_rotated(after, g1);
  const auto mid = midpoint(before, after);
  const std::size_t n = before.n(), s = opt.start_index;
  QuasiContinuity q;
  for (int o = 0; o <= g0.order; ++o) {
    const auto bB = unwrap(midpoint(r0.betaB[o], r1.betaB[o]), s);
    const auto bBx = fd_derivative(bB, before.dx());
    const auto A0 = unwrap(r0.betaA[o], s), A1 = unwrap(r1.betaA[o], s);
    const auto f0 = unwrap(midpoint(r0.f0[o], r1.f0[o]), s);
    const auto X = unwrap(mid.X, s);
    std::vector<cplx> gam(n), xf(n), res(n);
    for (std::size_t i = 0; i < n; ++i) {
      gam[i] = (A1[i] - A0[i]) / dt - bBx[i];
      xf[i] = X[i] * f0[i];
      res[i] = gam[i] - xf[i];
    }
    q.residual.push_back(sup_interior(res, n));
    q.gamma_norm.push_back(sup_interior(gam, n));
    q.x_norm.push_back(sup_interior(xf, n));
  }
  return q;
}

QuasiContinuity verify_quasi_continuity(const GridField& before, const GridField& after, double dt,
                                        const DeformationSpec& spec, const GaugeOptions& opt) {
  return verify_quasi_continuity(lax_data(before, spec), lax_data(after, spec), dt, opt);
}

ZerothResiduals zeroth_system(const LaxData& before, const LaxData& after, double dt, const GaugeOptions& opt) {
  if (!(dt > 0.0)) throw ValidationError("dt", "must be positive");
  GaugeOptions o = opt;
  o.order = 0;
  const auto g0 = solve_gauge(before, o);
  const auto g1 = solve_gauge(after, o);
  require_full(g0);
  require_full(g1);
  const auto mid = midpoint(before, after);
  const std::size_t n = before.n(), s = o.start_index;
  const double h = before.dx();

  const auto U = unwrap(mid.upper, s), b3 = unwrap(mid.b3, s);
  const auto Fl = unwrap(mid.Flow, s), X = unwrap(mid.X, s);
  const auto a0 = unwrap(g0.a_minus0, s), a1 = unwrap(g1.a_minus0, s);
  const auto a = midpoint(a0, a1);
  std::vector<cplx> at(n);
  for (std::size_t i = 0; i < n; ++i) at[i] = (a1[i] - a0[i]) / dt;

  ZerothResiduals z;
  // Riccati: per frame, worst of the two
  for (const auto* fr : {&before, &after}) {
    const auto& g = fr == &before ? g0 : g1;
    const auto af = unwrap(g.a_minus0, s);
    const auto Uf = unwrap(fr->upper, s), Lf = unwrap(fr->lower, s);
    const auto ax = fd_derivative(af, h);
    std::vector<cplx> r(n);
    for (std::size_t i = 0; i < n; ++i) r[i] = ax[i] + Uf[i] / (kS2 * kE) * af[i] * af[i] + kS2 * kE * Lf[i];
    z.riccati = std::max(z.riccati, sup_interior(r, n));
  }

  // Gamma^0 - X
  std::vector<cplx> bA0(n), bA1(n), bB(n);
  {
    const auto U0 = unwrap(before.upper, s), U1 = unwrap(after.upper, s);
    for (std::size_t i = 0; i < n; ++i) {
      bA0[i] = U0[i] * a0[i] / (kS2 * kE);
      bA1[i] = U1[i] * a1[i] / (kS2 * kE);
    }
    const auto B0 = unwrap(before.b3, s), B1 = unwrap(after.b3, s);
    const auto F0 = unwrap(before.Fbar, s), F1 = unwrap(after.Fbar, s);
    for (std::size_t i = 0; i < n; ++i)
      bB[i] = 0.5 * ((B0[i] - F0[i] * a0[i] / (kS2 * kE)) + (B1[i] - F1[i] * a1[i] / (kS2 * kE)));
    const auto bBx = fd_derivative(bB, h);
    std::vector<cplx> r(n);
    for (std::size_t i = 0; i < n; ++i) r[i] = (bA1[i] - bA0[i]) / dt - bBx[i] - X[i];
    z.gamma0 = sup_interior(r, n);
  }

  // phi_0^- from the frames and its x-equation
  std::vector<cplx> phi(n), p(n), src(n);
  for (std::size_t i = 0; i < n; ++i) {
    phi[i] = at[i] - kS2 * kE * Fl[i] - 2.0 * b3[i] * a[i];
    p[i] = kS2 * U[i] / kE * a[i];
    src[i] = 2.0 * X[i] * a[i];
  }
  {
    const auto px = fd_derivative(phi, h);
    std::vector<cplx> r(n);
    for (std::size_t i = 0; i < n; ++i) r[i] = px[i] + p[i] * phi[i] - src[i];
    z.phi_minus = sup_interior(r, n);
  }

  // integrate phi_x = -p phi + src by the trapezoid rule from the start, then test the a_t relation
  {
    std::vector<cplx> q(n);
    q[0] = phi[0];
    for (std::size_t i = 0; i + 1 < n; ++i)
      q[i + 1] = (q[i] * (1.0 - 0.5 * h * p[i]) + 0.5 * h * (src[i] + src[i + 1])) / (1.0 + 0.5 * h * p[i + 1]);
    std::vector<cplx> r(n);
    for (std::size_t i = 0; i < n; ++i) r[i] = at[i] - (q[i] + kS2 * kE * Fl[i] + 2.0 * b3[i] * a[i]);
    z.a_minus_t = sup_interior(r, n);
  }
  return z;
}

}  // namespace qikdv
