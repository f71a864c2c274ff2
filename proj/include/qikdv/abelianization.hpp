#pragma once

#include <array>
#include <optional>
#include <vector>

#include "qikdv/deformations.hpp"
#include "qikdv/grid.hpp"

namespace qikdv {

/// Rotated-frame Lax data, general enough for the real and coupled systems:
///   Abar = (upper/e) s+ - e lower s-
///   Bbar = b3 s3 - (Fbar/e) s+ + e Flow s-
/// Real KdV: upper = u, lower = 1, b3 = -u_x, Fbar = f(u) = u_xx - X + 2u^2, Flow = 2u.
struct LaxData {
  double length = 0.0;
  std::vector<cplx> upper, lower, b3, Fbar, Flow, X;
  std::size_t n() const { return upper.size(); }
  double dx() const { return length / static_cast<double>(upper.size()); }
};

LaxData lax_data(const GridField& u, const DeformationSpec& spec);
/// Same with the anomaly supplied directly.
LaxData lax_data(const GridField& u, const GridField& X);

struct GaugeOptions {
  std::size_t start_index = 0;  // grid index where the initial values are imposed
  cplx a_minus0 = 0.0;          // a_-^0 at the start
  cplx a_plus0 = 0.0;           // a_+^0 = a_1^0 + a_2^0 at the start
  /// Value substituted for 1/lambda where a formula carries an explicit lambda.
  double inverse_lambda = 1.0;
  int substeps = 4;  // RK4 steps per grid cell
  double blowup_threshold = 1e8;
  int order = 2;
};

/// Gauge coefficients on the grid. The integration runs from the start index
/// once around the period, so position i steps after the start holds grid
/// index (start + i) mod n. a_-^0 = v/w is carried projectively and stays
/// defined through poles; a_+^0 and the higher orders stop at the first pole
/// and are NaN past it.
struct GaugeSolution {
  double length = 0.0;
  std::vector<cplx> w, v, a_minus0;
  cplx w_left = 1.0, w_right = 1.0;  // projective values at x_start and x_start + L
  std::vector<std::vector<cplx>> a1, a2;  // [order][grid index]
  std::size_t start_index = 0;
  std::size_t defined_steps = 0;  // positions 0..defined_steps-1 precede the first pole
  std::optional<double> singular;  // first pole, as an unwrapped x
  std::vector<double> poles;
  int order = 0;
  double inverse_lambda = 1.0;
  bool full() const { return !singular.has_value(); }
};

GaugeSolution solve_gauge(const LaxData& d, const GaugeOptions& opt);

/// Grid values in integration order, starting at the start index.
std::vector<cplx> unwrap(const std::vector<cplx>& f, std::size_t start);

/// Time derivatives of a_1^n, a_2^n, [order][grid index].
struct GaugeRates {
  std::vector<std::vector<cplx>> a1t, a2t;
};

/// Forward difference of two gauge solutions dt apart.
GaugeRates gauge_rates(const GaugeSolution& before, const GaugeSolution& after, double dt);

struct RotatedLaxC {
  std::array<std::vector<cplx>, 3> betaA, betaB, phi1, phi2, f0, f1, f2;
  std::vector<cplx> f0_3_presumed;
  std::vector<cplx> X;
  int order = 0;
  bool has_phi = false;  // phi needs gauge rates
};

/// Pointwise evaluation of every coefficient formula up to the solution's order.
RotatedLaxC assemble_rotated(const LaxData& d, const GaugeSolution& g, const GaugeRates* rates = nullptr);

// ---- real-field front end ----

struct RiccatiResult {
  GridField a_minus;  // v/w at the grid points (large near poles)
  std::vector<double> w, v;
  double w_left = 1.0, w_right = 1.0;
  std::optional<double> singular;
  std::vector<double> poles;
  std::size_t start_index = 0;
};

/// Integrates a_x = -(u/(sqrt2 e)) a^2 - sqrt2 e from (x_start, a0); x_start must be a grid point.
RiccatiResult solve_riccati_zeroth(const GridField& u, double x_start, double a0, const GaugeOptions& opt = {});

struct GaugeCoefficients {
  int order = 0;
  std::vector<GridField> a1, a2;  // index n = 0..order
  GridField a_minus0;
  std::optional<double> singular;
  std::vector<double> poles;
  double w_left = 1.0, w_right = 1.0;
  GaugeSolution raw;
  bool full() const { return !singular.has_value(); }
};

GaugeCoefficients to_real(const GaugeSolution& s);
/// Orders 1..order on top of a zeroth-order solution, same start convention.
GaugeCoefficients solve_higher_orders(const GridField& u, const RiccatiResult& zeroth, int order,
                                      const GaugeOptions& opt = {});
GaugeCoefficients solve_gauge(const GridField& u, const GaugeOptions& opt = {});

struct RotatedLax {
  std::array<GridField, 3> betaA, betaB, phi1, phi2, f0, f1, f2;
  GridField f0_3_presumed;
  GridField X;
  int order = 0;
  bool has_phi = false;
  bool partial = false;  // coefficients stop at a pole
  std::optional<double> singular;
};

RotatedLax assemble_rotated(const GridField& u, const GaugeCoefficients& coeffs, const DeformationSpec& spec,
                            const GaugeRates* rates = nullptr);
RotatedLax assemble_rotated(const GridField& u, const GaugeCoefficients& coeffs, const GridField& X,
                            const GaugeRates* rates = nullptr);

struct QuasiContinuity {
  std::vector<double> residual;    // ||Gamma^n - X f0^n||_inf
  std::vector<double> gamma_norm;  // ||Gamma^n||_inf
  std::vector<double> x_norm;      // ||X f0^n||_inf
};

/// Gamma^n = d_t beta^A_n - d_x beta^B_n at the midpoint of two frames dt apart.
/// Throws SingularGaugeError when either frame's gauge has a pole.
QuasiContinuity verify_quasi_continuity(const LaxData& before, const LaxData& after, double dt,
                                        const GaugeOptions& opt);
QuasiContinuity verify_quasi_continuity(const GridField& before, const GridField& after, double dt,
                                        const DeformationSpec& spec, const GaugeOptions& opt = {});

/// Norms of the zeroth-order relations at the midpoint of two frames:
///   riccati    a_x + (upper/(sqrt2 e)) a^2 + sqrt2 e lower
///   gamma0     d_t beta^A_0 - d_x beta^B_0 - X
///   phi_minus  phi_x + sqrt2 (upper/e) a phi - 2 X a,  phi = phi_0^1 - phi_0^2 from the frames
///   a_minus_t  a_t - (phi + sqrt2 e Flow + 2 b3 a),  phi integrated in x from the phi_minus relation
struct ZerothResiduals {
  double riccati = 0.0, gamma0 = 0.0, phi_minus = 0.0, a_minus_t = 0.0;
};

ZerothResiduals zeroth_system(const LaxData& before, const LaxData& after, double dt, const GaugeOptions& opt);

/// First derivative of non-periodic samples: sixth-order central differences,
/// dropping to lower orders within three points of the ends.
std::vector<cplx> fd_derivative(const std::vector<cplx>& f, double h);

}  // namespace qikdv
