#pragma once

#include <array>
#include <string>
#include <vector>

#include "qikdv/abelianization.hpp"
#include "qikdv/deformations.hpp"
#include "qikdv/pde.hpp"

namespace qikdv {

/// Deformations of the two Hamiltonians, H[q] and Hbar[qbar].
struct CoupledSpecs {
  DeformationSpec q;
  DeformationSpec qbar;
};

/// X_c = 2/3 q^2 (dHbar/dqbar + qbar_xx) - 2/3 qbar^2 (dH/dq + q_xx),
/// the sigma_3 part of the curvature for the Lax pair below. Zero when undeformed.
ComplexField anomaly_Xc(const CoupledState& s, const CoupledSpecs& specs);
/// The same brackets joined with a plus sign, which leaves -4 q^2 qbar^2 when undeformed.
ComplexField anomaly_Xc_plus(const CoupledState& s, const CoupledSpecs& specs);

/// Rotated Lax data of the coupled pair:
///   upper = qbar, lower = q, b3 = qbar q_x - q qbar_x,
///   Fbar = qbar_xx - 2/3 q (dHbar/dqbar + qbar_xx),
///   Flow = q_xx - 2/3 qbar (dH/dq + q_xx),  X = X_c.
/// At q = 1, qbar = u this is the real KdV data.
LaxData coupled_lax_data(const CoupledState& s, const CoupledSpecs& specs);

void validate_coupled(const CoupledState& s, const std::string& key = "initial");

std::vector<TrajectorySample> evolve_coupled(const CoupledState& s0, const CoupledSpecs& specs, double dt,
                                             double t_end, int sample_every, bool flipped_signs = false);

/// max |qbar - conj(q)|.
double conjugacy_defect(const CoupledState& s);

struct CoupledResiduals {
  ZerothResiduals adapter;  // the real-case relations through the adapter above
  /// The coupled relations with the signs as displayed alongside the replacement table:
  /// +(qbar q_xx - q qbar_xx) in the Gamma^0 relation, 2 sqrt2 e F and +2(q qbar_x - qbar q_x) a
  /// in the a_t relation, F = q_xx + 2/3 qbar (dH/dq + q_xx), X_c with the plus sign.
  ZerothResiduals flipped;
};

CoupledResiduals coupled_zeroth_system(const CoupledState& before, const CoupledState& after, double dt,
                                       const CoupledSpecs& specs, const GaugeOptions& opt = {});

/// R^0 through poles: \int w_x/w = log(w(x_0+L)/w(x_0)), the phase followed continuously
/// along the grid. For data real to round-off the sign flips at poles are dropped (principal value).
cplx charge_R0_pv(const GaugeSolution& g);
/// R^n = \int beta^A_n; SingularGaugeError when the gauge has a pole.
cplx charge_Rn(const RotatedLaxC& r, const GaugeSolution& g, int n);
/// \int X_c f_0^n.
cplx anomaly_rate_c(const RotatedLaxC& r, const GaugeSolution& g, int n);

struct CoupledSeries {
  std::vector<double> times;
  std::array<std::vector<cplx>, 3> R, Lambda;
  std::vector<double> q_norm, qbar_norm, conjugacy;
  int orders = 0;
  std::string r0_method = "trapezoid";
  std::vector<double> singular_at;
};

CoupledSeries track_coupled_charges(const std::vector<TrajectorySample>& traj, const CoupledSpecs& specs, int orders,
                                    const GaugeOptions& opt = {});

std::vector<std::string> coupled_csv_header();
std::vector<std::vector<double>> coupled_csv_rows(const CoupledSeries& s);

}  // namespace qikdv
