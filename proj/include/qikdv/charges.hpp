#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "qikdv/abelianization.hpp"
#include "qikdv/deformations.hpp"
#include "qikdv/grid.hpp"
#include "qikdv/pde.hpp"

namespace qikdv {

/// Q^0 = (1/(sqrt2 e)) \int u a_-^0 by the trapezoid rule.
double charge_Q0(const GridField& u, const GridField& a_minus0);
/// Same, refusing a singular gauge with SingularGaugeError.
double charge_Q0(const GridField& u, const GaugeCoefficients& c);
/// Principal value through the poles of a_-^0: since beta^A_0 = w_x/w, Q^0 = ln|w(x_0+L)/w(x_0)|.
double charge_Q0_pv(const GaugeSolution& g);
double charge_Q0_pv(const GaugeCoefficients& c);

/// Q^n = \int beta^A_n.
double charge_Qn(const RotatedLax& r, int n);
/// Lambda^n = \int X f_0^n.
double anomaly_rate(const RotatedLax& r, int n);
double anomaly_rate(const GridField& u, const RotatedLax& r, const DeformationSpec& spec, int n);

struct ClassicalInvariants {
  double mass = 0.0, momentum = 0.0, energy = 0.0;
};

/// \int u, \int u^2, \int (u_x^2/2 - u^3).
ClassicalInvariants classical_invariants(const GridField& u);

struct ChargeSeries {
  std::vector<double> times;
  std::array<std::vector<double>, 3> Q, Lambda, dQ_dt_numeric;
  std::vector<double> mass, momentum, energy;
  int orders = 0;
  /// "trapezoid" when every gauge was pole-free, otherwise "principal_value" for Q^0.
  std::string q0_method = "trapezoid";
  std::vector<double> singular_at;  // times whose gauge had a pole
};

/// Charges along a trajectory; orders above 0 are NaN where the gauge has a pole.
ChargeSeries track_charges(const std::vector<double>& times, const std::vector<GridField>& fields,
                           const DeformationSpec& spec, int orders, const GaugeOptions& opt = {});

using AnomalyFn = std::function<GridField(const GridField&)>;

/// Same, with the anomaly computed by `anomaly_of` instead of a deformation spec.
ChargeSeries track_charges(const std::vector<double>& times, const std::vector<GridField>& fields,
                           const AnomalyFn& anomaly_of, int orders, const GaugeOptions& opt = {});

/// The exact X of each real equation relative to the KdV Lax pair:
/// SCALED_KDV gives eps u_xx, LOG_KDV -2 eps u^2 (1 + 3 log u) (or -5 eps u^2 with the log
/// dropped), the others follow effective_deformation().
AnomalyFn equation_anomaly(const EvolutionProblem& p);

/// max_t |Q(t) - Q(t0)| / max(|Q(t0)|, 1); NaN if any sample is NaN.
double relative_drift(const std::vector<double>& q);

/// Centered differences in the interior, one-sided at the ends.
std::vector<double> time_derivative(const std::vector<double>& t, const std::vector<double>& q);

std::vector<std::string> charge_csv_header();
std::vector<std::vector<double>> charge_csv_rows(const ChargeSeries& s);

}  // namespace qikdv
