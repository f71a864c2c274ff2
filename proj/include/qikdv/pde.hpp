#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "qikdv/deformations.hpp"
#include "qikdv/grid.hpp"

namespace qikdv {

enum class Equation { KDV, DEFORMED_KDV, SCALED_KDV, HIGHER_DERIV_POWER, HIGHER_DERIV_ORDER, LOG_KDV, NLS, COUPLED_KDV };

std::string to_string(Equation e);
Equation equation_from_string(const std::string& s);

/// Complex amplitudes of the coupled system, evolved independently.
struct CoupledState {
  ComplexField q;
  ComplexField qbar;
};

using State = std::variant<GridField, ComplexField, CoupledState>;

/// Equation of motion plus its constants.
///
///   KDV                 u_t = -u_xxx - 6 u u_x
///   DEFORMED_KDV        KDV + X_x, X from `deformation`
///   SCALED_KDV          u_t = -(1-eps) u_xxx - 6 u u_x
///   HIGHER_DERIV_POWER  KDV + eps ((u_x)^(m-1))_xx
///   HIGHER_DERIV_ORDER  KDV + eps u^(2n+1)
///   LOG_KDV             u_t = -u_xxx - (6 + 10 eps + 12 eps log u) u u_x
///   NLS                 phi_T = -3i k0 phi_XX - i s beta (6/k0) |phi|^2 phi
///   COUPLED_KDV         qbar_t = -qbar_xxx - 6 q qbar qbar_x + 2/3 (q D[qbar])_x
///                       q_t    = -q_xxx    - 6 q qbar q_x    + 2/3 (qbar D[q])_x
/// where D is the deformation part of the functional derivative. The q line is the
/// zero-curvature condition of the coupled Lax pair; `coupled_flipped` flips both of its
/// nonlinear signs instead (q_t = -q_xxx + 6 q qbar q_x - 2/3 (qbar D[q])_x), which breaks
/// qbar = conj(q).
struct EvolutionProblem {
  Equation equation = Equation::KDV;
  double epsilon = 0.0;
  int m = 3;
  int n_order = 1;
  double k0 = 1.0;
  double beta = 1.0;
  /// s in the NLS nonlinearity; +1 is focusing.
  double nls_sign = 1.0;
  bool drop_log = false;
  bool coupled_flipped = false;
  DeformationSpec deformation;    // DEFORMED_KDV; H-bar for COUPLED_KDV
  DeformationSpec deformation_q;  // H for COUPLED_KDV
  double dt = 1e-4;
  double t_end = 1.0;

  void validate(const std::string& key = "equation") const;
  /// The spec actually applied by DEFORMED_KDV and the HIGHER_DERIV_* equations.
  DeformationSpec effective_deformation() const;
};

/// Integrating-factor RK4 with the linear dispersive part exact in Fourier space
/// and 2/3-rule dealiasing of the nonlinear part.
class Stepper {
 public:
  Stepper(const EvolutionProblem& p, double length, std::size_t n);
  ~Stepper();

  State step(const State& s);
  /// du/dt evaluated spectrally, no dealiasing.
  State rhs(const State& s);

  /// Advance a packed spectral vector in place.
  void step_spectral(std::vector<cplx>& v);
  std::vector<cplx> pack(const State& s);
  State unpack(const std::vector<cplx>& v) const;

 private:
  void nonlinear(const std::vector<cplx>& v, std::vector<cplx>& out, bool dealias);

  EvolutionProblem p_;
  double length_;
  std::size_t n_;
  std::unique_ptr<Spectral> sp_;
  std::vector<cplx> lin_, e1_, e2_;
  bool complex_ = false, coupled_ = false;
  DeformationSpec def_;
};

struct TrajectorySample {
  double t = 0.0;
  State field;
  std::map<std::string, double> diagnostics;
};

using DiagnosticsFn = std::function<void(TrajectorySample&)>;

/// Steps to t_end, keeping every `sample_every`-th state plus the first and last.
std::vector<TrajectorySample> evolve(const State& u0, const EvolutionProblem& p, int sample_every,
                                     const DiagnosticsFn& diag = {});

double state_max_abs(const State& s);
void validate_state(const State& s, const EvolutionProblem& p);

}  // namespace qikdv
