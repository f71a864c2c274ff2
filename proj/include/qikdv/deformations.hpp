#pragma once

#include <string>

#include "qikdv/grid.hpp"

namespace qikdv {

enum class DeformKind { None, LocalTerm, PowerDef };
enum class LocalFamily { UUXX, POWER_UX, UD2N };

/// Hamiltonian deformation. LocalTerm adds eps*F(u) with
///   UUXX:     F = 3/4 u u_xx
///   POWER_UX: F = -3/(2m) u_x^m
///   UD2N:     F = 3/4 u u^(2n)
/// PowerDef replaces u^3 by u^(3+3 eps).
struct DeformationSpec {
  DeformKind kind = DeformKind::None;
  LocalFamily family = LocalFamily::UUXX;
  int m = 3;
  int n = 1;
  double epsilon = 0.0;

  static DeformationSpec none() { return {}; }
  static DeformationSpec uuxx(double eps) { return {DeformKind::LocalTerm, LocalFamily::UUXX, 3, 1, eps}; }
  static DeformationSpec power_ux(int m, double eps) { return {DeformKind::LocalTerm, LocalFamily::POWER_UX, m, 1, eps}; }
  static DeformationSpec ud2n(int n, double eps) { return {DeformKind::LocalTerm, LocalFamily::UD2N, 3, n, eps}; }
  static DeformationSpec power_def(double eps) { return {DeformKind::PowerDef, LocalFamily::UUXX, 3, 1, eps}; }

  void validate(const std::string& key = "deformation") const;
  std::string describe() const;
};

/// Fields at or below this are refused by PowerDef operations.
inline constexpr double kPowerDefFloor = 1e-12;

/// Throws DomainError at the first index with u <= kPowerDefFloor.
void require_positive(const std::vector<double>& u, const std::string& what);

double hamiltonian(const GridField& u, const DeformationSpec& spec);
GridField functional_derivative(const GridField& u, const DeformationSpec& spec);
/// Closed form of 2u^2 + 2/3 (dH/du + u_xx) for each family.
GridField anomaly(const GridField& u, const DeformationSpec& spec);
GridField anomaly_first_order(const GridField& u, double epsilon);
double parity_check(const GridField& f, double center);

/// dH/du minus the undeformed -3u^2 - u_xx.
GridField deformation_gradient(const GridField& u, const DeformationSpec& spec);
/// Complex-amplitude version used by the coupled system. PowerDef needs real positive data.
ComplexField deformation_gradient(const ComplexField& q, const DeformationSpec& spec);

/// Fourier symbol of the part of d/dx(anomaly) that is linear in u.
cplx anomaly_linear_symbol(const DeformationSpec& spec, double k, bool nyquist);
/// anomaly(u) minus its linear part (still undifferentiated).
std::vector<double> anomaly_nonlinear(Spectral& sp, const std::vector<double>& u, const DeformationSpec& spec);

}  // namespace qikdv
