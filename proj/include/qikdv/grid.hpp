#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace qikdv {

using cplx = std::complex<double>;

/// Real periodic field on x_j = -L/2 + j L/n.
struct GridField {
  double length = 0.0;
  std::vector<double> values;

  std::size_t n() const { return values.size(); }
  double dx() const { return length / static_cast<double>(values.size()); }
  double x(std::size_t j) const { return -0.5 * length + static_cast<double>(j) * dx(); }
  /// Throws ValidationError naming `key` when the grid or values are invalid.
  void validate(const std::string& key = "field") const;
};

/// Complex periodic field, same grid convention as GridField.
struct ComplexField {
  double length = 0.0;
  std::vector<cplx> values;

  std::size_t n() const { return values.size(); }
  double dx() const { return length / static_cast<double>(values.size()); }
  double x(std::size_t j) const { return -0.5 * length + static_cast<double>(j) * dx(); }
  void validate(const std::string& key = "field") const;
};

void validate_grid(double length, std::size_t n, const std::string& key = "grid");
GridField sample(double length, std::size_t n, const std::function<double(double)>& f);
ComplexField sample_complex(double length, std::size_t n, const std::function<cplx(double)>& f);
ComplexField to_complex(const GridField& u);
GridField real_part(const ComplexField& z);

/// FFT workspace for one grid size. Not shareable across threads; make one per trajectory.
class Spectral {
 public:
  Spectral(double length, std::size_t n);
  ~Spectral();
  Spectral(const Spectral&) = delete;
  Spectral& operator=(const Spectral&) = delete;

  std::size_t n() const { return n_; }
  double length() const { return length_; }
  /// Wavenumber of half-spectrum index j (0..n/2).
  double k_half(std::size_t j) const { return kscale_ * static_cast<double>(j); }
  /// Wavenumber of full-spectrum index j (0..n-1), FFT ordering.
  double k_full(std::size_t j) const;
  bool is_nyquist(std::size_t j) const { return j == n_ / 2; }
  /// 2/3-rule mask on |index|.
  bool keep(std::size_t full_index) const;

  void forward(const std::vector<double>& in, std::vector<cplx>& out);   // n/2+1 modes, unnormalized
  void backward(const std::vector<cplx>& in, std::vector<double>& out);  // divides by n
  void forward(const std::vector<cplx>& in, std::vector<cplx>& out);     // n modes, unnormalized
  void backward(const std::vector<cplx>& in, std::vector<cplx>& out);    // divides by n

  std::vector<double> derivative(const std::vector<double>& f, int order);
  std::vector<cplx> derivative(const std::vector<cplx>& f, int order);

 private:
  struct Plans;
  double length_;
  std::size_t n_;
  double kscale_;
  std::unique_ptr<Plans> p_;
};

/// (ik)^order with the Nyquist mode dropped for odd orders.
cplx derivative_symbol(double k, int order, bool nyquist);

double trapezoid(const std::vector<double>& f, double dx);
cplx trapezoid(const std::vector<cplx>& f, double dx);

GridField derivative(const GridField& u, int order);
ComplexField derivative(const ComplexField& u, int order);

/// Band-limited interpolant resampled on factor*n points (same domain).
std::vector<double> refine(const std::vector<double>& f, std::size_t factor);
/// Band-limited interpolant evaluated at arbitrary points.
std::vector<cplx> fourier_evaluate(const ComplexField& f, const std::vector<double>& xs);

/// Fraction of spectral energy in modes beyond 2n/3 of the Nyquist index.
double top_third_energy_fraction(const GridField& u);

double max_abs(const std::vector<double>& f);
double max_abs(const std::vector<cplx>& f);
double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b);
double max_abs_diff(const std::vector<cplx>& a, const std::vector<cplx>& b);

}  // namespace qikdv
