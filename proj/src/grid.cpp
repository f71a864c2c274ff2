#include "qikdv/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <mutex>
#include <numbers>

#include "qikdv/errors.hpp"

namespace qikdv {

namespace {
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
bool power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }
}  // namespace

void validate_grid(double length, std::size_t n, const std::string& key) {
  if (!(length > 0.0) || !std::isfinite(length)) throw ValidationError(key + ".L", "domain length must be positive");
  if (n < 16 || !power_of_two(n)) throw ValidationError(key + ".n", "must be a power of two >= 16");
}

void GridField::validate(const std::string& key) const {
  validate_grid(length, n(), key);
  for (std::size_t j = 0; j < n(); ++j)
    if (!std::isfinite(values[j])) throw ValidationError(key, "non-finite value at index " + std::to_string(j));
}

void ComplexField::validate(const std::string& key) const {
  validate_grid(length, n(), key);
  for (std::size_t j = 0; j < n(); ++j)
    if (!std::isfinite(values[j].real()) || !std::isfinite(values[j].imag()))
      throw ValidationError(key, "non-finite value at index " + std::to_string(j));
}

GridField sample(double length, std::size_t n, const std::function<double(double)>& f) {
  GridField u{length, std::vector<double>(n)};
  for (std::size_t j = 0; j < n; ++j) u.values[j] = f(u.x(j));
  return u;
}

ComplexField sample_complex(double length, std::size_t n, const std::function<cplx(double)>& f) {
  ComplexField u{length, std::vector<cplx>(n)};
  for (std::size_t j = 0; j < n; ++j) u.values[j] = f(u.x(j));
  return u;
}

ComplexField to_complex(const GridField& u) {
  ComplexField z{u.length, std::vector<cplx>(u.n())};
  for (std::size_t j = 0; j < u.n(); ++j) z.values[j] = u.values[j];
  return z;
}

GridField real_part(const ComplexField& z) {
  GridField u{z.length, std::vector<double>(z.n())};
  for (std::size_t j = 0; j < z.n(); ++j) u.values[j] = z.values[j].real();
  return u;
}

struct Spectral::Plans {
  double* rbuf = nullptr;
  fftw_complex* hbuf = nullptr;
  fftw_complex* cin = nullptr;
  fftw_complex* cout = nullptr;
  fftw_plan r2c = nullptr, c2r = nullptr, fwd = nullptr, bwd = nullptr;
};

Spectral::Spectral(double length, std::size_t n) : length_(length), n_(n), p_(std::make_unique<Plans>()) {
  validate_grid(length, n);
  kscale_ = 2.0 * std::numbers::pi / length;
  const int ni = static_cast<int>(n);
  std::lock_guard<std::mutex> lock(planner_mutex());
  p_->rbuf = fftw_alloc_real(n);
  p_->hbuf = fftw_alloc_complex(n / 2 + 1);
  p_->cin = fftw_alloc_complex(n);
  p_->cout = fftw_alloc_complex(n);
  // ESTIMATE keeps the algorithm choice independent of timing, so runs are reproducible
  p_->r2c = fftw_plan_dft_r2c_1d(ni, p_->rbuf, p_->hbuf, FFTW_ESTIMATE);
  p_->c2r = fftw_plan_dft_c2r_1d(ni, p_->hbuf, p_->rbuf, FFTW_ESTIMATE);
  p_->fwd = fftw_plan_dft_1d(ni, p_->cin, p_->cout, FFTW_FORWARD, FFTW_ESTIMATE);
  p_->bwd = fftw_plan_dft_1d(ni, p_->cin, p_->cout, FFTW_BACKWARD, FFTW_ESTIMATE);
}

Spectral::~Spectral() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_destroy_plan(p_->r2c);
  fftw_destroy_plan(p_->c2r);
  fftw_destroy_plan(p_->fwd);
  fftw_destroy_plan(p_->bwd);
  fftw_free(p_->rbuf);
  fftw_free(p_->hbuf);
  fftw_free(p_->cin);
  fftw_free(p_->cout);
}

double Spectral::k_full(std::size_t j) const {
  const long m = j <= n_ / 2 ? static_cast<long>(j) : static_cast<long>(j) - static_cast<long>(n_);
  return kscale_ * static_cast<double>(m);
}

bool Spectral::keep(std::size_t j) const {
  const std::size_t m = j <= n_ / 2 ? j : n_ - j;
  return 3 * m <= n_;
}

void Spectral::forward(const std::vector<double>& in, std::vector<cplx>& out) {
  std::memcpy(p_->rbuf, in.data(), n_ * sizeof(double));
  fftw_execute(p_->r2c);
  const auto* h = reinterpret_cast<const cplx*>(p_->hbuf);
  out.assign(h, h + n_ / 2 + 1);
}

void Spectral::backward(const std::vector<cplx>& in, std::vector<double>& out) {
  std::memcpy(p_->hbuf, in.data(), (n_ / 2 + 1) * sizeof(cplx));
  fftw_execute(p_->c2r);  // destroys hbuf, which is scratch here
  out.resize(n_);
  const double s = 1.0 / static_cast<double>(n_);
  for (std::size_t j = 0; j < n_; ++j) out[j] = p_->rbuf[j] * s;
}

void Spectral::forward(const std::vector<cplx>& in, std::vector<cplx>& out) {
  std::memcpy(p_->cin, in.data(), n_ * sizeof(cplx));
  fftw_execute(p_->fwd);
  const auto* c = reinterpret_cast<const cplx*>(p_->cout);
  out.assign(c, c + n_);
}

void Spectral::backward(const std::vector<cplx>& in, std::vector<cplx>& out) {
  std::memcpy(p_->cin, in.data(), n_ * sizeof(cplx));
  fftw_execute(p_->bwd);
  out.resize(n_);
  const double s = 1.0 / static_cast<double>(n_);
  const auto* c = reinterpret_cast<const cplx*>(p_->cout);
  for (std::size_t j = 0; j < n_; ++j) out[j] = c[j] * s;
}

cplx derivative_symbol(double k, int order, bool nyquist) {
  if (order == 0) return 1.0;
  if (nyquist && order % 2 == 1) return 0.0;
  cplx s = 1.0;
  for (int i = 0; i < order; ++i) s *= cplx(0.0, k);
  return s;
}

std::vector<double> Spectral::derivative(const std::vector<double>& f, int order) {
  std::vector<cplx> h;
  forward(f, h);
  for (std::size_t j = 0; j < h.size(); ++j) h[j] *= derivative_symbol(k_half(j), order, is_nyquist(j));
  std::vector<double> out;
  backward(h, out);
  return out;
}

std::vector<cplx> Spectral::derivative(const std::vector<cplx>& f, int order) {
  std::vector<cplx> h;
  forward(f, h);
  for (std::size_t j = 0; j < h.size(); ++j) h[j] *= derivative_symbol(k_full(j), order, is_nyquist(j));
  std::vector<cplx> out;
  backward(h, out);
  return out;
}

double trapezoid(const std::vector<double>& f, double dx) {
  double s = 0.0;
  for (double v : f) s += v;
  return s * dx;
}

cplx trapezoid(const std::vector<cplx>& f, double dx) {
  cplx s = 0.0;
  for (const cplx& v : f) s += v;
  return s * dx;
}

GridField derivative(const GridField& u, int order) {
  Spectral sp(u.length, u.n());
  return GridField{u.length, sp.derivative(u.values, order)};
}

ComplexField derivative(const ComplexField& u, int order) {
  Spectral sp(u.length, u.n());
  return ComplexField{u.length, sp.derivative(u.values, order)};
}

std::vector<double> refine(const std::vector<double>& f, std::size_t factor) {
  const std::size_t n = f.size();
  if (factor == 1) return f;
  Spectral coarse(1.0, n), fine(1.0, n * factor);
  std::vector<cplx> h, H(n * factor / 2 + 1, 0.0);
  coarse.forward(f, h);
  for (std::size_t j = 0; j < n / 2; ++j) H[j] = h[j] * static_cast<double>(factor);
  // split the Nyquist mode symmetrically so the interpolant stays real
  H[n / 2] = 0.5 * h[n / 2] * static_cast<double>(factor);
  std::vector<double> out;
  fine.backward(H, out);
  return out;
}

std::vector<cplx> fourier_evaluate(const ComplexField& f, const std::vector<double>& xs) {
  const std::size_t n = f.n();
  Spectral sp(f.length, n);
  std::vector<cplx> h;
  sp.forward(f.values, h);
  const double x0 = -0.5 * f.length;
  std::vector<cplx> out(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    cplx s = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      double k = sp.k_full(j);
      if (sp.is_nyquist(j)) {
        s += h[j] * std::cos(k * (xs[i] - x0));
        continue;
      }
      s += h[j] * std::polar(1.0, k * (xs[i] - x0));
    }
    out[i] = s / static_cast<double>(n);
  }
  return out;
}

double top_third_energy_fraction(const GridField& u) {
  Spectral sp(u.length, u.n());
  std::vector<cplx> h;
  sp.forward(u.values, h);
  double tot = 0.0, top = 0.0;
  for (std::size_t j = 0; j < h.size(); ++j) {
    double e = std::norm(h[j]);
    tot += e;
    if (3 * j > u.n()) top += e;
  }
  return tot > 0.0 ? top / tot : 0.0;
}

double max_abs(const std::vector<double>& f) {
  double m = 0.0;
  for (double v : f) m = std::max(m, std::abs(v));
  return m;
}

double max_abs(const std::vector<cplx>& f) {
  double m = 0.0;
  for (const cplx& v : f) m = std::max(m, std::abs(v));
  return m;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a[j] - b[j]));
  return m;
}

double max_abs_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double m = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a[j] - b[j]));
  return m;
}

}  // namespace qikdv
