#include "sinelab/funcspace.hpp"

#include <fftw3.h>

#include <cmath>
#include <numbers>

#include "sinelab/errors.hpp"

namespace sinelab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSqrt2Pi = 2.5066282746310002;

int next_pow2(int n) {
  int p = 1;
  while (p < n) p *= 2;
  return p;
}

std::vector<cplx> fft(std::vector<cplx> in, int sign) {
  const int n = (int)in.size();
  std::vector<cplx> out(n);
  fftw_plan plan = fftw_plan_dft_1d(
      n, reinterpret_cast<fftw_complex*>(in.data()),
      reinterpret_cast<fftw_complex*>(out.data()), sign, FFTW_ESTIMATE);
  fftw_execute(plan);
  fftw_destroy_plan(plan);
  return out;
}

}  // namespace

HolomorphicDescriptor HolomorphicDescriptor::make(const Descriptor& d,
                                                  double delta) {
  if (!d.holomorphic())
    throw DescriptorError("hl: " + d.name() + " is not holomorphic");
  if (!(delta > 0.0) || delta > d.natural_strip())
    throw DescriptorError("hl: delta outside the closed form's strip");
  return HolomorphicDescriptor{d, delta};
}

cplx HolomorphicDescriptor::eval(cplx z) const {
  if (std::abs(z.imag()) > delta)
    throw DomainError("hl: evaluation outside the declared strip");
  return base.eval(z);
}

SpectrumGrid fourier_transform(const GridFunction& g,
                               const TransformOptions& opt) {
  const int n = g.size();
  if (n < 2) throw DomainError("fourier_transform: empty grid");
  const double sup = g.sup_abs();
  if (sup > 0.0) {
    const double edge =
        std::max(std::abs(g.values.front()), std::abs(g.values.back()));
    if (edge > opt.tail_tol * sup)
      throw DomainError("fourier_transform: insufficient decay at grid ends");
  }

  const int npad = next_pow2(std::max(n, 2 * opt.min_half_points));
  const int off = (npad - n) / 2;
  std::vector<cplx> buf(npad, 0.0);
  for (int k = 0; k < n; ++k) buf[off + k] = g.values[k];
  const double t0 = g.grid_start - off * g.grid_step;

  std::vector<cplx> X = fft(std::move(buf), FFTW_FORWARD);

  SpectrumGrid s;
  s.freq_step = 2.0 * kPi / (npad * g.grid_step);
  s.freq_start = -(npad / 2) * s.freq_step;
  s.amplitudes.resize(npad);
  s.descriptor = g.descriptor;
  const double c = g.grid_step / kSqrt2Pi;
  for (int j = 0; j < npad; ++j) {
    const int m = j - npad / 2;
    const double xi = m * s.freq_step;
    const cplx phase = std::polar(c, -xi * t0);
    s.amplitudes[j] = phase * X[((m % npad) + npad) % npad];
  }
  return s;
}

GridFunction inverse_transform(const SpectrumGrid& s) {
  const int n = s.size();
  if (n < 2) throw DomainError("inverse_transform: empty spectrum");
  std::vector<cplx> buf(n);
  for (int m = 0; m < n; ++m)
    buf[m] = (m % 2 == 0 ? 1.0 : -1.0) * s.amplitudes[m];
  std::vector<cplx> Y = fft(std::move(buf), FFTW_BACKWARD);

  GridFunction g;
  g.grid_step = 2.0 * kPi / (n * s.freq_step);
  g.grid_start = -(n / 2) * g.grid_step;
  g.values.resize(n);
  const double c = s.freq_step / kSqrt2Pi;
  for (int k = 0; k < n; ++k) {
    const double t = g.coord(k);
    g.values[k] = std::polar(c, s.freq_start * t) * Y[k];
  }
  return g;
}

double sobolev_norm(const SpectrumGrid& s, double order) {
  if (order != 0.5 && order != 1.0)
    throw DomainError("sobolev_norm: order must be 1/2 or 1");
  const int n = s.size();
  double total = 0.0, tail = 0.0;
  const int tail_n = std::max(2, n / 100);
  for (int j = 0; j < n; ++j) {
    const double xi = std::abs(s.freq(j));
    const double w = (j == 0 || j == n - 1) ? 0.5 : 1.0;
    const double c = w * std::pow(xi, 2.0 * order) * std::norm(s.amplitudes[j]);
    total += c;
    if (j < tail_n || j >= n - tail_n) tail += c;
  }
  // Divergence guard: the integrand density near the grid ends should be a
  // small fraction of the average density; flat or growing integrands
  // (non-decaying spectra) fail this.
  if (total > 0.0 && (tail / (2.0 * tail_n)) > 0.1 * (total / n))
    throw DomainError("sobolev_norm: spectrum not decaying on the grid");
  return std::sqrt(total * s.freq_step);
}

HardySplit hardy_split(const SpectrumGrid& s) {
  SpectrumGrid plus = s, minus = s;
  for (int j = 0; j < s.size(); ++j) {
    const double xi = s.freq(j);
    if (std::abs(xi) < 0.5 * s.freq_step) {
      // The zero bin straddles the cut; an even split keeps the ring odd.
      plus.amplitudes[j] *= 0.5;
      minus.amplitudes[j] *= 0.5;
    } else if (xi > 0.0) {
      minus.amplitudes[j] = 0.0;
    } else {
      plus.amplitudes[j] = 0.0;
    }
  }
  HardySplit h;
  h.f_plus = inverse_transform(plus);
  h.f_minus = inverse_transform(minus);
  h.f_ring = h.f_minus;
  for (int k = 0; k < h.f_ring.size(); ++k)
    h.f_ring.values[k] -= h.f_plus.values[k];
  if (s.descriptor &&
      (s.descriptor->shape == Shape::gaussian ||
       s.descriptor->shape == Shape::lorentzian ||
       s.descriptor->shape == Shape::hat))
    h.f_ring.descriptor = s.descriptor->ring();
  return h;
}

double hl_norm(const HolomorphicDescriptor& h, int n_lines) {
  if (n_lines < 1) throw DomainError("hl_norm: n_lines < 1");
  const double T = 64.0 * h.base.scale;
  const double step = h.base.scale / 64.0;
  const int n = (int)std::lround(2.0 * T / step) + 1;
  double sup = 0.0, max_line_l2 = 0.0;
  for (int li = 0; li < n_lines; ++li) {
    const double d1 =
        n_lines == 1 ? 0.0 : -h.delta + 2.0 * h.delta * li / (n_lines - 1);
    std::vector<cplx> row(n);
    for (int k = 0; k < n; ++k) {
      row[k] = h.eval(cplx(-T + k * step, d1));
      sup = std::max(sup, std::abs(row[k]));
    }
    double l2 = 0.0;
    for (int k = 1; k + 1 < n; ++k)
      l2 += std::norm((row[k + 1] - row[k - 1]) / (2.0 * step));
    max_line_l2 = std::max(max_line_l2, std::sqrt(l2 * step));
  }
  return sup + max_line_l2;
}

double shifted_tail_integral(const SpectrumGrid& s, double R,
                             double xi_lower) {
  if (!(R >= 1.0)) throw DomainError("shifted_tail: R must be >= 1");
  // A spectrum tabulated (hence supported) below the tail start contributes
  // nothing.
  if (s.freq_end() <= R + xi_lower) return 0.0;
  const double h = s.freq_step;
  const int m = (int)std::floor((s.freq_end() - R - xi_lower) / h);
  double total = 0.0;
  for (int j = 0; j <= m; ++j) {
    const double xi = xi_lower + j * h;
    const double w = (j == 0 || j == m) ? 0.5 : 1.0;
    total += w * xi * std::norm(s.amplitude_at(xi + R));
  }
  return total * h;
}

double shifted_tail_seminorm(const SpectrumGrid& s, double R) {
  return std::sqrt(shifted_tail_integral(s, R, 1.0));
}

}  // namespace sinelab
