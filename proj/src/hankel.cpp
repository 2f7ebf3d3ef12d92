#include "sinelab/hankel.hpp"

#include <fftw3.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "sinelab/errors.hpp"
#include "sinelab/quadrature.hpp"

namespace sinelab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSqrt2Pi = 2.5066282746310002;

int next_pow2(int n) {
  int p = 1;
  while (p < n) p *= 2;
  return p;
}

double smoothstep(double w) {
  w = std::clamp(w, 0.0, 1.0);
  return w * w * w * (10.0 + w * (-15.0 + 6.0 * w));
}

cplx interp_or_zero(const std::vector<cplx>& v, double s) {
  if (s < 0.0 || s > (double)(v.size() - 1)) return 0.0;
  const int i = std::min((int)s, (int)v.size() - 2);
  const double f = s - i;
  return (1.0 - f) * v[i] + f * v[i + 1];
}

}  // namespace

cplx TailSpectrum::j_at(double v) const {
  if (v < 0.0) throw RangeError("tail spectrum: negative argument");
  return interp_or_zero(J, v / dv);
}

cplx TailSpectrum::at(double v) const {
  const cplx j = j_at(v);
  if (j == cplx(0.0)) return 0.0;
  return std::exp(-beta * v) * j;
}

cplx SymbolSpectrum::a_hat(double xi) const { return s0 * a_spec.at(s0 * xi); }

cplx SymbolSpectrum::b_check(double xi) const {
  const TailSpectrum& ts = shared_b ? a_spec : b_spec;
  return s0 * ts.at(s0 * xi);
}

SpectrumGrid SymbolSpectrum::to_spectrum_grid(bool a_side) const {
  const TailSpectrum& ts = (a_side || shared_b) ? a_spec : b_spec;
  SpectrumGrid s;
  s.freq_start = 0.0;
  s.freq_step = ts.dv / s0;
  s.amplitudes.resize(ts.J.size());
  for (size_t m = 0; m < ts.J.size(); ++m)
    s.amplitudes[m] = s0 / kSqrt2Pi * std::exp(-ts.beta * m * ts.dv) * ts.J[m];
  return s;
}

namespace {

// Evaluate the ring function at a (possibly complex-shifted) point.
cplx ring_value(const GridFunction& ring, double u, double beta) {
  if (beta != 0.0) return ring.descriptor->eval(cplx(u, -beta));
  if (ring.descriptor && ring.descriptor->has_closed_form())
    return ring.descriptor->eval(u);
  if (u < ring.grid_start || u > ring.grid_end()) return 0.0;
  return ring.value_at(u);
}

TailSpectrum symbol_fft(const GridFunction& ring, cplx lambda, bool reflect,
                        double beta, const SymbolOptions& opt) {
  const double T = opt.half_width;
  const int n = next_pow2((int)std::lround(2.0 * T / opt.du));
  std::vector<cplx> buf(n);
  const double edge = (1.0 - opt.taper_frac) * T;
  const cplx lam = reflect ? -lambda : lambda;
  for (int j = 0; j < n; ++j) {
    const double u = -T + j * opt.du;
    const double uu = reflect ? -u : u;
    const double bb = reflect ? -beta : beta;
    cplx c = std::exp(lam * ring_value(ring, uu, bb)) - 1.0;
    const double au = std::abs(u);
    if (au > edge) c *= smoothstep((T - au) / (opt.taper_frac * T));
    buf[j] = c;
  }
  std::vector<cplx> X(n);
  fftw_plan plan = fftw_plan_dft_1d(
      n, reinterpret_cast<fftw_complex*>(buf.data()),
      reinterpret_cast<fftw_complex*>(X.data()), FFTW_FORWARD, FFTW_ESTIMATE);
  fftw_execute(plan);
  fftw_destroy_plan(plan);

  TailSpectrum ts;
  ts.beta = beta;
  ts.dv = 2.0 * kPi / (n * opt.du);
  ts.J.resize(n / 2);
  for (int m = 0; m < n / 2; ++m) {
    const double v = m * ts.dv;
    ts.J[m] = opt.du * std::polar(1.0, v * T) * X[m];
  }
  return ts;
}

}  // namespace

SymbolSpectrum build_symbol(const GridFunction& f_ring, cplx lambda, double R,
                            const SymbolOptions& opt_in) {
  if (!(R >= 1.0)) throw DomainError("build_symbol: R must be >= 1");
  SymbolOptions opt = opt_in;
  if (opt.du <= 0.0)
    opt.du = std::min(1.0 / 128.0, kPi / (3.0 * 2.0 * kPi * R + 40.0));
  const bool closed = f_ring.descriptor && f_ring.descriptor->has_closed_form();
  double beta = opt.beta;
  if (beta < 0.0)
    beta = (closed && f_ring.descriptor->holomorphic())
               ? 0.5 * f_ring.descriptor->natural_strip()
               : 0.0;
  if (beta > 0.0 && !(closed && f_ring.descriptor->holomorphic()))
    throw DomainError("build_symbol: contour shift needs a strip evaluator");

  // Purely-imaginary check and overflow guard on the real axis.
  double max_re_exp = 0.0, max_re_ring = 0.0, max_abs = 0.0;
  for (double u = -opt.half_width; u <= opt.half_width; u += 0.25) {
    const cplx fv = ring_value(f_ring, u, 0.0);
    max_re_ring = std::max(max_re_ring, std::abs(fv.real()));
    max_abs = std::max(max_abs, std::abs(fv));
    max_re_exp = std::max(max_re_exp, std::abs((lambda * fv).real()));
  }
  if (max_re_ring > 1e-8 * std::max(1.0, max_abs))
    throw DomainError("build_symbol: ring function is not purely imaginary");
  if (max_re_exp > opt.overflow_guard)
    throw DomainError("build_symbol: |Re(lambda * ring)| exceeds guard");
  if (beta > 0.0) {
    // Hard cap against double overflow of the shifted-contour exponential.
    double contour_sup = 0.0;
    for (double u = -opt.half_width; u <= opt.half_width; u += 0.25)
      contour_sup = std::max(
          contour_sup,
          (lambda * f_ring.descriptor->eval(cplx(u, -beta))).real());
    if (contour_sup > 690.0)
      throw ConditioningError(
          "build_symbol: contour exponential exceeds double range");
  }

  SymbolSpectrum sym;
  sym.f_ring = std::make_shared<GridFunction>(f_ring);
  sym.lambda = lambda;
  sym.R = R;
  sym.s0 = 2.0 * kPi * R;
  sym.du = opt.du;
  sym.half_width = opt.half_width;

  if (lambda == cplx(0.0)) {
    sym.a_spec.beta = beta;
    sym.a_spec.dv = 2.0 * kPi / (2.0 * opt.half_width);
    sym.a_spec.J.assign(2, 0.0);
    sym.shared_b = true;
    return sym;
  }

  sym.a_spec = symbol_fft(f_ring, lambda, false, beta, opt);

  // For an odd ring (even test function) the reflected minus-symbol spectrum
  // coincides with the plus-symbol spectrum.
  bool odd_ring = false;
  if (closed) {
    odd_ring = !f_ring.descriptor->even() &&
               f_ring.descriptor->shape != Shape::custom;
  } else {
    double asym = 0.0;
    for (double u = 0.25; u <= opt.half_width; u += 4.0)
      asym = std::max(asym, std::abs(ring_value(f_ring, u, 0.0) +
                                     ring_value(f_ring, -u, 0.0)));
    odd_ring = asym < 1e-9 * std::max(1.0, max_abs);
  }
  sym.shared_b = odd_ring;
  if (!odd_ring) sym.b_spec = symbol_fft(f_ring, lambda, true, beta, opt);
  return sym;
}

namespace {

struct MappedLine {
  std::vector<double> x;   // mapped coordinate
  std::vector<double> w;   // weight including the Jacobian
};

// Gauss-Legendre on (0,1) pushed through u -> shift + u/(1-u).
MappedLine mapped_line(int n, double shift) {
  QuadRule q = gauss_legendre(n, 0.0, 1.0);
  MappedLine m;
  m.x.resize(n);
  m.w.resize(n);
  for (int i = 0; i < n; ++i) {
    const double u = q.nodes[i];
    m.x[i] = shift + u / (1.0 - u);
    m.w[i] = q.weights[i] / ((1.0 - u) * (1.0 - u));
  }
  return m;
}

// Stable evaluation of the one-sided tail integral
//   hs^2 = (1/4pi^2) int_0^inf xi |a_hat(xi + 1)|^2 dxi
// carried out in log scale: the damping exp(-beta*s0) and the magnitude of
// the undamped spectrum are both factored out so deep-tail values keep
// relative accuracy and extreme magnitudes cannot overflow.
double log_hs_from_tail(const SymbolSpectrum& sym, const TailSpectrum& ts) {
  const double s0 = sym.s0;
  const double c = 2.0 * ts.beta * s0;
  const int n = (int)ts.J.size();
  const int j0 = (int)std::ceil(s0 / ts.dv);  // v >= s0 <=> xi >= 1
  double jm = 0.0;
  for (int j = j0; j < n; ++j) jm = std::max(jm, std::abs(ts.J[j]));
  if (jm == 0.0) return -std::numeric_limits<double>::infinity();
  double I = 0.0;
  for (int j = j0; j < n; ++j) {
    const double xi = j * ts.dv / s0 - 1.0;
    if (xi < 0.0) continue;
    const double r = std::abs(ts.J[j]) / jm;
    I += xi * std::exp(-c * xi) * r * r;
  }
  I *= ts.dv / s0;
  if (I == 0.0) return -std::numeric_limits<double>::infinity();
  return -ts.beta * s0 + std::log(jm) + std::log(s0 / (2.0 * kPi)) +
         0.5 * std::log(I);
}

double hs_from_tail(const SymbolSpectrum& sym, const TailSpectrum& ts) {
  return std::exp(log_hs_from_tail(sym, ts));
}

}  // namespace

HsRoutes hankel_hs_norm_routes(const SymbolSpectrum& sym, char side,
                               int n_quad) {
  if (side != '+' && side != '-')
    throw DomainError("hankel_hs_norm: side must be '+' or '-'");
  const bool plus = side == '+';
  const TailSpectrum& ts =
      (plus || sym.shared_b) ? sym.a_spec : sym.b_spec;

  HsRoutes r;
  r.spectral = hs_from_tail(sym, ts);
  double jm = 0.0;
  for (const cplx& j : ts.J) jm = std::max(jm, std::abs(j));
  r.noise_floor = 1e-9 * sym.s0 / (2.0 * kPi) * jm *
                  std::exp(std::max(-700.0, -ts.beta * sym.s0));

  // Route (b): Frobenius norm of the chi_{(1,inf)} H(.) Nystrom block.
  const double scale = std::exp(-ts.beta * sym.s0);
  if (scale > 1e-120) {
    MappedLine ls = mapped_line(n_quad, 1.0);
    MappedLine lt = mapped_line(n_quad, 0.0);
    auto val = [&](double arg) {
      return plus ? sym.a_hat(arg) : sym.b_check(arg);
    };
    double f2 = 0.0;
    for (int i = 0; i < n_quad; ++i)
      for (int k = 0; k < n_quad; ++k) {
        const double e = std::norm(val(ls.x[i] + lt.x[k]));
        f2 += ls.w[i] * lt.w[k] * e;
      }
    r.frobenius = std::sqrt(f2) / (2.0 * kPi);
    r.frobenius_valid = true;
  }
  return r;
}

double hankel_hs_norm(const SymbolSpectrum& sym, char side) {
  // polynomially decaying symbols need a finer Nystrom grid before the
  // Frobenius route is converged enough to act as a consistency witness
  HsRoutes r = hankel_hs_norm_routes(sym, side, 1024);
  if (r.frobenius_valid && r.spectral > r.noise_floor) {
    const double rel =
        std::abs(r.spectral - r.frobenius) / std::max(r.spectral, r.frobenius);
    if (rel > 1e-4)
      throw ConsistencyError("hankel_hs_norm: spectral and Frobenius routes "
                             "disagree beyond 1e-4");
  }
  return r.spectral;
}

GridFunction ring_of(const GridFunction& f) {
  if (f.descriptor && f.descriptor->has_closed_form() &&
      f.descriptor->shape != Shape::indicator)
    return make_grid_function(f.descriptor->ring(), -64.0 * f.descriptor->scale,
                              f.descriptor->scale / 16.0,
                              2048 + 1);
  return hardy_split(fourier_transform(f)).f_ring;
}

DeterminantEvaluation fredholm_det_V(const GridFunction& f, cplx lambda,
                                     double R, int n_quad) {
  DetOptions opt;
  opt.n_quad = n_quad;
  return fredholm_det_V(f, lambda, R, opt);
}

namespace {

cplx det_from_symbol(const SymbolSpectrum& sym, int n_quad) {
  MappedLine ls = mapped_line(n_quad, 1.0);
  MappedLine lt = mapped_line(n_quad, 0.0);
  Eigen::MatrixXcd B(n_quad, n_quad), C(n_quad, n_quad);
  std::vector<double> sws(n_quad), swt(n_quad);
  for (int i = 0; i < n_quad; ++i) {
    sws[i] = std::sqrt(ls.w[i]);
    swt[i] = std::sqrt(lt.w[i]);
  }
  for (int i = 0; i < n_quad; ++i)
    for (int k = 0; k < n_quad; ++k) {
      const double arg = ls.x[i] + lt.x[k];
      B(i, k) = sym.a_hat(arg) / (2.0 * kPi) * sws[i] * swt[k];
      C(k, i) = sym.b_check(arg) / (2.0 * kPi) * swt[k] * sws[i];
    }
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Identity(n_quad, n_quad) - B * C;
  return Eigen::PartialPivLU<Eigen::MatrixXcd>(M).determinant();
}

}  // namespace

DeterminantEvaluation fredholm_det_from_ring(const GridFunction& ring,
                                             cplx lambda, double R,
                                             const DetOptions& opt) {
  if (opt.n_quad < 32) throw DomainError("fredholm_det_V: n_quad < 32");
  DeterminantEvaluation ev;
  ev.lambda = lambda;
  ev.R = R;
  ev.n_quad = opt.n_quad;

  if (lambda == cplx(0.0)) {
    ev.value = 1.0;
    return ev;
  }

  SymbolSpectrum sym = build_symbol(ring, lambda, R, opt.sym);
  ev.beta = sym.a_spec.beta;
  ev.du = sym.du;
  ev.half_width = sym.half_width;
  const double lp = log_hs_from_tail(sym, sym.a_spec);
  const double lm =
      log_hs_from_tail(sym, sym.shared_b ? sym.a_spec : sym.b_spec);
  ev.hs_norm_plus = std::exp(lp);
  ev.hs_norm_minus = std::exp(lm);
  if (lp + lm > std::log(opt.conditioning_guard))
    throw ConditioningError(
        "fredholm_det_V: HS factor product exceeds conditioning guard");

  ev.value = det_from_symbol(sym, opt.n_quad);
  if (opt.check_convergence) {
    const cplx v2 = det_from_symbol(sym, 2 * opt.n_quad);
    ev.convergence_gap = std::abs(ev.value - v2);
    if (ev.convergence_gap > 1e-6)
      throw ResolutionError(
          "fredholm_det_V: determinant not converged under quadrature "
          "doubling");
  }
  return ev;
}

DeterminantEvaluation fredholm_det_V(const GridFunction& f, cplx lambda,
                                     double R, const DetOptions& opt) {
  return fredholm_det_from_ring(ring_of(f), lambda, R, opt);
}

CauchyDerivative cauchy_derivative_general(
    const std::function<cplx(cplx)>& fn, cplx center, double radius,
    int n_circle) {
  if (n_circle < 4) throw DomainError("cauchy_derivative: n_circle < 4");
  CauchyDerivative out;
  cplx acc = 0.0;
  for (int k = 0; k < n_circle; ++k) {
    const double th = 2.0 * kPi * k / n_circle;
    const cplx z = center + std::polar(radius, th);
    const cplx v = fn(z);
    out.max_abs = std::max(out.max_abs, std::abs(v));
    acc += v * std::polar(1.0, -th);
  }
  out.derivative = acc / (double)n_circle / radius;
  return out;
}

CauchyDerivative cauchy_derivative(const GridFunction& f, double lambda0,
                                   double R, int n_circle,
                                   const DetOptions& opt) {
  return cauchy_derivative_general(
      [&](cplx z) { return fredholm_det_V(f, z, R, opt).value; },
      cplx(lambda0, 0.0), 1.0, n_circle);
}

std::pair<double, double> seminorm_scaling_check(const SpectrumGrid& s,
                                                 double R) {
  const double lhs = shifted_tail_seminorm(s, R);
  // ||h(./R)||_{H(1)}: spectrum of the dilated function is R * h_hat(R xi).
  const double h = s.freq_step / R;
  const double xi_max = s.freq_end() / R - 1.0;
  double total = 0.0;
  int m = (int)std::floor((xi_max - 1.0) / h);
  if (m < 1)
    throw RangeError("seminorm_scaling_check: grid does not cover R(xi+1)");
  for (int j = 0; j <= m; ++j) {
    const double xi = 1.0 + j * h;
    const double w = (j == 0 || j == m) ? 0.5 : 1.0;
    total += w * xi * std::norm(R * s.amplitude_at(R * (xi + 1.0)));
  }
  return {lhs, std::sqrt(total * h)};
}

}  // namespace sinelab
