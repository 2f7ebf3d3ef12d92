#include "sinelab/cltlab.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sinelab/errors.hpp"
#include "sinelab/funcspace.hpp"
#include "sinelab/quadrature.hpp"

namespace sinelab {

namespace {

constexpr double kPi = std::numbers::pi;

double sinc2(double r) {
  if (std::abs(r) < 1e-8) return 1.0;
  const double s = std::sin(kPi * r) / (kPi * r);
  return s * s;
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

}  // namespace

double additive_functional(const Configuration& cfg, const GridFunction& g) {
  double total = 0.0;
  for (double x : cfg.points) total += std::real(g.value_at(x));
  return total;
}

double limit_sigma(const GridFunction& f) {
  const double h = sobolev_norm(fourier_transform(f), 0.5);
  return h / std::sqrt(2.0 * kPi);
}

double exact_variance(const GridFunction& g) {
  const bool closed = g.descriptor && g.descriptor->has_closed_form();
  if (!closed) {
    // Spectral form of the double integral: the sine-kernel variance is
    // (2pi)^{-1} int min(|xi|, 2pi) |g_hat(xi)|^2 dxi in the unitary
    // convention, independent of any dilation bookkeeping.
    SpectrumGrid s = fourier_transform(g);
    double total = 0.0;
    for (int k = 0; k < s.size(); ++k) {
      const double w = (k == 0 || k == s.size() - 1) ? 0.5 : 1.0;
      const double xi = std::abs(s.freq(k));
      total += w * std::min(xi, 2.0 * kPi) * std::norm(s.amplitudes[k]);
    }
    return total * s.freq_step / (2.0 * kPi);
  }

  const Descriptor& d = *g.descriptor;
  const double s = d.scale;
  const double A = d.amplitude;
  const double A2s = A * A * s;

  // Autocorrelation of the scaled shape and the corresponding L2 mass.
  double I_f = 0.0;
  std::function<double(double)> C;
  std::vector<double> breaks;
  double rm = std::max(200.0, 50.0 * s);
  switch (d.shape) {
    case Shape::gaussian:
      I_f = A2s * std::sqrt(kPi / 2.0);
      C = [=](double r) {
        return A2s * std::sqrt(kPi / 2.0) * std::exp(-0.5 * (r / s) * (r / s));
      };
      break;
    case Shape::lorentzian:
      I_f = A2s * kPi / 2.0;
      C = [=](double r) {
        const double u = r / s;
        return A2s * 2.0 * kPi / (4.0 + u * u);
      };
      break;
    case Shape::hat:
      I_f = A2s * 2.0 / 3.0;
      C = [=](double r) {
        const double u = std::abs(r) / s;
        if (u >= 2.0) return 0.0;
        if (u >= 1.0) {
          const double w = 2.0 - u;
          return A2s * w * w * w / 6.0;
        }
        return A2s * (0.5 * u * u * u - u * u + 2.0 / 3.0);
      };
      breaks = {s, 2.0 * s};
      break;
    case Shape::indicator: {
      const double hw = d.half_width;
      I_f = A2s * 2.0 * hw;
      C = [=](double r) {
        return A2s * std::max(0.0, 2.0 * hw - std::abs(r) / s);
      };
      breaks = {2.0 * s * hw};
      rm = std::max(200.0, 2.0 * s * hw + 50.0);
      break;
    }
    default:
      throw DescriptorError("exact_variance: ring shapes have no L2 pairing");
  }

  const double numeric = 2.0 * integrate(
      [&](double r) { return sinc2(r) * (I_f - C(r)); }, 0.0, rm, breaks);

  // Asymptotic remainder of 2 int_rm^inf sinc^2 (I_f - C): the sinc^2 tail
  // against the constant, minus the slowly decaying Lorentzian piece.
  const double s2 = std::sin(2.0 * kPi * rm);
  const double c2 = std::cos(2.0 * kPi * rm);
  double tail = I_f / (kPi * kPi) *
                (1.0 / rm + s2 / (2.0 * kPi * rm * rm) -
                 c2 / (2.0 * kPi * kPi * rm * rm * rm));
  if (d.shape == Shape::lorentzian)
    tail -= 2.0 * A2s * s * s / (3.0 * kPi * rm * rm * rm);
  return numeric + tail;
}

namespace {

double abs_tail_mass(const GridFunction& f, double margin) {
  // int_{|t| > margin} |f|, for the truncation diagnostic.
  if (f.descriptor && f.descriptor->has_closed_form()) {
    const Descriptor& d = *f.descriptor;
    const double M = margin + 64.0 * d.scale;
    double out = 2.0 * integrate(
        [&](double t) { return std::abs(d.eval(t)); }, margin, M, {}, 2.0);
    if (d.shape == Shape::lorentzian)
      out += 2.0 * std::abs(d.amplitude) * d.scale *
             (kPi / 2.0 - std::atan(M / d.scale));
    return out;
  }
  if (f.grid_end() <= margin) return 0.0;
  double out = 0.0;
  for (int k = 0; k < f.size(); ++k)
    if (std::abs(f.coord(k)) > margin) out += std::abs(f.values[k]);
  return out * f.grid_step;
}

GridFunction dilated(const GridFunction& f, double R, double L) {
  const double step = 1.0 / 64.0;
  const int n = (int)std::ceil(2.0 * L / step) + 1;
  if (f.descriptor && f.descriptor->has_closed_form()) {
    Descriptor d = *f.descriptor;
    d.scale *= R;
    return make_grid_function(d, -L, step, n);
  }
  GridFunction g;
  g.grid_start = -L;
  g.grid_step = step;
  g.values.resize(n);
  for (int k = 0; k < n; ++k) g.values[k] = f.value_at(g.coord(k) / R);
  g.descriptor = f.descriptor;
  return g;
}

}  // namespace

SampleSummary monte_carlo_statistics(const GridFunction& f, double R, int N,
                                     std::uint64_t seed,
                                     const MonteCarloOptions& opt) {
  if (R <= 0.0) throw DomainError("monte_carlo_statistics: R must be positive");
  if (N < 1) throw DomainError("monte_carlo_statistics: N must be positive");
  if (opt.margin <= 0.0)
    throw DomainError("monte_carlo_statistics: margin must be positive");

  SampleSummary out;
  out.R = R;
  out.N = N;
  out.L = opt.margin * R;
  out.seed = seed;
  out.n_nodes = opt.n_nodes > 0 ? opt.n_nodes
                                : (int)std::ceil(4.0 * out.L) + 32;

  GridFunction g = dilated(f, R, out.L);
  out.truncation_error = R * abs_tail_mass(f, opt.margin);

  KernelEigensystem es = build_kernel_eigensystem(out.L, out.n_nodes);

  // Centering: quadrature integral of the dilated function over the window,
  // which is E S_g at unit point density.
  double center = 0.0;
  for (int i = 0; i < es.nodes.size(); ++i)
    center += es.weights(i) * std::real(g.value_at(es.nodes(i)));

  std::vector<Configuration> batch =
      sample_batch(es, seed, 0, N, opt.workers);
  out.values.reserve(N);
  for (const Configuration& cfg : batch)
    out.values.push_back(additive_functional(cfg, g) - center);
  std::sort(out.values.begin(), out.values.end());

  for (double v : out.values) out.mean += v;
  out.mean /= N;
  if (N > 1) {
    for (double v : out.values) {
      const double d0 = v - out.mean;
      out.variance += d0 * d0;
    }
    out.variance /= (N - 1);
  }

  for (double lam : opt.mgf_lambda) {
    double m1 = 0.0, m2 = 0.0;
    for (double v : out.values) {
      const double e = std::exp(lam * v);
      m1 += e;
      m2 += e * e;
    }
    m1 /= N;
    m2 /= N;
    out.mgf_lambda.push_back(lam);
    out.mgf.push_back(m1);
    const double var = std::max(0.0, m2 - m1 * m1) * N / std::max(1, N - 1);
    out.mgf_stderr.push_back(std::sqrt(var / N));
  }
  for (double xi : opt.chf_xi) {
    cplx c = 0.0;
    for (double v : out.values) c += std::polar(1.0, xi * v);
    out.chf_xi.push_back(xi);
    out.chf.push_back(c / (double)N);
  }
  return out;
}

double ks_distance(const std::vector<double>& sorted_sample, double sigma) {
  if (sorted_sample.empty()) throw DomainError("ks_distance: empty sample");
  if (sigma <= 0.0) throw DomainError("ks_distance: sigma must be positive");
  const int n = (int)sorted_sample.size();
  double d = 0.0;
  for (int i = 0; i < n; ++i) {
    const double F = normal_cdf(sorted_sample[i] / sigma);
    d = std::max(d, std::abs((i + 1.0) / n - F));
    d = std::max(d, std::abs(F - (double)i / n));
  }
  return d;
}

BoundReport esseen_bound_with(const std::function<cplx(cplx)>& W,
                              double sigma, const EsseenOptions& opt) {
  if (sigma <= 0.0) throw DomainError("esseen_bound: sigma must be positive");
  if (opt.xi_step <= 0.0)
    throw DomainError("esseen_bound: xi_step must be positive");
  if (opt.T_grid.empty())
    throw DomainError("esseen_bound: empty T grid");

  std::vector<double> tg = opt.T_grid;
  std::sort(tg.begin(), tg.end());

  BoundReport rep;
  rep.sigma = sigma;
  rep.xi_step = opt.xi_step;

  // kappa0(T): running sup of |W - 1| on the xi grid, recorded at each T.
  // The sweep stops at the first evaluation failure (deep in the tail the
  // operator factors leave the trace class numerically) or once the sup
  // exceeds the trivial bound.
  double run = 0.0;
  std::size_t ti = 0;
  for (int k = 1; ti < tg.size(); ++k) {
    const double xi = k * opt.xi_step;
    while (ti < tg.size() && xi > tg[ti] + 1e-12) {
      rep.T_grid.push_back(tg[ti]);
      rep.kappa0_at_T.push_back(run);
      ++ti;
    }
    if (ti >= tg.size()) break;
    cplx w;
    try {
      w = W(cplx(xi, 0.0));
    } catch (const std::exception&) {
      rep.first_failure_xi = xi;
      break;
    }
    run = std::max(run, std::abs(w - 1.0));
    if (run > 4.0) break;
  }
  if (rep.T_grid.empty())
    throw ConditioningError(
        "esseen_bound: no cutoff in the T grid could be certified");

  std::size_t best = 0;
  for (std::size_t i = 1; i < rep.T_grid.size(); ++i)
    if (rep.kappa0_at_T[i] + 4.0 / rep.T_grid[i] <
        rep.kappa0_at_T[best] + 4.0 / rep.T_grid[best])
      best = i;
  rep.T = rep.T_grid[best];
  rep.kappa0 = rep.kappa0_at_T[best];

  // kappa1: |W'| at centers spanning [-1, 1] by the Cauchy circle; the
  // conjugate symmetry W(-xi) = conj W(xi) makes the two halves equal.
  const int m = std::max(1, opt.kappa1_centers);
  for (int j = 0; j < m; ++j) {
    const double mu = m == 1 ? 0.0 : -1.0 + 2.0 * j / (m - 1);
    if (mu < -1e-12) continue;
    const CauchyDerivative cd = cauchy_derivative_general(
        W, cplx(std::max(mu, 0.0), 0.0), 1.0, opt.n_circle);
    rep.kappa1 = std::max(rep.kappa1, std::abs(cd.derivative));
  }

  rep.bound = rep.kappa0 + rep.kappa1 + 4.0 / rep.T;
  return rep;
}

BoundReport esseen_bound(const GridFunction& f, double R,
                         const EsseenOptions& opt) {
  if (R <= 0.0) throw DomainError("esseen_bound: R must be positive");
  const double sigma = limit_sigma(f);
  GridFunction ring = ring_of(f);

  DetOptions dopt;
  dopt.n_quad = opt.n_quad;
  dopt.sym = opt.sym;
  // The sweep pushes |Im lambda| up to T/sigma, far past the default
  // real-axis guard; the log-domain tail evaluation stays stable there.
  dopt.sym.overflow_guard = std::max(dopt.sym.overflow_guard, 500.0);

  auto W = [&](cplx z) {
    return fredholm_det_from_ring(ring, cplx(0.0, 1.0) * z / sigma, R, dopt)
        .value;
  };
  BoundReport rep = esseen_bound_with(W, sigma, opt);
  rep.R = R;
  return rep;
}

RateReport rate_fit(const std::vector<std::pair<double, double>>& points,
                    RateModel model) {
  if (points.size() < 4)
    throw DomainError("rate_fit: need at least four (R, value) points");

  RateReport rep;
  rep.model = model;
  rep.points = points;

  double sxx = 0.0, sxy = 0.0;
  std::vector<double> xs;
  for (const auto& [R, v] : points) {
    if (model == RateModel::inverse_log && R <= 1.0)
      throw DomainError("rate_fit: inverse_log model needs R > 1");
    if (R <= 0.0) throw DomainError("rate_fit: R must be positive");
    const double x =
        model == RateModel::inverse_log ? 1.0 / std::log(R) : 1.0 / R;
    xs.push_back(x);
    sxx += x * x;
    sxy += x * v;
  }
  rep.c = sxy / sxx;
  for (std::size_t i = 0; i < points.size(); ++i)
    rep.residuals.push_back(points[i].second - rep.c * xs[i]);

  // Free power-law fit in log-log coordinates, as a model diagnostic.
  double n = 0.0, su = 0.0, sv = 0.0, suu = 0.0, suv = 0.0;
  for (const auto& [R, v] : points) {
    if (v <= 0.0) continue;
    const double u = std::log(R), w = std::log(v);
    n += 1.0;
    su += u;
    sv += w;
    suu += u * u;
    suv += u * w;
  }
  if (n >= 2.0 && n * suu - su * su > 0.0) {
    rep.loglog_slope = (n * suv - su * sv) / (n * suu - su * su);
    rep.loglog_intercept = (sv - rep.loglog_slope * su) / n;
  }
  return rep;
}

}  // namespace sinelab
