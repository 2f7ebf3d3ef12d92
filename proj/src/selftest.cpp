#include "sinelab/selftest.hpp"

#include <cmath>
#include <functional>
#include <numbers>

#include "sinelab/cltlab.hpp"
#include "sinelab/errors.hpp"
#include "sinelab/funcspace.hpp"
#include "sinelab/grid.hpp"
#include "sinelab/hankel.hpp"
#include "sinelab/quadrature.hpp"
#include "sinelab/sinedpp.hpp"

namespace sinelab {

namespace {

// Inverse normal CDF (Acklam's rational approximation plus one Newton step).
double normal_quantile(double p) {
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  double x;
  if (p < 0.02425) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p > 1.0 - 0.02425) {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q +
          c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else {
    const double q = p - 0.5, r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) *
        q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  }
  const double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - p;
  const double u = e * std::sqrt(2.0 * std::numbers::pi) *
                   std::exp(0.5 * x * x);
  return x - u / (1.0 + 0.5 * x * u);
}

GridFunction zero_function() {
  GridFunction g;
  g.grid_start = -8.0;
  g.grid_step = 1.0 / 64.0;
  g.values.assign(1025, 0.0);
  return g;
}

}  // namespace

std::vector<std::pair<std::string, bool>> run_selftests() {
  std::vector<std::pair<std::string, bool>> out;
  auto check = [&](const std::string& name, const std::function<bool()>& fn) {
    bool ok = false;
    try {
      ok = fn();
    } catch (const std::exception&) {
      ok = false;
    }
    out.emplace_back(name, ok);
  };

  check("gaussian grid value at t=0", [] {
    GridFunction g = make_grid_function(Descriptor::make("gaussian"), -8.0,
                                        1.0 / 64.0, 1025);
    return std::abs(g.values[512] - cplx(1.0)) == 0.0;
  });
  check("lorentzian closed form at t=1", [] {
    return std::abs(Descriptor::make("lorentzian").eval(1.0) - cplx(0.5)) <
           1e-15;
  });
  check("hat closed form vanishes at t=+-1", [] {
    const Descriptor d = Descriptor::make("hat");
    return std::abs(d.eval(1.0)) == 0.0 && std::abs(d.eval(-1.0)) == 0.0;
  });

  check("zero function has zero transform", [] {
    SpectrumGrid s = fourier_transform(zero_function());
    return s.l2_norm() == 0.0;
  });
  check("zero function has zero ring", [] {
    HardySplit h = hardy_split(fourier_transform(zero_function()));
    return h.f_ring.sup_abs() == 0.0 && h.f_plus.sup_abs() == 0.0;
  });
  check("zero spectrum has zero sobolev norm", [] {
    return sobolev_norm(fourier_transform(zero_function()), 0.5) == 0.0;
  });
  check("sobolev norm homogeneity", [] {
    SpectrumGrid s = fourier_transform(
        make_grid_function(Descriptor::make("gaussian")));
    const double n1 = sobolev_norm(s, 0.5);
    for (auto& a : s.amplitudes) a *= 2.0;
    const double n2 = sobolev_norm(s, 0.5);
    return std::abs(n2 - 2.0 * n1) < 1e-12 * n2;
  });
  check("band-limited spectrum has zero shifted tail", [] {
    SpectrumGrid s;
    s.freq_start = -2.0;
    s.freq_step = 1.0 / 64.0;
    s.amplitudes.assign(257, 1.0);
    return shifted_tail_seminorm(s, 2.0) == 0.0;
  });

  check("sine kernel diagonal", [] { return sine_kernel(0.0, 0.0) == 1.0; });
  check("sine kernel integer zero", [] {
    return std::abs(sine_kernel(0.0, 1.0)) < 1e-15;
  });
  check("trace identity L=5 n=200", [] {
    KernelEigensystem es = build_kernel_eigensystem(5.0, 200);
    return std::abs(expected_count(es) - 10.0) < 1e-6;
  });
  check("degenerate eigensystem samples empty", [] {
    QuadRule q = gauss_legendre(24, -1.0, 1.0);
    KernelEigensystem es;
    es.L = 1.0;
    es.nodes = Eigen::Map<Eigen::VectorXd>(q.nodes.data(), 24);
    es.weights = Eigen::Map<Eigen::VectorXd>(q.weights.data(), 24);
    es.eigenvalues = Eigen::VectorXd::Zero(24);
    es.eigenvectors = Eigen::MatrixXd::Identity(24, 24);
    Configuration cfg = sample_configuration(es, 1, 0);
    return cfg.points.empty() && expected_count(es) == 0.0;
  });

  check("lambda=0 symbol spectrum is zero", [] {
    GridFunction ring =
        ring_of(make_grid_function(Descriptor::make("gaussian")));
    SymbolSpectrum sym = build_symbol(ring, 0.0, 2.0);
    return std::abs(sym.a_hat(0.5)) == 0.0 && std::abs(sym.a_hat(2.0)) == 0.0;
  });
  check("unimodular symbol within distance 2", [] {
    const Descriptor ring = Descriptor::make("lorentzian").ring();
    double sup = 0.0;
    for (int k = -4000; k <= 4000; ++k) {
      const cplx s = std::exp(0.7 * ring.eval(k / 100.0)) - 1.0;
      sup = std::max(sup, std::abs(s));
    }
    return sup <= 2.0 + 1e-9;
  });
  check("hs norm vanishes at lambda=0", [] {
    GridFunction ring =
        ring_of(make_grid_function(Descriptor::make("gaussian")));
    SymbolSpectrum sym = build_symbol(ring, 0.0, 2.0);
    return hankel_hs_norm(sym, '+') == 0.0;
  });
  check("determinant at lambda=0 is one", [] {
    GridFunction f = make_grid_function(Descriptor::make("lorentzian"));
    DeterminantEvaluation ev = fredholm_det_V(f, 0.0, 5.0, 64);
    return ev.value == cplx(1.0);
  });

  check("cauchy derivative of constant", [] {
    CauchyDerivative cd = cauchy_derivative_general(
        [](cplx) { return cplx(1.0); }, 0.5, 1.0, 64);
    return std::abs(cd.derivative) < 1e-10;
  });
  check("cauchy derivative of quadratic", [] {
    auto sq = [](cplx z) { return z * z; };
    CauchyDerivative at0 = cauchy_derivative_general(sq, 0.0, 1.0, 64);
    CauchyDerivative at1 = cauchy_derivative_general(sq, 1.0, 1.0, 64);
    return std::abs(at0.derivative) < 1e-10 &&
           std::abs(at1.derivative - 2.0) < 1e-10;
  });

  check("additive functional of empty configuration", [] {
    Configuration cfg;
    GridFunction g = make_grid_function(Descriptor::make("gaussian"));
    return additive_functional(cfg, g) == 0.0;
  });
  check("additive functional single gaussian point", [] {
    Configuration cfg;
    cfg.points = {0.0};
    GridFunction g = make_grid_function(Descriptor::make("gaussian"), -8.0,
                                        1.0 / 64.0, 1025);
    return std::abs(additive_functional(cfg, g) - 1.0) < 1e-12;
  });
  check("additive functional hat at {0,1}", [] {
    Configuration cfg;
    cfg.points = {0.0, 1.0};
    GridFunction g = make_grid_function(Descriptor::make("hat"), -2.0,
                                        1.0 / 64.0, 257);
    return std::abs(additive_functional(cfg, g) - 1.0) < 1e-12;
  });
  check("variance integrand vanishes for constant f", [] {
    QuadRule q = gauss_legendre(40, -3.0, 3.0);
    double acc = 0.0;
    for (int i = 0; i < 40; ++i)
      for (int j = 0; j < 40; ++j) {
        const double k = sine_kernel(q.nodes[i], q.nodes[j]);
        const double df = 1.0 - 1.0;
        acc += 0.5 * q.weights[i] * q.weights[j] * k * k * df * df;
      }
    return acc == 0.0;
  });

  check("monte carlo mean within 3 stderr", [] {
    GridFunction f = make_grid_function(Descriptor::make("gaussian"));
    SampleSummary s = monte_carlo_statistics(f, 0.5, 400, 7);
    return std::abs(s.mean) <= 3.0 * std::sqrt(s.variance / s.N);
  });
  check("monte carlo reproducibility", [] {
    GridFunction f = make_grid_function(Descriptor::make("gaussian"));
    SampleSummary s1 = monte_carlo_statistics(f, 0.5, 100, 11);
    SampleSummary s2 = monte_carlo_statistics(f, 0.5, 100, 11);
    return s1.values == s2.values && s1.mean == s2.mean;
  });

  check("ks of exact quantiles", [] {
    const int n = 1000;
    std::vector<double> x(n);
    for (int k = 1; k <= n; ++k) x[k - 1] = normal_quantile((k - 0.5) / n);
    return ks_distance(x, 1.0) <= 1.0 / (2.0 * n) + 1e-6;
  });
  check("ks of degenerate zeros", [] {
    std::vector<double> x(10, 0.0);
    return std::abs(ks_distance(x, 1.0) - 0.5) < 1e-12;
  });

  check("esseen rejects sigma=0", [] {
    try {
      esseen_bound_with([](cplx) { return cplx(1.0); }, 0.0);
    } catch (const DomainError&) {
      return true;
    }
    return false;
  });
  check("esseen with unit W", [] {
    BoundReport b = esseen_bound_with([](cplx) { return cplx(1.0); }, 1.0);
    return std::abs(b.bound - 4.0 / 512.0) < 1e-10 && b.kappa0 == 0.0;
  });

  check("rate fit inverse_linear synthetic", [] {
    std::vector<std::pair<double, double>> pts;
    for (double R : {5.0, 10.0, 20.0, 40.0}) pts.emplace_back(R, 3.0 / R);
    RateReport r = rate_fit(pts, RateModel::inverse_linear);
    double worst = 0.0;
    for (double e : r.residuals) worst = std::max(worst, std::abs(e));
    return std::abs(r.c - 3.0) < 1e-12 && worst < 1e-12;
  });
  check("rate fit inverse_log synthetic", [] {
    std::vector<std::pair<double, double>> pts;
    for (double R : {5.0, 10.0, 20.0, 40.0})
      pts.emplace_back(R, 2.0 / std::log(R));
    RateReport r = rate_fit(pts, RateModel::inverse_log);
    double worst = 0.0;
    for (double e : r.residuals) worst = std::max(worst, std::abs(e));
    return std::abs(r.c - 2.0) < 1e-12 && worst < 1e-12;
  });

  return out;
}

}  // namespace sinelab
