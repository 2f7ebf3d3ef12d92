#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "sinelab/cltlab.hpp"
#include "sinelab/errors.hpp"
#include "sinelab/funcspace.hpp"
#include "sinelab/grid.hpp"
#include "sinelab/sinedpp.hpp"

using namespace sinelab;

namespace {
const double kPi = std::acos(-1.0);
}

TEST_CASE("limit sigma matches the closed forms") {
  GridFunction g = make_grid_function(Descriptor::make("gaussian"));
  GridFunction l = make_grid_function(Descriptor::make("lorentzian"));
  CHECK(limit_sigma(g) ==
        doctest::Approx(1.0 / std::sqrt(2.0 * kPi)).epsilon(1e-4));
  CHECK(limit_sigma(l) == doctest::Approx(std::sqrt(0.125)).epsilon(1e-4));
}

TEST_CASE("exact variance: closed-form route agrees with the spectral route") {
  for (const char* name : {"gaussian", "lorentzian", "hat"}) {
    GridFunction f = make_grid_function(Descriptor::make(name, 1.5, 0.7));
    const double closed = exact_variance(f);
    GridFunction anon = f;
    anon.descriptor.reset();  // forces the generic spectral fallback
    const double spectral = exact_variance(anon);
    CAPTURE(name);
    CHECK(closed == doctest::Approx(spectral).epsilon(2e-3));
  }
}

TEST_CASE("exact variance: counting statistic on [-5,5]") {
  GridFunction f =
      make_grid_function(Descriptor::make("indicator", 1.0, 1.0, 5.0));
  const double v = exact_variance(f);
  // asymptotic count variance (1/pi^2)(log(2 pi |I|) + gamma + 1)
  const double gamma = 0.57721566490153286;
  const double asym = (std::log(2.0 * kPi * 10.0) + gamma + 1.0) / (kPi * kPi);
  CHECK(v == doctest::Approx(asym).epsilon(0.02));
}

TEST_CASE("monte carlo sample matches the exact variance") {
  GridFunction f = make_grid_function(Descriptor::make("lorentzian"));
  const double R = 2.0;
  SampleSummary s = monte_carlo_statistics(f, R, 4000, 11);
  GridFunction fR;
  fR.grid_start = -64.0;
  fR.grid_step = 1.0 / 64.0;
  fR.values.resize(64 * 128 + 1);
  for (int k = 0; k < fR.size(); ++k)
    fR.values[k] = 1.0 / (1.0 + std::pow(fR.coord(k) / R, 2));
  fR.descriptor = Descriptor::make("lorentzian", R);
  const double vex = exact_variance(fR);
  const double se = vex * std::sqrt(2.0 / (s.N - 1.0));
  CHECK(std::abs(s.variance - vex) < 3.0 * se);
  CHECK(std::abs(s.mean) < 3.0 * std::sqrt(vex / s.N));
  CHECK(std::is_sorted(s.values.begin(), s.values.end()));
  // |f(./R)| mass beyond the window: 4 (pi/2 - atan(L / R)) for this shape
  const double tail = 4.0 * (kPi / 2.0 - std::atan(s.L / R));
  CHECK(s.truncation_error == doctest::Approx(tail).epsilon(1e-3));

  SampleSummary again = monte_carlo_statistics(f, R, 100, 11);
  SampleSummary rerun = monte_carlo_statistics(f, R, 100, 11);
  SampleSummary other = monte_carlo_statistics(f, R, 100, 12);
  CHECK(again.values == rerun.values);
  CHECK(again.values != other.values);
}

TEST_CASE("ks distance basics") {
  // sample placed exactly at the normal quantile midpoints: KS = 1/(2n)
  const int n = 40;
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) {
    const double p = (i + 0.5) / n;
    // crude quantile via bisection on Phi
    double lo = -8.0, hi = 8.0;
    for (int it = 0; it < 80; ++it) {
      const double mid = 0.5 * (lo + hi);
      (0.5 * std::erfc(-mid / std::sqrt(2.0)) < p ? lo : hi) = mid;
    }
    v[i] = 0.5 * (lo + hi);
  }
  CHECK(ks_distance(v, 1.0) == doctest::Approx(1.0 / (2.0 * n)).epsilon(1e-6));
  // wrong sigma must be detected
  CHECK(ks_distance(v, 2.0) > 0.1);
  // point mass at zero against a continuous law: distance 1/2
  std::vector<double> zeros(10, 0.0);
  CHECK(ks_distance(zeros, 1.0) == doctest::Approx(0.5));
}

TEST_CASE("esseen machinery with injected transforms") {
  EsseenOptions opt;

  SUBCASE("perfect gaussian transform") {
    BoundReport r = esseen_bound_with([](cplx) { return cplx(1.0); }, 1.0, opt);
    CHECK(r.T == 512.0);
    CHECK(r.kappa0 == 0.0);
    CHECK(r.kappa1 < 1e-12);
    CHECK(r.bound == doctest::Approx(4.0 / 512.0));
  }

  SUBCASE("constant offset") {
    BoundReport r = esseen_bound_with(
        [](cplx) { return cplx(1.001); }, 1.0, opt);
    CHECK(r.kappa0 == doctest::Approx(1e-3).epsilon(1e-6));
    CHECK(r.T == 512.0);
    CHECK(r.bound == doctest::Approx(1e-3 + 4.0 / 512.0).epsilon(1e-3));
  }

  SUBCASE("transform that fails past xi = 3") {
    auto W = [](cplx z) -> cplx {
      if (std::abs(z) > 3.0) throw ConditioningError("blow-up");
      return 1.0;
    };
    BoundReport r = esseen_bound_with(W, 1.0, opt);
    CHECK(r.first_failure_xi > 2.9);
    CHECK(r.first_failure_xi < 3.2);
    CHECK(r.T == 2.0);  // only the first T survives the sweep
    CHECK(r.bound == doctest::Approx(2.0).epsilon(0.5));
  }

  SUBCASE("sigma must be positive") {
    CHECK_THROWS_AS(
        esseen_bound_with([](cplx) { return cplx(1.0); }, 0.0, opt),
        DomainError);
  }
}

TEST_CASE("normalized transform symmetry W(-xi) = conj W(xi)") {
  GridFunction f = make_grid_function(Descriptor::make("lorentzian"));
  GridFunction ring = ring_of(f);
  const double sigma = limit_sigma(f);
  DetOptions opt;
  for (double xi : {0.5, 1.0, 2.0}) {
    const cplx wp =
        fredholm_det_from_ring(ring, cplx(0.0, xi / sigma), 2.0, opt).value;
    const cplx wm =
        fredholm_det_from_ring(ring, cplx(0.0, -xi / sigma), 2.0, opt).value;
    CHECK(std::abs(wm - std::conj(wp)) < 1e-6);
  }
}

TEST_CASE("esseen bound end to end (reduced grid)") {
  GridFunction f = make_grid_function(Descriptor::make("lorentzian"));
  EsseenOptions opt;
  opt.T_grid = {2, 4, 8};
  opt.xi_step = 0.1;
  opt.kappa1_centers = 3;
  opt.n_circle = 16;
  BoundReport r = esseen_bound(f, 5.0, opt);
  CHECK(r.bound > 0.0);
  CHECK(r.bound < 3.0);
  CHECK(r.bound == doctest::Approx(r.kappa0 + r.kappa1 + 4.0 / r.T));
  CHECK(r.sigma == doctest::Approx(std::sqrt(0.125)).epsilon(1e-3));
  REQUIRE(!r.T_grid.empty());
  CHECK(r.T_grid.size() == r.kappa0_at_T.size());
}

TEST_CASE("rate fit") {
  SUBCASE("recovers a pure inverse law") {
    std::vector<std::pair<double, double>> pts;
    for (double R : {2.0, 5.0, 10.0, 20.0, 50.0}) pts.push_back({R, 3.0 / R});
    RateReport r = rate_fit(pts, RateModel::inverse_linear);
    CHECK(r.c == doctest::Approx(3.0));
    CHECK(r.loglog_slope == doctest::Approx(-1.0).epsilon(1e-6));
    for (double res : r.residuals) CHECK(std::abs(res) < 1e-12);
  }

  SUBCASE("recovers a pure inverse-log law") {
    std::vector<std::pair<double, double>> pts;
    for (double R : {4.0, 8.0, 16.0, 64.0})
      pts.push_back({R, 2.0 / std::log(R)});
    RateReport r = rate_fit(pts, RateModel::inverse_log);
    CHECK(r.c == doctest::Approx(2.0));
  }

  SUBCASE("guards") {
    std::vector<std::pair<double, double>> few = {{2, 1}, {4, 0.5}, {8, 0.3}};
    CHECK_THROWS_AS(rate_fit(few, RateModel::inverse_linear), DomainError);
    std::vector<std::pair<double, double>> bad = {
        {0.5, 1}, {2, 0.5}, {4, 0.3}, {8, 0.2}};
    CHECK_THROWS_AS(rate_fit(bad, RateModel::inverse_log), DomainError);
  }
}

TEST_CASE("additive functional") {
  GridFunction f = make_grid_function(Descriptor::make("gaussian"));
  Configuration cfg;
  cfg.points = {-1.0, 0.0, 2.0};
  const double expect = std::exp(-1.0) + 1.0 + std::exp(-4.0);
  CHECK(additive_functional(cfg, f) == doctest::Approx(expect).epsilon(1e-9));
  Configuration outside;
  outside.points = {1e9};
  CHECK_THROWS_AS(additive_functional(outside, f), RangeError);
}
