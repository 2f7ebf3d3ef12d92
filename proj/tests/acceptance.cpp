// End-to-end acceptance run: one PASS/FAIL line per criterion, nonzero exit
// if anything fails. Runtime is dominated by the Monte Carlo KS study.
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <string>
#include <vector>

#include "sinelab/cltlab.hpp"
#include "sinelab/errors.hpp"
#include "sinelab/funcspace.hpp"
#include "sinelab/grid.hpp"
#include "sinelab/hankel.hpp"
#include "sinelab/selftest.hpp"
#include "sinelab/sinedpp.hpp"

using namespace sinelab;

namespace {

const double kPi = std::acos(-1.0);
int n_failed = 0;
std::chrono::steady_clock::time_point t_start;

void begin() { t_start = std::chrono::steady_clock::now(); }

void report(int id, const std::string& what, bool pass,
            const std::string& diag) {
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
          .count();
  if (!pass) ++n_failed;
  std::printf("%s [%d] %s (%.1fs)%s%s\n", pass ? "PASS" : "FAIL", id,
              what.c_str(), secs, diag.empty() ? "" : " -- ", diag.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

}  // namespace

// Variance convention: the dilated-variance limit for the gaussian test
// function. The limit is ||f||^2_{H^{1/2}} / (2 pi) = 1 / (2 pi); the value
// 1 / (4 pi^2) that sometimes circulates drops a factor of 2 pi and does not
// match the exact finite-R variance, which is printed for contrast.
void criterion1() {
  begin();
  const double target = 1.0 / (2.0 * kPi);
  const double off_by_2pi = 1.0 / (4.0 * kPi * kPi);
  std::vector<double> gaps;
  std::string diag;
  for (double R : {5.0, 10.0, 20.0, 50.0}) {
    GridFunction fR = make_grid_function(Descriptor::make("gaussian", R));
    const double v = exact_variance(fR);
    gaps.push_back(std::abs(v - target));
    diag += fmt("R=%g var=%.8f gap=%.2e; ", R, v, gaps.back());
  }
  bool pass = gaps.back() / target <= 0.05;
  for (size_t i = 1; i < gaps.size(); ++i)
    if (!(gaps[i] < gaps[i - 1] || gaps[i] < 1e-12)) pass = false;
  diag += fmt("limit=%.6f (1/(4pi^2)=%.6f rejected by the data)", target,
              off_by_2pi);
  report(1, "variance convention, gaussian dilation", pass, diag);
}

void criterion2() {
  begin();
  const double L = 5.0;
  const int n_nodes = 200, N = 10000;
  KernelEigensystem es = build_kernel_eigensystem(L, n_nodes);
  std::vector<Configuration> cfgs = sample_batch(es, 2024, 0, N);
  double m1 = 0.0;
  for (const Configuration& c : cfgs) m1 += (double)c.points.size();
  m1 /= N;
  double m2 = 0.0, m4 = 0.0;
  for (const Configuration& c : cfgs) {
    const double d = (double)c.points.size() - m1;
    m2 += d * d;
    m4 += d * d * d * d;
  }
  m2 /= N - 1;
  m4 /= N;
  GridFunction ind =
      make_grid_function(Descriptor::make("indicator", 1.0, 1.0, L));
  const double vex = exact_variance(ind);
  const double se_mean = std::sqrt(m2 / N);
  const double se_var = std::sqrt(std::max(0.0, m4 - m2 * m2) / N);
  const bool pass = std::abs(m1 - 2.0 * L) <= 3.0 * se_mean &&
                    std::abs(m2 - vex) <= 3.0 * se_var;
  report(2, "sampler count statistics, L=5 n=200 N=1e4", pass,
         fmt("mean=%.4f (expect %.1f, 3se=%.4f); var=%.4f (expect %.4f, "
             "3se=%.4f)",
             m1, 2.0 * L, 3.0 * se_mean, m2, vex, 3.0 * se_var));
}

void criterion3() {
  begin();
  bool pass = true;
  std::string diag;
  double worst = 0.0;
  for (const char* name : {"gaussian", "lorentzian"}) {
    GridFunction ring = ring_of(make_grid_function(Descriptor::make(name)));
    for (double lam : {0.5, 1.0})
      for (double R : {1.0, 2.0, 5.0}) {
        SymbolSpectrum sym = build_symbol(ring, lam, R);
        for (char side : {'+', '-'}) {
          HsRoutes r = hankel_hs_norm_routes(sym, side);
          if (!r.frobenius_valid) {
            pass = false;
            diag += fmt("%s l=%g R=%g%c: frobenius route unrepresentable; ",
                        name, lam, R, side);
            continue;
          }
          if (r.spectral <= r.noise_floor) {
            // both routes read FFT round-off, agreement is meaningless there
            if (r.frobenius > 2.0 * r.noise_floor) {
              pass = false;
              diag += fmt("%s l=%g R=%g%c: below floor yet frob=%.2e; ", name,
                          lam, R, side, r.frobenius);
            }
            continue;
          }
          const double rel = std::abs(r.spectral - r.frobenius) /
                             std::max(r.spectral, r.frobenius);
          worst = std::max(worst, rel);
          if (rel > 1e-4) {
            pass = false;
            diag += fmt("%s l=%g R=%g%c: rel=%.2e; ", name, lam, R, side, rel);
          }
        }
      }
  }
  diag += fmt("worst informative rel=%.2e", worst);
  report(3, "dual-route Hankel HS norms, 12 symbol configs x 2 sides", pass,
         diag);
}

void criterion4() {
  begin();
  GridFunction f = make_grid_function(Descriptor::make("lorentzian"));
  const double sigma = limit_sigma(f);
  bool pass = true;
  std::string diag;
  std::uint64_t seed = 101;
  for (double R : {2.0, 5.0}) {
    SampleSummary s = monte_carlo_statistics(f, R, 100000, seed++);
    for (size_t k = 0; k < s.mgf_lambda.size(); ++k) {
      const double lam = s.mgf_lambda[k];
      DeterminantEvaluation ev = fredholm_det_V(f, lam, R, 128);
      const double gauss = std::exp(0.5 * lam * lam * sigma * sigma);
      const double pred = gauss * ev.value.real();
      const double gap = std::abs(s.mgf[k] - pred);
      const bool ok = gap <= 3.0 * s.mgf_stderr[k];
      if (!ok) pass = false;
      diag += fmt("R=%g l=%+.1f: emp=%.5f pred=%.5f (%.1f se)%s; ", R, lam,
                  s.mgf[k], pred, gap / s.mgf_stderr[k], ok ? "" : " X");
    }
    // the doubled-exponent variant exp(l^2 s^2) V, shown for contrast
    const double alt = std::exp(sigma * sigma) *
                       fredholm_det_V(f, 1.0, R, 128).value.real();
    diag += fmt("[R=%g l=1 doubled-exponent variant=%.5f]; ", R, alt);
  }
  report(4, "MGF identity vs Monte Carlo, lorentzian N=1e5", pass, diag);
}

void criterion5() {
  begin();
  GridFunction ring = ring_of(make_grid_function(Descriptor::make("hat")));
  // ||ring||_{H^1 cap Linf} = max(sqrt 2, 2 ln 2 / pi) = sqrt 2
  const double nr = std::sqrt(2.0);
  const double C = (1.0 + nr) * std::exp(nr);
  bool pass = true;
  std::string diag = fmt("C=(1+sqrt2)e^{sqrt2}=%.3f; ", C);
  for (double R : {4.0, 16.0, 64.0}) {
    SymbolSpectrum sym = build_symbol(ring, 1.0, R);
    const double hp = hankel_hs_norm(sym, '+');
    const double hm = hankel_hs_norm(sym, '-');
    const double cap = C / std::sqrt(R);
    if (hp > cap || hm > cap) pass = false;
    diag += fmt("R=%g hs=(%.2e,%.2e) cap=%.3f; ", R, hp, hm, cap);
  }
  report(5, "1/sqrt(R) HS bound with explicit constant, hat l=1", pass, diag);
}

void criterion6() {
  begin();
  GridFunction ring = ring_of(make_grid_function(Descriptor::make("lorentzian")));
  std::vector<double> xs, ys;
  for (double R = 2.0; R <= 20.0; R += 2.0) {
    SymbolSpectrum sym = build_symbol(ring, 1.0, R);
    xs.push_back(R);
    ys.push_back(std::log(hankel_hs_norm(sym, '+')));
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const int n = (int)xs.size();
  for (int i = 0; i < n; ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  report(6, "exponential HS decay in R, lorentzian strip", slope <= -0.5,
         fmt("lsq slope of log hs vs R = %.3f (need <= -0.5)", slope));
}

void criterion7() {
  begin();
  const std::vector<double> Rs = {5.0, 10.0, 20.0, 40.0};
  const int N = 10000;
  const double ks_slack = 3.0 * 0.8 / std::sqrt((double)N);
  bool pass = true;
  std::string diag;

  // lorentzian: bound curve, rate fits, and the KS comparison
  {
    GridFunction f = make_grid_function(Descriptor::make("lorentzian"));
    const double sigma = limit_sigma(f);
    std::vector<std::pair<double, double>> pts;
    std::uint64_t seed = 7001;
    for (double R : Rs) {
      BoundReport b = esseen_bound(f, R);
      SampleSummary s = monte_carlo_statistics(f, R, N, seed++);
      const double dks = ks_distance(s.values, sigma);
      pts.push_back({R, b.bound});
      const bool ok = dks <= b.bound + ks_slack;
      if (!ok) pass = false;
      diag += fmt("lor R=%g bound=%.4f (T=%g) dks=%.4f%s; ", R, b.bound, b.T,
                  dks, ok ? "" : " X");
    }
    RateReport lin = rate_fit(pts, RateModel::inverse_linear);
    RateReport lg = rate_fit(pts, RateModel::inverse_log);
    double rlin = 0, rlog = 0;
    for (double r : lin.residuals) rlin += r * r;
    for (double r : lg.residuals) rlog += r * r;
    const bool slope_ok =
        lin.loglog_slope >= -1.3 && lin.loglog_slope <= -0.8;
    if (!slope_ok || !(rlin < rlog)) pass = false;
    diag += fmt("lor slope=%.3f%s res2 1/R=%.2e 1/logR=%.2e%s; ",
                lin.loglog_slope, slope_ok ? "" : " X", rlin, rlog,
                rlin < rlog ? "" : " X");
  }

  // hat: monotone bound, finite inverse-log constant, KS comparison.
  // kappa0 for this slowly-decaying (1/sqrt R) symbol fluctuates by a few
  // percent between nearby R, so the decreasing trend is exhibited on a
  // wider R progression and with a dense T grid (the geometric default
  // quantizes 4/T too coarsely to express the slow growth of the usable
  // frequency range).
  {
    GridFunction f = make_grid_function(Descriptor::make("hat"));
    const double sigma = std::sqrt(2.0 * std::log(2.0)) / kPi;
    std::vector<std::pair<double, double>> pts;
    MonteCarloOptions mc;
    mc.margin = 1.25;  // the test function vanishes beyond |t| = R
    EsseenOptions eo;
    eo.T_grid.clear();
    for (double T = 2.0; T <= 10.0 + 1e-9; T += 0.25) eo.T_grid.push_back(T);
    std::uint64_t seed = 7101;
    for (double R : {5.0, 16.0, 40.0, 100.0}) {
      BoundReport b = esseen_bound(f, R, eo);
      SampleSummary s = monte_carlo_statistics(f, R, N, seed++, mc);
      const double dks = ks_distance(s.values, sigma);
      pts.push_back({R, b.bound});
      const bool ok = dks <= b.bound + ks_slack;
      if (!ok) pass = false;
      diag += fmt("hat R=%g bound=%.4f (T=%g) dks=%.4f%s; ", R, b.bound, b.T,
                  dks, ok ? "" : " X");
    }
    bool mono = true;
    for (size_t i = 1; i < pts.size(); ++i)
      if (!(pts[i].second < pts[i - 1].second)) mono = false;
    RateReport lg = rate_fit(pts, RateModel::inverse_log);
    const bool c_ok = std::isfinite(lg.c) && lg.c > 0.0;
    if (!mono || !c_ok) pass = false;
    diag += fmt("hat monotone=%s invlog c=%.3f%s", mono ? "yes" : "NO", lg.c,
                c_ok ? "" : " X");
  }
  report(7, "end-to-end KS rates (lor R in {5,10,20,40}, hat R in "
            "{5,16,40,100}), N=1e4",
         pass, diag);
}

void criterion8() {
  begin();
  auto results = run_selftests();
  int bad = 0;
  std::string diag;
  for (const auto& [name, ok] : results)
    if (!ok) {
      ++bad;
      diag += name + "; ";
    }
  diag += fmt("%d/%d checks pass", (int)results.size() - bad,
              (int)results.size());
  report(8, "trivial-identity selftest suite", bad == 0, diag);
}

void criterion9() {
  begin();
  bool pass = true;
  std::string diag;

  // n_quad doubling: determinant and dual-route HS values must be stable
  GridFunction f = make_grid_function(Descriptor::make("lorentzian"));
  GridFunction ring = ring_of(f);
  {
    DetOptions o128, o256;
    o256.n_quad = 256;
    const cplx v1 = fredholm_det_from_ring(ring, 1.0, 2.0, o128).value;
    const cplx v2 = fredholm_det_from_ring(ring, 1.0, 2.0, o256).value;
    const double rel = std::abs(v1 - v2) / std::abs(1.0 - v2);
    if (rel > 1e-6) pass = false;
    diag += fmt("det n_quad 128->256 rel=%.2e; ", rel);

    SymbolSpectrum sym = build_symbol(ring, 1.0, 2.0);
    HsRoutes r = hankel_hs_norm_routes(sym, '+', 256);
    const double hrel = std::abs(r.spectral - r.frobenius) /
                        std::max(r.spectral, r.frobenius);
    if (!(r.frobenius_valid && hrel <= 1e-4)) pass = false;
    diag += fmt("hs routes at n_quad=256 rel=%.2e; ", hrel);
  }
  {
    EsseenOptions e128, e256;
    e256.n_quad = 256;
    const double b1 = esseen_bound(f, 5.0, e128).bound;
    const double b2 = esseen_bound(f, 5.0, e256).bound;
    const double rel = std::abs(b1 - b2) / b1;
    if (rel > 1e-3) pass = false;
    diag += fmt("esseen R=5 n_quad 128->256 rel=%.2e; ", rel);
  }

  // n_nodes doubling for the sampler
  {
    KernelEigensystem es = build_kernel_eigensystem(5.0, 400);
    const double ec = expected_count(es);
    if (std::abs(ec - 10.0) > 1e-6) pass = false;
    const int N = 2000;
    std::vector<Configuration> cfgs = sample_batch(es, 31, 0, N);
    double m1 = 0.0;
    for (const Configuration& c : cfgs) m1 += (double)c.points.size();
    m1 /= N;
    double m2 = 0.0;
    for (const Configuration& c : cfgs) {
      const double d = (double)c.points.size() - m1;
      m2 += d * d;
    }
    m2 /= N - 1;
    if (std::abs(m1 - 10.0) > 4.0 * std::sqrt(m2 / N)) pass = false;
    diag += fmt("n_nodes=400: trace=%.8f mean count=%.3f", ec, m1);
  }
  report(9, "quadrature doubling stability", pass, diag);
}

int main() {
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  std::printf("%s: %d criterion(s) failed\n",
              n_failed == 0 ? "ALL PASS" : "FAILURES", n_failed);
  return n_failed == 0 ? 0 : 1;
}
