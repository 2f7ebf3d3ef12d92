#pragma once

#include <cstdint>
#include <vector>

#include "sinelab/grid.hpp"
#include "sinelab/hankel.hpp"
#include "sinelab/sinedpp.hpp"

namespace sinelab {

double additive_functional(const Configuration& cfg, const GridFunction& g);

// Variance of S_g under the sine process (the exact double-integral
// identity, reduced through the autocorrelation of g).
double exact_variance(const GridFunction& g);

struct SampleSummary {
  double R = 1.0;
  int N = 0;
  double L = 0.0;  // sampling window half-width
  int n_nodes = 0;
  std::vector<double> values;  // centered statistics, sorted (the ECDF)
  double mean = 0.0, variance = 0.0;
  std::vector<double> mgf_lambda, mgf, mgf_stderr;
  std::vector<double> chf_xi;
  std::vector<cplx> chf;
  double truncation_error = 0.0;  // integral of |f(./R)| beyond the window
  std::uint64_t seed = 0;
};

struct MonteCarloOptions {
  double margin = 8.0;      // window half-width = margin * R
  int n_nodes = 0;          // 0: ceil(4 * L) rounded up a little
  int workers = 1;
  std::vector<double> mgf_lambda = {-1.0, -0.5, 0.5, 1.0};
  std::vector<double> chf_xi = {-4, -2, -1, -0.5, 0.5, 1, 2, 4};
};

SampleSummary monte_carlo_statistics(const GridFunction& f, double R, int N,
                                     std::uint64_t seed,
                                     const MonteCarloOptions& opt = {});

// Supremum over both one-sided limits of |ECDF - Phi(x / sigma)|;
// `sorted_sample` must be ascending.
double ks_distance(const std::vector<double>& sorted_sample, double sigma);

struct BoundReport {
  double R = 0.0;
  double sigma = 0.0;
  double T = 0.0;
  double kappa0 = 0.0, kappa1 = 0.0;
  double bound = 0.0;  // kappa0 + kappa1 + 4/T
  // diagnostics
  double xi_step = 0.0;
  double first_failure_xi = -1.0;  // first grid point where the determinant
                                   // evaluation failed; -1 if none
  std::vector<double> T_grid;
  std::vector<double> kappa0_at_T;
};

struct EsseenOptions {
  std::vector<double> T_grid = {2, 4, 8, 16, 32, 64, 128, 256, 512};
  double xi_step = 0.05;
  int n_circle = 64;
  int kappa1_centers = 11;
  int n_quad = 128;
  SymbolOptions sym;
};

BoundReport esseen_bound(const GridFunction& f, double R,
                         const EsseenOptions& opt = {});

// Same smoothing-inequality machinery for a caller-supplied normalized
// Fourier transform W(xi) (entire in xi); useful for diagnostics.
BoundReport esseen_bound_with(const std::function<cplx(cplx)>& W,
                              double sigma, const EsseenOptions& opt = {});

enum class RateModel { inverse_log, inverse_linear };

struct RateReport {
  RateModel model;
  std::vector<std::pair<double, double>> points;  // (R, value)
  double c = 0.0;  // least squares through the origin in 1/log R or 1/R
  std::vector<double> residuals;
  double loglog_slope = 0.0, loglog_intercept = 0.0;  // free diagnostic fit
};

RateReport rate_fit(const std::vector<std::pair<double, double>>& points,
                    RateModel model);

// Limit standard deviation of the centered statistic under dilation,
// computed from the spectrum of f.
double limit_sigma(const GridFunction& f);

}  // namespace sinelab
