#pragma once

#include <functional>
#include <memory>

#include "sinelab/funcspace.hpp"
#include "sinelab/grid.hpp"

namespace sinelab {

struct SymbolOptions {
  double beta = -1.0;       // contour damping; negative selects the policy:
                            // 0.5*strip for strip-holomorphic rings, else 0
  double du = 0.0;          // base-variable grid step; 0 = adaptive:
                            // min(1/128, pi / (3*s0 + 40)) so the spectrum
                            // range covers the shifted-tail integrand
  double half_width = 2048.0;
  double taper_frac = 0.05; // smooth window taper on the outer fraction
  double overflow_guard = 30.0;  // max |Re(lambda * ring)| allowed
};

// One-sided spectrum stored in damped form: c_hat(v) = exp(-beta*v) * J(v)
// for v >= 0. This keeps relative accuracy when c_hat decays exponentially.
struct TailSpectrum {
  double dv = 0.0;
  double beta = 0.0;
  std::vector<cplx> J;
  cplx at(double v) const;       // c_hat(v); 0 beyond the table
  cplx j_at(double v) const;     // undamped J(v)
};

struct SymbolSpectrum {
  std::shared_ptr<const GridFunction> f_ring;
  cplx lambda;
  double R = 1.0;
  double s0 = 0.0;  // 2*pi*R: symbol argument is ring(u / s0)
  TailSpectrum a_spec;  // spectrum of exp(+lambda ring) - 1, base variable
  TailSpectrum b_spec;  // reflected spectrum of exp(-lambda ring) - 1
  bool shared_b = true;
  double du = 0.0, half_width = 0.0;

  // np-convention transforms of the rescaled symbols, argument xi >= 0:
  // a_hat(xi) = int (exp(lambda ring(t/s0)) - 1) e^{-i xi t} dt
  cplx a_hat(double xi) const;
  // b_check(xi) = b_hat(-xi), the reflected-argument spectrum
  cplx b_check(double xi) const;

  // Unitary-convention SpectrumGrid view (subject to underflow when the
  // damped tail is below the representable range).
  SpectrumGrid to_spectrum_grid(bool a_side = true) const;
};

SymbolSpectrum build_symbol(const GridFunction& f_ring, cplx lambda, double R,
                            const SymbolOptions& opt = {});

struct HsRoutes {
  double spectral = 0.0;   // route (a): shifted tail integral of the spectrum
  double frobenius = 0.0;  // route (b): Frobenius norm of the Nystrom block
  bool frobenius_valid = false;
  // FFT round-off level of the tail spectrum; values at or below it carry
  // no information and the routes cannot be expected to agree.
  double noise_floor = 0.0;
};

HsRoutes hankel_hs_norm_routes(const SymbolSpectrum& sym, char side,
                               int n_quad = 128);

// Primary return is route (a); throws ConsistencyError if the routes
// disagree beyond 1e-4 relative (when route (b) is representable).
double hankel_hs_norm(const SymbolSpectrum& sym, char side);

struct DeterminantEvaluation {
  cplx lambda;
  double R = 1.0;
  int n_quad = 0;
  cplx value = 1.0;
  double hs_norm_plus = 0.0;
  double hs_norm_minus = 0.0;
  // truncation diagnostics
  double beta = 0.0, du = 0.0, half_width = 0.0;
  double convergence_gap = -1.0;  // |V(n_quad) - V(2 n_quad)| if requested
};

struct DetOptions {
  int n_quad = 128;
  bool check_convergence = false;
  double conditioning_guard = 50.0;  // on hs_plus * hs_minus
  SymbolOptions sym;
};

DeterminantEvaluation fredholm_det_V(const GridFunction& f, cplx lambda,
                                     double R, int n_quad);
DeterminantEvaluation fredholm_det_V(const GridFunction& f, cplx lambda,
                                     double R, const DetOptions& opt);

// Same evaluation with a precomputed ring function (avoids re-deriving it
// on every call in parameter sweeps).
DeterminantEvaluation fredholm_det_from_ring(const GridFunction& ring,
                                             cplx lambda, double R,
                                             const DetOptions& opt);

// Hardy-ring companion of a test function: closed form when the descriptor
// admits one, otherwise the numerical split of its transform.
GridFunction ring_of(const GridFunction& f);

struct CauchyDerivative {
  cplx derivative;
  double max_abs = 0.0;  // max |V| on the circle
};

// d/dz at `center` of a function given on the circle |z - center| = radius,
// by the trapezoidal Cauchy formula.
CauchyDerivative cauchy_derivative_general(
    const std::function<cplx(cplx)>& fn, cplx center, double radius,
    int n_circle);

CauchyDerivative cauchy_derivative(const GridFunction& f, double lambda0,
                                   double R, int n_circle,
                                   const DetOptions& opt = {});

// Both sides of the seminorm scaling identity: first = ||h||_{H(R)} under
// the tabulated definition, second = ||h(./R)||_{H(1)}.
std::pair<double, double> seminorm_scaling_check(const SpectrumGrid& s,
                                                 double R);

}  // namespace sinelab
