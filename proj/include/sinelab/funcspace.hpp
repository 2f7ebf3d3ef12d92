#pragma once

#include "sinelab/grid.hpp"

namespace sinelab {

struct HolomorphicDescriptor {
  Descriptor base;
  double delta;  // strip half-width; must not exceed the closed form's strip

  static HolomorphicDescriptor make(const Descriptor& d, double delta);
  cplx eval(cplx z) const;
};

struct TransformOptions {
  double tail_tol = 1e-6;      // relative decay required at the grid ends
  int min_half_points = 131072;  // zero-pad target (freq resolution)
};

// Unitary continuous Fourier transform approximated on the grid. The input
// window is zero-padded so the frequency step is fine enough for the
// spectral quadratures downstream.
SpectrumGrid fourier_transform(const GridFunction& g,
                               const TransformOptions& opt = {});
GridFunction inverse_transform(const SpectrumGrid& s);

// (int |xi|^{2*order} |f_hat|^2 dxi)^{1/2} by trapezoid on the grid.
double sobolev_norm(const SpectrumGrid& s, double order);

struct HardySplit {
  GridFunction f_plus;   // frequencies >= 0
  GridFunction f_minus;  // frequencies < 0
  GridFunction f_ring;   // f_minus - f_plus
};

HardySplit hardy_split(const SpectrumGrid& s);

double hl_norm(const HolomorphicDescriptor& h, int n_lines = 33);

// (int_1^inf xi |h_hat(xi+R)|^2 dxi)^{1/2} on the tabulated spectrum.
double shifted_tail_seminorm(const SpectrumGrid& s, double R);

// Same integral with a configurable lower endpoint (in the shifted variable);
// shifted_tail_seminorm is xi_lower = 1.
double shifted_tail_integral(const SpectrumGrid& s, double R, double xi_lower);

}  // namespace sinelab
