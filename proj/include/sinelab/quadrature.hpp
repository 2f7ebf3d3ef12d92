#pragma once

#include <functional>
#include <vector>

namespace sinelab {

struct QuadRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Gauss-Legendre rule on [a, b].
QuadRule gauss_legendre(int n, double a, double b);

// Integrate fn over [a, b] with a composite GL rule: panels of width
// <= panel_width, deg nodes per panel, panel edges aligned with the
// supplied breakpoints where they fall inside [a, b].
double integrate(const std::function<double(double)>& fn, double a, double b,
                 const std::vector<double>& breakpoints = {},
                 double panel_width = 0.5, int deg = 12);

}  // namespace sinelab
