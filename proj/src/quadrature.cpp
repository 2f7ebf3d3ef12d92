#include "sinelab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sinelab/errors.hpp"

namespace sinelab {

QuadRule gauss_legendre(int n, double a, double b) {
  if (n < 1) throw DomainError("gauss_legendre: n < 1");
  if (!(b > a)) throw DomainError("gauss_legendre: empty interval");
  QuadRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  const double xm = 0.5 * (b + a);
  const double xl = 0.5 * (b - a);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Newton iteration on P_n, Chebyshev-like initial guess.
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (z * p0 - p1) / (z * z - 1.0);
      double dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    r.nodes[i] = xm - xl * z;
    r.nodes[n - 1 - i] = xm + xl * z;
    r.weights[i] = 2.0 * xl / ((1.0 - z * z) * pp * pp);
    r.weights[n - 1 - i] = r.weights[i];
  }
  return r;
}

double integrate(const std::function<double(double)>& fn, double a, double b,
                 const std::vector<double>& breakpoints, double panel_width,
                 int deg) {
  if (!(b > a)) return 0.0;
  std::vector<double> edges{a, b};
  for (double c : breakpoints)
    if (c > a && c < b) edges.push_back(c);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  const QuadRule base = gauss_legendre(deg, 0.0, 1.0);
  double total = 0.0;
  for (size_t e = 0; e + 1 < edges.size(); ++e) {
    const double lo = edges[e], hi = edges[e + 1];
    const int np = std::max(1, (int)std::ceil((hi - lo) / panel_width));
    const double h = (hi - lo) / np;
    for (int p = 0; p < np; ++p) {
      const double p0 = lo + p * h;
      double s = 0.0;
      for (int k = 0; k < deg; ++k)
        s += base.weights[k] * fn(p0 + h * base.nodes[k]);
      total += s * h;
    }
  }
  return total;
}

}  // namespace sinelab
