#include "sinelab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "sinelab/errors.hpp"

namespace sinelab {

namespace {

cplx interp(double start, double step, const std::vector<cplx>& v, double x,
            bool zero_outside) {
  const double s = (x - start) / step;
  if (s < 0.0 || s > (double)(v.size() - 1)) {
    if (zero_outside) return 0.0;
    throw RangeError("grid: coordinate outside tabulated range");
  }
  const int i = std::min((int)s, (int)v.size() - 2);
  const double f = s - i;
  return (1.0 - f) * v[i] + f * v[i + 1];
}

double l2(const std::vector<cplx>& v, double step) {
  double s = 0.0;
  for (const cplx& z : v) s += std::norm(z);
  return std::sqrt(s * step);
}

}  // namespace

cplx GridFunction::value_at(double t) const {
  return interp(grid_start, grid_step, values, t, false);
}

double GridFunction::sup_abs() const {
  double m = 0.0;
  for (const cplx& z : values) m = std::max(m, std::abs(z));
  return m;
}

double GridFunction::l2_norm() const { return l2(values, grid_step); }

cplx SpectrumGrid::amplitude_at(double xi) const {
  return interp(freq_start, freq_step, amplitudes, xi, true);
}

double SpectrumGrid::l2_norm() const { return l2(amplitudes, freq_step); }

GridFunction make_grid_function(const Descriptor& d, double grid_start,
                                double grid_step, int n_points) {
  if (n_points < 2) throw DomainError("make_grid_function: n_points < 2");
  if (!(grid_step > 0.0)) throw DomainError("make_grid_function: bad step");
  GridFunction g;
  g.grid_start = grid_start;
  g.grid_step = grid_step;
  g.descriptor = d;
  g.values.resize(n_points);
  for (int k = 0; k < n_points; ++k) {
    const cplx v = d.eval(grid_start + k * grid_step);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw DomainError("make_grid_function: non-finite sample");
    g.values[k] = v;
  }
  return g;
}

GridFunction make_grid_function(const Descriptor& d) {
  const double step = 1.0 / 64.0;
  const double floor = 1e-10 * std::abs(d.amplitude);
  double half = 8.0 * d.scale;
  if (d.shape == Shape::indicator) half = 2.0 * d.scale * d.half_width;
  while (half < 4096.0 &&
         (std::abs(d.eval(half)) > floor || std::abs(d.eval(-half)) > floor))
    half *= 2.0;
  const int n = (int)std::lround(2.0 * half / step);
  return make_grid_function(d, -half, step, n + 1);
}

void export_csv(const GridFunction& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::ios_base::failure("cannot open " + path);
  out << "t,re,im\n";
  for (int k = 0; k < g.size(); ++k)
    out << g.coord(k) << ',' << g.values[k].real() << ','
        << g.values[k].imag() << '\n';
}

void export_csv(const SpectrumGrid& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::ios_base::failure("cannot open " + path);
  out << "xi,re,im\n";
  for (int k = 0; k < s.size(); ++k)
    out << s.freq(k) << ',' << s.amplitudes[k].real() << ','
        << s.amplitudes[k].imag() << '\n';
}

}  // namespace sinelab
