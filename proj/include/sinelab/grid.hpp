#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sinelab/descriptor.hpp"

namespace sinelab {

struct GridFunction {
  double grid_start = 0.0;
  double grid_step = 1.0;
  std::vector<cplx> values;
  std::optional<Descriptor> descriptor;

  int size() const { return (int)values.size(); }
  double coord(int k) const { return grid_start + k * grid_step; }
  double grid_end() const { return coord(size() - 1); }

  // Linear interpolation between nodes; throws RangeError outside the grid.
  cplx value_at(double t) const;

  double sup_abs() const;
  double l2_norm() const;  // sqrt(sum |v|^2 * grid_step)
};

struct SpectrumGrid {
  double freq_start = 0.0;
  double freq_step = 1.0;
  std::vector<cplx> amplitudes;
  // Fixed unitary normalization: a_hat(xi) = (2pi)^{-1/2} int a(t) e^{-i xi t} dt.
  std::string convention = "unitary";
  std::optional<Descriptor> descriptor;  // descriptor of the time-domain source

  int size() const { return (int)amplitudes.size(); }
  double freq(int k) const { return freq_start + k * freq_step; }
  double freq_end() const { return freq(size() - 1); }

  // Linear interpolation; returns 0 outside the tabulated range.
  cplx amplitude_at(double xi) const;

  double l2_norm() const;
};

// Sample a closed-form descriptor on an explicit grid.
GridFunction make_grid_function(const Descriptor& d, double grid_start,
                                double grid_step, int n_points);

// Auto-sized window: step 1/64, power-of-two point count, half-width grown
// until |f| at the ends falls below 1e-10 (capped at 4096 for slowly
// decaying tails).
GridFunction make_grid_function(const Descriptor& d);

void export_csv(const GridFunction& g, const std::string& path);
void export_csv(const SpectrumGrid& s, const std::string& path);

}  // namespace sinelab
