#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

namespace sinelab {

struct KernelEigensystem {
  double L = 0.0;
  Eigen::VectorXd nodes;    // Gauss-Legendre nodes in [-L, L]
  Eigen::VectorXd weights;  // positive quadrature weights
  Eigen::VectorXd eigenvalues;  // clipped to [0, 1], descending
  // Columns orthonormal in plain l2; the weighted-inner-product
  // eigenfunctions are columns divided by sqrt(weights) elementwise.
  Eigen::MatrixXd eigenvectors;
};

struct Configuration {
  std::vector<double> points;  // strictly increasing, inside [-L, L]
  std::uint64_t seed = 0;
  std::uint64_t replicate = 0;
};

// sin(pi(x-y)) / (pi(x-y)), with the removable singularity filled in.
double sine_kernel(double x, double y);

KernelEigensystem build_kernel_eigensystem(double L, int n_nodes);

double expected_count(const KernelEigensystem& es);

Configuration sample_configuration(const KernelEigensystem& es,
                                   std::uint64_t seed,
                                   std::uint64_t replicate);

// Replicates [rep_begin, rep_begin + n_reps); results depend only on
// (seed, replicate), not on batching or worker count.
std::vector<Configuration> sample_batch(const KernelEigensystem& es,
                                        std::uint64_t seed,
                                        std::uint64_t rep_begin, int n_reps,
                                        int workers = 1);

void export_csv(const Configuration& cfg, const std::string& path);

}  // namespace sinelab
