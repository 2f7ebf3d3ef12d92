#include "sinelab/sinedpp.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <thread>

#include "sinelab/errors.hpp"
#include "sinelab/quadrature.hpp"

namespace sinelab {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kEigTol = 1e-8;
constexpr double kKeepTol = 1e-12;  // eigenvalues below this never fire
}  // namespace

double sine_kernel(double x, double y) {
  const double r = kPi * (x - y);
  if (std::abs(r) < 1e-14) return 1.0;
  return std::sin(r) / r;
}

KernelEigensystem build_kernel_eigensystem(double L, int n_nodes) {
  if (!(L > 0.0)) throw DomainError("eigensystem: L must be positive");
  if (n_nodes < 4.0 * L)
    throw ResolutionError("eigensystem: n_nodes below 4*L resolution guard");

  QuadRule q = gauss_legendre(n_nodes, -L, L);
  Eigen::MatrixXd A(n_nodes, n_nodes);
  std::vector<double> sw(n_nodes);
  for (int i = 0; i < n_nodes; ++i) sw[i] = std::sqrt(q.weights[i]);
  for (int i = 0; i < n_nodes; ++i)
    for (int j = 0; j <= i; ++j) {
      const double v = sw[i] * sw[j] * sine_kernel(q.nodes[i], q.nodes[j]);
      A(i, j) = v;
      A(j, i) = v;
    }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(A);
  KernelEigensystem es;
  es.L = L;
  es.nodes = Eigen::Map<Eigen::VectorXd>(q.nodes.data(), n_nodes);
  es.weights = Eigen::Map<Eigen::VectorXd>(q.weights.data(), n_nodes);
  es.eigenvalues.resize(n_nodes);
  es.eigenvectors.resize(n_nodes, n_nodes);
  for (int k = 0; k < n_nodes; ++k) {  // descending order
    double lam = solver.eigenvalues()(n_nodes - 1 - k);
    if (lam < -kEigTol || lam > 1.0 + kEigTol)
      throw DomainError("eigensystem: eigenvalue outside [0,1] beyond 1e-8");
    es.eigenvalues(k) = std::clamp(lam, 0.0, 1.0);
    es.eigenvectors.col(k) = solver.eigenvectors().col(n_nodes - 1 - k);
  }
  return es;
}

double expected_count(const KernelEigensystem& es) {
  return es.eigenvalues.sum();
}

namespace {

using RowMajor =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct ReplicaState {
  std::mt19937_64 rng;
  std::vector<int> sel;  // selected eigenvector columns
  Eigen::VectorXd d;     // residual diagonal on nodes
  Eigen::MatrixXd Q;     // orthonormalized chosen directions (compact coords)
  int r = 0;
  std::vector<double> pts;
  std::uint64_t replicate = 0;
  bool done() const { return r >= (int)sel.size(); }
};

void init_replica(const KernelEigensystem& es, std::uint64_t seed,
                  std::uint64_t rep, ReplicaState& st) {
  std::seed_seq sq{seed, rep, (std::uint64_t)0x9e3779b97f4a7c15ULL};
  st.rng.seed(sq);
  st.replicate = rep;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const int n = (int)es.eigenvalues.size();
  st.sel.clear();
  for (int k = 0; k < n; ++k) {
    const double lam = es.eigenvalues(k);
    if (lam < kKeepTol) {
      unif(st.rng);  // keep the stream layout independent of the cutoff
      continue;
    }
    if (unif(st.rng) < lam) st.sel.push_back(k);
  }
  const int m = (int)st.sel.size();
  st.r = 0;
  st.pts.clear();
  st.d = Eigen::VectorXd::Zero(n);
  for (int k : st.sel) st.d += es.eigenvectors.col(k).cwiseAbs2();
  st.Q.resize(m, m);
}

int sample_node(ReplicaState& st) {
  const double total = st.d.sum();
  if (!(total > 0.0))
    throw DomainError("sampler: residual density degenerate");
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double target = unif(st.rng) * total;
  double acc = 0.0;
  const int n = (int)st.d.size();
  for (int i = 0; i < n; ++i) {
    acc += st.d(i);
    if (acc >= target) return i;
  }
  return n - 1;
}

void run_group(const KernelEigensystem& es, const RowMajor& rows,
               std::uint64_t seed, std::uint64_t rep_begin, int count,
               std::vector<Configuration>& out, size_t out_off) {
  const int n = (int)es.nodes.size();
  const int M = (int)es.eigenvalues.size();
  std::vector<ReplicaState> st(count);
  int max_m = 0;
  for (int b = 0; b < count; ++b) {
    init_replica(es, seed, rep_begin + b, st[b]);
    max_m = std::max(max_m, (int)st[b].sel.size());
  }
  Eigen::MatrixXd Qfull(M, count);
  Eigen::MatrixXd P(n, count);
  std::vector<int> active;
  for (int step = 0; step < max_m; ++step) {
    active.clear();
    Qfull.setZero();
    for (int b = 0; b < count; ++b) {
      ReplicaState& s = st[b];
      if (s.done()) continue;
      const int i = sample_node(s);
      s.pts.push_back(es.nodes(i));
      const int m = (int)s.sel.size();
      Eigen::VectorXd v(m);
      for (int k = 0; k < m; ++k) v(k) = rows(i, s.sel[k]);
      Eigen::VectorXd w = v;
      for (int pass = 0; pass < 2; ++pass)
        if (s.r > 0)
          w -= s.Q.leftCols(s.r) * (s.Q.leftCols(s.r).transpose() * w);
      const double nrm = w.norm();
      if (!(nrm * nrm > 1e-14))
        throw DomainError("sampler: degenerate conditional direction");
      s.Q.col(s.r) = w / nrm;
      for (int k = 0; k < m; ++k) Qfull(s.sel[k], b) = s.Q(k, s.r);
      ++s.r;
      active.push_back(b);
    }
    if (active.empty()) break;
    P.noalias() = es.eigenvectors * Qfull;
    for (int b : active) {
      ReplicaState& s = st[b];
      s.d -= P.col(b).cwiseAbs2();
      for (int i = 0; i < n; ++i) {
        if (s.d(i) < 0.0) {
          if (s.d(i) < -1e-10)
            throw DomainError("sampler: conditional density lost positivity");
          s.d(i) = 0.0;
        }
      }
    }
  }
  for (int b = 0; b < count; ++b) {
    Configuration cfg;
    cfg.seed = seed;
    cfg.replicate = rep_begin + b;
    cfg.points = std::move(st[b].pts);
    std::sort(cfg.points.begin(), cfg.points.end());
    out[out_off + b] = std::move(cfg);
  }
}

}  // namespace

std::vector<Configuration> sample_batch(const KernelEigensystem& es,
                                        std::uint64_t seed,
                                        std::uint64_t rep_begin, int n_reps,
                                        int workers) {
  if (n_reps < 0) throw DomainError("sample_batch: negative count");
  std::vector<Configuration> out(n_reps);
  if (n_reps == 0) return out;
  RowMajor rows = es.eigenvectors;  // row-major copy for fast row gathers

  const int group = 32;
  std::vector<std::pair<int, int>> chunks;  // (offset, count)
  for (int off = 0; off < n_reps; off += group)
    chunks.emplace_back(off, std::min(group, n_reps - off));

  workers = std::max(1, workers);
  if (workers == 1 || chunks.size() == 1) {
    for (auto [off, cnt] : chunks)
      run_group(es, rows, seed, rep_begin + off, cnt, out, off);
    return out;
  }
  std::atomic<size_t> next{0};
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errs(workers);
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      try {
        for (size_t c = next++; c < chunks.size(); c = next++) {
          auto [off, cnt] = chunks[c];
          run_group(es, rows, seed, rep_begin + off, cnt, out, off);
        }
      } catch (...) {
        errs[w] = std::current_exception();
      }
    });
  for (auto& t : pool) t.join();
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
  return out;
}

Configuration sample_configuration(const KernelEigensystem& es,
                                   std::uint64_t seed,
                                   std::uint64_t replicate) {
  return std::move(sample_batch(es, seed, replicate, 1)[0]);
}

void export_csv(const Configuration& cfg, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::ios_base::failure("cannot open " + path);
  out << "x\n";
  for (double x : cfg.points) out << x << '\n';
}

}  // namespace sinelab
