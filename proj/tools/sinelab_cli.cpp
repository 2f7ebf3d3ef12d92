#include <complex>
#include <cstdlib>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "sinelab/cltlab.hpp"
#include "sinelab/errors.hpp"
#include "sinelab/funcspace.hpp"
#include "sinelab/grid.hpp"
#include "sinelab/hankel.hpp"
#include "sinelab/selftest.hpp"
#include "sinelab/serialize.hpp"
#include "sinelab/sinedpp.hpp"
#include "sinelab/version.hpp"

namespace {

using nlohmann::json;
using namespace sinelab;

struct CommonArgs {
  std::string f_name = "gaussian";
  double scale = 1.0;
  double amplitude = 1.0;
  double f_half_width = 1.0;
  std::string out_dir;
  int workers = (int)std::max(1u, std::thread::hardware_concurrency());
};

void add_descriptor_flags(CLI::App* cmd, CommonArgs& a) {
  cmd->add_option("--f", a.f_name,
                  "test function: gaussian|lorentzian|hat|indicator");
  cmd->add_option("--scale", a.scale, "descriptor scale");
  cmd->add_option("--amplitude", a.amplitude, "descriptor amplitude");
  cmd->add_option("--f-half-width", a.f_half_width,
                  "indicator half-width (pre-scaling)");
}

void add_out_flag(CLI::App* cmd, CommonArgs& a) {
  const char* env = std::getenv("SINELAB_OUT");
  a.out_dir = env ? env : ".";
  cmd->add_option("--out", a.out_dir,
                  "output directory (default $SINELAB_OUT or .)");
}

Descriptor descriptor_of(const CommonArgs& a) {
  return Descriptor::make(a.f_name, a.scale, a.amplitude, a.f_half_width);
}

json base_record(const std::string& command, const CommonArgs& a,
                 const json& extra_config) {
  json cfg = extra_config;
  cfg["command"] = command;
  cfg["descriptor"] = to_json(descriptor_of(a));
  cfg["workers"] = a.workers;
  json rec;
  rec["version"] = kVersion;
  rec["config"] = cfg;
  return rec;
}

void emit(const json& rec, const CommonArgs& a, const std::string& command,
          const std::string& summary) {
  write_json_line(rec, a.out_dir + "/" + command + ".jsonl");
  std::cout << summary << "\n";
}

int run(int argc, char** argv) {
  CLI::App app{"sine-process linear statistics laboratory"};
  app.set_version_flag("--version", std::string(kVersion));
  app.set_config("--config", "", "key=value config file (flags win)");
  app.require_subcommand(1);

  CommonArgs a;

  // norms
  auto* norms = app.add_subcommand("norms", "function-space norms");
  add_descriptor_flags(norms, a);
  add_out_flag(norms, a);
  norms->callback([&] {
    GridFunction f = make_grid_function(descriptor_of(a));
    SpectrumGrid s = fourier_transform(f);
    json rec = base_record("norms", a, {});
    rec["l2_norm"] = f.l2_norm();
    rec["sobolev_half"] = sobolev_norm(s, 0.5);
    try {
      rec["sobolev_one"] = sobolev_norm(s, 1.0);
    } catch (const DomainError&) {
      rec["sobolev_one"] = nullptr;
    }
    rec["sup"] = f.sup_abs();
    rec["limit_sigma"] = limit_sigma(f);
    emit(rec, a, "norms",
         "norms: sigma = " + std::to_string((double)rec["limit_sigma"]));
  });

  // sample
  auto* sample = app.add_subcommand("sample", "draw sine-process replicates");
  double sm_L = 5.0;
  int sm_nodes = 200, sm_N = 100;
  std::uint64_t sm_seed = 1;
  std::string sm_csv;
  sample->add_option("--L", sm_L, "window half-width");
  sample->add_option("--n-nodes", sm_nodes, "quadrature nodes");
  sample->add_option("--N", sm_N, "replicates");
  sample->add_option("--seed", sm_seed, "rng seed");
  sample->add_option("--csv", sm_csv, "also write first replicate as CSV");
  sample->add_option("--workers", a.workers, "worker threads");
  add_out_flag(sample, a);
  sample->callback([&] {
    KernelEigensystem es = build_kernel_eigensystem(sm_L, sm_nodes);
    std::vector<Configuration> batch =
        sample_batch(es, sm_seed, 0, sm_N, a.workers);
    double mean_count = 0.0;
    for (const Configuration& c : batch) mean_count += (double)c.points.size();
    mean_count /= sm_N;
    if (!sm_csv.empty() && !batch.empty()) export_csv(batch[0], sm_csv);
    json rec = base_record("sample", a,
                           json{{"L", sm_L},
                                {"n_nodes", sm_nodes},
                                {"N", sm_N},
                                {"seed", sm_seed}});
    rec["expected_count"] = expected_count(es);
    rec["mean_count"] = mean_count;
    emit(rec, a, "sample",
         "sample: mean count " + std::to_string(mean_count) + " over " +
             std::to_string(sm_N) + " replicates");
  });

  // variance
  auto* variance = app.add_subcommand("variance", "exact variance of S_f");
  double va_R = 1.0;
  add_descriptor_flags(variance, a);
  variance->add_option("--R", va_R, "dilation");
  add_out_flag(variance, a);
  variance->callback([&] {
    Descriptor d = descriptor_of(a);
    GridFunction f = make_grid_function(d);
    Descriptor dil = d;
    dil.scale *= va_R;
    GridFunction g = make_grid_function(dil);
    const double v = exact_variance(g);
    const double sig = limit_sigma(f);
    json rec = base_record("variance", a, json{{"R", va_R}});
    rec["exact_variance"] = v;
    rec["limit_variance"] = sig * sig;
    emit(rec, a, "variance",
         "variance: " + std::to_string(v) + " (limit " +
             std::to_string(sig * sig) + ")");
  });

  // mgf-check
  auto* mgf = app.add_subcommand(
      "mgf-check", "empirical MGF vs Gaussian-times-determinant prediction");
  double mg_R = 2.0;
  int mg_N = 10000, mg_quad = 128;
  std::uint64_t mg_seed = 1;
  std::vector<double> mg_lambda = {-1.0, -0.5, 0.5, 1.0};
  add_descriptor_flags(mgf, a);
  mgf->add_option("--R", mg_R, "dilation");
  mgf->add_option("--N", mg_N, "replicates");
  mgf->add_option("--seed", mg_seed, "rng seed");
  mgf->add_option("--lambda", mg_lambda, "lambda grid in [-1,1]");
  mgf->add_option("--n-quad", mg_quad, "determinant quadrature size");
  mgf->add_option("--workers", a.workers, "worker threads");
  add_out_flag(mgf, a);
  mgf->callback([&] {
    GridFunction f = make_grid_function(descriptor_of(a));
    MonteCarloOptions mo;
    mo.workers = a.workers;
    mo.mgf_lambda = mg_lambda;
    SampleSummary s = monte_carlo_statistics(f, mg_R, mg_N, mg_seed, mo);
    const double sig = limit_sigma(f);
    json rec = base_record("mgf-check", a,
                           json{{"R", mg_R},
                                {"N", mg_N},
                                {"seed", mg_seed},
                                {"n_quad", mg_quad}});
    rec["summary"] = to_json(s);
    json rows = json::array();
    double worst = 0.0;
    for (std::size_t i = 0; i < s.mgf_lambda.size(); ++i) {
      const double lam = s.mgf_lambda[i];
      DeterminantEvaluation ev = fredholm_det_V(f, lam, mg_R, mg_quad);
      const double pred =
          std::exp(0.5 * lam * lam * sig * sig) * ev.value.real();
      const double gap = std::abs(s.mgf[i] - pred);
      worst = std::max(worst, gap / std::max(1e-300, s.mgf_stderr[i]));
      rows.push_back(json{{"lambda", lam},
                          {"empirical", s.mgf[i]},
                          {"stderr", s.mgf_stderr[i]},
                          {"predicted", pred},
                          {"determinant", to_json(ev)}});
    }
    rec["checks"] = rows;
    emit(rec, a, "mgf-check",
         "mgf-check: worst gap " + std::to_string(worst) + " stderr units");
  });

  // fredholm
  auto* fred = app.add_subcommand("fredholm", "Fredholm determinant V(lambda)");
  double fr_lam_re = 0.0, fr_lam_im = 0.0, fr_R = 5.0;
  int fr_quad = 128;
  bool fr_check = false;
  add_descriptor_flags(fred, a);
  fred->add_option("--lambda", fr_lam_re, "Re lambda");
  fred->add_option("--lambda-im", fr_lam_im, "Im lambda");
  fred->add_option("--R", fr_R, "dilation");
  fred->add_option("--n-quad", fr_quad, "quadrature size");
  fred->add_flag("--check-convergence", fr_check, "doubling check");
  add_out_flag(fred, a);
  fred->callback([&] {
    GridFunction f = make_grid_function(descriptor_of(a));
    DetOptions opt;
    opt.n_quad = fr_quad;
    opt.check_convergence = fr_check;
    DeterminantEvaluation ev =
        fredholm_det_V(f, cplx(fr_lam_re, fr_lam_im), fr_R, opt);
    json rec = base_record("fredholm", a,
                           json{{"lambda_re", fr_lam_re},
                                {"lambda_im", fr_lam_im},
                                {"R", fr_R},
                                {"n_quad", fr_quad}});
    rec["determinant"] = to_json(ev);
    emit(rec, a, "fredholm",
         "fredholm: V = " + std::to_string(ev.value.real()) + " + " +
             std::to_string(ev.value.imag()) + "i");
  });

  // bound
  auto* bound = app.add_subcommand("bound", "smoothing-inequality KS bound");
  double bo_R = 5.0;
  int bo_quad = 128;
  add_descriptor_flags(bound, a);
  bound->add_option("--R", bo_R, "dilation");
  bound->add_option("--n-quad", bo_quad, "determinant quadrature size");
  add_out_flag(bound, a);
  bound->callback([&] {
    GridFunction f = make_grid_function(descriptor_of(a));
    EsseenOptions eo;
    eo.n_quad = bo_quad;
    BoundReport b = esseen_bound(f, bo_R, eo);
    json rec = base_record("bound", a, json{{"R", bo_R}, {"n_quad", bo_quad}});
    rec["bound"] = to_json(b);
    emit(rec, a, "bound",
         "bound: " + std::to_string(b.bound) + " at T = " +
             std::to_string(b.T));
  });

  // rate
  auto* rate = app.add_subcommand("rate", "bound decay across dilations");
  std::vector<double> ra_R = {5, 10, 20, 40};
  std::string ra_model = "inverse_linear";
  int ra_quad = 128, ra_N = 0;
  std::uint64_t ra_seed = 1;
  add_descriptor_flags(rate, a);
  rate->add_option("--R", ra_R, "dilation list (>= 4 values)")
      ->delimiter(',');
  rate->add_option("--model", ra_model, "inverse_linear|inverse_log")
      ->check(CLI::IsMember({"inverse_linear", "inverse_log"}));
  rate->add_option("--n-quad", ra_quad, "determinant quadrature size");
  rate->add_option("--N", ra_N, "replicates for empirical KS (0 = skip)");
  rate->add_option("--seed", ra_seed, "rng seed");
  rate->add_option("--workers", a.workers, "worker threads");
  add_out_flag(rate, a);
  rate->callback([&] {
    GridFunction f = make_grid_function(descriptor_of(a));
    const double sig = limit_sigma(f);
    EsseenOptions eo;
    eo.n_quad = ra_quad;
    std::vector<RateRow> rows;
    std::vector<std::pair<double, double>> pts;
    json bounds = json::array();
    for (double R : ra_R) {
      BoundReport b = esseen_bound(f, R, eo);
      RateRow row;
      row.R = R;
      row.bound = b.bound;
      if (ra_N > 0) {
        MonteCarloOptions mo;
        mo.workers = a.workers;
        SampleSummary s = monte_carlo_statistics(f, R, ra_N, ra_seed);
        row.empirical_ks = ks_distance(s.values, sig);
      }
      rows.push_back(row);
      pts.emplace_back(R, b.bound);
      bounds.push_back(to_json(b));
    }
    RateModel model = ra_model == "inverse_log" ? RateModel::inverse_log
                                                : RateModel::inverse_linear;
    RateReport fit = rate_fit(pts, model);
    json rec = base_record("rate", a,
                           json{{"R", ra_R},
                                {"model", ra_model},
                                {"n_quad", ra_quad},
                                {"N", ra_N},
                                {"seed", ra_seed}});
    rec["bounds"] = bounds;
    rec["fit"] = to_json(fit);
    emit(rec, a, "rate", "rate: c = " + std::to_string(fit.c) + " (" +
                             ra_model + ")");
    write_rate_csv(rows, {fit}, a.out_dir + "/rate.csv");
  });

  // selftest
  auto* st = app.add_subcommand("selftest", "fast identity checks");
  st->callback([&] {
    auto results = run_selftests();
    int failed = 0;
    for (const auto& [name, ok] : results) {
      std::cout << (ok ? "PASS " : "FAIL ") << name << "\n";
      if (!ok) ++failed;
    }
    std::cout << "selftest: " << results.size() - failed << "/"
              << results.size() << " passed\n";
    if (failed) throw DomainError("selftest: " + std::to_string(failed) +
                                  " checks failed");
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  return 0;
}

json error_record(const char* kind, const std::exception& e) {
  return json{{"error", kind}, {"message", e.what()}};
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const DescriptorError& e) {
    std::cerr << error_record("descriptor", e).dump() << "\n";
    return 3;
  } catch (const DomainError& e) {
    std::cerr << error_record("domain", e).dump() << "\n";
    return 4;
  } catch (const RangeError& e) {
    std::cerr << error_record("range", e).dump() << "\n";
    return 4;
  } catch (const ConditioningError& e) {
    std::cerr << error_record("conditioning", e).dump() << "\n";
    return 5;
  } catch (const ConsistencyError& e) {
    std::cerr << error_record("consistency", e).dump() << "\n";
    return 5;
  } catch (const ResolutionError& e) {
    std::cerr << error_record("resolution", e).dump() << "\n";
    return 6;
  } catch (const std::ios_base::failure& e) {
    std::cerr << error_record("io", e).dump() << "\n";
    return 7;
  } catch (const std::exception& e) {
    std::cerr << error_record("internal", e).dump() << "\n";
    return 1;
  }
}
