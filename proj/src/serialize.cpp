#include "sinelab/serialize.hpp"

#include <cmath>
#include <fstream>

namespace sinelab {

using nlohmann::json;

namespace {

json cplx_json(const cplx& z) {
  return json{{"re", z.real()}, {"im", z.imag()}};
}

}  // namespace

json to_json(const Descriptor& d) {
  json j;
  j["name"] = d.name();
  for (const auto& [k, v] : d.params()) j[k] = v;
  return j;
}

json to_json(const DeterminantEvaluation& ev) {
  json j;
  j["lambda"] = cplx_json(ev.lambda);
  j["R"] = ev.R;
  j["n_quad"] = ev.n_quad;
  j["value"] = cplx_json(ev.value);
  j["hs_norm_plus"] = ev.hs_norm_plus;
  j["hs_norm_minus"] = ev.hs_norm_minus;
  j["beta"] = ev.beta;
  j["du"] = ev.du;
  j["half_width"] = ev.half_width;
  j["convergence_gap"] = ev.convergence_gap;
  return j;
}

json to_json(const SampleSummary& s) {
  json j;
  j["R"] = s.R;
  j["N"] = s.N;
  j["L"] = s.L;
  j["n_nodes"] = s.n_nodes;
  j["seed"] = s.seed;
  j["mean"] = s.mean;
  j["variance"] = s.variance;
  j["truncation_error"] = s.truncation_error;
  if (!s.values.empty()) {
    json q;
    for (int p : {0, 1, 5, 10, 25, 50, 75, 90, 95, 99, 100}) {
      const std::size_t i = std::min(
          s.values.size() - 1,
          (std::size_t)std::llround(p / 100.0 * (s.values.size() - 1)));
      q["p" + std::to_string(p)] = s.values[i];
    }
    j["quantiles"] = q;
  }
  j["mgf_lambda"] = s.mgf_lambda;
  j["mgf"] = s.mgf;
  j["mgf_stderr"] = s.mgf_stderr;
  j["chf_xi"] = s.chf_xi;
  json chf = json::array();
  for (const cplx& c : s.chf) chf.push_back(cplx_json(c));
  j["chf"] = chf;
  return j;
}

json to_json(const BoundReport& b) {
  json j;
  j["R"] = b.R;
  j["sigma"] = b.sigma;
  j["T"] = b.T;
  j["kappa0"] = b.kappa0;
  j["kappa1"] = b.kappa1;
  j["bound"] = b.bound;
  j["xi_step"] = b.xi_step;
  j["first_failure_xi"] = b.first_failure_xi;
  j["T_grid"] = b.T_grid;
  j["kappa0_at_T"] = b.kappa0_at_T;
  return j;
}

std::string rate_model_name(RateModel m) {
  return m == RateModel::inverse_log ? "inverse_log" : "inverse_linear";
}

json to_json(const RateReport& r) {
  json j;
  j["model"] = rate_model_name(r.model);
  json pts = json::array();
  for (const auto& [R, v] : r.points) pts.push_back(json{{"R", R}, {"value", v}});
  j["points"] = pts;
  j["c"] = r.c;
  j["residuals"] = r.residuals;
  j["loglog_slope"] = r.loglog_slope;
  j["loglog_intercept"] = r.loglog_intercept;
  return j;
}

void write_json_line(const json& record, const std::string& path,
                     bool append) {
  std::ofstream out(path, append ? std::ios::app : std::ios::trunc);
  if (!out) throw std::ios_base::failure("cannot open " + path);
  out << record.dump() << '\n';
}

void write_rate_csv(const std::vector<RateRow>& rows,
                    const std::vector<RateReport>& fits,
                    const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::ios_base::failure("cannot open " + path);
  out << "R,empirical_ks,bound";
  for (const RateReport& f : fits) out << ",fit_" << rate_model_name(f.model);
  out << '\n';
  for (const RateRow& row : rows) {
    out << row.R << ',';
    if (row.empirical_ks >= 0.0) out << row.empirical_ks;
    out << ',' << row.bound;
    for (const RateReport& f : fits) {
      const double x = f.model == RateModel::inverse_log
                           ? 1.0 / std::log(row.R)
                           : 1.0 / row.R;
      out << ',' << f.c * x;
    }
    out << '\n';
  }
}

}  // namespace sinelab
