#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "sinelab/cltlab.hpp"
#include "sinelab/descriptor.hpp"
#include "sinelab/hankel.hpp"

namespace sinelab {

nlohmann::json to_json(const Descriptor& d);
nlohmann::json to_json(const DeterminantEvaluation& ev);
// Sample values are summarized as a quantile sketch, not stored in full.
nlohmann::json to_json(const SampleSummary& s);
nlohmann::json to_json(const BoundReport& b);
nlohmann::json to_json(const RateReport& r);

std::string rate_model_name(RateModel m);

// Appends one JSON Lines record (a single line) to `path`.
void write_json_line(const nlohmann::json& record, const std::string& path,
                     bool append = true);

struct RateRow {
  double R = 0.0;
  double empirical_ks = -1.0;  // negative when not sampled
  double bound = 0.0;
};

// CSV table (R, empirical_ks, bound, fitted values per supplied model).
void write_rate_csv(const std::vector<RateRow>& rows,
                    const std::vector<RateReport>& fits,
                    const std::string& path);

}  // namespace sinelab
