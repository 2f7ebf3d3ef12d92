#pragma once

#include <string>
#include <utility>
#include <vector>

namespace sinelab {

// Runs the fast identity checks (closed forms, zero-input behavior,
// determinant and Cauchy-formula polynomials, sampler reproducibility,
// KS construction). Each entry is (name, passed).
std::vector<std::pair<std::string, bool>> run_selftests();

}  // namespace sinelab
