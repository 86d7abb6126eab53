#pragma once

#include <vector>

#include "gbloch/config.hpp"

namespace gbloch {

/// Figure-reproduction commands.  Each writes its artifacts into
/// cfg.out_dir (created if absent) using atomic replace, and throws
/// config_error for usage problems or std exceptions for solver failures.

/// spectrum_numeric.csv, spectrum_analytic.csv, spectrum_compare.json
void cmd_spectrum(const RunConfig& cfg);

/// state_<i>.csv per requested index plus states_summary.json
void cmd_states(const RunConfig& cfg, const std::vector<int>& which);

/// gbz_roots.csv, gbz_gbt.csv, gbz_summary.json
void cmd_gbz(const RunConfig& cfg);

/// verdict.json
void cmd_analyze(const RunConfig& cfg);

}  // namespace gbloch
