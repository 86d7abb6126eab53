#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gbloch/model.hpp"

namespace gbloch {

/// Configuration or command-line usage problem; maps to exit status 2.
struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class ModelKind { ssh, ladder, generic };

std::string to_string(ModelKind k);

/// Tolerances and grid knobs, all defaulted to the library defaults.
struct Tolerances {
  double tol_root = 1e-9;
  double tol_vieta = 1e-8;
  double tol_zero = 1e-10;
  double tol_sep = 1e-8;
  double tol_cond = 1e-10;
  double tol_gbz = 1e-6;
  double tol_rank = 1e-8;
  double tol_cluster = -1.0;      // < 0: 1e-6 * ||H||
  double edge_exclusion = 1e-6;   // |E - onsite| radius dropped from comparisons
  double state_residual = 1e-8;
  int grid_per_cell = 40;
};

/// Parsed and validated run configuration.  Sections: [model], [run],
/// [tolerances], [output]; unknown sections or keys are rejected, and the
/// parameter keys must match the declared model kind.
struct RunConfig {
  ModelKind kind = ModelKind::ssh;
  SSHLongRangeParams ssh;
  LadderParams ladder;
  std::optional<HoppingSpec> generic;
  int cells = 0;
  int theta_grid = 200;
  unsigned long seed = 1;
  Tolerances tol;
  std::string out_dir;
  std::vector<std::string> formats = {"csv", "json"};
  std::string digest;  // FNV-1a of the raw config text, hex

  HoppingSpec to_spec() const;
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// "a", "a+bi", "a-bi", "bi" with optional scientific notation.
cplx parse_complex(const std::string& text);

}  // namespace gbloch
