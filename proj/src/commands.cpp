#include "gbloch/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "gbloch/analysis.hpp"
#include "gbloch/gbt.hpp"
#include "gbloch/numerics.hpp"

namespace gbloch {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
constexpr double kPi = std::numbers::pi;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_atomic(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
  }
  fs::rename(tmp, path);
}

class Csv {
 public:
  Csv(const RunConfig& cfg, std::initializer_list<const char*> header) {
    buf_ << "# config_digest=" << cfg.digest << " seed=" << cfg.seed << "\n";
    bool first = true;
    for (const char* h : header) {
      if (!first) buf_ << ",";
      buf_ << h;
      first = false;
    }
    buf_ << "\n";
  }
  void row(std::initializer_list<std::string> cells) {
    bool first = true;
    for (const std::string& c : cells) {
      if (!first) buf_ << ",";
      buf_ << c;
      first = false;
    }
    buf_ << "\n";
  }
  std::string str() const { return buf_.str(); }

 private:
  std::ostringstream buf_;
};

GbtOptions gbt_options(const RunConfig& cfg) {
  GbtOptions o;
  o.tol_root = cfg.tol.tol_root;
  o.tol_sep = cfg.tol.tol_sep;
  o.tol_zero = cfg.tol.tol_zero;
  o.tol_cond = cfg.tol.tol_cond;
  o.grid_per_cell = cfg.tol.grid_per_cell;
  o.state_residual = cfg.tol.state_residual;
  return o;
}

json common_meta(const RunConfig& cfg) {
  json meta;
  meta["config_digest"] = cfg.digest;
  meta["seed"] = cfg.seed;
  meta["model"] = to_string(cfg.kind);
  meta["cells"] = cfg.cells;
  return meta;
}

void write_json(const RunConfig& cfg, const std::string& name, const json& payload) {
  write_atomic(fs::path(cfg.out_dir) / name, payload.dump(2) + "\n");
}

bool wants(const RunConfig& cfg, const std::string& format) {
  return std::find(cfg.formats.begin(), cfg.formats.end(), format) != cfg.formats.end();
}

struct SpectrumData {
  EigResult eig;
  std::vector<GBSolution> analytic;  // empty when no closed form exists
  bool analytic_available = false;
};

SpectrumData solve_spectrum(const RunConfig& cfg) {
  SpectrumData data;
  data.eig = eig_dense(build_open_chain(cfg.to_spec(), cfg.cells).matrix);
  if (cfg.kind == ModelKind::ssh) {
    data.analytic = solve_finite_chain(cfg.ssh, cfg.cells, gbt_options(cfg));
    data.analytic_available = true;
  }
  return data;
}

}  // namespace

void cmd_spectrum(const RunConfig& cfg) {
  SpectrumData data = solve_spectrum(cfg);

  if (wants(cfg, "csv")) {
    Csv numeric(cfg, {"index", "re_energy", "im_energy", "residual"});
    for (int i = 0; i < data.eig.eigenvalues.size(); ++i)
      numeric.row({std::to_string(i), fmt(data.eig.eigenvalues(i).real()),
                   fmt(data.eig.eigenvalues(i).imag()), fmt(data.eig.residuals(i))});
    write_atomic(fs::path(cfg.out_dir) / "spectrum_numeric.csv", numeric.str());

    Csv analytic(cfg, {"theta", "alpha", "re_energy", "im_energy", "branch"});
    for (const GBSolution& s : data.analytic)
      analytic.row({fmt(s.theta), fmt(s.alpha), fmt(s.energy.real()),
                    fmt(s.energy.imag()), std::to_string(s.branch)});
    write_atomic(fs::path(cfg.out_dir) / "spectrum_analytic.csv", analytic.str());
  }

  if (!wants(cfg, "json")) return;
  json out = common_meta(cfg);
  out["analytic_available"] = data.analytic_available;
  out["edge_exclusion"] = cfg.tol.edge_exclusion;

  const cplx onsite = cfg.to_spec().onsite();
  std::vector<cplx> kept;
  json excluded = json::array();
  for (int i = 0; i < data.eig.eigenvalues.size(); ++i) {
    cplx e = data.eig.eigenvalues(i);
    if (std::abs(e - onsite) <= cfg.tol.edge_exclusion) {
      excluded.push_back({{"index", i}, {"re", e.real()}, {"im", e.imag()}});
    } else {
      kept.push_back(e);
    }
  }
  out["excluded_numeric"] = excluded;
  out["numeric_count"] = data.eig.eigenvalues.size();
  out["numeric_kept"] = kept.size();
  out["analytic_count"] = data.analytic.size();

  if (data.analytic_available && !data.analytic.empty() && !kept.empty()) {
    double d_an = 0.0, d_na = 0.0;
    json matching = json::array();
    for (const GBSolution& s : data.analytic) {
      double best = std::numeric_limits<double>::max();
      int best_i = -1;
      for (size_t i = 0; i < kept.size(); ++i) {
        double d = std::abs(s.energy - kept[i]);
        if (d < best) {
          best = d;
          best_i = static_cast<int>(i);
        }
      }
      d_an = std::max(d_an, best);
      matching.push_back({{"theta", s.theta},
                          {"branch", s.branch},
                          {"re", s.energy.real()},
                          {"im", s.energy.imag()},
                          {"nearest_numeric", best_i},
                          {"distance", best}});
    }
    for (const cplx& e : kept) {
      double best = std::numeric_limits<double>::max();
      for (const GBSolution& s : data.analytic) best = std::min(best, std::abs(s.energy - e));
      d_na = std::max(d_na, best);
    }
    out["hausdorff"] = std::max(d_an, d_na);
    out["d_analytic_to_numeric"] = d_an;
    out["d_numeric_to_analytic"] = d_na;
    out["matching"] = matching;
  }
  write_json(cfg, "spectrum_compare.json", out);
}

void cmd_states(const RunConfig& cfg, const std::vector<int>& which) {
  std::optional<EPReport> ep;
  if (cfg.kind == ModelKind::ssh) {
    try {
      ep = ep_classify_ssh(cfg.ssh, cfg.tol.tol_cond);
    } catch (const std::domain_error&) {
    }
  } else if (cfg.kind == ModelKind::ladder) {
    try {
      ep = ep_classify_ladder(cfg.ladder, cfg.tol.tol_cond);
    } catch (const std::domain_error&) {
    }
  }

  json summary = common_meta(cfg);
  json states = json::array();

  if (ep) {
    // Coalesced-state templates: analytic columns only.
    summary["exceptional_point"] = {{"table_row", ep->table_row},
                                    {"condition", ep->condition},
                                    {"order", ep->order(cfg.cells)},
                                    {"side", to_string(ep->side)}};
    for (int idx : which) {
      if (idx < 0 || idx > 1)
        throw config_error("states: exceptional-point configs have states 0 (+) and 1 (-)");
      int branch = idx == 0 ? +1 : -1;
      Eigen::VectorXcd psi = ep->state(branch, cfg.cells);
      psi.normalize();
      if (wants(cfg, "csv")) {
        Csv csv(cfg, {"site", "analytic_abs", "analytic_re", "analytic_im"});
        for (int l = 0; l < psi.size(); ++l)
          csv.row({std::to_string(l + 1), fmt(std::abs(psi(l))), fmt(psi(l).real()),
                   fmt(psi(l).imag())});
        write_atomic(fs::path(cfg.out_dir) / ("state_" + std::to_string(idx) + ".csv"),
                     csv.str());
      }
      cplx e = ep->eigenvalue(branch);
      states.push_back({{"index", idx},
                        {"branch", branch},
                        {"re_energy", e.real()},
                        {"im_energy", e.imag()},
                        {"residual", ep_residual(*ep, branch, cfg.cells)}});
    }
    summary["states"] = states;
    if (wants(cfg, "json")) write_json(cfg, "states_summary.json", summary);
    return;
  }

  SpectrumData data = solve_spectrum(cfg);
  const int n_states = data.analytic_available
                           ? static_cast<int>(data.analytic.size())
                           : static_cast<int>(data.eig.eigenvalues.size());
  for (int idx : which)
    if (idx < 0 || idx >= n_states)
      throw config_error("states: index " + std::to_string(idx) + " out of range (have " +
                         std::to_string(n_states) + " states)");

  auto nearest_numeric = [&](cplx energy) {
    int best = 0;
    double dist = std::numeric_limits<double>::max();
    for (int i = 0; i < data.eig.eigenvalues.size(); ++i) {
      double d = std::abs(data.eig.eigenvalues(i) - energy);
      if (d < dist) {
        dist = d;
        best = i;
      }
    }
    return best;
  };

  for (int i = 0; i < n_states; ++i) {
    json rec;
    rec["index"] = i;
    if (data.analytic_available) {
      const GBSolution& s = data.analytic[static_cast<size_t>(i)];
      int ni = nearest_numeric(s.energy);
      rec["theta"] = s.theta;
      rec["alpha"] = s.alpha;
      rec["branch"] = s.branch;
      rec["re_energy"] = s.energy.real();
      rec["im_energy"] = s.energy.imag();
      rec["nearest_numeric"] = ni;
      try {
        rec["alpha_fit"] = localization_fit(data.eig.right_vectors.col(ni), cfg.cells).alpha;
      } catch (const std::invalid_argument&) {
        rec["alpha_fit"] = nullptr;
      }
    } else {
      cplx e = data.eig.eigenvalues(i);
      rec["re_energy"] = e.real();
      rec["im_energy"] = e.imag();
      try {
        rec["alpha_fit"] = localization_fit(data.eig.right_vectors.col(i), cfg.cells).alpha;
      } catch (const std::invalid_argument&) {
        rec["alpha_fit"] = nullptr;
      }
    }
    states.push_back(rec);
  }
  summary["states"] = states;

  for (int idx : which) {
    Eigen::VectorXcd numeric;
    Eigen::VectorXcd analytic;
    if (data.analytic_available) {
      const GBSolution& s = data.analytic[static_cast<size_t>(idx)];
      analytic = eigenstate_ssh(cfg.ssh, s, cfg.cells);
      numeric = data.eig.right_vectors.col(nearest_numeric(s.energy));
    } else {
      numeric = data.eig.right_vectors.col(idx);
    }
    // Align the numeric phase with the convention used for analytic states.
    int imax = 0;
    numeric.cwiseAbs().maxCoeff(&imax);
    cplx piv = numeric(imax);
    if (std::abs(piv) > 0.0) numeric *= std::conj(piv) / std::abs(piv);

    if (wants(cfg, "csv")) {
      Csv csv(cfg, {"site", "abs", "re", "im", "analytic_abs"});
      for (int l = 0; l < numeric.size(); ++l)
        csv.row({std::to_string(l + 1), fmt(std::abs(numeric(l))), fmt(numeric(l).real()),
                 fmt(numeric(l).imag()),
                 analytic.size() ? fmt(std::abs(analytic(l))) : std::string("")});
      write_atomic(fs::path(cfg.out_dir) / ("state_" + std::to_string(idx) + ".csv"),
                   csv.str());
    }
  }
  if (wants(cfg, "json")) write_json(cfg, "states_summary.json", summary);
}

void cmd_gbz(const RunConfig& cfg) {
  HoppingSpec spec = cfg.to_spec();
  EigResult eig = eig_dense(build_open_chain(spec, cfg.cells).matrix);
  std::vector<cplx> samples(eig.eigenvalues.data(),
                            eig.eigenvalues.data() + eig.eigenvalues.size());
  GBZTrajectory traj = gbz_trajectory(spec, samples, cfg.tol.tol_gbz);

  if (wants(cfg, "csv")) {
    Csv roots_csv(cfg, {"re_z", "im_z", "re_energy", "im_energy", "sample_index"});
    for (const GBZPoint& pt : traj.points)
      roots_csv.row({fmt(pt.z.real()), fmt(pt.z.imag()), fmt(pt.energy.real()),
                     fmt(pt.energy.imag()), std::to_string(pt.sample_index)});
    write_atomic(fs::path(cfg.out_dir) / "gbz_roots.csv", roots_csv.str());
  }

  json out = common_meta(cfg);
  out["samples"] = samples.size();
  out["accepted_points"] = traj.points.size();
  out["rejected_samples"] = traj.rejected.size();
  double max_mod_dev = 0.0;
  bool inside = !traj.points.empty();
  for (const GBZPoint& pt : traj.points) {
    max_mod_dev = std::max(max_mod_dev, std::abs(std::abs(pt.z) - 1.0));
    if (std::abs(pt.z) >= 1.0) inside = false;
  }
  out["max_modulus_deviation_from_unity"] = max_mod_dev;
  out["strictly_inside_unit_circle"] = inside;

  if (cfg.kind == ModelKind::ssh) {
    GbtOptions opts = gbt_options(cfg);
    if (wants(cfg, "csv")) {
      Csv gbt_csv(cfg, {"theta", "re_z", "im_z"});
      for (int i = 0; i < cfg.theta_grid; ++i) {
        double theta = kPi * (i + 1) / (cfg.theta_grid + 1);
        for (const BandPoint& bp : band_points(cfg.ssh, theta, opts)) {
          gbt_csv.row({fmt(theta), fmt(bp.z[0].real()), fmt(bp.z[0].imag())});
          gbt_csv.row({fmt(theta), fmt(bp.z[1].real()), fmt(bp.z[1].imag())});
        }
      }
      write_atomic(fs::path(cfg.out_dir) / "gbz_gbt.csv", gbt_csv.str());
    }
    try {
      out["max_log_modulus_minus_alpha"] = gbz_vs_alpha(cfg.ssh, cfg.theta_grid, opts);
    } catch (const std::exception& err) {
      out["max_log_modulus_minus_alpha"] = nullptr;
      out["gbt_curve_note"] = err.what();
    }
  } else {
    if (wants(cfg, "csv")) {
      Csv gbt_csv(cfg, {"theta", "re_z", "im_z"});
      write_atomic(fs::path(cfg.out_dir) / "gbz_gbt.csv", gbt_csv.str());
    }
    out["gbt_curve_note"] = "closed-form alpha(theta) curve available for ssh models only";
  }
  if (wants(cfg, "json")) write_json(cfg, "gbz_summary.json", out);
}

void cmd_analyze(const RunConfig& cfg) {
  json out = common_meta(cfg);

  auto verdict_json = [](const SkinVerdict& v) {
    json j;
    j["exists"] = v.exists;
    j["side"] = to_string(v.side);
    json res;
    for (const auto& [name, r] : v.residuals) res[name] = r;
    j["residuals"] = res;
    if (v.alpha_rep) {
      j["alpha_rep"] = *v.alpha_rep;
      j["alpha_rep_source"] = v.alpha_rep_source;
    }
    return j;
  };
  auto ep_json = [&](const EPReport& ep) {
    json j;
    j["table_row"] = ep.table_row;
    j["condition"] = ep.condition;
    j["order"] = ep.order(cfg.cells);
    j["side"] = to_string(ep.side);
    j["eigenvalues"] = {{"re_plus", ep.eigenvalue(+1).real()},
                        {"im_plus", ep.eigenvalue(+1).imag()},
                        {"re_minus", ep.eigenvalue(-1).real()},
                        {"im_minus", ep.eigenvalue(-1).imag()}};
    j["template_residuals"] = {{"plus", ep_residual(ep, +1, cfg.cells)},
                               {"minus", ep_residual(ep, -1, cfg.cells)}};
    if (!ep.s_reading.empty()) {
      j["s_reading"] = ep.s_reading;
      j["s_residual_chosen"] = ep.s_residual_chosen;
      j["s_residual_alternative"] = ep.s_residual_alternative;
    }
    return j;
  };

  if (cfg.kind == ModelKind::ssh) {
    try {
      out["skin"] = verdict_json(skin_condition_ssh(cfg.ssh, cfg.tol.tol_cond));
    } catch (const std::domain_error& err) {
      out["skin"] = nullptr;
      out["skin_note"] = err.what();
    }
    std::optional<EPReport> ep;
    try {
      ep = ep_classify_ssh(cfg.ssh, cfg.tol.tol_cond);
    } catch (const std::domain_error& err) {
      out["exceptional_point_note"] = err.what();
    }
    out["exceptional_point"] = ep ? ep_json(*ep) : json(nullptr);

    const bool t02 = std::abs(cfg.ssh.t0 - cfg.ssh.t2) <= cfg.tol.tol_cond;
    if (t02) {
      try {
        std::vector<double> ks;
        for (int i = 0; i < 100; ++i) ks.push_back(-kPi + 2.0 * kPi * i / 100.0);
        PseudoHermReport rep = pseudo_hermiticity_check(cfg.ssh, ks, cfg.tol.tol_cond);
        out["pseudo_hermiticity"] = {
            {"samples", rep.samples.size()},
            {"singular_samples", rep.singular_count},
            {"max_similarity_residual_unbroken", rep.max_residual_unbroken},
            {"spectrum_real_iff_product_nonnegative", rep.real_iff_nonnegative}};
      } catch (const std::invalid_argument& err) {
        out["pseudo_hermiticity"] = nullptr;
        out["pseudo_hermiticity_note"] = err.what();
      }
    } else {
      out["pseudo_hermiticity"] = nullptr;
    }
  } else if (cfg.kind == ModelKind::ladder) {
    try {
      out["skin"] = verdict_json(skin_condition_ladder(cfg.ladder, cfg.tol.tol_cond));
    } catch (const std::domain_error& err) {
      out["skin"] = nullptr;
      out["skin_note"] = err.what();
    }
    std::optional<EPReport> ep;
    try {
      ep = ep_classify_ladder(cfg.ladder, cfg.tol.tol_cond);
    } catch (const std::domain_error& err) {
      out["exceptional_point_note"] = err.what();
    }
    out["exceptional_point"] = ep ? ep_json(*ep) : json(nullptr);
  } else {
    out["hermitian"] = cfg.to_spec().is_hermitian(cfg.tol.tol_cond);
    out["note"] = "condition analysis is available for ssh and ladder models";
  }
  write_json(cfg, "verdict.json", out);
}

}  // namespace gbloch
