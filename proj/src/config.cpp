#include "gbloch/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace gbloch {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

struct Entry {
  std::string value;
  int line;
  bool used = false;
};

using Section = std::map<std::string, Entry>;

std::map<std::string, Section> parse_ini(const std::string& text) {
  std::map<std::string, Section> out;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']')
        throw config_error("line " + std::to_string(lineno) + ": malformed section header");
      section = trim(t.substr(1, t.size() - 2));
      if (section.empty())
        throw config_error("line " + std::to_string(lineno) + ": empty section name");
      out.try_emplace(section);
      continue;
    }
    size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw config_error("line " + std::to_string(lineno) + ": expected key = value");
    if (section.empty())
      throw config_error("line " + std::to_string(lineno) + ": key outside any section");
    std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    if (key.empty())
      throw config_error("line " + std::to_string(lineno) + ": empty key");
    auto [it, inserted] = out[section].try_emplace(key, Entry{value, lineno});
    if (!inserted)
      throw config_error("line " + std::to_string(lineno) + ": duplicate key '" + key +
                         "' in [" + section + "]");
  }
  return out;
}

double parse_double(const std::string& s, const std::string& where) {
  try {
    size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw config_error(where + ": cannot parse number '" + s + "'");
  }
}

long parse_int(const std::string& s, const std::string& where) {
  try {
    size_t pos = 0;
    long v = std::stol(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw config_error(where + ": cannot parse integer '" + s + "'");
  }
}

uint64_t fnv1a(const std::string& data) {
  uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex64(uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<size_t>(i)] = digits[v & 0xF];
    v >>= 4;
  }
  return out;
}

// Accessor with unknown-key detection per section.
class SectionView {
 public:
  SectionView(std::map<std::string, Section>& all, const std::string& name)
      : name_(name) {
    auto it = all.find(name);
    if (it != all.end()) sec_ = &it->second;
  }
  bool present() const { return sec_ != nullptr; }

  std::optional<std::string> get(const std::string& key) {
    if (!sec_) return std::nullopt;
    auto it = sec_->find(key);
    if (it == sec_->end()) return std::nullopt;
    it->second.used = true;
    return it->second.value;
  }
  std::string require(const std::string& key) {
    auto v = get(key);
    if (!v) throw config_error("[" + name_ + "]: missing required key '" + key + "'");
    return *v;
  }
  void finish() {
    if (!sec_) return;
    for (const auto& [key, entry] : *sec_)
      if (!entry.used)
        throw config_error("line " + std::to_string(entry.line) + ": unknown key '" + key +
                           "' in [" + name_ + "]");
  }
  const Section* raw() const { return sec_; }
  const std::string& name() const { return name_; }

 private:
  std::string name_;
  Section* sec_ = nullptr;
};

}  // namespace

std::string to_string(ModelKind k) {
  switch (k) {
    case ModelKind::ssh:
      return "ssh";
    case ModelKind::ladder:
      return "ladder";
    default:
      return "generic";
  }
}

cplx parse_complex(const std::string& text) {
  std::string s = trim(text);
  if (s.empty()) throw config_error("empty complex literal");
  bool imag_term = s.back() == 'i' || s.back() == 'j';
  if (!imag_term) {
    size_t pos = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &pos);
    } catch (const std::exception&) {
      throw config_error("cannot parse complex literal '" + text + "'");
    }
    if (pos != s.size()) throw config_error("cannot parse complex literal '" + text + "'");
    return cplx(v, 0.0);
  }
  s.pop_back();
  // Split at the last +/- that is not a leading sign or an exponent sign.
  size_t split = std::string::npos;
  for (size_t i = s.size(); i-- > 1;) {
    if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  auto num = [&](const std::string& part, double empty_value) {
    std::string q = trim(part);
    if (q.empty() || q == "+") return empty_value;
    if (q == "-") return -empty_value;
    size_t pos = 0;
    double v = 0.0;
    try {
      v = std::stod(q, &pos);
    } catch (const std::exception&) {
      throw config_error("cannot parse complex literal '" + text + "'");
    }
    if (pos != q.size()) throw config_error("cannot parse complex literal '" + text + "'");
    return v;
  };
  if (split == std::string::npos) return cplx(0.0, num(s, 1.0));
  return cplx(num(s.substr(0, split), 0.0), num(s.substr(split), 1.0));
}

HoppingSpec RunConfig::to_spec() const {
  switch (kind) {
    case ModelKind::ssh:
      return ssh_to_spec(ssh);
    case ModelKind::ladder:
      return ladder_to_spec(ladder);
    default:
      return *generic;
  }
}

RunConfig parse_config(const std::string& text) {
  auto sections = parse_ini(text);
  static const std::set<std::string> known_sections = {"model", "run", "tolerances",
                                                       "output"};
  for (const auto& [name, sec] : sections) {
    if (!known_sections.count(name)) {
      int line = sec.empty() ? 0 : sec.begin()->second.line;
      throw config_error("line " + std::to_string(line) + ": unknown section [" + name +
                         "]");
    }
  }

  RunConfig cfg;
  cfg.digest = hex64(fnv1a(text));

  SectionView model(sections, "model");
  if (!model.present()) throw config_error("missing [model] section");
  std::string kind = model.require("kind");
  auto cpx = [&](SectionView& sec, const std::string& key, cplx fallback) {
    auto v = sec.get(key);
    return v ? parse_complex(*v) : fallback;
  };
  if (kind == "ssh") {
    cfg.kind = ModelKind::ssh;
    cfg.ssh.onsite = cpx(model, "epsilon0", 0.0);
    cfg.ssh.t0 = parse_complex(model.require("t0"));
    cfg.ssh.t1L = parse_complex(model.require("t1L"));
    cfg.ssh.t1R = parse_complex(model.require("t1R"));
    cfg.ssh.t2 = parse_complex(model.require("t2"));
  } else if (kind == "ladder") {
    cfg.kind = ModelKind::ladder;
    cfg.ladder.onsite = cpx(model, "epsilon0", 0.0);
    cfg.ladder.t0L = parse_complex(model.require("t0L"));
    cfg.ladder.t0R = parse_complex(model.require("t0R"));
    cfg.ladder.tL_AA = parse_complex(model.require("tL_AA"));
    cfg.ladder.tL_BB = parse_complex(model.require("tL_BB"));
    cfg.ladder.tL_AB = parse_complex(model.require("tL_AB"));
    cfg.ladder.tL_BA = parse_complex(model.require("tL_BA"));
    cfg.ladder.tR_AA = parse_complex(model.require("tR_AA"));
    cfg.ladder.tR_BB = parse_complex(model.require("tR_BB"));
    cfg.ladder.tR_AB = parse_complex(model.require("tR_AB"));
    cfg.ladder.tR_BA = parse_complex(model.require("tR_BA"));
  } else if (kind == "generic") {
    cfg.kind = ModelKind::generic;
    int range = static_cast<int>(parse_int(model.require("range"), "[model] range"));
    HoppingSpec spec(cpx(model, "epsilon0", 0.0), range);
    // Hop keys look like hop.<offset>.<to>.<from>, e.g. hop.-2.B.A = 1.3.
    if (model.raw()) {
      for (const auto& [key, entry] : *model.raw()) {
        if (key.rfind("hop.", 0) != 0) continue;
        std::string rest = key.substr(4);
        size_t d1 = rest.find('.');
        size_t d2 = rest.rfind('.');
        if (d1 == std::string::npos || d2 == d1)
          throw config_error("line " + std::to_string(entry.line) +
                             ": hop key must be hop.<offset>.<to>.<from>");
        int m = static_cast<int>(parse_int(rest.substr(0, d1), "[model] " + key));
        std::string to = rest.substr(d1 + 1, d2 - d1 - 1);
        std::string from = rest.substr(d2 + 1);
        auto orb = [&](const std::string& o) {
          if (o == "A") return Orbital::A;
          if (o == "B") return Orbital::B;
          throw config_error("line " + std::to_string(entry.line) +
                             ": orbital must be A or B");
        };
        try {
          spec.set(m, orb(to), orb(from), parse_complex(entry.value));
        } catch (const std::invalid_argument& err) {
          throw config_error("line " + std::to_string(entry.line) + ": " + err.what());
        }
        model.get(key);  // mark used
      }
    }
    cfg.generic = std::move(spec);
  } else {
    throw config_error("[model]: kind must be ssh, ladder or generic (got '" + kind +
                       "')");
  }
  model.finish();

  SectionView run(sections, "run");
  if (!run.present()) throw config_error("missing [run] section");
  cfg.cells = static_cast<int>(parse_int(run.require("cells"), "[run] cells"));
  if (auto v = run.get("theta_grid"))
    cfg.theta_grid = static_cast<int>(parse_int(*v, "[run] theta_grid"));
  if (auto v = run.get("seed")) cfg.seed = static_cast<unsigned long>(parse_int(*v, "[run] seed"));
  run.finish();

  const int min_cells = 2 * cfg.to_spec().range() + 2;
  if (cfg.cells < min_cells)
    throw config_error("[run] cells: need at least " + std::to_string(min_cells) +
                       " cells for this model (got " + std::to_string(cfg.cells) + ")");
  if (cfg.theta_grid < 1) throw config_error("[run] theta_grid: must be positive");

  SectionView tols(sections, "tolerances");
  auto dbl = [&](const std::string& key, double fallback) {
    auto v = tols.get(key);
    return v ? parse_double(*v, "[tolerances] " + key) : fallback;
  };
  cfg.tol.tol_root = dbl("tol_root", cfg.tol.tol_root);
  cfg.tol.tol_vieta = dbl("tol_vieta", cfg.tol.tol_vieta);
  cfg.tol.tol_zero = dbl("tol_zero", cfg.tol.tol_zero);
  cfg.tol.tol_sep = dbl("tol_sep", cfg.tol.tol_sep);
  cfg.tol.tol_cond = dbl("tol_cond", cfg.tol.tol_cond);
  cfg.tol.tol_gbz = dbl("tol_gbz", cfg.tol.tol_gbz);
  cfg.tol.tol_rank = dbl("tol_rank", cfg.tol.tol_rank);
  cfg.tol.tol_cluster = dbl("tol_cluster", cfg.tol.tol_cluster);
  cfg.tol.edge_exclusion = dbl("edge_exclusion", cfg.tol.edge_exclusion);
  cfg.tol.state_residual = dbl("state_residual", cfg.tol.state_residual);
  if (auto v = tols.get("grid_per_cell"))
    cfg.tol.grid_per_cell = static_cast<int>(parse_int(*v, "[tolerances] grid_per_cell"));
  tols.finish();

  SectionView output(sections, "output");
  if (auto v = output.get("directory")) cfg.out_dir = *v;
  if (auto v = output.get("formats")) {
    cfg.formats.clear();
    std::istringstream fs(*v);
    std::string item;
    while (std::getline(fs, item, ',')) {
      item = trim(item);
      if (item != "csv" && item != "json")
        throw config_error("[output] formats: unsupported format '" + item + "'");
      cfg.formats.push_back(item);
    }
  }
  output.finish();

  if (cfg.out_dir.empty()) {
    const char* env = std::getenv("GBLOCH_OUT_DIR");
    cfg.out_dir = env && *env ? env : ".";
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw config_error("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace gbloch
