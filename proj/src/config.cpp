#include "contactwave/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "contactwave/errors.hpp"

namespace cw {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// shortest representation that parses back to the same double
std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_real(const std::string& tok, int line, const std::string& key) {
  const auto slash = tok.find('/');
  if (slash != std::string::npos) {
    const std::string num = trim(tok.substr(0, slash));
    const std::string den = trim(tok.substr(slash + 1));
    try {
      const double p = std::stod(num);
      const double q = std::stod(den);
      if (q == 0.0) throw ConfigError(line, key + ": zero denominator");
      return p / q;
    } catch (const ConfigError&) {
      throw;
    } catch (...) {
      throw ConfigError(line, key + ": cannot parse rational '" + tok + "'");
    }
  }
  double out = 0.0;
  const char* b = tok.data();
  const char* e = tok.data() + tok.size();
  const auto res = std::from_chars(b, e, out);
  if (res.ec != std::errc{} || res.ptr != e)
    throw ConfigError(line, key + ": cannot parse number '" + tok + "'");
  return out;
}

long parse_int(const std::string& tok, int line, const std::string& key) {
  long out = 0;
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size())
    throw ConfigError(line, key + ": cannot parse integer '" + tok + "'");
  return out;
}

int parse_delta0(const std::string& tok, int line) {
  const auto slash = tok.find('/');
  if (slash == std::string::npos || trim(tok.substr(0, slash)) != "1")
    throw ConfigError(line, "delta0 must be written 1/(odd integer), got '" + tok + "'");
  const long inv = parse_int(trim(tok.substr(slash + 1)), line, "delta0");
  if (inv < 1 || inv % 2 == 0)
    throw ConfigError(line, "delta0 reciprocal must be odd, got '" + tok + "'");
  return static_cast<int>(inv);
}

std::vector<std::string> split_list(const std::string& tok) {
  std::vector<std::string> out;
  std::stringstream ss(tok);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

InitialData::Kind initial_kind_from(const std::string& name, int line) {
  if (name == "none") return InitialData::Kind::none;
  if (name == "gaussian") return InitialData::Kind::gaussian;
  if (name == "cosine") return InitialData::Kind::cosine;
  if (name == "random_smooth") return InitialData::Kind::random_smooth;
  throw ConfigError(line, "unknown initial-data kind '" + name + "'");
}

std::string initial_kind_name(InitialData::Kind kind) {
  switch (kind) {
    case InitialData::Kind::none: return "none";
    case InitialData::Kind::gaussian: return "gaussian";
    case InitialData::Kind::cosine: return "cosine";
    case InitialData::Kind::random_smooth: return "random_smooth";
  }
  return "none";
}

bool parse_bool(const std::string& tok, int line, const std::string& key) {
  if (tok == "true") return true;
  if (tok == "false") return false;
  throw ConfigError(line, key + ": expected true or false, got '" + tok + "'");
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  Scenario& s = cfg.scenario;
  s = Scenario{};  // file values override the plain defaults, not the presets
  bool scenario_seen = false;

  static const std::map<std::string, std::set<std::string>> schema = {
      {"run", {"scenario", "seed", "snapshot_every", "out_dir", "tune_mu_zero_forcing", "with_flow"}},
      {"physics",
       {"R", "gamma", "mu", "kappa", "theta_minus", "theta_plus", "v_plus", "delta0"}},
      {"grid", {"L", "N", "refine", "dx_target"}},
      {"time", {"t_final", "output_t0", "output_ratio", "fit_t_lo", "fit_t_hi"}},
      {"initial", {"kind", "amp_phi", "amp_psi", "amp_zeta", "center", "width"}},
      {"sweep", {"delta0_inverses", "amplitudes", "t_final", "gap_amplitudes", "gap_time"}},
  };

  std::string section;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string ln = trim(raw);
    if (ln.empty() || ln[0] == '#') continue;
    if (ln.front() == '[') {
      if (ln.back() != ']') throw ConfigError(line, "malformed section header '" + ln + "'");
      section = trim(ln.substr(1, ln.size() - 2));
      if (schema.find(section) == schema.end())
        throw ConfigError(line, "unknown section [" + section + "]");
      continue;
    }
    const auto eq = ln.find('=');
    if (eq == std::string::npos) throw ConfigError(line, "expected key = value, got '" + ln + "'");
    if (section.empty()) throw ConfigError(line, "key outside of any section");
    const std::string key = trim(ln.substr(0, eq));
    const std::string val = trim(ln.substr(eq + 1));
    if (schema.at(section).find(key) == schema.at(section).end())
      throw ConfigError(line, "unknown key '" + key + "' in section [" + section + "]");
    const std::string qual = section + "." + key;
    if (!seen.insert(qual).second) throw ConfigError(line, "duplicate key '" + qual + "'");

    if (section == "run") {
      if (key == "scenario") {
        try {
          s.kind = scenario_kind_from(val);
        } catch (const std::invalid_argument& e) {
          throw ConfigError(line, e.what());
        }
        scenario_seen = true;
      } else if (key == "seed") {
        s.seed = static_cast<std::uint64_t>(parse_int(val, line, key));
      } else if (key == "snapshot_every") {
        s.snapshot_every = static_cast<int>(parse_int(val, line, key));
      } else if (key == "out_dir") {
        cfg.out_dir = val;
      } else if (key == "tune_mu_zero_forcing") {
        s.tune_mu_zero_forcing = parse_bool(val, line, key);
      } else if (key == "with_flow") {
        s.with_flow = parse_bool(val, line, key);
      }
    } else if (section == "physics") {
      if (key == "delta0") {
        s.params.delta0_inverse = parse_delta0(val, line);
      } else {
        const double x = parse_real(val, line, key);
        if (key == "R") s.params.R = x;
        else if (key == "gamma") s.params.gamma = x;
        else if (key == "mu") s.params.mu = x;
        else if (key == "kappa") s.params.kappa = x;
        else if (key == "theta_minus") s.params.theta_minus = x;
        else if (key == "theta_plus") s.params.theta_plus = x;
        else if (key == "v_plus") s.params.v_plus = x;
      }
    } else if (section == "grid") {
      if (key == "L") {
        if (val == "auto") {
          s.grid.auto_half_width = true;
        } else {
          s.grid.auto_half_width = false;
          s.grid.half_width = parse_real(val, line, key);
          if (!(s.grid.half_width > 0.0)) throw ConfigError(line, "L must be positive");
        }
      } else if (key == "N") {
        if (val == "auto") {
          s.grid.auto_n = true;
        } else {
          s.grid.auto_n = false;
          s.grid.n = static_cast<int>(parse_int(val, line, key));
          if (s.grid.n < 64) throw ConfigError(line, "N must be at least 64");
        }
      } else if (key == "refine") {
        s.grid.refine = static_cast<int>(parse_int(val, line, key));
        if (s.grid.refine < 0 || s.grid.refine > 8)
          throw ConfigError(line, "refine must be between 0 and 8");
      } else if (key == "dx_target") {
        s.grid.dx_target = parse_real(val, line, key);
        if (!(s.grid.dx_target > 0.0)) throw ConfigError(line, "dx_target must be positive");
      }
    } else if (section == "time") {
      const double x = parse_real(val, line, key);
      if (key == "t_final") {
        if (!(x > 0.0)) throw ConfigError(line, "t_final must be positive");
        s.t_final = x;
      } else if (key == "output_t0") {
        if (!(x > 0.0)) throw ConfigError(line, "output_t0 must be positive");
        s.cadence.t0 = x;
      } else if (key == "output_ratio") {
        if (!(x > 1.0)) throw ConfigError(line, "output_ratio must exceed 1");
        s.cadence.ratio = x;
      } else if (key == "fit_t_lo") {
        s.fit_t_lo = x;
      } else if (key == "fit_t_hi") {
        s.fit_t_hi = x;
      }
    } else if (section == "initial") {
      if (key == "kind") {
        s.init.kind = initial_kind_from(val, line);
      } else {
        const double x = parse_real(val, line, key);
        if (key == "amp_phi") s.init.amp_phi = x;
        else if (key == "amp_psi") s.init.amp_psi = x;
        else if (key == "amp_zeta") s.init.amp_zeta = x;
        else if (key == "center") s.init.center = x;
        else if (key == "width") {
          if (!(x > 0.0)) throw ConfigError(line, "width must be positive");
          s.init.width = x;
        }
      }
    } else if (section == "sweep") {
      if (key == "delta0_inverses") {
        s.delta0_inverses.clear();
        for (const auto& item : split_list(val)) {
          const long inv = parse_int(item, line, key);
          if (inv < 1 || inv % 2 == 0)
            throw ConfigError(line, "delta0_inverses entries must be odd positive");
          s.delta0_inverses.push_back(static_cast<int>(inv));
        }
        if (s.delta0_inverses.size() < 2)
          throw ConfigError(line, "delta0_inverses needs at least two entries");
      } else if (key == "amplitudes") {
        s.amplitudes.clear();
        for (const auto& item : split_list(val))
          s.amplitudes.push_back(parse_real(item, line, key));
        if (s.amplitudes.empty()) throw ConfigError(line, "amplitudes must not be empty");
      } else if (key == "gap_amplitudes") {
        s.gap_amplitudes.clear();
        for (const auto& item : split_list(val))
          s.gap_amplitudes.push_back(parse_real(item, line, key));
        if (s.gap_amplitudes.size() != 2)
          throw ConfigError(line, "gap_amplitudes needs exactly two entries");
      } else if (key == "t_final") {
        s.sweep_t_final = parse_real(val, line, key);
        if (!(s.sweep_t_final > 0.0)) throw ConfigError(line, "sweep t_final must be positive");
      } else if (key == "gap_time") {
        s.gap_time = parse_real(val, line, key);
        if (!(s.gap_time > 0.0)) throw ConfigError(line, "gap_time must be positive");
      }
    }
  }

  if (!scenario_seen) throw ConfigError(0, "missing required key 'run.scenario'");
  s.init.seed = s.seed;
  try {
    s.params.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(0, e.what());
  }
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(0, "cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_config(ss.str());
  } catch (const ConfigError& e) {
    throw ConfigError(e.line, std::string(e.what()) + " [" + path + "]");
  }
}

std::string serialize_config(const RunConfig& cfg) {
  const Scenario& s = cfg.scenario;
  std::ostringstream out;
  out << "[run]\n";
  out << "scenario = " << to_string(s.kind) << "\n";
  out << "seed = " << s.seed << "\n";
  out << "snapshot_every = " << s.snapshot_every << "\n";
  if (!cfg.out_dir.empty()) out << "out_dir = " << cfg.out_dir << "\n";
  if (s.tune_mu_zero_forcing) out << "tune_mu_zero_forcing = true\n";
  if (s.with_flow) out << "with_flow = true\n";
  out << "\n[physics]\n";
  out << "R = " << format_double(s.params.R) << "\n";
  out << "gamma = " << format_double(s.params.gamma) << "\n";
  out << "mu = " << format_double(s.params.mu) << "\n";
  out << "kappa = " << format_double(s.params.kappa) << "\n";
  out << "theta_minus = " << format_double(s.params.theta_minus) << "\n";
  out << "theta_plus = " << format_double(s.params.theta_plus) << "\n";
  out << "v_plus = " << format_double(s.params.v_plus) << "\n";
  out << "delta0 = 1/" << s.params.delta0_inverse << "\n";
  out << "\n[grid]\n";
  out << "L = " << (s.grid.auto_half_width ? std::string("auto") : format_double(s.grid.half_width))
      << "\n";
  out << "N = " << (s.grid.auto_n ? std::string("auto") : std::to_string(s.grid.n)) << "\n";
  out << "refine = " << s.grid.refine << "\n";
  if (s.grid.dx_target > 0.0) out << "dx_target = " << format_double(s.grid.dx_target) << "\n";
  out << "\n[time]\n";
  out << "t_final = " << format_double(s.t_final) << "\n";
  out << "output_t0 = " << format_double(s.cadence.t0) << "\n";
  out << "output_ratio = " << format_double(s.cadence.ratio) << "\n";
  out << "\n[initial]\n";
  out << "kind = " << initial_kind_name(s.init.kind) << "\n";
  out << "amp_phi = " << format_double(s.init.amp_phi) << "\n";
  out << "amp_psi = " << format_double(s.init.amp_psi) << "\n";
  out << "amp_zeta = " << format_double(s.init.amp_zeta) << "\n";
  out << "center = " << format_double(s.init.center) << "\n";
  out << "width = " << format_double(s.init.width) << "\n";
  return out.str();
}

}  // namespace cw
