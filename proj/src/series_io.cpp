#include "contactwave/series_io.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "contactwave/config.hpp"
#include "contactwave/snapshot_io.hpp"

namespace cw {

namespace {

std::string shortest(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_text(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << body;
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace

void write_series_csv(const std::string& path, const DecaySeries& series) {
  std::string body = "t,value\n";
  for (size_t i = 0; i < series.t.size(); ++i)
    body += shortest(series.t[i]) + "," + shortest(series.value[i]) + "\n";
  write_text(path, body);
}

void write_energy_csv(const std::string& path, const std::vector<EnergyReport>& energy) {
  std::string body =
      "t,l2_sq,h1_sq,linf,rel_entropy,dissipation_accum,second_deriv_dissipation,"
      "weighted_theta_x_accum,source_budget_accum\n";
  for (const auto& e : energy) {
    body += shortest(e.t) + "," + shortest(e.l2_sq) + "," + shortest(e.h1_sq) + "," +
            shortest(e.linf) + "," + shortest(e.rel_entropy) + "," +
            shortest(e.dissipation_accum) + "," + shortest(e.second_deriv_dissipation) + "," +
            shortest(e.weighted_theta_x_accum) + "," + shortest(e.source_budget_accum) + "\n";
  }
  write_text(path, body);
}

std::string summary_json(const RunRecord& rec) {
  using json = nlohmann::ordered_json;
  json root;
  root["schema_version"] = 1;
  root["scenario"] = to_string(rec.scenario.kind);
  root["failed"] = rec.failed;
  if (rec.failed) root["failure"] = rec.failure;

  const PhysParams& p = rec.scenario.params;
  json params;
  params["R"] = p.R;
  params["gamma"] = p.gamma;
  params["mu"] = p.mu;
  params["kappa"] = p.kappa;
  params["theta_minus"] = p.theta_minus;
  params["theta_plus"] = p.theta_plus;
  params["v_plus"] = p.v_plus;
  params["delta0"] = "1/" + std::to_string(p.delta0_inverse);
  params["hash"] = params_hash(p);
  root["params"] = params;

  json grid;
  grid["L"] = rec.grid.half_width;
  grid["N"] = rec.grid.n;
  grid["dx"] = rec.grid.dx();
  root["grid"] = grid;
  root["t_final"] = rec.scenario.t_final;
  root["seed"] = rec.scenario.seed;

  json flags = json::array();
  for (const auto& f : rec.flags) {
    json jf;
    jf["name"] = f.name;
    jf["claim"] = f.claim;
    jf["asserted"] = f.asserted;
    jf["pass"] = f.pass;
    jf["measured"] = f.measured;
    if (!f.detail.empty()) jf["detail"] = f.detail;
    flags.push_back(jf);
  }
  root["flags"] = flags;

  json fits;
  for (const auto& [name, fit] : rec.fits) {
    json jf;
    jf["exponent"] = fit.exponent;
    jf["log_constant"] = fit.log_constant;
    jf["rms_residual"] = fit.rms_residual;
    jf["t_lo"] = fit.t_lo;
    jf["t_hi"] = fit.t_hi;
    jf["n_used"] = fit.n_used;
    fits[name] = jf;
  }
  root["fits"] = fits;

  json audits;
  for (const auto& [name, value] : rec.audits) audits[name] = value;
  root["audits"] = audits;

  json series = json::array();
  for (const auto& [name, s] : rec.series) {
    (void)s;
    series.push_back(name + ".csv");
  }
  root["series_files"] = series;
  return root.dump(2) + "\n";
}

std::string emit_run(const RunRecord& rec, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  for (const auto& [name, s] : rec.series) write_series_csv(dir + "/" + name + ".csv", s);
  if (!rec.energy.empty()) write_energy_csv(dir + "/energy.csv", rec.energy);
  for (size_t i = 0; i < rec.snapshots.size(); ++i) {
    const auto& snap = rec.snapshots[i];
    write_snapshot(dir + "/snapshot_" + std::to_string(i) + ".csv", snap.flow, snap.profile,
                   rec.scenario.params, rec.grid);
  }
  const std::string cfg_path = dir + "/config_echo.cfg";
  RunConfig echo;
  echo.scenario = rec.scenario;
  write_text(cfg_path, serialize_config(echo));
  const std::string path = dir + "/summary.json";
  write_text(path, summary_json(rec));
  return path;
}

}  // namespace cw
