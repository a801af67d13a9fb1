#include "contactwave/snapshot_io.hpp"

#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <vector>

#include "contactwave/errors.hpp"

namespace cw {

namespace {

std::string shortest(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& tok, const std::string& ctx) {
  double out = 0.0;
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size())
    throw std::runtime_error(ctx + ": bad number '" + tok + "'");
  return out;
}

constexpr const char* kColumns = "x,v,u,theta,V,U,Theta,phi,psi,zeta";

}  // namespace

std::string params_hash(const PhysParams& p) {
  std::ostringstream os;
  os << shortest(p.R) << '|' << shortest(p.gamma) << '|' << shortest(p.mu) << '|'
     << shortest(p.kappa) << '|' << shortest(p.theta_minus) << '|' << shortest(p.theta_plus)
     << '|' << shortest(p.v_plus) << '|' << p.delta0_inverse;
  const std::string s = os.str();
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream hex;
  hex << std::hex << h;
  return hex.str();
}

void write_snapshot(const std::string& path, const FlowField& flow, const ProfileField& profile,
                    const PhysParams& p, const Grid& grid) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open snapshot file for writing: " + path);
  out << "# contactwave-snapshot schema=" << kSnapshotSchemaVersion << "\n";
  out << "# params=" << params_hash(p) << "\n";
  out << "# t=" << shortest(flow.t) << "\n";
  out << kColumns << "\n";
  for (int j = 0; j < grid.n; ++j) {
    out << shortest(grid.x(j)) << ',' << shortest(flow.v(j)) << ',' << shortest(flow.u(j)) << ','
        << shortest(flow.theta(j)) << ',' << shortest(profile.V(j)) << ','
        << shortest(profile.U(j)) << ',' << shortest(profile.Theta(j)) << ','
        << shortest(flow.v(j) - profile.V(j)) << ',' << shortest(flow.u(j) - profile.U(j)) << ','
        << shortest(flow.theta(j) - profile.Theta(j)) << "\n";
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

Snapshot read_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open snapshot file: " + path);
  std::string line;
  Snapshot snap;

  if (!std::getline(in, line) || line.rfind("# contactwave-snapshot schema=", 0) != 0)
    throw std::runtime_error(path + ": not a contactwave snapshot");
  const int version = static_cast<int>(parse_double(line.substr(line.find('=') + 1), path));
  if (version != kSnapshotSchemaVersion)
    throw SchemaMismatch(path + ": snapshot schema " + std::to_string(version) +
                         " but this reader expects " + std::to_string(kSnapshotSchemaVersion));
  snap.schema_version = version;

  if (!std::getline(in, line) || line.rfind("# params=", 0) != 0)
    throw std::runtime_error(path + ": missing params header");
  snap.params_hash = line.substr(line.find('=') + 1);

  if (!std::getline(in, line) || line.rfind("# t=", 0) != 0)
    throw std::runtime_error(path + ": missing time header");
  snap.t = parse_double(line.substr(line.find('=') + 1), path);

  if (!std::getline(in, line) || line != kColumns)
    throw std::runtime_error(path + ": unexpected column header '" + line + "'");

  std::vector<std::array<double, 10>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::array<double, 10> row{};
    std::stringstream ss(line);
    std::string tok;
    for (int c = 0; c < 10; ++c) {
      if (!std::getline(ss, tok, ',')) throw std::runtime_error(path + ": short row");
      row[c] = parse_double(tok, path);
    }
    rows.push_back(row);
  }
  const Eigen::Index n = static_cast<Eigen::Index>(rows.size());
  Array* cols[10] = {&snap.x, &snap.v,   &snap.u,   &snap.theta, &snap.V,
                     &snap.U, &snap.Theta, &snap.phi, &snap.psi,   &snap.zeta};
  for (auto* c : cols) c->resize(n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (int c = 0; c < 10; ++c) (*cols[c])(i) = rows[i][c];
  return snap;
}

}  // namespace cw
