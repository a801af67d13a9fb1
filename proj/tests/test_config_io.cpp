#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "contactwave/config.hpp"
#include "contactwave/errors.hpp"
#include "contactwave/series_io.hpp"
#include "contactwave/snapshot_io.hpp"

using cw::ConfigError;

namespace {

const char* kCanonical =
    "[run]\n"
    "scenario = perturbed_wave\n"
    "seed = 42\n"
    "snapshot_every = 0\n"
    "\n"
    "[physics]\n"
    "R = 1\n"
    "gamma = 1.6666666666666667\n"
    "mu = 1\n"
    "kappa = 1\n"
    "theta_minus = 0.5\n"
    "theta_plus = 1\n"
    "v_plus = 1\n"
    "delta0 = 1/9\n"
    "\n"
    "[grid]\n"
    "L = auto\n"
    "N = auto\n"
    "refine = 0\n"
    "\n"
    "[time]\n"
    "t_final = 160\n"
    "output_t0 = 0.25\n"
    "output_ratio = 1.25\n"
    "\n"
    "[initial]\n"
    "kind = gaussian\n"
    "amp_phi = 0\n"
    "amp_psi = 0\n"
    "amp_zeta = 0.05\n"
    "center = 0\n"
    "width = 1\n";

}  // namespace

TEST_CASE("canonical config parses and round-trips byte-identically") {
  const cw::RunConfig cfg = cw::parse_config(kCanonical);
  CHECK(cfg.scenario.kind == cw::ScenarioKind::perturbed_wave);
  CHECK(cfg.scenario.seed == 42);
  CHECK(cfg.scenario.params.delta0_inverse == 9);
  CHECK(cfg.scenario.t_final == 160.0);
  CHECK(cfg.scenario.init.amp_zeta == 0.05);
  CHECK(cw::serialize_config(cfg) == kCanonical);
  // and the serialized form parses back to the same serialization
  const cw::RunConfig again = cw::parse_config(cw::serialize_config(cfg));
  CHECK(cw::serialize_config(again) == kCanonical);
}

TEST_CASE("config validation errors carry field and line information") {
  SUBCASE("even delta0 reciprocal") {
    std::string text = kCanonical;
    const auto pos = text.find("delta0 = 1/9");
    text.replace(pos, 12, "delta0 = 1/10");
    CHECK_THROWS_WITH_AS(cw::parse_config(text),
                         "line 14: delta0 reciprocal must be odd, got '1/10'", ConfigError);
  }
  SUBCASE("gamma at its excluded boundary") {
    std::string text = kCanonical;
    const auto pos = text.find("gamma = 1.6666666666666667");
    text.replace(pos, 26, "gamma = 1.0");
    CHECK_THROWS_WITH_AS(cw::parse_config(text), "gamma must exceed 1", ConfigError);
  }
  SUBCASE("unknown key is rejected with its line") {
    std::string text = kCanonical;
    text += "unknown_thing = 3\n";
    try {
      cw::parse_config(text);
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("unknown key 'unknown_thing'") != std::string::npos);
      CHECK(e.line == 33);
    }
  }
  SUBCASE("rationals are accepted for reals") {
    std::string text = kCanonical;
    const auto pos = text.find("gamma = 1.6666666666666667");
    text.replace(pos, 26, "gamma = 5/3");
    const auto cfg = cw::parse_config(text);
    CHECK(cfg.scenario.params.gamma == doctest::Approx(5.0 / 3.0).epsilon(1e-15));
  }
  SUBCASE("missing scenario") {
    CHECK_THROWS_AS(cw::parse_config("[physics]\nR = 1\n"), ConfigError);
  }
}

TEST_CASE("snapshot files round-trip losslessly and reject foreign schemas") {
  const cw::PhysParams p;
  const cw::Grid grid = cw::Grid::make(20.0, 257);
  const auto prof = cw::make_profile0(p, grid);
  cw::InitialData spec;
  spec.kind = cw::InitialData::Kind::gaussian;
  spec.amp_zeta = 0.03;
  spec.seed = 5;
  const auto flow = cw::make_initial(prof, spec, grid);

  const std::string path = "test_snapshot_tmp.csv";
  cw::write_snapshot(path, flow, prof, p, grid);
  const cw::Snapshot snap = cw::read_snapshot(path);
  CHECK(snap.schema_version == cw::kSnapshotSchemaVersion);
  CHECK(snap.params_hash == cw::params_hash(p));
  CHECK(snap.t == flow.t);
  REQUIRE(snap.x.size() == grid.n);
  CHECK((snap.v == flow.v).all());
  CHECK((snap.u == flow.u).all());
  CHECK((snap.theta == flow.theta).all());
  CHECK((snap.Theta == prof.Theta).all());
  CHECK((snap.zeta == (flow.theta - prof.Theta)).all());

  // forging the version must be rejected with a clear message
  {
    std::ifstream in(path);
    std::string body((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    in.close();
    body.replace(body.find("schema=1"), 8, "schema=2");
    std::ofstream out(path, std::ios::binary);
    out << body;
  }
  CHECK_THROWS_AS(cw::read_snapshot(path), cw::SchemaMismatch);
  std::remove(path.c_str());
}
