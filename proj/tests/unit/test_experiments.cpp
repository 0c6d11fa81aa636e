#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "mtqite/error.hpp"
#include "mtqite/experiments.hpp"

using namespace mtqite;
using nlohmann::json;

namespace {

const std::filesystem::path kConfigs = std::filesystem::path(MTQITE_SOURCE_DIR) / "configs";

// CSV text with the wall-time column removed.
std::string csv_without_wall_time(const std::vector<ResultRow>& rows) {
  auto copy = rows;
  for (auto& r : copy) r.wall_time = 0.0;
  std::ostringstream os;
  write_csv(os, copy);
  return os.str();
}

}  // namespace

TEST(Csv, Formatting) {
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(format_double(-2.0), "-2");
  EXPECT_EQ(format_double(1e-16), "9.9999999999999998e-17");
  EXPECT_EQ(csv_field("plain"), "plain");
  EXPECT_EQ(csv_field("a,b"), "\"a,b\"");
  EXPECT_EQ(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
  ResultRow r;
  r.algorithm = "mtqite";
  r.model = "m";
  r.dts = {0.25, 0.5};
  std::ostringstream os;
  write_csv(os, {r});
  EXPECT_EQ(os.str(), std::string(kCsvHeader) + "\r\n0,mtqite,m,0,0.25;0.5,0,0,0,0,0,0,0\r\n");
}

TEST(Experiment, ToyConfigConverges) {
  const auto cfg = load_config(kConfigs / "toy_1q.json");
  const auto res = run_experiment(cfg, false);
  ASSERT_EQ(res.mtqite_runs.size(), 1u);
  ASSERT_EQ(res.qite_runs.size(), 1u);
  EXPECT_EQ(res.rows.size(), 2u * (static_cast<std::size_t>(cfg.trotter_steps) + 1));
  EXPECT_LT(res.mtqite_runs[0].record.steps.back().infidelity, 1e-4);
  EXPECT_TRUE(res.invariants.monotonic);
  EXPECT_TRUE(res.invariants.scan_below_diagonal);
  const auto& s = res.summary["algorithms"]["mtqite"];
  EXPECT_EQ(s["runs"], 1);
  EXPECT_GE(s["final_infidelity"]["min"].get<double>(), kInfidelityFloor);
  EXPECT_TRUE(res.summary["invariants"]["hermitian_only_ledger"].is_null());
}

TEST(Experiment, DeterministicCsv) {
  auto cfg = load_config(kConfigs / "xxz6_grid6.json");
  cfg.trotter_steps = 2;
  const auto a = run_experiment(cfg, false);
  const auto b = run_experiment(cfg, false);
  EXPECT_EQ(csv_without_wall_time(a.rows), csv_without_wall_time(b.rows));
}

TEST(Experiment, WritesFiles) {
  auto cfg = load_config(kConfigs / "toy_1q.json");
  cfg.output_dir = std::filesystem::temp_directory_path() / "mtqite_test_out";
  cfg.trotter_steps = 2;
  std::filesystem::remove_all(cfg.output_dir);
  run_experiment(cfg, true);
  ASSERT_TRUE(std::filesystem::exists(cfg.csv_path()));
  std::ifstream js(cfg.json_path());
  const auto summary = json::parse(js);
  EXPECT_EQ(summary["name"], "toy_1q");
  std::ifstream csv(cfg.csv_path());
  std::string header;
  std::getline(csv, header);
  EXPECT_EQ(header, std::string(kCsvHeader) + "\r");
}

TEST(InitialBatch, SymmetricAndSeeded) {
  const auto h = build_xxz(6, 1.0);
  const auto g = find_z2_symmetries(h);
  initial_spec::SymmetricBatch spec;
  spec.count = 5;
  const auto a = generate_initial_batch(spec, 7, g, 6);
  const auto b = generate_initial_batch(spec, 7, g, 6);
  ASSERT_EQ(a.size(), 5u);
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_EQ(a[k], b[k]);
    for (const auto& e : g.elements()) EXPECT_NEAR(a[k].expectation(e).real(), 1.0, 1e-8);
  }
  const auto c = generate_initial_batch(spec, 8, g, 6);
  bool differs = false;
  for (std::size_t k = 0; k < a.size(); ++k) differs = differs || !(a[k] == c[k]);
  EXPECT_TRUE(differs);
}

TEST(InitialBatch, UnreachableSectorIsAConfigError) {
  auto g = find_z2_symmetries(build_tfim(4, 1.0));
  g.chosen_sector = {-1};
  initial_spec::SymmetricBatch spec;
  spec.x_prob = 0.0;
  spec.h_prob = 1.0;  // always |++++>, parity +1
  EXPECT_THROW(generate_initial_batch(spec, 1, g, 4), ConfigError);
}

TEST(Experiment, CheckDescribesTerms) {
  const auto p = prepare(load_config(kConfigs / "fig3b_tfim6_3p.json"));
  const auto d = describe(p);
  ASSERT_EQ(d["terms"].size(), 3u);
  EXPECT_EQ(d["terms"][0]["basis_size"], 127);
  EXPECT_EQ(d["terms"][2]["inversion_of"], 0);
  EXPECT_EQ(d["symmetry_generators"][0], "XXXXXX");
  EXPECT_GT(d["ledger_estimate"]["qite_linear_per_run"].get<std::size_t>(), 0u);
}

TEST(Experiment, HartreeFockStateFillsLowestSpinOrbitals) {
  const auto p = prepare(load_config(kConfigs / "h4_1.00_1p.json"));
  const auto states = initial_states(p);
  ASSERT_EQ(states.size(), 1u);
  EXPECT_EQ(states[0], StateVector::from_bits("11110000"));
  EXPECT_EQ(p.bases[0].size(), build_uccgsd_pool(8).size());
}

TEST(Sweep, RunsEachValue) {
  auto cfg = load_config(kConfigs / "hubbard3.json");
  auto doc = cfg.source;
  doc["model"]["sites"] = 2;
  doc["initial_state"]["bits"] = "1001";
  doc["trotter_steps"] = 1;
  doc["grid"] = {{"l", 2}, {"t_max", 0.2}};
  cfg = parse_config(doc, cfg.base_dir);
  const auto sw = sweep(cfg, "model.u", {"2", "8"}, false);
  ASSERT_EQ(sw.results.size(), 2u);
  EXPECT_EQ(sw.results[1].summary["model"], "hubbard_L2_U8");
  EXPECT_THROW(sweep(cfg, "model.v", {"1"}, false), ConfigError);
}
