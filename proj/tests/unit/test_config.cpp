#include <gtest/gtest.h>

#include <cstdlib>
#include <string>

#include "mtqite/config.hpp"
#include "mtqite/error.hpp"

using namespace mtqite;
using nlohmann::json;

namespace {

json minimal() {
  return json::parse(R"({"model": {"type": "xxz", "n": 4, "j": 0.5},
                         "initial_state": {"type": "bitstring", "bits": "0101"}})");
}

std::string config_error(const json& doc) {
  try {
    parse_config(doc);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(Config, Defaults) {
  const auto c = parse_config(minimal());
  EXPECT_EQ(c.name, "experiment");
  EXPECT_EQ(c.model.kind, ModelKind::xxz);
  EXPECT_EQ(c.model.n, 4);
  EXPECT_EQ(c.model.j, 0.5);
  EXPECT_EQ(c.basis, BasisKind::pauli);
  EXPECT_TRUE(c.symmetry_reduction);
  EXPECT_EQ(c.formulation, Formulation::pauli_order2);
  EXPECT_EQ(c.grid.size(), 13u);
  EXPECT_EQ(c.trotter_steps, 10);
  EXPECT_EQ(c.qite_steps(), 10);
  EXPECT_EQ(c.algorithm, Algorithm::both);
  EXPECT_EQ(c.term_order, TermOrder::first_term_first);
  EXPECT_EQ(c.seed, 1u);
  EXPECT_TRUE(std::holds_alternative<partition_spec::Trivial>(c.partition));
  EXPECT_EQ(model_tag(c.model), "xxz_n4_J0.5");
}

TEST(Config, FullDocument) {
  auto doc = minimal();
  doc["name"] = "run1";
  doc["partition"] = {{"type", "blocks"}, {"count", 2}, {"merge", {{0}, {1}}}};
  doc["domain_size"] = 3;
  doc["grid"] = {{"values", {0.0, 0.2, 0.1}}};
  doc["trotter_steps"] = 4;
  doc["qite_trotter_steps"] = 2;
  doc["algorithm"] = "mtqite";
  doc["seed"] = 99;
  doc["term_order"] = "last_term_first";
  doc["apply_mode"] = "exact_generator";
  doc["output"] = {{"dir", "/tmp/out"}, {"csv", "a.csv"}};
  const auto c = parse_config(doc);
  EXPECT_EQ(c.grid.values, (std::vector<double>{0.0, 0.1, 0.2}));
  EXPECT_EQ(c.qite_steps(), 2);
  EXPECT_EQ(c.algorithm, Algorithm::mtqite);
  EXPECT_EQ(c.term_order, TermOrder::last_term_first);
  EXPECT_EQ(c.apply_mode, ApplyMode::exact_generator);
  EXPECT_EQ(std::get<partition_spec::Blocks>(c.partition).merge.size(), 2u);
  EXPECT_EQ(c.csv_path(), std::filesystem::path("/tmp/out/a.csv"));
  EXPECT_EQ(c.json_path(), std::filesystem::path("/tmp/out/run1.json"));
}

TEST(Config, OutputDirFromEnvironment) {
  auto doc = minimal();
  doc["name"] = "envtest";
  ::setenv("MTQITE_OUTPUT_DIR", "/tmp/mtqite_env", 1);
  EXPECT_EQ(parse_config(doc).csv_path(), std::filesystem::path("/tmp/mtqite_env/envtest.csv"));
  ::unsetenv("MTQITE_OUTPUT_DIR");
  EXPECT_EQ(parse_config(doc).csv_path(), std::filesystem::path("results/envtest.csv"));
}

TEST(Config, UnknownKeysNameTheirPath) {
  auto doc = minimal();
  doc["model"]["spin"] = 1;
  EXPECT_NE(config_error(doc).find("model.spin"), std::string::npos);
  doc = minimal();
  doc["grid"] = {{"l", 3}, {"tmax", 0.4}};
  EXPECT_NE(config_error(doc).find("grid.tmax"), std::string::npos);
  doc = minimal();
  doc["trotter"] = 3;
  EXPECT_NE(config_error(doc).find("trotter"), std::string::npos);
}

TEST(Config, RejectsBadValues) {
  auto bad = [](auto mutate) {
    auto doc = minimal();
    mutate(doc);
    return !config_error(doc).empty();
  };
  EXPECT_TRUE(bad([](json& d) { d["model"]["type"] = "potts"; }));
  EXPECT_TRUE(bad([](json& d) { d["model"]["n"] = 0; }));
  EXPECT_TRUE(bad([](json& d) { d["model"]["n"] = "four"; }));
  EXPECT_TRUE(bad([](json& d) { d["partition"] = {{"type", "random"}}; }));
  EXPECT_TRUE(bad([](json& d) { d["domain_size"] = -1; }));
  EXPECT_TRUE(bad([](json& d) { d["basis"] = "uccgsd"; }));
  EXPECT_TRUE(bad([](json& d) { d["formulation"] = "order3"; }));
  EXPECT_TRUE(bad([](json& d) { d["grid"] = {{"values", {0.1, 0.1}}}; }));
  EXPECT_TRUE(bad([](json& d) { d["grid"] = {{"l", 0}}; }));
  EXPECT_TRUE(bad([](json& d) { d["algorithm"] = "vqe"; }));
  EXPECT_TRUE(bad([](json& d) { d["seed"] = -3; }));
  EXPECT_TRUE(bad([](json& d) { d["qite_trotter_steps"] = -1; }));
  EXPECT_TRUE(bad([](json& d) { d["initial_state"] = {{"type", "hartree_fock"}}; }));
  EXPECT_TRUE(bad([](json& d) { d["initial_state"] = {{"type", "symmetric_batch"}, {"count", 0}}; }));
  EXPECT_TRUE(bad([](json& d) { d["initial_state"] = {{"type", "symmetric_batch"}, {"x_prob", 1.5}}; }));
  EXPECT_TRUE(bad([](json& d) { d.erase("initial_state"); }));
  EXPECT_TRUE(bad([](json& d) { d["name"] = "a/b"; }));
  EXPECT_TRUE(bad([](json& d) { d["output"] = {{"folder", "x"}}; }));
  EXPECT_TRUE(bad([](json& d) { d["term_order"] = "random"; }));
}

TEST(Config, MoleculeDefaultsAndRelativePaths) {
  const auto dir = std::filesystem::path(MTQITE_SOURCE_DIR) / "configs";
  const auto c = parse_config(json::parse(R"({"model": {"type": "molecule",
                                                         "fcidump": "../data/fcidump/h2_0.74.fcidump"}})"),
                              dir);
  EXPECT_EQ(c.basis, BasisKind::uccgsd);
  EXPECT_EQ(c.formulation, Formulation::antihermitian_order2);
  EXPECT_FALSE(c.symmetry_reduction);
  EXPECT_TRUE(std::holds_alternative<initial_spec::HartreeFock>(c.initial));
  EXPECT_TRUE(std::filesystem::exists(c.model.fcidump));
  EXPECT_EQ(model_tag(c.model), "h2_0.74");
  EXPECT_THROW(parse_config(json::parse(R"({"model": {"type": "molecule", "fcidump": "missing.fcidump"}})"), dir),
               ConfigError);
}

TEST(Config, ModelTags) {
  ModelSpec m;
  m.kind = ModelKind::tfim;
  m.n = 6;
  m.h_over_j = 1.0;
  EXPECT_EQ(model_tag(m), "tfim_n6_h1");
  m.kind = ModelKind::hubbard;
  m.n = 3;
  m.u = 4.0;
  EXPECT_EQ(model_tag(m), "hubbard_L3_U4");
}

TEST(Config, CommittedConfigsLoad) {
  const auto dir = std::filesystem::path(MTQITE_SOURCE_DIR) / "configs";
  int n = 0;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() != ".json") continue;
    EXPECT_NO_THROW(load_config(entry.path())) << entry.path();
    ++n;
  }
  EXPECT_GT(n, 5);
  EXPECT_THROW(load_config(dir / "does_not_exist.json"), ConfigError);
}
