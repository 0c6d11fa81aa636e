#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "mtqite/driver.hpp"
#include "mtqite/hamiltonians.hpp"
#include "mtqite/qite.hpp"

namespace mtqite {

enum class ModelKind { tfim, xxz, hubbard, molecule, pauli_sum };
enum class Algorithm { qite, mtqite, both };
enum class BasisKind { pauli, uccgsd };

struct ModelSpec {
  ModelKind kind = ModelKind::tfim;
  int n = 0;                     // spins (tfim, xxz) or sites (hubbard)
  double h_over_j = 1.0;         // tfim
  double j = 1.0;                // xxz
  double u = 4.0;                // hubbard
  std::filesystem::path fcidump; // molecule, resolved against the config directory
  std::vector<std::pair<double, std::string>> terms;  // pauli_sum: (coeff, label)
};

namespace initial_spec {
struct Bitstring {
  std::string bits;
};
struct HartreeFock {};
struct SymmetricBatch {
  int count = 1;
  double x_prob = 0.5;
  double h_prob = 0.5;
  double projection_beta = 10.0;
  int inversion_sector = 0;  // +1 or -1 also projects onto that site-inversion eigenspace
};
}  // namespace initial_spec

using InitialSpec = std::variant<initial_spec::Bitstring, initial_spec::HartreeFock, initial_spec::SymmetricBatch>;

struct ExperimentConfig {
  std::string name = "experiment";
  ModelSpec model;
  PartitionSpec partition = partition_spec::Trivial{};
  int domain_size = 0;
  BasisKind basis = BasisKind::pauli;
  bool symmetry_reduction = true;
  Formulation formulation = Formulation::pauli_order2;
  TimeGrid grid = TimeGrid::uniform(12, 0.5, true);
  int trotter_steps = 10;
  int qite_trotter_steps = -1;  // baseline horizon, -1: same as trotter_steps
  Algorithm algorithm = Algorithm::both;
  InitialSpec initial = initial_spec::Bitstring{};
  std::uint64_t seed = 1;
  double rcond = kDefaultRcond;
  double drop_threshold = kDefaultDropThreshold;
  TermOrder term_order = TermOrder::first_term_first;
  ApplyMode apply_mode = ApplyMode::rotation_product;
  bool use_symmetry_links = true;
  std::filesystem::path output_dir;  // empty: $MTQITE_OUTPUT_DIR, then ./results
  std::string csv_name;              // default <name>.csv
  std::string json_name;             // default <name>.json
  nlohmann::json source;             // the document the config was read from
  std::filesystem::path base_dir;    // relative paths in `source` resolve here

  std::filesystem::path csv_path() const;
  std::filesystem::path json_path() const;
  int qite_steps() const noexcept { return qite_trotter_steps < 0 ? trotter_steps : qite_trotter_steps; }
};

/// Throws ConfigError with the offending key in the message.
ExperimentConfig parse_config(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);

std::string_view to_string(ModelKind k) noexcept;
std::string_view to_string(Algorithm a) noexcept;

/// Short tag such as "xxz_n8_J1" for result rows.
std::string model_tag(const ModelSpec& m);

}  // namespace mtqite
