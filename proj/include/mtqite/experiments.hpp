#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mtqite/config.hpp"
#include "mtqite/driver.hpp"
#include "mtqite/hamiltonians.hpp"
#include "mtqite/oracles.hpp"
#include "mtqite/symmetry.hpp"

namespace mtqite {

inline constexpr double kInfidelityFloor = 1e-16;
inline constexpr int kMaxResamples = 100;

/// Everything derived from a config before any run starts.
struct PreparedExperiment {
  ExperimentConfig config;
  ObservableSum hamiltonian;
  std::optional<MolecularHamiltonian> molecule;
  SymmetryGroup group;  // empty when symmetry reduction is off
  OperatorPool pool;    // uccgsd bases only
  HamiltonianPartition partition;
  std::vector<QiteBasis> bases;
  GroundSpace ground;
};

PreparedExperiment prepare(const ExperimentConfig& config);

/// Symmetry-compatible random product states: X then H per qubit with the
/// given probabilities, then exact imaginary-time projection onto the
/// all-+1 sector of `group`.
std::vector<StateVector> generate_initial_batch(const initial_spec::SymmetricBatch& spec, std::uint64_t seed,
                                                const SymmetryGroup& group, int n_qubits);

std::vector<StateVector> initial_states(const PreparedExperiment& prepared);

struct ResultRow {
  int run_id = 0;
  std::string algorithm;
  std::string model;
  int step = 0;
  std::vector<double> dts;
  double energy = 0.0;
  double exact_energy = 0.0;
  double infidelity = 0.0;
  std::size_t rotations = 0;
  std::size_t paulis_linear = 0;
  std::size_t paulis_scan = 0;
  double wall_time = 0.0;
};

struct InvariantReport {
  bool monotonic = true;
  double max_energy_increase = 0.0;
  bool scan_below_diagonal = true;
  double max_stabilizer_deviation = 0.0;
  bool hermitian_only_ledger = true;
};

struct RunOutcome {
  int run_id = 0;
  RunRecord record;
  double wall_time = 0.0;
};

struct ExperimentResult {
  std::vector<ResultRow> rows;         // ordered by (run id, algorithm, step)
  std::vector<RunOutcome> qite_runs;   // by run id
  std::vector<RunOutcome> mtqite_runs; // by run id
  InvariantReport invariants;
  nlohmann::json summary;
};

ExperimentResult run_prepared(const PreparedExperiment& prepared);
/// Runs the config and writes the CSV and JSON summary unless write_files
/// is false.
ExperimentResult run_experiment(const ExperimentConfig& config, bool write_files = true);
/// Writes the CSV and JSON summary to the config's output paths.
void write_outputs(const ExperimentConfig& config, const ExperimentResult& result);

extern const char* const kCsvHeader;
void write_csv(std::ostream& os, const std::vector<ResultRow>& rows);
/// 17 significant digits, shortest form that round-trips.
std::string format_double(double v);
/// RFC-4180 quoting when needed.
std::string csv_field(const std::string& s);

/// Batch statistics over the final row of every run, per algorithm.
nlohmann::json summarize(const PreparedExperiment& prepared, const ExperimentResult& result);

/// Derived quantities reported by `check`.
nlohmann::json describe(const PreparedExperiment& prepared);

struct SweepResult {
  std::string param;
  std::vector<std::string> values;
  std::vector<ExperimentResult> results;
};

/// Re-runs the config with the dotted key `param` (e.g. "model.u") set to
/// each value in turn and writes one combined CSV.
SweepResult sweep(const ExperimentConfig& base, const std::string& param, const std::vector<std::string>& values,
                  bool write_files = true);

}  // namespace mtqite
