#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "mtqite/hamiltonians.hpp"
#include "mtqite/ledger.hpp"
#include "mtqite/oracles.hpp"
#include "mtqite/qite.hpp"
#include "mtqite/statevector.hpp"

namespace mtqite {

struct TimeGrid {
  std::vector<double> values;  // ascending, distinct, >= 0

  /// l values evenly spaced on (0, t_max], plus 0 if include_zero.
  static TimeGrid uniform(int l, double t_max, bool include_zero = true);
  static TimeGrid from_values(std::vector<double> values);

  bool include_zero() const noexcept { return !values.empty() && values.front() == 0.0; }
  std::size_t size() const noexcept { return values.size(); }
};

/// Which partition term acts on the reference first.
enum class TermOrder { first_term_first, last_term_first };

struct RunOptions {
  Formulation formulation = Formulation::pauli_order2;
  StepOptions step;
  ApplyMode apply_mode = ApplyMode::rotation_product;
  TermOrder term_order = TermOrder::first_term_first;
  /// Reuse a linked source term's steps when the reference is inversion
  /// symmetric (|<R>| within link_tolerance of 1).
  bool use_symmetry_links = true;
  double link_tolerance = 1e-10;
  /// Energies within this margin of the minimum count as ties.
  double tie_tolerance = 1e-12;
  const GroundSpace* ground = nullptr;
  /// MT-QITE only: called with (step index, state) after every Trotter
  /// step, step 0 being the initial state.
  std::function<void(int, const StateVector&)> on_step;
};

struct StepRecord {
  int step = 0;
  std::vector<double> dts;  // per term, in term-index order
  double energy = 0.0;
  double infidelity = std::numeric_limits<double>::quiet_NaN();
  std::size_t rotations = 0;       // cumulative
  std::size_t ledger_linear = 0;   // cumulative distinct (reference, string)
  std::size_t ledger_scan = 0;     // cumulative, keyed by candidate state
  std::vector<double> residuals;   // per term
  double diagonal_energy = std::numeric_limits<double>::quiet_NaN();
  int excluded_points = 0;
  int transported_terms = 0;
};

struct RunRecord {
  std::string algorithm;
  std::vector<StepRecord> steps;  // steps[0] is the initial state
  StateVector final_state{1};
  MeasurementLedger ledger;
  double chosen_dt = std::numeric_limits<double>::quiet_NaN();  // baseline only
  std::vector<double> excluded_dts;                            // baseline only
};

/// Steps of one term for every grid value; nullopt marks an excluded
/// (c <= 0) grid point. dt = 0 always yields the empty step.
struct TermSolution {
  std::vector<std::optional<UnitaryStep>> per_dt;
  bool transported = false;
  int excluded = 0;
};

/// Solves every (term, dt) pair against the frozen reference.
std::vector<TermSolution> solve_terms(const StateVector& reference, const HamiltonianPartition& partition,
                                      const std::vector<QiteBasis>& bases, const TimeGrid& grid,
                                      const RunOptions& opts, MeasurementLedger* ledger,
                                      std::uint64_t reference_id);

struct ScanResult {
  std::vector<double> energies;          // row-major over per-term grid indices
  std::vector<std::size_t> choice;       // winning grid index per term
  double energy = 0.0;
  double diagonal_energy = std::numeric_limits<double>::quiet_NaN();
  std::size_t candidates = 0;            // evaluated (non-excluded) states
};

/// Evaluates <H> for every combination of per-term steps. Each candidate
/// state gets id first_candidate_id + its row-major index in the ledger.
ScanResult energy_scan(const StateVector& reference, const std::vector<TermSolution>& table,
                       const ObservableSum& h_full, const TimeGrid& grid, const RunOptions& opts,
                       MeasurementLedger* ledger, std::uint64_t first_candidate_id);

RunRecord run_mtqite(const HamiltonianPartition& partition, const std::vector<QiteBasis>& bases,
                     const StateVector& initial, const TimeGrid& grid, int steps, const RunOptions& opts = {});

RunRecord run_qite_baseline(const HamiltonianPartition& partition, const std::vector<QiteBasis>& bases,
                            const StateVector& initial, const TimeGrid& grid, int steps,
                            const RunOptions& opts = {});

}  // namespace mtqite
