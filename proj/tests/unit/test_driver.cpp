#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "mtqite/driver.hpp"
#include "mtqite/error.hpp"
#include "mtqite/symmetry.hpp"

using namespace mtqite;

namespace {

struct Problem {
  HamiltonianPartition partition;
  std::vector<QiteBasis> bases;
  GroundSpace ground;
  StateVector initial{1};
};

Problem tfim4() {
  Problem p;
  const auto h = build_tfim(4, 1.0);
  PartitionOptions opts;
  opts.domain_size = 3;
  p.partition = make_partition(h, partition_spec::Blocks{2, {}}, opts);
  const auto g = find_z2_symmetries(h);
  for (auto dom : p.partition.domains) p.bases.push_back(QiteBasis::pauli(reduce_basis(dom, g, 4)));
  p.ground = exact_ground(h);
  // Parity-even product state (|0000> + |1111>)/sqrt2 rotated off the ground state.
  std::vector<cplx> amps(16, 0.0);
  amps[0] = 1.0;
  amps[15] = 1.0;
  amps[0b0110] = 0.3;
  amps[0b1001] = 0.3;
  p.initial = StateVector::from_amplitudes(4, amps);
  return p;
}

}  // namespace

TEST(TimeGridTest, UniformAndExplicit) {
  const auto g = TimeGrid::uniform(12, 0.5, true);
  ASSERT_EQ(g.size(), 13u);
  EXPECT_EQ(g.values.front(), 0.0);
  EXPECT_DOUBLE_EQ(g.values[1], 0.5 / 12);
  EXPECT_EQ(g.values.back(), 0.5);
  EXPECT_TRUE(g.include_zero());
  EXPECT_FALSE(TimeGrid::uniform(3, 0.3, false).include_zero());
  EXPECT_EQ(TimeGrid::from_values({0.2, 0.0, 0.1}).values, (std::vector<double>{0.0, 0.1, 0.2}));
  EXPECT_THROW(TimeGrid::from_values({0.1, 0.1}), InputError);
  EXPECT_THROW(TimeGrid::from_values({-0.1}), InputError);
  EXPECT_THROW(TimeGrid::uniform(0, 0.5), InputError);
}

TEST(EnergyScan, MatchesBruteForceProduct) {
  const auto p = tfim4();
  const auto grid = TimeGrid::uniform(3, 0.3, true);
  RunOptions opts;
  MeasurementLedger ledger;
  const auto table = solve_terms(p.initial, p.partition, p.bases, grid, opts, &ledger, 0);
  ASSERT_EQ(table.size(), 2u);
  EXPECT_TRUE(table[1].transported);
  EXPECT_TRUE(table[0].per_dt[0]->empty());
  const auto scan = energy_scan(p.initial, table, p.partition.full, grid, opts, nullptr, 0);
  ASSERT_EQ(scan.energies.size(), 16u);
  double best = 1e300;
  std::size_t arg = 0;
  double diag = 1e300;
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      auto s = apply_unitary_step(p.initial, *table[0].per_dt[i]);
      s = apply_unitary_step(s, *table[1].per_dt[j]);
      const double e = s.expectation(p.partition.full).real();
      EXPECT_NEAR(scan.energies[i * 4 + j], e, 1e-12);
      if (e < best - 1e-12) {
        best = e;
        arg = i * 4 + j;
      }
      if (i == j) diag = std::min(diag, e);
    }
  }
  EXPECT_EQ(scan.choice, (std::vector<std::size_t>{arg / 4, arg % 4}));
  EXPECT_NEAR(scan.energy, best, 1e-12);
  EXPECT_NEAR(scan.diagonal_energy, diag, 1e-12);
  EXPECT_LE(scan.energy, scan.diagonal_energy + 1e-12);
  EXPECT_EQ(scan.candidates, 16u);
}

TEST(EnergyScan, TiesGoToSmallestTotalStep) {
  // An eigenstate yields empty steps for every dt, so every candidate ties.
  HamiltonianPartition part = make_partition(ObservableSum::from_labels({{1.0, "ZI"}, {0.5, "IZ"}}),
                                             partition_spec::EvenOdd{}, {});
  SymmetryGroup none;
  none.n_qubits = 2;
  std::vector<QiteBasis> bases;
  for (auto d : part.domains) bases.push_back(QiteBasis::pauli(reduce_basis(d, none, 2)));
  const auto grid = TimeGrid::uniform(3, 0.3, false);
  RunOptions opts;
  const auto ref = StateVector::from_bits("11");
  const auto table = solve_terms(ref, part, bases, grid, opts, nullptr, 0);
  const auto scan = energy_scan(ref, table, part.full, grid, opts, nullptr, 0);
  EXPECT_EQ(scan.choice, (std::vector<std::size_t>{0, 0}));
}

TEST(RunMtqite, MonotoneAndConverging) {
  const auto p = tfim4();
  RunOptions opts;
  opts.ground = &p.ground;
  int calls = 0;
  opts.on_step = [&](int, const StateVector&) { ++calls; };
  const auto rec = run_mtqite(p.partition, p.bases, p.initial, TimeGrid::uniform(6, 0.5, true), 8, opts);
  ASSERT_EQ(rec.steps.size(), 9u);
  EXPECT_EQ(calls, 9);
  for (std::size_t k = 1; k < rec.steps.size(); ++k) {
    EXPECT_LE(rec.steps[k].energy, rec.steps[k - 1].energy + 1e-12);
    EXPECT_LE(rec.steps[k].energy, rec.steps[k].diagonal_energy + 1e-12);
    EXPECT_GE(rec.steps[k].ledger_linear, rec.steps[k - 1].ledger_linear);
    EXPECT_LE(rec.steps[k].transported_terms, 1);
  }
  // Only the initial reference is known to be inversion symmetric.
  EXPECT_EQ(rec.steps[1].transported_terms, 1);
  EXPECT_LT(rec.steps.back().infidelity, rec.steps.front().infidelity);
  EXPECT_EQ(rec.algorithm, "mtqite");
  EXPECT_EQ(rec.steps.back().ledger_linear, rec.ledger.count(Purpose::linear_system));
}

TEST(RunMtqite, LedgerIndependentOfGridSize) {
  const auto p = tfim4();
  const auto a = run_mtqite(p.partition, p.bases, p.initial, TimeGrid::uniform(3, 0.5, true), 3);
  const auto b = run_mtqite(p.partition, p.bases, p.initial, TimeGrid::uniform(9, 0.5, true), 3);
  EXPECT_EQ(a.ledger.count(Purpose::linear_system), b.ledger.count(Purpose::linear_system));
  EXPECT_LT(a.ledger.count(Purpose::energy_scan), b.ledger.count(Purpose::energy_scan));
}

TEST(RunMtqite, DeterministicAndLinkFreeRunsAgree) {
  const auto p = tfim4();
  const auto grid = TimeGrid::uniform(4, 0.4, true);
  const auto a = run_mtqite(p.partition, p.bases, p.initial, grid, 3);
  const auto b = run_mtqite(p.partition, p.bases, p.initial, grid, 3);
  EXPECT_EQ(a.final_state, b.final_state);
  RunOptions nolink;
  nolink.use_symmetry_links = false;
  const auto c = run_mtqite(p.partition, p.bases, p.initial, grid, 3, nolink);
  EXPECT_EQ(c.steps.back().transported_terms, 0);
  EXPECT_NEAR(a.steps.back().energy, c.steps.back().energy, 1e-9);
  EXPECT_LT(a.ledger.count(Purpose::linear_system), c.ledger.count(Purpose::linear_system));
}

TEST(RunBaseline, PicksBestFinalEnergyAndSumsLedgers) {
  const auto p = tfim4();
  const auto grid = TimeGrid::from_values({0.0, 0.1, 0.3});
  const auto best = run_qite_baseline(p.partition, p.bases, p.initial, grid, 3);
  EXPECT_EQ(best.algorithm, "qite");
  double lowest = 1e300;
  std::size_t total = 0;
  for (double dt : {0.1, 0.3}) {
    const auto one = run_qite_baseline(p.partition, p.bases, p.initial, TimeGrid::from_values({dt}), 3);
    total += one.ledger.count(Purpose::linear_system);
    lowest = std::min(lowest, one.steps.back().energy);
    for (const auto& s : one.steps) {
      if (s.step > 0) EXPECT_EQ(s.dts, (std::vector<double>{dt, dt}));
    }
  }
  EXPECT_NEAR(best.steps.back().energy, lowest, 1e-12);
  EXPECT_EQ(best.ledger.count(Purpose::linear_system), total);
  EXPECT_TRUE(best.chosen_dt == 0.1 || best.chosen_dt == 0.3);
  EXPECT_EQ(best.steps.back().ledger_scan, 0u);
}

TEST(RunMtqite, TrivialPartitionSingleStepMatchesBaseline) {
  const auto h = build_tfim(4, 1.0);
  const auto part = make_partition(h, partition_spec::Trivial{}, {});
  const std::vector<QiteBasis> bases = {QiteBasis::pauli(reduce_basis(part.domains[0], find_z2_symmetries(h), 4))};
  const auto p = tfim4();
  const auto grid = TimeGrid::from_values({0.2});
  const auto mt = run_mtqite(part, bases, p.initial, grid, 4);
  const auto qt = run_qite_baseline(part, bases, p.initial, grid, 4);
  ASSERT_EQ(mt.steps.size(), qt.steps.size());
  for (std::size_t k = 0; k < mt.steps.size(); ++k) EXPECT_NEAR(mt.steps[k].energy, qt.steps[k].energy, 1e-12);
  EXPECT_NEAR(std::abs(inner(mt.final_state, qt.final_state)), 1.0, 1e-12);
}

TEST(RunMtqite, ZeroOnlyGridLeavesStateUnchanged) {
  const auto p = tfim4();
  const auto rec = run_mtqite(p.partition, p.bases, p.initial, TimeGrid::from_values({0.0}), 3);
  for (const auto& s : rec.steps) EXPECT_EQ(s.energy, rec.steps.front().energy);
  EXPECT_EQ(rec.final_state, p.initial);
  EXPECT_EQ(rec.steps.back().rotations, 0u);
}
