#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "dense_oracle.hpp"
#include "mtqite/error.hpp"
#include "mtqite/oracles.hpp"
#include "mtqite/qite.hpp"
#include "mtqite/symmetry.hpp"

using namespace mtqite;

namespace {

std::vector<PauliString> full_basis(int n) {
  SymmetryGroup none;
  none.n_qubits = n;
  return reduce_basis((std::uint64_t{1} << n) - 1, none, n);
}

const auto kPlus = [] { return StateVector::from_amplitudes(1, {1.0, 1.0}); };

}  // namespace

TEST(QiteSystem, SingleQubitPlusStateUnderZ) {
  const auto basis = QiteBasis::pauli(full_basis(1));  // X, Z, Y in canonical order
  ASSERT_EQ(basis.labels(), (std::vector<std::string>{"X", "Z", "Y"}));
  const auto h = ObservableSum::from_labels({{1.0, "Z"}});
  const auto s1 = build_system(kPlus(), h, basis, 0.1, Formulation::pauli_order1);
  EXPECT_LT((s1.s_matrix - 2.0 * Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_NEAR(s1.c_norm, 1.0, 1e-15);
  EXPECT_LT((s1.b_vector - Eigen::Vector3d(0, 0, 2)).cwiseAbs().maxCoeff(), 1e-15);

  const auto s2 = build_system(kPlus(), h, basis, 0.1, Formulation::pauli_order2);
  EXPECT_NEAR(s2.c_norm, 1.02, 1e-15);
  EXPECT_NEAR(s2.b_vector(2), 2.0 / std::sqrt(1.02), 1e-14);
  const auto a = solve(s2);
  EXPECT_NEAR(a(2), 1.0 / std::sqrt(1.02), 1e-14);
  EXPECT_NEAR(a(0), 0.0, 1e-15);
}

TEST(QiteSystem, MatchesDenseFormulas) {
  std::mt19937_64 rng(21);
  const auto strings = full_basis(2);
  const auto basis = QiteBasis::pauli(strings);
  for (int trial = 0; trial < 10; ++trial) {
    const auto psi = oracle::random_state(rng, 2);
    const auto h = oracle::random_hermitian(rng, 2, 4).without_identity();
    const double dt = 0.05 * (trial + 1);
    const auto sys = build_system(psi, h, basis, dt, Formulation::pauli_order2);
    const oracle::Vec v = oracle::vec(psi);
    const oracle::Mat dh = oracle::dense(h);
    const double hm = v.dot(dh * v).real(), h2m = v.dot(dh * dh * v).real();
    const double c = 1.0 - 2.0 * dt * hm + 2.0 * dt * dt * h2m;
    EXPECT_NEAR(sys.c_norm, c, 1e-12);
    for (std::size_t i = 0; i < strings.size(); ++i) {
      const oracle::Mat si = oracle::pauli(strings[i].label());
      const double b1 = 2.0 * v.dot(si * dh * v).imag();
      const double b2 = 2.0 * v.dot(si * dh * dh * v).imag();
      EXPECT_NEAR(sys.b_vector(static_cast<Eigen::Index>(i)), (b1 - 0.5 * dt * b2) / std::sqrt(c), 1e-12);
      for (std::size_t j = 0; j < strings.size(); ++j) {
        const double sij = 2.0 * v.dot(si * oracle::pauli(strings[j].label()) * v).real();
        EXPECT_NEAR(sys.s_matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)), sij, 1e-12);
      }
    }
  }
}

TEST(QiteSystem, SMatrixIndependentOfDt) {
  std::mt19937_64 rng(22);
  const auto psi = oracle::random_state(rng, 3);
  const auto h = oracle::random_hermitian(rng, 3, 5).without_identity();
  const auto m = measure_term(psi, h, QiteBasis::pauli(full_basis(3)), Formulation::pauli_order2);
  const auto a = assemble(m, 0.01), b = assemble(m, 0.4);
  EXPECT_TRUE(a.s_matrix == b.s_matrix);
  EXPECT_NE(a.b_vector, b.b_vector);
}

TEST(QiteSystem, FormulationsAgree) {
  std::mt19937_64 rng(23);
  const auto strings = full_basis(3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto psi = oracle::random_state(rng, 3);
    const auto h = oracle::random_hermitian(rng, 3, 4).without_identity();
    const auto r = equivalence_check(psi, h, strings, 0.1);
    EXPECT_TRUE(r.ok(1e-12)) << r.s_deviation << " " << r.b_deviation << " " << r.a_deviation;
  }
}

TEST(QiteSystem, AntihermitianLedgerUsesRealPhasesOnly) {
  std::mt19937_64 rng(24);
  const auto psi = oracle::random_state(rng, 3);
  const auto h = oracle::random_hermitian(rng, 3, 4).without_identity();
  MeasurementLedger anti, pauli;
  measure_term(psi, h, QiteBasis::pool(pauli_pool(full_basis(3))), Formulation::antihermitian_order2, &anti, 0);
  measure_term(psi, h, QiteBasis::pauli(full_basis(3)), Formulation::pauli_order2, &pauli, 0);
  EXPECT_TRUE(anti.real_phase_only(Purpose::linear_system));
  EXPECT_FALSE(pauli.real_phase_only(Purpose::linear_system));
  EXPECT_GT(anti.count(Purpose::linear_system), 0u);
}

TEST(QiteSystem, UccgsdPoolSystemIsSymmetric) {
  const auto pool = build_uccgsd_pool(4);
  const auto h = ObservableSum::from_labels({{0.3, "ZIII"}, {0.2, "XXYY"}, {-0.4, "IZZI"}});
  const auto psi = StateVector::from_bits("1100");
  const auto sys = build_system(psi, h, QiteBasis::pool(pool), 0.1, Formulation::antihermitian_order2);
  EXPECT_EQ(sys.s_matrix.rows(), static_cast<Eigen::Index>(pool.size()));
  EXPECT_LT((sys.s_matrix - sys.s_matrix.transpose()).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_THROW(build_system(psi, h, QiteBasis::pool(pool), 0.1, Formulation::pauli_order2), InputError);
}

TEST(QiteSystem, Errors) {
  const auto basis = QiteBasis::pauli(full_basis(1));
  EXPECT_THROW(build_system(kPlus(), ObservableSum::from_labels({{cplx(0, 1), "Z"}}), basis, 0.1,
                            Formulation::pauli_order2),
               InputError);
  // <Z> = 1 on |0>: order-1 c = 1 - 2 dt vanishes at dt = 0.5.
  try {
    build_system(StateVector(1), ObservableSum::from_labels({{1.0, "Z"}}), basis, 0.6, Formulation::pauli_order1);
    FAIL() << "expected DegenerateNormalizationError";
  } catch (const DegenerateNormalizationError& e) {
    EXPECT_NEAR(e.c(), -0.2, 1e-15);
  }
  EXPECT_THROW(formulation_from_string("order3"), InputError);
  EXPECT_EQ(formulation_from_string("antihermitian_order2"), Formulation::antihermitian_order2);
}

TEST(PseudoInverseTest, MinimumNormSolution) {
  Eigen::MatrixXd s(3, 3);
  s << 2, 0, 0, 0, 2, 2, 0, 2, 2;  // rank 2
  const PseudoInverse p(s);
  EXPECT_EQ(p.rank(), 2);
  const Eigen::Vector3d x = p.solve(Eigen::Vector3d(2, 4, 4));
  EXPECT_LT((x - Eigen::Vector3d(1, 1, 1)).cwiseAbs().maxCoeff(), 1e-14);
  // Components of b outside the range are projected away.
  const Eigen::Vector3d y = p.solve(Eigen::Vector3d(0, 1, -1));
  EXPECT_LT(y.cwiseAbs().maxCoeff(), 1e-14);
}

TEST(QiteStep, DropsTinyAnglesAndCountsRotations) {
  const auto basis = QiteBasis::pauli(full_basis(1));
  const auto step = qite_step(kPlus(), ObservableSum::from_labels({{1.0, "Z"}}), basis, 0.1,
                              Formulation::pauli_order2);
  ASSERT_EQ(step.rotations.size(), 1u);
  EXPECT_EQ(std::get<PauliString>(step.rotations[0].generator).label(), "Y");
  EXPECT_NEAR(step.rotations[0].angle, 0.1 / std::sqrt(1.02), 1e-14);
  EXPECT_EQ(step.dropped, 2);
  EXPECT_NEAR(step.residual, 0.0, 1e-13);
}

TEST(QiteStep, ApproachesExactEvolutionAsDtShrinks) {
  std::mt19937_64 rng(25);
  const auto psi = oracle::random_state(rng, 2);
  const auto h = oracle::random_hermitian(rng, 2, 4).without_identity();
  const auto basis = QiteBasis::pauli(full_basis(2));
  auto err = [&](double dt, Formulation f) {
    const auto step = qite_step(psi, h, basis, dt, f);
    const auto got = apply_unitary_step(psi, step, ApplyMode::exact_generator);
    return (oracle::vec(got) - oracle::vec(exact_ite(psi, h, dt))).norm();
  };
  for (auto f : {Formulation::pauli_order1, Formulation::pauli_order2}) {
    const double slope = std::log(err(2e-2, f) / err(2e-3, f)) / std::log(10.0);
    EXPECT_GT(slope, 1.7);
  }
}
