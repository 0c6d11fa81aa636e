#include <gtest/gtest.h>

#include <bit>
#include <filesystem>
#include <fstream>
#include <string>

#include <Eigen/Eigenvalues>
#include <json.hpp>

#include "mtqite/error.hpp"
#include "mtqite/hamiltonians.hpp"
#include "mtqite/oracles.hpp"

using namespace mtqite;
namespace fs = std::filesystem;

namespace {

const fs::path kFixtures = fs::path(MTQITE_SOURCE_DIR) / "data" / "fcidump";

fs::path write_temp(const std::string& name, const std::string& text) {
  const auto p = fs::temp_directory_path() / ("mtqite_test_" + name + ".fcidump");
  std::ofstream(p) << text;
  return p;
}

// a_q on an occupation bitstring; returns 0 when the mode is empty.
int annihilate(std::uint64_t& occ, int q) {
  if (!(occ >> q & 1)) return 0;
  const int sign = std::popcount(occ & ((std::uint64_t{1} << q) - 1)) % 2 ? -1 : 1;
  occ &= ~(std::uint64_t{1} << q);
  return sign;
}
int create(std::uint64_t& occ, int q) {
  if (occ >> q & 1) return 0;
  const int sign = std::popcount(occ & ((std::uint64_t{1} << q) - 1)) % 2 ? -1 : 1;
  occ |= std::uint64_t{1} << q;
  return sign;
}

// Fock-space matrix straight from the spatial integrals, no Pauli algebra.
Eigen::MatrixXd fock_matrix(const MolecularIntegrals& ints) {
  const int m = 2 * ints.n_orbitals;
  const auto dim = Eigen::Index{1} << m;
  Eigen::MatrixXd h = Eigen::MatrixXd::Identity(dim, dim) * ints.core_energy;
  auto spatial = [](int q) { return q / 2; };
  auto spin = [](int q) { return q % 2; };
  for (Eigen::Index col = 0; col < dim; ++col) {
    for (int p = 0; p < m; ++p) {
      for (int q = 0; q < m; ++q) {
        if (spin(p) != spin(q)) continue;
        auto occ = static_cast<std::uint64_t>(col);
        int s = annihilate(occ, q);
        if (s != 0) s *= create(occ, p);
        if (s != 0) h(static_cast<Eigen::Index>(occ), col) += s * ints.h(spatial(p), spatial(q));
      }
    }
    for (int p = 0; p < m; ++p)
      for (int q = 0; q < m; ++q)
        for (int r = 0; r < m; ++r)
          for (int t = 0; t < m; ++t) {
            if (spin(p) != spin(q) || spin(r) != spin(t)) continue;
            const double v = ints.eri(spatial(p), spatial(q), spatial(r), spatial(t));
            if (v == 0.0) continue;
            // 1/2 (pq|rt) a+_p a+_r a_t a_q
            auto occ = static_cast<std::uint64_t>(col);
            int s = annihilate(occ, q);
            if (s != 0) s *= annihilate(occ, t);
            if (s != 0) s *= create(occ, r);
            if (s != 0) s *= create(occ, p);
            if (s != 0) h(static_cast<Eigen::Index>(occ), col) += 0.5 * s * v;
          }
  }
  return h;
}

double fixture_fci(const std::string& stem) {
  std::ifstream in(kFixtures / (stem + ".json"));
  return nlohmann::json::parse(in)["e_fci"].get<double>();
}

}  // namespace

TEST(Fcidump, CoreEnergyOnly) {
  const auto p = write_temp("core", " &FCI NORB=1,NELEC=0,MS2=0,\n &END\n  2.5  0 0 0 0\n");
  const auto m = parse_fcidump(p);
  EXPECT_TRUE(m.operators.empty());
  EXPECT_DOUBLE_EQ(m.core_energy, 2.5);
  const auto h = m.qubit_hamiltonian();
  ASSERT_EQ(h.size(), 1u);
  EXPECT_DOUBLE_EQ(h.identity_coeff().real(), 2.5);
}

TEST(Fcidump, HeaderAndSymmetryExpansion) {
  const auto p = write_temp("sym", "&FCI NORB=2, NELEC=2, MS2=0, ORBSYM=1,1, ISYM=1 /\n"
                                   " 0.25D0 1 2 1 1\n -1.0 2 1 0 0\n 0.1 1 0 0 0\n");
  const auto ints = read_fcidump_integrals(p);
  EXPECT_EQ(ints.n_orbitals, 2);
  EXPECT_EQ(ints.n_electrons, 2);
  EXPECT_DOUBLE_EQ(ints.h(0, 1), -1.0);
  EXPECT_DOUBLE_EQ(ints.h(1, 0), -1.0);
  EXPECT_DOUBLE_EQ(ints.h(0, 0), 0.0);
  for (auto idx : {std::array{0, 1, 0, 0}, {1, 0, 0, 0}, {0, 0, 0, 1}, {0, 0, 1, 0}}) {
    EXPECT_DOUBLE_EQ(ints.eri(idx[0], idx[1], idx[2], idx[3]), 0.25);
  }
}

TEST(Fcidump, ErrorsCarryLineNumbers) {
  try {
    read_fcidump_integrals(write_temp("bad", "&FCI NORB=1,NELEC=2 &END\n 1.0 1 1 0 0\n oops 1 1 1 1\n"));
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3);
  }
  EXPECT_THROW(read_fcidump_integrals(write_temp("nohdr", " 1.0 1 1 0 0\n")), ParseError);
  EXPECT_THROW(read_fcidump_integrals(write_temp("nonorb", "&FCI NELEC=2 &END\n")), ParseError);
  EXPECT_THROW(read_fcidump_integrals(write_temp("range", "&FCI NORB=1,NELEC=2 &END\n 1.0 2 1 0 0\n")), RangeError);
  EXPECT_THROW(read_fcidump_integrals(write_temp("short", "&FCI NORB=1,NELEC=2 &END\n 1.0 1 1\n")), ParseError);
  EXPECT_THROW(read_fcidump_integrals("/nonexistent/file.fcidump"), InputError);
}

TEST(Fcidump, H2QubitHamiltonianMatchesFockSpaceOracle) {
  const auto m = parse_fcidump(kFixtures / "h2_0.74.fcidump");
  EXPECT_EQ(m.n_orbitals, 2);
  EXPECT_EQ(m.n_electrons, 2);
  const auto h = m.qubit_hamiltonian();
  EXPECT_TRUE(h.is_hermitian());
  const Eigen::MatrixXd f = fock_matrix(m.integrals);
  const Eigen::MatrixXcd q = to_dense(h);
  EXPECT_LT((q - f.cast<cplx>()).cwiseAbs().maxCoeff(), 1e-12);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(f);
  EXPECT_NEAR(exact_ground(h).energy, es.eigenvalues()(0), 1e-10);
  EXPECT_NEAR(exact_ground(h).energy, fixture_fci("h2_0.74"), 1e-8);
}

class H4Fixture : public ::testing::TestWithParam<const char*> {};

TEST_P(H4Fixture, GroundEnergyMatchesSidecarFci) {
  const std::string stem = std::string("h4_") + GetParam();
  const auto m = parse_fcidump(kFixtures / (stem + ".fcidump"));
  EXPECT_EQ(m.n_spin_orbitals(), 8);
  EXPECT_EQ(m.n_electrons, 4);
  EXPECT_NEAR(exact_ground(m.qubit_hamiltonian()).energy, fixture_fci(stem), 1e-8);
}

INSTANTIATE_TEST_SUITE_P(Distances, H4Fixture,
                         ::testing::Values("0.60", "0.70", "0.80", "0.90", "1.00", "1.10", "1.20"),
                         [](const auto& info) {
                           std::string s = info.param;
                           s.erase(s.find('.'), 1);
                           return "d" + s;
                         });
