#include <gtest/gtest.h>

#include <random>

#include "dense_oracle.hpp"
#include "mtqite/error.hpp"
#include "mtqite/pauli.hpp"

using namespace mtqite;

namespace {

double max_abs(const oracle::Mat& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST(PauliString, LabelRoundTrip) {
  const auto p = PauliString::from_label("-iXIZY");
  EXPECT_EQ(p.n_qubits(), 4);
  EXPECT_EQ(p.label(), "XIZY");
  EXPECT_EQ(p.str(), "-iXIZY");
  EXPECT_EQ(p.phase_exp(), 3);
  EXPECT_EQ(p.x_mask(), 0b1001u);
  EXPECT_EQ(p.z_mask(), 0b1100u);
  EXPECT_EQ(p.weight(), 3);
  EXPECT_EQ(p.pauli_at(3), 'Y');
  EXPECT_FALSE(p.has_real_phase());
  EXPECT_THROW(PauliString::from_label("XQ"), InputError);
}

TEST(PauliString, SingleQubitTable) {
  const auto x = PauliString::from_label("X"), y = PauliString::from_label("Y"), z = PauliString::from_label("Z");
  EXPECT_EQ(mul(x, y), PauliString::from_label("iZ"));
  EXPECT_EQ(mul(y, x), PauliString::from_label("-iZ"));
  EXPECT_EQ(mul(y, z), PauliString::from_label("iX"));
  EXPECT_EQ(mul(z, x), PauliString::from_label("iY"));
  EXPECT_EQ(mul(x, x), PauliString::identity(1));
  EXPECT_FALSE(commutes(x, z));
  EXPECT_TRUE(commutes(PauliString::from_label("XX"), PauliString::from_label("ZZ")));
}

TEST(PauliString, ProductsMatchKroneckerOracle) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + trial % 5;
    const auto a = PauliString::from_label(oracle::random_label(rng, n)).with_phase(trial % 4);
    const auto b = PauliString::from_label(oracle::random_label(rng, n));
    const oracle::Mat ma = phase_factor(a.phase_exp()) * oracle::pauli(a.label());
    const oracle::Mat mb = oracle::pauli(b.label());
    const auto c = mul(a, b);
    const oracle::Mat mc = phase_factor(c.phase_exp()) * oracle::pauli(c.label());
    EXPECT_LT(max_abs(mc - ma * mb), 1e-14);
    EXPECT_EQ(commutes(a, b), max_abs(ma * mb - mb * ma) < 1e-12);
    EXPECT_LT(max_abs(to_dense(a) - ma), 1e-14);
  }
}

TEST(PauliString, InversionAndPermutation) {
  const auto p = PauliString::from_label("XYZI");
  EXPECT_EQ(p.inverted().label(), "IZYX");
  const std::vector<int> perm{1, 2, 3, 0};
  EXPECT_EQ(p.permuted(perm).label(), "IXYZ");
  EXPECT_EQ(permute_mask(0b0011, perm), 0b0110u);
  EXPECT_EQ(mask_qubits(0b10110), (std::vector<int>{1, 2, 4}));
}

TEST(ObservableSum, FoldsPhasesAndDeduplicates) {
  ObservableSum a(PauliString::from_label("iZZ"), 2.0);
  ASSERT_EQ(a.size(), 1u);
  EXPECT_EQ(a.terms()[0].string.phase_exp(), 0);
  EXPECT_NEAR(std::abs(a.terms()[0].coeff - cplx(0, 2)), 0.0, 1e-15);
  a += ObservableSum(PauliString::from_label("ZZ"), cplx(0, -2));
  EXPECT_TRUE(a.empty());
  const auto h = ObservableSum::from_labels({{1.0, "ZI"}, {0.5, "XX"}, {-1.0, "II"}});
  EXPECT_NEAR(h.identity_coeff().real(), -1.0, 1e-15);
  EXPECT_EQ(h.without_identity().size(), 2u);
  EXPECT_TRUE(h.is_hermitian());
  EXPECT_FALSE((cplx(0, 1) * h).is_hermitian());
  EXPECT_TRUE((cplx(0, 1) * h).is_antihermitian());
}

TEST(ObservableSum, CanonicalOrderIsZThenX) {
  const auto h = ObservableSum::from_labels({{1.0, "ZI"}, {1.0, "XI"}, {1.0, "IX"}, {1.0, "II"}});
  std::vector<std::string> labels;
  for (const auto& t : h.terms()) labels.push_back(t.string.label());
  EXPECT_EQ(labels, (std::vector<std::string>{"II", "XI", "IX", "ZI"}));
}

TEST(ObservableSum, AlgebraMatchesDenseOracle) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    const auto a = oracle::random_hermitian(rng, 3, 4);
    const auto b = oracle::random_hermitian(rng, 3, 4);
    const auto da = oracle::dense(a), db = oracle::dense(b);
    EXPECT_LT(max_abs(oracle::dense(square(a)) - da * da), 1e-12);
    EXPECT_LT(max_abs(oracle::dense(a * b) - da * db), 1e-12);
    EXPECT_LT(max_abs(oracle::dense(commutator(a, b)) - (da * db - db * da)), 1e-12);
    EXPECT_LT(max_abs(oracle::dense(anticommutator(a, b)) - (da * db + db * da)), 1e-12);
    EXPECT_LT(max_abs(oracle::dense(adjoint(cplx(0.3, 0.7) * a)) - (cplx(0.3, 0.7) * da).adjoint()), 1e-12);
    EXPECT_LT(adjoint(a).distance(a), 1e-15);
  }
}

TEST(ObservableSum, InvertedMatchesPermutedOperator) {
  const auto h = ObservableSum::from_labels({{1.0, "XYI"}, {0.25, "ZIZ"}});
  const auto r = h.inverted();
  EXPECT_NEAR(r.coeff_of(PauliString::from_label("IYX").key()).real(), 1.0, 1e-15);
  EXPECT_NEAR(r.coeff_of(PauliString::from_label("ZIZ").key()).real(), 0.25, 1e-15);
  EXPECT_EQ(inversion_permutation(3), (std::vector<int>{2, 1, 0}));
}

TEST(ObservableSum, DenseExportIsCapped) {
  EXPECT_THROW(to_dense(PauliString::identity(kDenseQubitCap + 1)), SizeCapError);
}
