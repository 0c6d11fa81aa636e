#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace mtqite {

using cplx = std::complex<double>;
using DenseMatrix = Eigen::MatrixXcd;

inline constexpr int kMaxQubits = 64;
inline constexpr int kDenseQubitCap = 10;
inline constexpr double kPruneTolerance = 1e-14;

/// Phase-free identity of a Pauli string: the (x, z) symplectic masks.
/// Ordered by (z, x) ascending, which is the project-wide canonical order.
struct PauliKey {
  std::uint64_t x = 0;
  std::uint64_t z = 0;

  friend bool operator==(const PauliKey&, const PauliKey&) = default;
  friend bool operator<(const PauliKey& a, const PauliKey& b) {
    return a.z != b.z ? a.z < b.z : a.x < b.x;
  }
};

struct PauliKeyHash {
  std::size_t operator()(const PauliKey& k) const noexcept {
    std::uint64_t h = k.x * 0x9E3779B97F4A7C15ULL;
    h ^= k.z + 0x632BE59BD9B4E019ULL + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h);
  }
};

/// Signed Pauli operator i^phase * (P_0 ⊗ P_1 ⊗ ...), with P_q selected by
/// the bit pair (x_q, z_q): (0,0)=I, (1,0)=X, (1,1)=Y, (0,1)=Z.
class PauliString {
 public:
  PauliString() = default;
  PauliString(int n_qubits, std::uint64_t x_mask, std::uint64_t z_mask,
              int phase_exp = 0);

  static PauliString identity(int n_qubits);
  /// Single-qubit operator `p` in {I,X,Y,Z} on `qubit`.
  static PauliString single(int n_qubits, int qubit, char p);
  /// Parses labels such as "XIZY", "+XZ", "-iYY". Qubit 0 is leftmost.
  static PauliString from_label(std::string_view label);

  int n_qubits() const noexcept { return n_; }
  std::uint64_t x_mask() const noexcept { return x_; }
  std::uint64_t z_mask() const noexcept { return z_; }
  int phase_exp() const noexcept { return phase_; }
  PauliKey key() const noexcept { return {x_, z_}; }
  std::uint64_t support() const noexcept { return x_ | z_; }
  int weight() const noexcept;
  bool is_identity() const noexcept { return x_ == 0 && z_ == 0; }
  /// True when the overall phase is ±1, i.e. the operator is hermitian.
  bool has_real_phase() const noexcept { return (phase_ & 1) == 0; }
  char pauli_at(int qubit) const noexcept;

  PauliString with_phase(int phase_exp) const { return {n_, x_, z_, phase_exp}; }
  /// Relabels qubits: qubit q moves to perm[q].
  PauliString permuted(std::span<const int> perm) const;
  /// Qubit q moves to n-1-q.
  PauliString inverted() const;

  /// Operator letters only, e.g. "XIZY".
  std::string label() const;
  /// Label prefixed by its phase: "+XIZY", "-iZZ".
  std::string str() const;

  friend bool operator==(const PauliString&, const PauliString&) = default;

 private:
  int n_ = 0;
  std::uint64_t x_ = 0;
  std::uint64_t z_ = 0;
  int phase_ = 0;
};

/// Exact signed product p*q.
PauliString mul(const PauliString& p, const PauliString& q);
/// pq == qp, from the symplectic inner product.
bool commutes(const PauliString& p, const PauliString& q);
/// i^phase_exp as a complex number.
cplx phase_factor(int phase_exp);

struct PauliTerm {
  cplx coeff;
  PauliString string;  // phase_exp always 0
};

/// Weighted sum of Pauli strings. Terms are deduplicated, pruned below
/// kPruneTolerance and kept in canonical (z, x) order; string phases are
/// folded into the coefficients.
class ObservableSum {
 public:
  ObservableSum() = default;
  explicit ObservableSum(int n_qubits) : n_(n_qubits) {}
  ObservableSum(int n_qubits, std::vector<PauliTerm> terms);
  ObservableSum(const PauliString& p, cplx coeff = 1.0);

  static ObservableSum identity(int n_qubits, cplx coeff = 1.0);
  /// Builds from (coeff, label) pairs, e.g. {{1.0, "XX"}, {0.5, "ZI"}}.
  static ObservableSum from_labels(
      std::initializer_list<std::pair<cplx, std::string_view>> items);

  int n_qubits() const noexcept { return n_; }
  const std::vector<PauliTerm>& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool empty() const noexcept { return terms_.empty(); }

  std::uint64_t support() const noexcept;
  /// Coefficient of the identity string (0 if absent).
  cplx identity_coeff() const noexcept;
  /// Copy with the identity component removed.
  ObservableSum without_identity() const;
  /// Coefficient of `key` (0 if absent).
  cplx coeff_of(const PauliKey& key) const noexcept;

  bool is_hermitian(double tol = 1e-12) const noexcept;
  bool is_antihermitian(double tol = 1e-12) const noexcept;
  /// All strings pairwise commuting.
  bool strings_commute() const noexcept;

  ObservableSum permuted(std::span<const int> perm) const;
  ObservableSum inverted() const;

  /// Max coefficient-wise distance to `other`.
  double distance(const ObservableSum& other) const;

  ObservableSum& operator+=(const ObservableSum& rhs);
  ObservableSum& operator-=(const ObservableSum& rhs);
  ObservableSum& operator*=(cplx s);

  friend ObservableSum operator+(ObservableSum a, const ObservableSum& b) { return a += b; }
  friend ObservableSum operator-(ObservableSum a, const ObservableSum& b) { return a -= b; }
  friend ObservableSum operator*(ObservableSum a, cplx s) { return a *= s; }
  friend ObservableSum operator*(cplx s, ObservableSum a) { return a *= s; }
  friend ObservableSum operator-(ObservableSum a) { return a *= -1.0; }
  friend ObservableSum operator*(const ObservableSum& a, const ObservableSum& b);

  /// Rendered one term per line: "+1.5 * XIZY".
  std::string str() const;

 private:
  void normalize();

  int n_ = 0;
  std::vector<PauliTerm> terms_;
};

ObservableSum adjoint(const ObservableSum& a);
ObservableSum square(const ObservableSum& a);
ObservableSum commutator(const ObservableSum& a, const ObservableSum& b);
ObservableSum anticommutator(const ObservableSum& a, const ObservableSum& b);

/// Dense 2^n x 2^n matrix; basis index bit q is qubit q. Capped at
/// kDenseQubitCap qubits.
DenseMatrix to_dense(const PauliString& p);
DenseMatrix to_dense(const ObservableSum& a);

/// Qubit indices set in `mask`, ascending.
std::vector<int> mask_qubits(std::uint64_t mask);
/// Permutation q -> n-1-q.
std::vector<int> inversion_permutation(int n_qubits);
std::uint64_t permute_mask(std::uint64_t mask, std::span<const int> perm);

}  // namespace mtqite
