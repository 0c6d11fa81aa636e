#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "mtqite/pauli.hpp"

namespace mtqite {

/// One factor of a unitary step. A PauliString generator P applies
/// exp(-i angle P); an anti-hermitian ObservableSum generator t applies
/// exp(angle t).
struct Rotation {
  std::variant<PauliString, ObservableSum> generator;
  double angle = 0.0;

  /// Number of Pauli-string rotations this factor compiles to.
  std::size_t pauli_count() const;
};

/// exp(-i dt A[m]) for one partition term, as produced by a QITE solve.
struct UnitaryStep {
  int term_index = -1;
  double dt = 0.0;
  std::uint64_t domain = 0;
  std::vector<Rotation> rotations;
  double residual = 0.0;
  int dropped = 0;

  bool empty() const noexcept { return rotations.empty(); }
  std::size_t rotation_count() const;
};

enum class ApplyMode { rotation_product, exact_generator };

/// Dense 2^n amplitude register; basis index bit q is qubit q.
class StateVector {
 public:
  /// |0...0>
  explicit StateVector(int n_qubits);

  static StateVector basis_state(int n_qubits, std::uint64_t index);
  /// "0110" style label, qubit 0 leftmost.
  static StateVector from_bits(std::string_view bits);
  /// Normalizes the input; throws on a zero vector.
  static StateVector from_amplitudes(int n_qubits, std::vector<cplx> amps);

  int n_qubits() const noexcept { return n_; }
  std::size_t dim() const noexcept { return amps_.size(); }
  std::span<const cplx> amplitudes() const noexcept { return amps_; }
  cplx operator[](std::size_t i) const noexcept { return amps_[i]; }
  double norm() const;

  /// In place: cos θ|ψ> - i sin θ P|ψ>. P must carry a real phase.
  void rotate(const PauliString& p, double theta);
  /// In place: exp(scale * g)|ψ> for anti-hermitian g.
  void apply_exponential(const ObservableSum& g, double scale);
  void apply(const UnitaryStep& step, ApplyMode mode = ApplyMode::rotation_product);

  cplx expectation(const PauliString& p) const;
  cplx expectation(const ObservableSum& o) const;

  /// Site-inversion image R|ψ>, qubit q -> n-1-q.
  StateVector inverted() const;

  /// Little-endian interleaved (re, im) doubles.
  void write_binary(std::ostream& os) const;
  static StateVector read_binary(std::istream& is, int n_qubits);

  friend bool operator==(const StateVector&, const StateVector&) = default;

 private:
  StateVector(int n_qubits, std::vector<cplx> amps) : n_(n_qubits), amps_(std::move(amps)) {}
  void check(int n) const;

  int n_ = 0;
  std::vector<cplx> amps_;
};

StateVector apply_pauli_rotation(StateVector state, const PauliString& p, double theta);
cplx expectation(const StateVector& state, const ObservableSum& obs);
StateVector apply_unitary_step(StateVector state, const UnitaryStep& step,
                               ApplyMode mode = ApplyMode::rotation_product);
cplx inner(const StateVector& a, const StateVector& b);

/// Collapses a step into the single anti-hermitian generator G with
/// exp(G) equal to the exact-generator evolution.
ObservableSum step_generator(const UnitaryStep& step, int n_qubits);

}  // namespace mtqite
