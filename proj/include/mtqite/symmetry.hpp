#pragma once

#include <cstdint>
#include <vector>

#include "mtqite/hamiltonians.hpp"
#include "mtqite/pauli.hpp"
#include "mtqite/statevector.hpp"

namespace mtqite {

inline constexpr int kSymmetryEnumerationCap = 10;

/// Independent, mutually commuting Pauli strings commuting with every
/// Hamiltonian term, plus the ±1 sector chosen for each.
struct SymmetryGroup {
  int n_qubits = 0;
  std::vector<PauliString> stabilizer_generators;
  std::vector<int> chosen_sector;  // +1 or -1 per generator

  bool empty() const noexcept { return stabilizer_generators.empty(); }
  /// Every group element (identity included), each multiplied by its
  /// sector eigenvalue so that the target sector has all elements at +1.
  std::vector<PauliString> elements() const;
};

/// All 4^n strings commuting with every term of h (identity included),
/// in canonical order.
std::vector<PauliString> commuting_strings(const ObservableSum& h);

SymmetryGroup find_z2_symmetries(const ObservableSum& h);

/// Pauli basis on `domain`: normalizer elements, one canonical
/// representative per coset of the domain-supported stabilizer elements,
/// identity coset removed.
std::vector<PauliString> reduce_basis(std::uint64_t domain, const SymmetryGroup& group, int n_qubits);

/// Qubit q -> n-1-q on every generator, angles unchanged, rotations
/// re-sorted into canonical order.
UnitaryStep transport_by_inversion(const UnitaryStep& step, int n_qubits);

/// Transports the step of the linked source term onto `target`; throws if
/// the partition has no link for `target`.
UnitaryStep transport_linked_step(const HamiltonianPartition& partition, int target,
                                  const UnitaryStep& source_step);

/// <ψ|R|ψ> for the site inversion R.
cplx inversion_expectation(const StateVector& state);

/// Sorts rotations by generator in canonical order (Pauli strings by key;
/// sums by their leading string key).
void sort_rotations(std::vector<Rotation>& rotations);

}  // namespace mtqite
