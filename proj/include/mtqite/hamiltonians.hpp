#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "mtqite/fermion.hpp"
#include "mtqite/pauli.hpp"

namespace mtqite {

// ---- model builders --------------------------------------------------------

/// -sum Z_i Z_{i+1} + h_over_j * sum X_i, open chain.
ObservableSum build_tfim(int n, double h_over_j);
/// sum (X_i X_{i+1} + Y_i Y_{i+1} + J Z_i Z_{i+1}), open chain.
ObservableSum build_xxz(int n, double j);
/// Fermionic operators of the open-chain Hubbard model, unit hopping.
std::vector<FermionOp> hubbard_operators(int n_sites, double u);
/// Jordan–Wigner image of hubbard_operators on 2*n_sites qubits.
ObservableSum build_hubbard(int n_sites, double u);

// ---- FCIDUMP ---------------------------------------------------------------

/// Spatial-orbital integrals in chemist notation, expanded to all symmetric
/// index permutations.
struct MolecularIntegrals {
  int n_orbitals = 0;
  int n_electrons = 0;
  int ms2 = 0;
  double core_energy = 0.0;
  std::vector<double> one_body;  // n^2, (p, q)
  std::vector<double> two_body;  // n^4, (pq|rs)

  double h(int p, int q) const { return one_body[static_cast<std::size_t>(p * n_orbitals + q)]; }
  double eri(int p, int q, int r, int s) const {
    const auto n = static_cast<std::size_t>(n_orbitals);
    return two_body[((static_cast<std::size_t>(p) * n + q) * n + r) * n + s];
  }
};

struct MolecularHamiltonian {
  std::vector<FermionOp> operators;  // over 2*n_orbitals spin orbitals
  double core_energy = 0.0;
  int n_orbitals = 0;
  int n_electrons = 0;
  MolecularIntegrals integrals;

  int n_spin_orbitals() const noexcept { return 2 * n_orbitals; }
  /// Jordan–Wigner image plus core_energy on the identity.
  ObservableSum qubit_hamiltonian() const;
};

MolecularIntegrals read_fcidump_integrals(const std::filesystem::path& path);
MolecularHamiltonian parse_fcidump(const std::filesystem::path& path);
/// h_pq a+_p a_q + 1/2 (pq|rs) a+_p a+_r a_s a_q over spin orbitals.
MolecularHamiltonian molecular_hamiltonian(const MolecularIntegrals& ints);

// ---- operator pools --------------------------------------------------------

struct PoolElement {
  std::string label;
  ObservableSum generator;  // anti-hermitian
};

using OperatorPool = std::vector<PoolElement>;

/// Spin-conserving generalized singles and doubles, Jordan–Wigner mapped.
OperatorPool build_uccgsd_pool(int n_spin_orbitals);
/// t_I = -i sigma_I for each basis string.
OperatorPool pauli_pool(const std::vector<PauliString>& basis);

// ---- partitions ------------------------------------------------------------

struct SymmetryLink {
  int source = -1;
  std::vector<int> permutation;  // qubit q of the source maps to permutation[q]
};

struct HamiltonianPartition {
  ObservableSum full;
  std::vector<ObservableSum> terms;
  std::vector<std::uint64_t> domains;
  std::map<int, SymmetryLink> symmetry_links;

  int n_qubits() const noexcept { return full.n_qubits(); }
  std::size_t size() const noexcept { return terms.size(); }
};

namespace partition_spec {
struct Trivial {};
/// Each group lists indices into h.terms() (canonical order).
struct Explicit {
  std::vector<std::vector<int>> groups;
};
/// Fragments split by parity of their lowest qubit.
struct EvenOdd {};
/// Fragments assigned to `count` equal-width blocks along the chain by the
/// centre of their support; fragments centred on a block boundary are
/// shared with weight 1/2. `merge` optionally joins blocks into terms.
struct Blocks {
  int count = 2;
  std::vector<std::vector<int>> merge;
};
/// Fragments in descending |coeff| order join the group whose members stay
/// commuting with the most pool generators (ties -> lowest group).
struct GreedyCommuting {
  int count = 2;
};
}  // namespace partition_spec

using PartitionSpec =
    std::variant<partition_spec::Trivial, partition_spec::Explicit, partition_spec::EvenOdd,
                 partition_spec::Blocks, partition_spec::GreedyCommuting>;

struct PartitionOptions {
  /// Domain width D; 0 means the whole register.
  int domain_size = 0;
  /// Needed by GreedyCommuting.
  const OperatorPool* pool = nullptr;
  /// Record site-inversion links between mirror-image terms.
  bool detect_inversion_links = true;
};

HamiltonianPartition make_partition(const ObservableSum& h, const PartitionSpec& spec,
                                    const PartitionOptions& opts = {});

/// Smallest contiguous window holding `support`, widened symmetrically to
/// `width` (extra qubit goes left), shifted to stay inside the register.
std::uint64_t widen_domain(std::uint64_t support, int width, int n_qubits);

/// Checks recombination, domain containment and link consistency; returns
/// a description of the first violation or nullopt.
std::optional<std::string> validate_partition(const HamiltonianPartition& p, double tol = 1e-12);

}  // namespace mtqite
