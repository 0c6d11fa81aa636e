#include "mtqite/symmetry.hpp"

#include <algorithm>
#include <bit>

#include "mtqite/error.hpp"

namespace mtqite {

namespace {

void check_cap(int n) {
  if (n > kSymmetryEnumerationCap) {
    throw SizeCapError("Z2 symmetry enumeration limited to " + std::to_string(kSymmetryEnumerationCap) +
                       " qubits");
  }
}

bool commutes_masks(std::uint64_t x1, std::uint64_t z1, std::uint64_t x2, std::uint64_t z2) {
  return (std::popcount((x1 & z2) ^ (z1 & x2)) & 1) == 0;
}

// Scatters the low bits of `bits` onto the set positions of `mask`.
std::uint64_t deposit(std::uint64_t bits, std::uint64_t mask) {
  std::uint64_t out = 0;
  for (std::uint64_t m = mask; m; m &= m - 1) {
    if (bits & 1U) out |= m & (~m + 1);
    bits >>= 1;
  }
  return out;
}

}  // namespace

std::vector<PauliString> SymmetryGroup::elements() const {
  const std::size_t g = stabilizer_generators.size();
  std::vector<PauliString> out;
  out.reserve(std::size_t{1} << g);
  for (std::uint64_t subset = 0; subset < (std::uint64_t{1} << g); ++subset) {
    PauliString e = PauliString::identity(n_qubits);
    for (std::size_t k = 0; k < g; ++k) {
      if (!((subset >> k) & 1U)) continue;
      e = mul(e, stabilizer_generators[k]);
      if (chosen_sector[k] < 0) e = e.with_phase(e.phase_exp() + 2);
    }
    out.push_back(e);
  }
  return out;
}

std::vector<PauliString> commuting_strings(const ObservableSum& h) {
  const int n = h.n_qubits();
  check_cap(n);
  const std::uint64_t dim = std::uint64_t{1} << n;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> terms;
  for (const auto& t : h.terms()) terms.emplace_back(t.string.x_mask(), t.string.z_mask());

  std::vector<std::vector<std::uint64_t>> per_z(dim);
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t zi = 0; zi < static_cast<std::int64_t>(dim); ++zi) {
    const auto z = static_cast<std::uint64_t>(zi);
    auto& bucket = per_z[z];
    for (std::uint64_t x = 0; x < dim; ++x) {
      bool ok = true;
      for (const auto& [tx, tz] : terms) {
        if (!commutes_masks(x, z, tx, tz)) {
          ok = false;
          break;
        }
      }
      if (ok) bucket.push_back(x);
    }
  }
  std::vector<PauliString> out;
  for (std::uint64_t z = 0; z < dim; ++z) {
    for (std::uint64_t x : per_z[z]) out.emplace_back(n, x, z);
  }
  return out;
}

SymmetryGroup find_z2_symmetries(const ObservableSum& h) {
  const int n = h.n_qubits();
  SymmetryGroup group;
  group.n_qubits = n;
  // GF(2) echelon basis over the 2n-bit vectors (x | z << n).
  std::vector<std::uint64_t> echelon;
  auto reduce = [&](std::uint64_t v) {
    for (std::uint64_t b : echelon) v = std::min(v, v ^ b);
    return v;
  };
  for (const auto& s : commuting_strings(h)) {
    if (s.is_identity()) continue;
    bool ok = true;
    for (const auto& g : group.stabilizer_generators) {
      if (!commutes(g, s)) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    const std::uint64_t v = reduce(s.x_mask() | (s.z_mask() << n));
    if (v == 0) continue;
    echelon.push_back(v);
    std::sort(echelon.begin(), echelon.end(), std::greater<>());
    group.stabilizer_generators.push_back(s);
    group.chosen_sector.push_back(+1);
  }
  return group;
}

std::vector<PauliString> reduce_basis(std::uint64_t domain, const SymmetryGroup& group, int n_qubits) {
  const int k = std::popcount(domain);
  if (k > kSymmetryEnumerationCap) {
    throw SizeCapError("basis enumeration limited to " + std::to_string(kSymmetryEnumerationCap) +
                       "-qubit domains");
  }
  std::vector<PauliString> stab_in_domain;
  if (!group.empty()) {
    for (const auto& e : group.elements()) {
      if (!e.is_identity() && (e.support() & ~domain) == 0) stab_in_domain.push_back(e);
    }
  }
  const std::uint64_t local = std::uint64_t{1} << k;
  std::vector<PauliString> out;
  for (std::uint64_t lz = 0; lz < local; ++lz) {
    for (std::uint64_t lx = 0; lx < local; ++lx) {
      const std::uint64_t x = deposit(lx, domain);
      const std::uint64_t z = deposit(lz, domain);
      bool normal = true;
      for (const auto& g : group.stabilizer_generators) {
        if (!commutes_masks(x, z, g.x_mask(), g.z_mask())) {
          normal = false;
          break;
        }
      }
      if (!normal) continue;
      const PauliKey key{x, z};
      bool rep = true;
      bool identity_coset = (x == 0 && z == 0);
      for (const auto& s : stab_in_domain) {
        const PauliKey other{x ^ s.x_mask(), z ^ s.z_mask()};
        if (other.x == 0 && other.z == 0) identity_coset = true;
        if (other < key) rep = false;
      }
      if (rep && !identity_coset) out.emplace_back(n_qubits, x, z);
    }
  }
  std::sort(out.begin(), out.end(),
            [](const PauliString& a, const PauliString& b) { return a.key() < b.key(); });
  return out;
}

void sort_rotations(std::vector<Rotation>& rotations) {
  const bool all_pauli = std::all_of(rotations.begin(), rotations.end(), [](const Rotation& r) {
    return std::holds_alternative<PauliString>(r.generator);
  });
  if (!all_pauli) return;
  std::stable_sort(rotations.begin(), rotations.end(), [](const Rotation& a, const Rotation& b) {
    return std::get<PauliString>(a.generator).key() < std::get<PauliString>(b.generator).key();
  });
}

UnitaryStep transport_by_inversion(const UnitaryStep& step, int n_qubits) {
  const auto perm = inversion_permutation(n_qubits);
  UnitaryStep out = step;
  out.domain = permute_mask(step.domain, perm);
  for (auto& r : out.rotations) {
    if (auto* p = std::get_if<PauliString>(&r.generator)) {
      *p = p->permuted(perm);
    } else {
      auto& sum = std::get<ObservableSum>(r.generator);
      sum = sum.permuted(perm);
    }
  }
  sort_rotations(out.rotations);
  return out;
}

UnitaryStep transport_linked_step(const HamiltonianPartition& partition, int target,
                                  const UnitaryStep& source_step) {
  const auto it = partition.symmetry_links.find(target);
  if (it == partition.symmetry_links.end()) {
    throw InputError("term " + std::to_string(target) + " has no symmetry link");
  }
  if (source_step.term_index >= 0 && source_step.term_index != it->second.source) {
    throw InputError("step belongs to term " + std::to_string(source_step.term_index) +
                     ", link source is " + std::to_string(it->second.source));
  }
  UnitaryStep out = transport_by_inversion(source_step, partition.n_qubits());
  out.term_index = target;
  return out;
}

cplx inversion_expectation(const StateVector& state) { return inner(state, state.inverted()); }

}  // namespace mtqite
