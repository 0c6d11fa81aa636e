#include "mtqite/hamiltonians.hpp"

#include <algorithm>
#include <set>

#include "mtqite/error.hpp"

namespace mtqite {

ObservableSum build_tfim(int n, double h_over_j) {
  if (n < 2) throw InputError("TFIM needs at least 2 sites");
  std::vector<PauliTerm> terms;
  for (int i = 0; i + 1 < n; ++i) {
    const std::uint64_t bond = std::uint64_t{3} << i;
    terms.push_back({-1.0, PauliString(n, 0, bond)});
  }
  for (int i = 0; i < n; ++i) terms.push_back({h_over_j, PauliString::single(n, i, 'X')});
  return ObservableSum(n, std::move(terms));
}

ObservableSum build_xxz(int n, double j) {
  if (n < 2) throw InputError("XXZ chain needs at least 2 sites");
  std::vector<PauliTerm> terms;
  for (int i = 0; i + 1 < n; ++i) {
    const std::uint64_t bond = std::uint64_t{3} << i;
    terms.push_back({1.0, PauliString(n, bond, 0)});
    terms.push_back({1.0, PauliString(n, bond, bond)});
    terms.push_back({j, PauliString(n, 0, bond)});
  }
  return ObservableSum(n, std::move(terms));
}

std::vector<FermionOp> hubbard_operators(int n_sites, double u) {
  if (n_sites < 1) throw InputError("Hubbard chain needs at least 1 site");
  std::vector<FermionOp> ops;
  for (int i = 0; i + 1 < n_sites; ++i) {
    for (int spin = 0; spin < 2; ++spin) {
      const int a = 2 * i + spin;
      const int b = 2 * (i + 1) + spin;
      ops.push_back(FermionOp::hop(a, b, -1.0));
      ops.push_back(FermionOp::hop(b, a, -1.0));
    }
  }
  for (int i = 0; i < n_sites; ++i) {
    const int up = 2 * i;
    const int dn = 2 * i + 1;
    ops.push_back({u, {{up, true}, {up, false}, {dn, true}, {dn, false}}});
  }
  return ops;
}

ObservableSum build_hubbard(int n_sites, double u) {
  return jordan_wigner(hubbard_operators(n_sites, u), 2 * n_sites);
}

// ---------------------------------------------------------------------------

ObservableSum MolecularHamiltonian::qubit_hamiltonian() const {
  return jordan_wigner(operators, n_spin_orbitals()) +
         ObservableSum::identity(n_spin_orbitals(), core_energy);
}

MolecularHamiltonian molecular_hamiltonian(const MolecularIntegrals& ints) {
  MolecularHamiltonian mh;
  mh.core_energy = ints.core_energy;
  mh.n_orbitals = ints.n_orbitals;
  mh.n_electrons = ints.n_electrons;
  mh.integrals = ints;
  const int n = ints.n_orbitals;
  constexpr double kZero = 1e-14;
  for (int p = 0; p < n; ++p) {
    for (int q = 0; q < n; ++q) {
      const double v = ints.h(p, q);
      if (std::abs(v) < kZero) continue;
      for (int s = 0; s < 2; ++s) mh.operators.push_back(FermionOp::hop(2 * p + s, 2 * q + s, v));
    }
  }
  for (int p = 0; p < n; ++p) {
    for (int q = 0; q < n; ++q) {
      for (int r = 0; r < n; ++r) {
        for (int s = 0; s < n; ++s) {
          const double v = ints.eri(p, q, r, s);
          if (std::abs(v) < kZero) continue;
          for (int a = 0; a < 2; ++a) {
            for (int b = 0; b < 2; ++b) {
              const int P = 2 * p + a, Q = 2 * q + a, R = 2 * r + b, S = 2 * s + b;
              if (P == R || Q == S) continue;  // a+_P a+_P = 0
              mh.operators.push_back(FermionOp::two_body(P, R, S, Q, 0.5 * v));
            }
          }
        }
      }
    }
  }
  return mh;
}

// ---------------------------------------------------------------------------

OperatorPool build_uccgsd_pool(int n_spin_orbitals) {
  if (n_spin_orbitals <= 0 || n_spin_orbitals % 2 != 0) {
    throw InputError("UCCGSD pool needs an even, positive number of spin orbitals");
  }
  const int n = n_spin_orbitals;
  OperatorPool pool;
  std::set<std::vector<std::pair<std::uint64_t, std::uint64_t>>> seen;
  auto add = [&](std::string label, const FermionOp& op) {
    ObservableSum g = jordan_wigner(op, n) - jordan_wigner(op.dagger(), n);
    if (g.empty()) return;
    std::vector<std::pair<std::uint64_t, std::uint64_t>> sig;
    for (const auto& t : g.terms()) sig.emplace_back(t.string.x_mask(), t.string.z_mask());
    // Same string set with proportional coefficients is the same direction.
    if (!seen.insert(sig).second) {
      for (const auto& e : pool) {
        if (e.generator.size() != g.size()) continue;
        bool same_keys = true;
        for (std::size_t k = 0; k < g.size() && same_keys; ++k) {
          same_keys = e.generator.terms()[k].string == g.terms()[k].string;
        }
        if (!same_keys) continue;
        const cplx ratio = g.terms()[0].coeff / e.generator.terms()[0].coeff;
        if ((g - e.generator * ratio).empty()) return;
      }
    }
    pool.push_back({std::move(label), std::move(g)});
  };
  auto spin = [](int mode) { return mode % 2; };
  for (int p = 0; p < n; ++p) {
    for (int q = 0; q < p; ++q) {
      if (spin(p) != spin(q)) continue;
      add("s(" + std::to_string(p) + "," + std::to_string(q) + ")", FermionOp::hop(p, q));
    }
  }
  std::vector<std::pair<int, int>> pairs;
  for (int p = 0; p < n; ++p) {
    for (int q = 0; q < p; ++q) pairs.emplace_back(p, q);
  }
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      const auto [p, q] = pairs[i];
      const auto [r, s] = pairs[j];
      if (spin(p) + spin(q) != spin(r) + spin(s)) continue;
      add("d(" + std::to_string(p) + "," + std::to_string(q) + ";" + std::to_string(r) + "," +
              std::to_string(s) + ")",
          FermionOp::two_body(p, q, s, r));
    }
  }
  return pool;
}

OperatorPool pauli_pool(const std::vector<PauliString>& basis) {
  OperatorPool pool;
  pool.reserve(basis.size());
  for (const auto& s : basis) pool.push_back({s.label(), ObservableSum(s, cplx(0.0, -1.0))});
  return pool;
}

}  // namespace mtqite
