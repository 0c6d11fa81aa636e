#pragma once

#include <utility>
#include <vector>

#include "mtqite/pauli.hpp"

namespace mtqite {

/// coeff * f_0 f_1 ... with each factor a creation (dagger) or annihilation
/// operator on a mode. Modes are spin orbitals, mode = 2*orbital + spin.
struct FermionOp {
  struct Factor {
    int mode = 0;
    bool dagger = false;
  };
  cplx coeff = 1.0;
  std::vector<Factor> factors;

  static FermionOp create(int mode, cplx coeff = 1.0) { return {coeff, {{mode, true}}}; }
  static FermionOp annihilate(int mode, cplx coeff = 1.0) { return {coeff, {{mode, false}}}; }
  /// coeff * a+_p a_q
  static FermionOp hop(int p, int q, cplx coeff = 1.0) { return {coeff, {{p, true}, {q, false}}}; }
  /// coeff * a+_p a+_q a_r a_s
  static FermionOp two_body(int p, int q, int r, int s, cplx coeff = 1.0) {
    return {coeff, {{p, true}, {q, true}, {r, false}, {s, false}}};
  }

  /// Hermitian conjugate: reversed order, flipped daggers, conjugated coefficient.
  FermionOp dagger() const;
};

/// Jordan–Wigner image on n_modes qubits: a_j -> Z_0..Z_{j-1} (X_j + iY_j)/2,
/// occupied = |1>.
ObservableSum jordan_wigner(const FermionOp& op, int n_modes);
ObservableSum jordan_wigner(const std::vector<FermionOp>& ops, int n_modes);

/// sum_q (I - Z_q)/2
ObservableSum number_operator(int n_modes);

}  // namespace mtqite
