#pragma once

#include <vector>

#include <Eigen/Dense>

#include "mtqite/pauli.hpp"
#include "mtqite/statevector.hpp"

namespace mtqite {

inline constexpr double kDegeneracyTolerance = 1e-9;

struct GroundSpace {
  double energy = 0.0;
  std::vector<StateVector> basis;
  int degeneracy = 0;
};

/// Dense diagonalization; eigenvalues within 1e-9 of the minimum are
/// grouped into the ground space.
GroundSpace exact_ground(const ObservableSum& h);

/// Full spectrum of h, ascending.
Eigen::VectorXd exact_spectrum(const ObservableSum& h);

/// Eigendecomposition of h kept around for repeated imaginary-time
/// propagation of different states.
class ExactPropagator {
 public:
  explicit ExactPropagator(const ObservableSum& h);

  /// Normalized exp(-tau h)|psi>.
  StateVector evolve(const StateVector& state, double tau) const;
  int n_qubits() const noexcept { return n_; }

 private:
  int n_ = 0;
  Eigen::MatrixXcd vectors_;
  Eigen::VectorXd values_;
};

StateVector exact_ite(const StateVector& state, const ObservableSum& h, double tau);

/// Squared norm of the projection of `state` onto the ground space.
double fidelity(const StateVector& state, const GroundSpace& gs);

}  // namespace mtqite
