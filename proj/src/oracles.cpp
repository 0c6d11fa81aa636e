#include "mtqite/oracles.hpp"

#include <cmath>

#include "mtqite/error.hpp"

namespace mtqite {

namespace {

Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> diagonalize(const ObservableSum& h) {
  if (h.n_qubits() > kDenseQubitCap) {
    throw SizeCapError("dense oracles limited to " + std::to_string(kDenseQubitCap) + " qubits");
  }
  if (!h.is_hermitian()) throw InputError("oracle Hamiltonian is not hermitian");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(to_dense(h));
  if (eig.info() != Eigen::Success) throw Error("eigendecomposition failed");
  return eig;
}

StateVector column_state(int n, const Eigen::MatrixXcd& m, Eigen::Index col) {
  std::vector<cplx> amps(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index r = 0; r < m.rows(); ++r) amps[static_cast<std::size_t>(r)] = m(r, col);
  return StateVector::from_amplitudes(n, std::move(amps));
}

Eigen::VectorXcd as_vector(const StateVector& s) {
  Eigen::VectorXcd v(static_cast<Eigen::Index>(s.dim()));
  for (std::size_t i = 0; i < s.dim(); ++i) v(static_cast<Eigen::Index>(i)) = s[i];
  return v;
}

}  // namespace

GroundSpace exact_ground(const ObservableSum& h) {
  const int n = h.n_qubits();
  const auto eig = diagonalize(h);
  const Eigen::VectorXd& lam = eig.eigenvalues();
  GroundSpace gs;
  gs.energy = lam(0);
  for (Eigen::Index i = 0; i < lam.size() && lam(i) - lam(0) <= kDegeneracyTolerance; ++i) {
    gs.basis.push_back(column_state(n, eig.eigenvectors(), i));
  }
  gs.degeneracy = static_cast<int>(gs.basis.size());
  return gs;
}

Eigen::VectorXd exact_spectrum(const ObservableSum& h) { return diagonalize(h).eigenvalues(); }

ExactPropagator::ExactPropagator(const ObservableSum& h) : n_(h.n_qubits()) {
  const auto eig = diagonalize(h);
  vectors_ = eig.eigenvectors();
  values_ = eig.eigenvalues();
}

StateVector ExactPropagator::evolve(const StateVector& state, double tau) const {
  if (state.n_qubits() != n_) throw DimensionError("state and Hamiltonian act on different registers");
  if (tau < 0.0) throw InputError("imaginary time must be non-negative");
  if (tau == 0.0) return state;
  Eigen::VectorXcd coeffs = vectors_.adjoint() * as_vector(state);
  // Shift by the lowest eigenvalue so the weights stay in (0, 1].
  for (Eigen::Index i = 0; i < coeffs.size(); ++i) coeffs(i) *= std::exp(-tau * (values_(i) - values_(0)));
  const Eigen::VectorXcd out = vectors_ * coeffs;
  const double nrm = out.norm();
  if (!(nrm > 1e-300)) throw DegenerateNormalizationError("imaginary-time evolution lost the state", nrm);
  std::vector<cplx> amps(out.data(), out.data() + out.size());
  return StateVector::from_amplitudes(n_, std::move(amps));
}

StateVector exact_ite(const StateVector& state, const ObservableSum& h, double tau) {
  if (tau == 0.0) return state;
  return ExactPropagator(h).evolve(state, tau);
}

double fidelity(const StateVector& state, const GroundSpace& gs) {
  double f = 0.0;
  for (const auto& g : gs.basis) {
    if (g.n_qubits() != state.n_qubits()) throw DimensionError("fidelity of states on different registers");
    f += std::norm(inner(g, state));
  }
  return std::min(f, 1.0);
}

}  // namespace mtqite
