#include "mtqite/statevector.hpp"

#include <bit>
#include <cmath>
#include <istream>
#include <ostream>

#include "mtqite/error.hpp"
#include "mtqite/kernels.hpp"

namespace mtqite {

namespace {

kernels::PauliMasks masks(const PauliString& p) {
  return {p.x_mask(), p.z_mask(), p.phase_exp()};
}

double vec_norm(std::span<const cplx> v) {
  double s = 0.0;
  for (const auto& a : v) s += std::norm(a);
  return std::sqrt(s);
}

}  // namespace

std::size_t Rotation::pauli_count() const {
  if (std::holds_alternative<PauliString>(generator)) return 1;
  return std::get<ObservableSum>(generator).size();
}

std::size_t UnitaryStep::rotation_count() const {
  std::size_t n = 0;
  for (const auto& r : rotations) n += r.pauli_count();
  return n;
}

StateVector::StateVector(int n_qubits) {
  if (n_qubits <= 0 || n_qubits > 30) {
    throw DimensionError("statevector supports 1..30 qubits, got " + std::to_string(n_qubits));
  }
  n_ = n_qubits;
  amps_.assign(std::size_t{1} << n_qubits, cplx{0.0});
  amps_[0] = 1.0;
}

StateVector StateVector::basis_state(int n_qubits, std::uint64_t index) {
  StateVector s(n_qubits);
  if (index >= s.dim()) throw RangeError("basis index out of range");
  s.amps_[0] = 0.0;
  s.amps_[index] = 1.0;
  return s;
}

StateVector StateVector::from_bits(std::string_view bits) {
  std::uint64_t index = 0;
  for (std::size_t q = 0; q < bits.size(); ++q) {
    if (bits[q] == '1') {
      index |= std::uint64_t{1} << q;
    } else if (bits[q] != '0') {
      throw InputError("bitstring may only contain 0 and 1");
    }
  }
  return basis_state(static_cast<int>(bits.size()), index);
}

StateVector StateVector::from_amplitudes(int n_qubits, std::vector<cplx> amps) {
  if (amps.size() != (std::size_t{1} << n_qubits)) {
    throw DimensionError("amplitude count does not match 2^n");
  }
  const double nrm = vec_norm(amps);
  if (!(nrm > 0.0) || !std::isfinite(nrm)) throw InputError("cannot normalize zero or non-finite vector");
  for (auto& a : amps) a /= nrm;
  return StateVector(n_qubits, std::move(amps));
}

double StateVector::norm() const { return vec_norm(amps_); }

void StateVector::check(int n) const {
  if (n != n_) {
    throw DimensionError("operator on " + std::to_string(n) + " qubits applied to " +
                         std::to_string(n_) + "-qubit state");
  }
}

void StateVector::rotate(const PauliString& p, double theta) {
  check(p.n_qubits());
  if (!p.has_real_phase()) {
    throw InvalidGeneratorError("rotation generator " + p.str() + " is not hermitian");
  }
  if (theta == 0.0) return;
  kernels::omp::rotate(amps_, masks(p), theta);
}

void StateVector::apply_exponential(const ObservableSum& g, double scale) {
  check(g.n_qubits());
  if (!g.is_antihermitian()) throw InvalidGeneratorError("generator is not anti-hermitian");
  if (scale == 0.0 || g.empty()) return;
  if (g.strings_commute()) {
    // exp(scale * sum(-i r_k P_k)) factorizes exactly into rotations.
    for (const auto& t : g.terms()) {
      const double r = (cplx(0.0, 1.0) * t.coeff).real();
      kernels::omp::rotate(amps_, masks(t.string), scale * r);
    }
    return;
  }
  // Scaled Taylor series; each slice has generator norm <= 1/2.
  double l1 = 0.0;
  for (const auto& t : g.terms()) l1 += std::abs(t.coeff);
  const int slices = std::max(1, static_cast<int>(std::ceil(std::abs(scale) * l1 / 0.5)));
  const double h = scale / slices;
  std::vector<cplx> term(amps_.size());
  std::vector<cplx> next(amps_.size());
  for (int s = 0; s < slices; ++s) {
    term = amps_;
    for (int k = 1; k <= 64; ++k) {
      std::fill(next.begin(), next.end(), cplx{0.0});
      for (const auto& t : g.terms()) {
        kernels::omp::accumulate_apply(term, masks(t.string), t.coeff * (h / k), next);
      }
      term.swap(next);
      double tn = 0.0;
      for (std::size_t i = 0; i < amps_.size(); ++i) {
        amps_[i] += term[i];
        tn += std::norm(term[i]);
      }
      if (tn < 1e-36) break;
    }
  }
  const double nrm = vec_norm(amps_);
  for (auto& a : amps_) a /= nrm;
}

ObservableSum step_generator(const UnitaryStep& step, int n_qubits) {
  ObservableSum g(n_qubits);
  for (const auto& r : step.rotations) {
    if (const auto* p = std::get_if<PauliString>(&r.generator)) {
      g += ObservableSum(*p, cplx(0.0, -r.angle));
    } else {
      g += std::get<ObservableSum>(r.generator) * cplx(r.angle);
    }
  }
  return g;
}

void StateVector::apply(const UnitaryStep& step, ApplyMode mode) {
  if (step.rotations.empty()) return;
  if (mode == ApplyMode::exact_generator) {
    const ObservableSum g = step_generator(step, n_);
    const std::uint64_t dom = step.domain ? step.domain : g.support();
    if (std::popcount(dom) > kDenseQubitCap) {
      throw SizeCapError("exact_generator mode limited to " + std::to_string(kDenseQubitCap) +
                         "-qubit domains");
    }
    apply_exponential(g, 1.0);
    return;
  }
  for (const auto& r : step.rotations) {
    if (const auto* p = std::get_if<PauliString>(&r.generator)) {
      rotate(*p, r.angle);
    } else {
      apply_exponential(std::get<ObservableSum>(r.generator), r.angle);
    }
  }
}

cplx StateVector::expectation(const PauliString& p) const {
  check(p.n_qubits());
  return kernels::omp::expectation(amps_, masks(p));
}

cplx StateVector::expectation(const ObservableSum& o) const {
  if (o.empty()) return 0.0;
  check(o.n_qubits());
  cplx acc = 0.0;
  for (const auto& t : o.terms()) {
    acc += t.coeff * (t.string.is_identity() ? cplx(1.0) : kernels::omp::expectation(amps_, masks(t.string)));
  }
  return acc;
}

StateVector StateVector::inverted() const {
  const auto perm = inversion_permutation(n_);
  std::vector<cplx> out(amps_.size());
  for (std::uint64_t b = 0; b < amps_.size(); ++b) out[permute_mask(b, perm)] = amps_[b];
  return StateVector(n_, std::move(out));
}

void StateVector::write_binary(std::ostream& os) const {
  static_assert(std::endian::native == std::endian::little, "binary dump assumes little-endian host");
  for (const auto& a : amps_) {
    const double re = a.real();
    const double im = a.imag();
    os.write(reinterpret_cast<const char*>(&re), sizeof re);
    os.write(reinterpret_cast<const char*>(&im), sizeof im);
  }
}

StateVector StateVector::read_binary(std::istream& is, int n_qubits) {
  std::vector<cplx> amps(std::size_t{1} << n_qubits);
  for (auto& a : amps) {
    double re = 0.0;
    double im = 0.0;
    is.read(reinterpret_cast<char*>(&re), sizeof re);
    is.read(reinterpret_cast<char*>(&im), sizeof im);
    if (!is) throw InputError("truncated amplitude dump");
    a = {re, im};
  }
  return from_amplitudes(n_qubits, std::move(amps));
}

StateVector apply_pauli_rotation(StateVector state, const PauliString& p, double theta) {
  state.rotate(p, theta);
  return state;
}

cplx expectation(const StateVector& state, const ObservableSum& obs) { return state.expectation(obs); }

StateVector apply_unitary_step(StateVector state, const UnitaryStep& step, ApplyMode mode) {
  state.apply(step, mode);
  return state;
}

cplx inner(const StateVector& a, const StateVector& b) {
  if (a.n_qubits() != b.n_qubits()) throw DimensionError("inner product of different registers");
  cplx acc = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) acc += std::conj(a[i]) * b[i];
  return acc;
}

}  // namespace mtqite
