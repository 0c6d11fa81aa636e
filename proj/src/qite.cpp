#include "mtqite/qite.hpp"

#include <cmath>
#include <unordered_map>

#include "mtqite/error.hpp"

namespace mtqite {

int order_of(Formulation f) noexcept { return f == Formulation::pauli_order1 ? 1 : 2; }

std::string_view to_string(Formulation f) noexcept {
  switch (f) {
    case Formulation::pauli_order1:
      return "pauli_order1";
    case Formulation::pauli_order2:
      return "pauli_order2";
    case Formulation::antihermitian_order2:
      return "antihermitian_order2";
  }
  return "?";
}

Formulation formulation_from_string(std::string_view s) {
  if (s == "pauli_order1") return Formulation::pauli_order1;
  if (s == "pauli_order2") return Formulation::pauli_order2;
  if (s == "antihermitian_order2") return Formulation::antihermitian_order2;
  throw InputError("unknown formulation '" + std::string(s) + "'");
}

QiteBasis QiteBasis::pauli(std::vector<PauliString> strings) {
  QiteBasis b;
  b.is_pauli_ = true;
  for (auto& s : strings) s = s.with_phase(0);
  b.strings_ = std::move(strings);
  return b;
}

QiteBasis QiteBasis::pool(OperatorPool pool) {
  QiteBasis b;
  b.is_pauli_ = false;
  b.pool_ = std::move(pool);
  return b;
}

std::vector<std::string> QiteBasis::labels() const {
  std::vector<std::string> out;
  out.reserve(size());
  if (is_pauli_) {
    for (const auto& s : strings_) out.push_back(s.label());
  } else {
    for (const auto& e : pool_) out.push_back(e.label);
  }
  return out;
}

namespace {

// One basis element as a weighted list of phase-free strings.
using Expansion = std::vector<PauliTerm>;

std::vector<Expansion> expand(const QiteBasis& basis, bool antihermitian) {
  std::vector<Expansion> out;
  out.reserve(basis.size());
  if (basis.is_pauli()) {
    const cplx w = antihermitian ? cplx(0.0, -1.0) : cplx(1.0);
    for (const auto& s : basis.strings()) out.push_back({{w, s}});
  } else {
    for (const auto& e : basis.elements()) out.push_back(e.generator.terms());
  }
  return out;
}

enum class Slot { s, b1, b2, h1, h2 };

// Reduces weight * p to a real scalar times a signed string; false when the
// weight is neither real nor imaginary.
bool real_phase_after_folding(cplx weight, const PauliString& p) {
  const double re = std::abs(weight.real());
  const double im = std::abs(weight.imag());
  int phase = p.phase_exp();
  if (im > 1e-12 * re && re > 1e-12 * im) return false;
  if (im > re) phase += 1;
  return (phase & 1) == 0;
}

// Calls visit(slot, i, j, weight, product, real) for every expectation value
// the formulation needs; the value contributed is Re(weight * <product>) and
// `real` tells whether the measured operator is a real-phase string.
template <class Visit>
void for_each_contribution(const ObservableSum& term, const ObservableSum& term_sq,
                           const std::vector<Expansion>& basis, Formulation f, Visit&& visit) {
  const bool ah = f == Formulation::antihermitian_order2;
  const int order = order_of(f);
  const std::size_t k = basis.size();

  for (const auto& t : term.terms()) visit(Slot::h1, 0, 0, t.coeff, t.string, true);
  if (order == 2) {
    for (const auto& t : term_sq.terms()) visit(Slot::h2, 0, 0, t.coeff, t.string, true);
  }

  // S: only commuting products survive, either as 2Re<σσ> or as {t,t}.
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i; j < k; ++j) {
      for (const auto& a : basis[i]) {
        for (const auto& b : basis[j]) {
          if (!commutes(a.string, b.string)) continue;
          const cplx w = ah ? 2.0 * a.coeff * b.coeff : 2.0 * std::conj(a.coeff) * b.coeff;
          const PauliString p = mul(a.string, b.string);
          visit(Slot::s, i, j, w, p, real_phase_after_folding(w, p));
        }
      }
    }
  }

  // b: only anticommuting products survive, either as 2Im<σh> or as [h,t].
  auto b_pass = [&](Slot slot, const ObservableSum& op) {
    for (std::size_t i = 0; i < k; ++i) {
      for (const auto& a : basis[i]) {
        for (const auto& h : op.terms()) {
          if (commutes(a.string, h.string)) continue;
          if (ah) {
            const cplx w = 2.0 * h.coeff * a.coeff;
            const PauliString p = mul(h.string, a.string);
            visit(slot, i, 0, w, p, real_phase_after_folding(w, p));
          } else {
            // 2 Im(w <P>) = Re(-2i w <P>); the string measured is still w P.
            const cplx w = std::conj(a.coeff) * h.coeff;
            const PauliString p = mul(a.string, h.string);
            visit(slot, i, 0, cplx(0.0, -2.0) * w, p, real_phase_after_folding(w, p));
          }
        }
      }
    }
  };
  b_pass(Slot::b1, term);
  if (order == 2) b_pass(Slot::b2, term_sq);
}

}  // namespace

MeasuredTerm measure_term(const StateVector& state, const ObservableSum& term, const QiteBasis& basis,
                          Formulation formulation, MeasurementLedger* ledger, std::uint64_t reference_id) {
  if (basis.empty()) throw InputError("QITE basis is empty");
  if (!term.empty() && term.n_qubits() != state.n_qubits()) {
    throw DimensionError("term and state act on different registers");
  }
  if (!term.is_hermitian()) throw InputError("QITE term is not hermitian");
  const bool ah = formulation == Formulation::antihermitian_order2;
  if (!ah && !basis.is_pauli()) throw InputError("Pauli formulations need a Pauli-string basis");

  const int n = state.n_qubits();
  const ObservableSum term_n = term.empty() ? ObservableSum(n) : term;
  const ObservableSum term_sq = order_of(formulation) == 2 ? square(term_n) : ObservableSum(n);
  const auto expansion = expand(basis, ah);

  // Pass 1: collect distinct strings and classify their phases.
  std::unordered_map<PauliKey, double, PauliKeyHash> values;
  std::unordered_map<PauliKey, bool, PauliKeyHash> real_phase;
  for_each_contribution(term_n, term_sq, expansion, formulation,
                        [&](Slot, std::size_t, std::size_t, cplx, const PauliString& p, bool real) {
                          values.try_emplace(p.key(), 0.0);
                          auto [it, fresh] = real_phase.try_emplace(p.key(), real);
                          if (!fresh) it->second = it->second && real;
                        });

  std::vector<PauliKey> keys;
  keys.reserve(values.size());
  for (const auto& kv : values) keys.push_back(kv.first);
  std::vector<double> evaluated(keys.size());
#pragma omp parallel for schedule(dynamic, 64)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(keys.size()); ++i) {
    const auto& key = keys[static_cast<std::size_t>(i)];
    evaluated[static_cast<std::size_t>(i)] =
        (key.x == 0 && key.z == 0) ? 1.0 : state.expectation(PauliString(n, key.x, key.z)).real();
  }
  for (std::size_t i = 0; i < keys.size(); ++i) values[keys[i]] = evaluated[i];

  if (ledger != nullptr) {
    for (const auto& [key, real] : real_phase) ledger->record(reference_id, key, real);
  }

  // Pass 2: accumulate.
  const auto k = static_cast<Eigen::Index>(basis.size());
  MeasuredTerm m;
  m.formulation = formulation;
  m.s = Eigen::MatrixXd::Zero(k, k);
  m.b1 = Eigen::VectorXd::Zero(k);
  m.b2 = Eigen::VectorXd::Zero(k);
  m.distinct_strings = 0;
  for (const auto& key : keys) m.distinct_strings += (key.x != 0 || key.z != 0);
  for_each_contribution(term_n, term_sq, expansion, formulation,
                        [&](Slot slot, std::size_t i, std::size_t j, cplx w, const PauliString& p, bool) {
                          const double v = (w * phase_factor(p.phase_exp()) * values.at(p.key())).real();
                          const auto ii = static_cast<Eigen::Index>(i);
                          const auto jj = static_cast<Eigen::Index>(j);
                          switch (slot) {
                            case Slot::s:
                              m.s(ii, jj) += v;
                              break;
                            case Slot::b1:
                              m.b1(ii) += v;
                              break;
                            case Slot::b2:
                              m.b2(ii) += v;
                              break;
                            case Slot::h1:
                              m.h_mean += v;
                              break;
                            case Slot::h2:
                              m.h2_mean += v;
                              break;
                          }
                        });
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = i + 1; j < k; ++j) m.s(j, i) = m.s(i, j);
  }
  return m;
}

double normalization(const MeasuredTerm& m, double dt) {
  double c = 1.0 - 2.0 * dt * m.h_mean;
  if (order_of(m.formulation) == 2) c += 2.0 * dt * dt * m.h2_mean;
  if (!(c > 0.0)) {
    throw DegenerateNormalizationError("QITE normalization c = " + std::to_string(c) + " at dt = " +
                                           std::to_string(dt),
                                       c);
  }
  return c;
}

Eigen::VectorXd b_vector(const MeasuredTerm& m, double dt, double c) {
  Eigen::VectorXd b = m.b1;
  if (order_of(m.formulation) == 2) b -= 0.5 * dt * m.b2;
  return b / std::sqrt(c);
}

QiteLinearSystem assemble(const MeasuredTerm& m, double dt) {
  QiteLinearSystem sys;
  sys.formulation = m.formulation;
  sys.c_norm = normalization(m, dt);
  sys.s_matrix = m.s;
  sys.b_vector = b_vector(m, dt, sys.c_norm);
  return sys;
}

QiteLinearSystem build_system(const StateVector& state, const ObservableSum& term, const QiteBasis& basis,
                              double dt, Formulation formulation, MeasurementLedger* ledger,
                              std::uint64_t reference_id) {
  auto sys = assemble(measure_term(state, term, basis, formulation, ledger, reference_id), dt);
  sys.basis_labels = basis.labels();
  return sys;
}

PseudoInverse::PseudoInverse(const Eigen::MatrixXd& s, double rcond, bool negate) : negate_(negate) {
  if (s.rows() != s.cols()) throw DimensionError("pseudoinverse needs a square matrix");
  if (s.rows() == 0) return;
  // For symmetric S the singular values are |eigenvalues|.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(negate ? Eigen::MatrixXd(-s) : s);
  vectors_ = eig.eigenvectors();
  const Eigen::VectorXd& lam = eig.eigenvalues();
  const double smax = lam.cwiseAbs().maxCoeff();
  inv_values_ = Eigen::VectorXd::Zero(lam.size());
  for (Eigen::Index i = 0; i < lam.size(); ++i) {
    if (smax > 0.0 && std::abs(lam(i)) > rcond * smax) {
      inv_values_(i) = 1.0 / lam(i);
      ++rank_;
    }
  }
}

Eigen::VectorXd PseudoInverse::solve(const Eigen::VectorXd& b) const {
  if (vectors_.size() == 0) return Eigen::VectorXd::Zero(b.size());
  if (b.size() != vectors_.rows()) throw DimensionError("right-hand side size mismatch");
  return vectors_ * (inv_values_.asDiagonal() * (vectors_.transpose() * (negate_ ? Eigen::VectorXd(-b) : b)));
}

Eigen::VectorXd solve(const QiteLinearSystem& system, double rcond) {
  return PseudoInverse(system.s_matrix, rcond, negated_system(system.formulation)).solve(system.b_vector);
}

UnitaryStep make_step(const QiteBasis& basis, const Eigen::VectorXd& a, double dt, int term_index,
                      std::uint64_t domain, double drop_threshold) {
  if (static_cast<std::size_t>(a.size()) != basis.size()) throw DimensionError("coefficient count mismatch");
  UnitaryStep step;
  step.term_index = term_index;
  step.dt = dt;
  step.domain = domain;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const double angle = a(static_cast<Eigen::Index>(i)) * dt;
    if (std::abs(angle) < drop_threshold) {
      ++step.dropped;
      continue;
    }
    if (basis.is_pauli()) {
      step.rotations.push_back({basis.strings()[i], angle});
      continue;
    }
    const auto& g = basis.elements()[i].generator;
    // A lone -i*sigma generator is an ordinary Pauli rotation.
    if (g.size() == 1 && std::abs(g.terms()[0].coeff.real()) < 1e-15 && g.terms()[0].coeff.imag() != 0.0) {
      step.rotations.push_back({g.terms()[0].string, -g.terms()[0].coeff.imag() * angle});
    } else {
      step.rotations.push_back({g, angle});
    }
  }
  return step;
}

UnitaryStep qite_step(const StateVector& state, const ObservableSum& term, const QiteBasis& basis, double dt,
                      Formulation formulation, const StepOptions& opts, MeasurementLedger* ledger,
                      std::uint64_t reference_id) {
  const auto m = measure_term(state, term, basis, formulation, ledger, reference_id);
  const auto sys = assemble(m, dt);
  const Eigen::VectorXd a = PseudoInverse(sys.s_matrix, opts.rcond, negated_system(formulation)).solve(sys.b_vector);
  auto step = make_step(basis, a, dt, -1, 0, opts.drop_threshold);
  step.residual = (sys.s_matrix * a - sys.b_vector).norm();
  return step;
}

EquivalenceReport equivalence_check(const StateVector& state, const ObservableSum& term,
                                    const std::vector<PauliString>& basis, double dt, double rcond) {
  const auto pb = QiteBasis::pauli(basis);
  const auto sp = build_system(state, term, pb, dt, Formulation::pauli_order2);
  const auto sa = build_system(state, term, pb, dt, Formulation::antihermitian_order2);
  EquivalenceReport r;
  r.s_deviation = (sa.s_matrix + sp.s_matrix).cwiseAbs().maxCoeff();
  r.b_deviation = (sa.b_vector + sp.b_vector).cwiseAbs().maxCoeff();
  r.a_deviation = (solve(sa, rcond) - solve(sp, rcond)).cwiseAbs().maxCoeff();
  return r;
}

}  // namespace mtqite
