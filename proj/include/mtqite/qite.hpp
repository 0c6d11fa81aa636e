#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "mtqite/hamiltonians.hpp"
#include "mtqite/ledger.hpp"
#include "mtqite/pauli.hpp"
#include "mtqite/statevector.hpp"

namespace mtqite {

enum class Formulation { pauli_order1, pauli_order2, antihermitian_order2 };

int order_of(Formulation f) noexcept;
std::string_view to_string(Formulation f) noexcept;
/// Accepts "pauli_order1", "pauli_order2", "antihermitian_order2".
Formulation formulation_from_string(std::string_view s);

inline constexpr double kDefaultRcond = 1e-8;
inline constexpr double kDefaultDropThreshold = 1e-10;

/// Generator basis of a QITE step: either Pauli strings sigma_I, or a pool
/// of anti-hermitian operators t_I. The anti-hermitian formulation accepts
/// a Pauli basis and uses t_I = -i sigma_I.
class QiteBasis {
 public:
  QiteBasis() = default;
  static QiteBasis pauli(std::vector<PauliString> strings);
  static QiteBasis pool(OperatorPool pool);

  bool is_pauli() const noexcept { return is_pauli_; }
  std::size_t size() const noexcept { return is_pauli_ ? strings_.size() : pool_.size(); }
  bool empty() const noexcept { return size() == 0; }
  const std::vector<PauliString>& strings() const noexcept { return strings_; }
  const OperatorPool& elements() const noexcept { return pool_; }
  std::vector<std::string> labels() const;

 private:
  bool is_pauli_ = true;
  std::vector<PauliString> strings_;
  OperatorPool pool_;
};

/// Every dt-independent expectation value a term needs on one reference:
/// S, the two pieces of b, <h> and <h^2>. b(dt) = (b1 - dt/2 b2)/sqrt(c).
struct MeasuredTerm {
  Formulation formulation = Formulation::pauli_order2;
  Eigen::MatrixXd s;
  Eigen::VectorXd b1;
  Eigen::VectorXd b2;
  double h_mean = 0.0;
  double h2_mean = 0.0;
  std::size_t distinct_strings = 0;
};

struct QiteLinearSystem {
  Eigen::MatrixXd s_matrix;
  Eigen::VectorXd b_vector;
  double c_norm = 1.0;
  std::vector<std::string> basis_labels;
  Formulation formulation = Formulation::pauli_order2;
};

/// Evaluates every expectation value the formulation needs on `state` and
/// records each distinct string in `ledger` (if given) under `reference_id`.
MeasuredTerm measure_term(const StateVector& state, const ObservableSum& term, const QiteBasis& basis,
                          Formulation formulation, MeasurementLedger* ledger = nullptr,
                          std::uint64_t reference_id = 0);

/// c for the formulation's order; throws DegenerateNormalizationError if c <= 0.
double normalization(const MeasuredTerm& m, double dt);
/// b(dt) for the given c.
Eigen::VectorXd b_vector(const MeasuredTerm& m, double dt, double c);

QiteLinearSystem assemble(const MeasuredTerm& m, double dt);
QiteLinearSystem build_system(const StateVector& state, const ObservableSum& term, const QiteBasis& basis,
                              double dt, Formulation formulation, MeasurementLedger* ledger = nullptr,
                              std::uint64_t reference_id = 0);

/// Pseudoinverse of a real symmetric matrix, factorized once and reused
/// for many right-hand sides.
class PseudoInverse {
 public:
  PseudoInverse() = default;
  /// With `negate`, factors -s and solves -s x = -b, which keeps the
  /// anti-hermitian system bit-identical to the Pauli one.
  PseudoInverse(const Eigen::MatrixXd& s, double rcond = kDefaultRcond, bool negate = false);

  Eigen::VectorXd solve(const Eigen::VectorXd& b) const;
  int rank() const noexcept { return rank_; }

 private:
  Eigen::MatrixXd vectors_;
  Eigen::VectorXd inv_values_;
  int rank_ = 0;
  bool negate_ = false;
};

/// The anti-hermitian S is negative semidefinite.
inline bool negated_system(Formulation f) noexcept { return f == Formulation::antihermitian_order2; }

Eigen::VectorXd solve(const QiteLinearSystem& system, double rcond = kDefaultRcond);

struct StepOptions {
  double rcond = kDefaultRcond;
  double drop_threshold = kDefaultDropThreshold;
};

/// Rotations for coefficient vector `a` at step size dt, in basis order.
UnitaryStep make_step(const QiteBasis& basis, const Eigen::VectorXd& a, double dt, int term_index = -1,
                      std::uint64_t domain = 0, double drop_threshold = kDefaultDropThreshold);

UnitaryStep qite_step(const StateVector& state, const ObservableSum& term, const QiteBasis& basis, double dt,
                      Formulation formulation, const StepOptions& opts = {}, MeasurementLedger* ledger = nullptr,
                      std::uint64_t reference_id = 0);

struct EquivalenceReport {
  double s_deviation = 0.0;  // max |S' + S|
  double b_deviation = 0.0;  // max |b' + b|
  double a_deviation = 0.0;  // max |a' - a|
  bool ok(double tol = 1e-12) const noexcept {
    return s_deviation <= tol && b_deviation <= tol && a_deviation <= tol;
  }
};

/// Compares the Pauli order-2 system with the anti-hermitian one built from
/// t_I = -i sigma_I.
EquivalenceReport equivalence_check(const StateVector& state, const ObservableSum& term,
                                    const std::vector<PauliString>& basis, double dt,
                                    double rcond = kDefaultRcond);

}  // namespace mtqite
