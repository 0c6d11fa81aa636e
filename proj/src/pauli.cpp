#include "mtqite/pauli.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "mtqite/error.hpp"

namespace mtqite {

namespace {

std::uint64_t low_mask(int n) {
  return n >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1);
}

void check_width(int n) {
  if (n <= 0 || n > kMaxQubits) {
    throw DimensionError("qubit count " + std::to_string(n) + " outside [1, 64]");
  }
}

void check_same(int a, int b, const char* what) {
  if (a != b) {
    throw DimensionError(std::string(what) + ": register sizes " + std::to_string(a) +
                         " and " + std::to_string(b) + " differ");
  }
}

}  // namespace

cplx phase_factor(int phase_exp) {
  switch (((phase_exp % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

PauliString::PauliString(int n_qubits, std::uint64_t x_mask, std::uint64_t z_mask,
                         int phase_exp)
    : n_(n_qubits), x_(x_mask), z_(z_mask), phase_(((phase_exp % 4) + 4) % 4) {
  check_width(n_qubits);
  if ((x_mask | z_mask) & ~low_mask(n_qubits)) {
    throw DimensionError("Pauli masks exceed register of " + std::to_string(n_qubits) +
                         " qubits");
  }
}

PauliString PauliString::identity(int n_qubits) { return {n_qubits, 0, 0, 0}; }

PauliString PauliString::single(int n_qubits, int qubit, char p) {
  if (qubit < 0 || qubit >= n_qubits) throw RangeError("qubit index out of range");
  const std::uint64_t bit = std::uint64_t{1} << qubit;
  switch (p) {
    case 'I': return {n_qubits, 0, 0};
    case 'X': return {n_qubits, bit, 0};
    case 'Y': return {n_qubits, bit, bit};
    case 'Z': return {n_qubits, 0, bit};
    default: throw InputError(std::string("unknown Pauli letter '") + p + "'");
  }
}

PauliString PauliString::from_label(std::string_view label) {
  int phase = 0;
  if (!label.empty() && (label.front() == '+' || label.front() == '-')) {
    if (label.front() == '-') phase = 2;
    label.remove_prefix(1);
  }
  if (!label.empty() && label.front() == 'i') {
    phase += 1;
    label.remove_prefix(1);
  }
  const int n = static_cast<int>(label.size());
  check_width(n);
  std::uint64_t x = 0;
  std::uint64_t z = 0;
  for (int q = 0; q < n; ++q) {
    const std::uint64_t bit = std::uint64_t{1} << q;
    switch (label[q]) {
      case 'I': case '_': break;
      case 'X': x |= bit; break;
      case 'Y': x |= bit; z |= bit; break;
      case 'Z': z |= bit; break;
      default: throw InputError("bad Pauli label '" + std::string(label) + "'");
    }
  }
  return {n, x, z, phase};
}

int PauliString::weight() const noexcept { return std::popcount(x_ | z_); }

char PauliString::pauli_at(int qubit) const noexcept {
  const bool xb = (x_ >> qubit) & 1U;
  const bool zb = (z_ >> qubit) & 1U;
  if (xb && zb) return 'Y';
  if (xb) return 'X';
  if (zb) return 'Z';
  return 'I';
}

PauliString PauliString::permuted(std::span<const int> perm) const {
  return {n_, permute_mask(x_, perm), permute_mask(z_, perm), phase_};
}

PauliString PauliString::inverted() const {
  const auto perm = inversion_permutation(n_);
  return permuted(perm);
}

std::string PauliString::label() const {
  std::string s(static_cast<std::size_t>(n_), 'I');
  for (int q = 0; q < n_; ++q) s[static_cast<std::size_t>(q)] = pauli_at(q);
  return s;
}

std::string PauliString::str() const {
  static constexpr const char* kPrefix[] = {"+", "+i", "-", "-i"};
  return kPrefix[phase_] + label();
}

PauliString mul(const PauliString& p, const PauliString& q) {
  check_same(p.n_qubits(), q.n_qubits(), "mul");
  // P(x,z) = i^{x z} X^x Z^z per qubit; moving Z^{z1} past X^{x2} costs (-1)^{z1 x2}.
  const std::uint64_t x3 = p.x_mask() ^ q.x_mask();
  const std::uint64_t z3 = p.z_mask() ^ q.z_mask();
  const int e = p.phase_exp() + q.phase_exp() + std::popcount(p.x_mask() & p.z_mask()) +
                std::popcount(q.x_mask() & q.z_mask()) +
                2 * std::popcount(p.z_mask() & q.x_mask()) - std::popcount(x3 & z3);
  return {p.n_qubits(), x3, z3, e};
}

bool commutes(const PauliString& p, const PauliString& q) {
  check_same(p.n_qubits(), q.n_qubits(), "commutes");
  const int s = std::popcount(p.x_mask() & q.z_mask()) + std::popcount(p.z_mask() & q.x_mask());
  return (s & 1) == 0;
}

// ---------------------------------------------------------------------------

ObservableSum::ObservableSum(int n_qubits, std::vector<PauliTerm> terms)
    : n_(n_qubits), terms_(std::move(terms)) {
  normalize();
}

ObservableSum::ObservableSum(const PauliString& p, cplx coeff) : n_(p.n_qubits()) {
  terms_.push_back({coeff, p});
  normalize();
}

ObservableSum ObservableSum::identity(int n_qubits, cplx coeff) {
  return ObservableSum(PauliString::identity(n_qubits), coeff);
}

ObservableSum ObservableSum::from_labels(
    std::initializer_list<std::pair<cplx, std::string_view>> items) {
  if (items.size() == 0) throw InputError("from_labels needs at least one term");
  std::vector<PauliTerm> terms;
  int n = 0;
  for (const auto& [c, label] : items) {
    auto p = PauliString::from_label(label);
    if (n == 0) n = p.n_qubits();
    check_same(n, p.n_qubits(), "from_labels");
    terms.push_back({c, p});
  }
  return ObservableSum(n, std::move(terms));
}

void ObservableSum::normalize() {
  std::map<PauliKey, cplx> merged;
  for (const auto& t : terms_) {
    if (n_ == 0) n_ = t.string.n_qubits();
    check_same(n_, t.string.n_qubits(), "ObservableSum");
    merged[t.string.key()] += t.coeff * phase_factor(t.string.phase_exp());
  }
  terms_.clear();
  terms_.reserve(merged.size());
  for (const auto& [k, c] : merged) {
    if (std::abs(c) < kPruneTolerance) continue;
    terms_.push_back({c, PauliString(n_, k.x, k.z, 0)});
  }
}

std::uint64_t ObservableSum::support() const noexcept {
  std::uint64_t s = 0;
  for (const auto& t : terms_) s |= t.string.support();
  return s;
}

cplx ObservableSum::identity_coeff() const noexcept {
  if (!terms_.empty() && terms_.front().string.is_identity()) return terms_.front().coeff;
  return 0.0;
}

ObservableSum ObservableSum::without_identity() const {
  ObservableSum out(n_);
  out.terms_.reserve(terms_.size());
  for (const auto& t : terms_) {
    if (!t.string.is_identity()) out.terms_.push_back(t);
  }
  return out;
}

cplx ObservableSum::coeff_of(const PauliKey& key) const noexcept {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), key,
                             [](const PauliTerm& t, const PauliKey& k) { return t.string.key() < k; });
  if (it != terms_.end() && it->string.key() == key) return it->coeff;
  return 0.0;
}

bool ObservableSum::is_hermitian(double tol) const noexcept {
  return std::all_of(terms_.begin(), terms_.end(), [tol](const PauliTerm& t) {
    return std::abs(t.coeff.imag()) <= tol * std::max(1.0, std::abs(t.coeff));
  });
}

bool ObservableSum::is_antihermitian(double tol) const noexcept {
  return std::all_of(terms_.begin(), terms_.end(), [tol](const PauliTerm& t) {
    return std::abs(t.coeff.real()) <= tol * std::max(1.0, std::abs(t.coeff));
  });
}

bool ObservableSum::strings_commute() const noexcept {
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    for (std::size_t j = i + 1; j < terms_.size(); ++j) {
      if (!commutes(terms_[i].string, terms_[j].string)) return false;
    }
  }
  return true;
}

ObservableSum ObservableSum::permuted(std::span<const int> perm) const {
  std::vector<PauliTerm> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) out.push_back({t.coeff, t.string.permuted(perm)});
  return ObservableSum(n_, std::move(out));
}

ObservableSum ObservableSum::inverted() const {
  const auto perm = inversion_permutation(n_);
  return permuted(perm);
}

double ObservableSum::distance(const ObservableSum& other) const {
  const ObservableSum diff = *this - other;
  double d = 0.0;
  for (const auto& t : diff.terms()) d = std::max(d, std::abs(t.coeff));
  return d;
}

ObservableSum& ObservableSum::operator+=(const ObservableSum& rhs) {
  if (n_ == 0) n_ = rhs.n_;
  if (rhs.n_ != 0) check_same(n_, rhs.n_, "operator+");
  terms_.insert(terms_.end(), rhs.terms_.begin(), rhs.terms_.end());
  normalize();
  return *this;
}

ObservableSum& ObservableSum::operator-=(const ObservableSum& rhs) {
  return *this += rhs * cplx(-1.0);
}

ObservableSum& ObservableSum::operator*=(cplx s) {
  for (auto& t : terms_) t.coeff *= s;
  normalize();
  return *this;
}

ObservableSum operator*(const ObservableSum& a, const ObservableSum& b) {
  check_same(a.n_qubits(), b.n_qubits(), "operator*");
  std::vector<PauliTerm> out;
  out.reserve(a.size() * b.size());
  for (const auto& ta : a.terms()) {
    for (const auto& tb : b.terms()) {
      out.push_back({ta.coeff * tb.coeff, mul(ta.string, tb.string)});
    }
  }
  return ObservableSum(a.n_qubits(), std::move(out));
}

std::string ObservableSum::str() const {
  std::ostringstream os;
  os.precision(17);
  for (const auto& t : terms_) {
    char buf[64];
    if (std::abs(t.coeff.imag()) == 0.0) {
      std::snprintf(buf, sizeof buf, "%+.17g", t.coeff.real());
    } else {
      std::snprintf(buf, sizeof buf, "(%+.17g%+.17gi)", t.coeff.real(), t.coeff.imag());
    }
    os << buf << " * " << t.string.label() << '\n';
  }
  return os.str();
}

ObservableSum adjoint(const ObservableSum& a) {
  std::vector<PauliTerm> out;
  out.reserve(a.size());
  for (const auto& t : a.terms()) out.push_back({std::conj(t.coeff), t.string});
  return ObservableSum(a.n_qubits(), std::move(out));
}

ObservableSum square(const ObservableSum& a) { return a * a; }

ObservableSum commutator(const ObservableSum& a, const ObservableSum& b) {
  check_same(a.n_qubits(), b.n_qubits(), "commutator");
  // Only anticommuting string pairs survive, each with twice the product.
  std::vector<PauliTerm> out;
  for (const auto& ta : a.terms()) {
    for (const auto& tb : b.terms()) {
      if (commutes(ta.string, tb.string)) continue;
      out.push_back({2.0 * ta.coeff * tb.coeff, mul(ta.string, tb.string)});
    }
  }
  return ObservableSum(a.n_qubits(), std::move(out));
}

ObservableSum anticommutator(const ObservableSum& a, const ObservableSum& b) {
  check_same(a.n_qubits(), b.n_qubits(), "anticommutator");
  std::vector<PauliTerm> out;
  for (const auto& ta : a.terms()) {
    for (const auto& tb : b.terms()) {
      if (!commutes(ta.string, tb.string)) continue;
      out.push_back({2.0 * ta.coeff * tb.coeff, mul(ta.string, tb.string)});
    }
  }
  return ObservableSum(a.n_qubits(), std::move(out));
}

DenseMatrix to_dense(const PauliString& p) {
  const int n = p.n_qubits();
  if (n > kDenseQubitCap) {
    throw SizeCapError("dense export limited to " + std::to_string(kDenseQubitCap) + " qubits");
  }
  const std::uint64_t dim = std::uint64_t{1} << n;
  DenseMatrix m = DenseMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  const int base = p.phase_exp() + std::popcount(p.x_mask() & p.z_mask());
  for (std::uint64_t col = 0; col < dim; ++col) {
    const int e = base + 2 * std::popcount(p.z_mask() & col);
    m(static_cast<Eigen::Index>(col ^ p.x_mask()), static_cast<Eigen::Index>(col)) = phase_factor(e);
  }
  return m;
}

DenseMatrix to_dense(const ObservableSum& a) {
  const int n = a.n_qubits();
  if (n > kDenseQubitCap) {
    throw SizeCapError("dense export limited to " + std::to_string(kDenseQubitCap) + " qubits");
  }
  const auto dim = static_cast<Eigen::Index>(std::uint64_t{1} << n);
  DenseMatrix m = DenseMatrix::Zero(dim, dim);
  for (const auto& t : a.terms()) m += t.coeff * to_dense(t.string);
  return m;
}

std::vector<int> mask_qubits(std::uint64_t mask) {
  std::vector<int> out;
  while (mask) {
    out.push_back(std::countr_zero(mask));
    mask &= mask - 1;
  }
  return out;
}

std::vector<int> inversion_permutation(int n_qubits) {
  std::vector<int> perm(static_cast<std::size_t>(n_qubits));
  for (int q = 0; q < n_qubits; ++q) perm[static_cast<std::size_t>(q)] = n_qubits - 1 - q;
  return perm;
}

std::uint64_t permute_mask(std::uint64_t mask, std::span<const int> perm) {
  std::uint64_t out = 0;
  for (int q : mask_qubits(mask)) {
    out |= std::uint64_t{1} << perm[static_cast<std::size_t>(q)];
  }
  return out;
}

}  // namespace mtqite
