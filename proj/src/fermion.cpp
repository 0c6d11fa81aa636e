#include "mtqite/fermion.hpp"

#include <algorithm>

#include "mtqite/error.hpp"

namespace mtqite {

FermionOp FermionOp::dagger() const {
  FermionOp out;
  out.coeff = std::conj(coeff);
  out.factors.assign(factors.rbegin(), factors.rend());
  for (auto& f : out.factors) f.dagger = !f.dagger;
  return out;
}

namespace {

ObservableSum ladder_image(int mode, bool dagger, int n_modes) {
  const std::uint64_t parity = (std::uint64_t{1} << mode) - 1;
  const std::uint64_t bit = std::uint64_t{1} << mode;
  const PauliString x(n_modes, bit, parity);
  const PauliString y(n_modes, bit, parity | bit);
  return ObservableSum(n_modes, {{0.5, x}, {dagger ? cplx(0.0, -0.5) : cplx(0.0, 0.5), y}});
}

}  // namespace

ObservableSum jordan_wigner(const FermionOp& op, int n_modes) {
  ObservableSum out = ObservableSum::identity(n_modes, op.coeff);
  for (const auto& f : op.factors) {
    if (f.mode < 0 || f.mode >= n_modes) {
      throw RangeError("fermion mode " + std::to_string(f.mode) + " outside [0, " +
                       std::to_string(n_modes) + ")");
    }
    out = out * ladder_image(f.mode, f.dagger, n_modes);
    if (out.empty()) break;
  }
  return out;
}

ObservableSum jordan_wigner(const std::vector<FermionOp>& ops, int n_modes) {
  std::vector<PauliTerm> terms;
  for (const auto& op : ops) {
    const ObservableSum img = jordan_wigner(op, n_modes);
    terms.insert(terms.end(), img.terms().begin(), img.terms().end());
  }
  return ObservableSum(n_modes, std::move(terms));
}

ObservableSum number_operator(int n_modes) {
  std::vector<PauliTerm> terms;
  for (int q = 0; q < n_modes; ++q) {
    terms.push_back({0.5, PauliString::identity(n_modes)});
    terms.push_back({-0.5, PauliString::single(n_modes, q, 'Z')});
  }
  return ObservableSum(n_modes, std::move(terms));
}

}  // namespace mtqite
