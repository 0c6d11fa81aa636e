#include "mtqite/kernels.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <cstddef>
#include <vector>

namespace mtqite::kernels {

namespace {

constexpr std::array<cplx, 4> kPhase = {cplx{1, 0}, cplx{0, 1}, cplx{-1, 0}, cplx{0, -1}};

// P|b> = omega(b) |b ^ x>, omega(b) = i^{phase + |x&z|} (-1)^{|z&b|}.
struct Action {
  std::uint64_t x;
  std::uint64_t z;
  cplx base;

  explicit Action(const PauliMasks& p)
      : x(p.x), z(p.z), base(kPhase[static_cast<std::size_t>((p.phase + std::popcount(p.x & p.z)) & 3)]) {}

  cplx omega(std::uint64_t b) const noexcept {
    return (std::popcount(z & b) & 1) ? -base : base;
  }
};

constexpr std::size_t kChunks = 64;

bool wide(std::size_t dim) { return dim >= (std::size_t{1} << kParallelMinQubits); }

}  // namespace

namespace serial {

void rotate(std::span<cplx> amps, const PauliMasks& p, double theta) {
  const Action a(p);
  const double c = std::cos(theta);
  const cplx ms(0.0, -std::sin(theta));
  const std::size_t dim = amps.size();
  if (a.x == 0) {
    for (std::size_t b = 0; b < dim; ++b) amps[b] *= c + ms * a.omega(b);
    return;
  }
  const std::uint64_t low = a.x & (~a.x + 1);
  for (std::size_t b0 = 0; b0 < dim; ++b0) {
    if (b0 & low) continue;
    const std::size_t b1 = b0 ^ a.x;
    const cplx v0 = amps[b0];
    const cplx v1 = amps[b1];
    amps[b0] = c * v0 + ms * a.omega(b1) * v1;
    amps[b1] = c * v1 + ms * a.omega(b0) * v0;
  }
}

cplx expectation(std::span<const cplx> amps, const PauliMasks& p) {
  const Action a(p);
  cplx acc = 0.0;
  for (std::size_t b = 0; b < amps.size(); ++b) {
    acc += std::conj(amps[b ^ a.x]) * a.omega(b) * amps[b];
  }
  return acc;
}

void accumulate_apply(std::span<const cplx> amps, const PauliMasks& p, cplx coeff,
                      std::span<cplx> out) {
  const Action a(p);
  for (std::size_t b = 0; b < amps.size(); ++b) {
    out[b ^ a.x] += coeff * a.omega(b) * amps[b];
  }
}

}  // namespace serial

namespace omp {

void rotate(std::span<cplx> amps, const PauliMasks& p, double theta) {
  const std::size_t dim = amps.size();
  if (!wide(dim)) {
    serial::rotate(amps, p, theta);
    return;
  }
  const Action a(p);
  const double c = std::cos(theta);
  const cplx ms(0.0, -std::sin(theta));
  const auto n = static_cast<std::int64_t>(dim);
  if (a.x == 0) {
#pragma omp parallel for schedule(static)
    for (std::int64_t b = 0; b < n; ++b) {
      amps[static_cast<std::size_t>(b)] *= c + ms * a.omega(static_cast<std::uint64_t>(b));
    }
    return;
  }
  // Enumerate the dim/2 pair leaders by inserting a zero at the lowest x bit.
  const std::uint64_t low = a.x & (~a.x + 1);
  const int shift = std::countr_zero(low);
  const std::int64_t half = n / 2;
#pragma omp parallel for schedule(static)
  for (std::int64_t k = 0; k < half; ++k) {
    const auto u = static_cast<std::uint64_t>(k);
    const std::uint64_t b0 = ((u >> shift) << (shift + 1)) | (u & (low - 1));
    const std::uint64_t b1 = b0 ^ a.x;
    const cplx v0 = amps[b0];
    const cplx v1 = amps[b1];
    amps[b0] = c * v0 + ms * a.omega(b1) * v1;
    amps[b1] = c * v1 + ms * a.omega(b0) * v0;
  }
}

cplx expectation(std::span<const cplx> amps, const PauliMasks& p) {
  const std::size_t dim = amps.size();
  if (!wide(dim)) return serial::expectation(amps, p);
  const Action a(p);
  std::array<cplx, kChunks> partial{};
  const std::size_t step = dim / kChunks;
#pragma omp parallel for schedule(static)
  for (std::int64_t ch = 0; ch < static_cast<std::int64_t>(kChunks); ++ch) {
    cplx acc = 0.0;
    const std::size_t lo = static_cast<std::size_t>(ch) * step;
    for (std::size_t b = lo; b < lo + step; ++b) {
      acc += std::conj(amps[b ^ a.x]) * a.omega(b) * amps[b];
    }
    partial[static_cast<std::size_t>(ch)] = acc;
  }
  cplx total = 0.0;
  for (const auto& v : partial) total += v;
  return total;
}

void accumulate_apply(std::span<const cplx> amps, const PauliMasks& p, cplx coeff,
                      std::span<cplx> out) {
  const std::size_t dim = amps.size();
  if (!wide(dim)) {
    serial::accumulate_apply(amps, p, coeff, out);
    return;
  }
  const Action a(p);
  // Index by destination so iterations write disjoint entries.
#pragma omp parallel for schedule(static)
  for (std::int64_t d = 0; d < static_cast<std::int64_t>(dim); ++d) {
    const std::uint64_t b = static_cast<std::uint64_t>(d) ^ a.x;
    out[static_cast<std::size_t>(d)] += coeff * a.omega(b) * amps[b];
  }
}

}  // namespace omp

}  // namespace mtqite::kernels
