#pragma once

#include <complex>
#include <cstdint>
#include <span>

namespace mtqite::kernels {

using cplx = std::complex<double>;

/// Registers below this size run the parallel kernels on one thread.
inline constexpr int kParallelMinQubits = 14;

/// A Pauli operator stripped to what the amplitude loops need. The phase
/// must be even (±1) for rotations; expectations accept any phase.
struct PauliMasks {
  std::uint64_t x = 0;
  std::uint64_t z = 0;
  int phase = 0;
};

// Reference implementations: straight loops over the amplitude array.
namespace serial {

/// amps <- (cos θ - i sin θ P) amps
void rotate(std::span<cplx> amps, const PauliMasks& p, double theta);
/// <ψ|P|ψ>
cplx expectation(std::span<const cplx> amps, const PauliMasks& p);
/// out <- out + coeff * P amps
void accumulate_apply(std::span<const cplx> amps, const PauliMasks& p, cplx coeff,
                      std::span<cplx> out);

}  // namespace serial

// OpenMP versions; results match the serial ones exactly for rotate and
// accumulate_apply, and to rounding for expectation (fixed chunking keeps
// them independent of the thread count).
namespace omp {

void rotate(std::span<cplx> amps, const PauliMasks& p, double theta);
cplx expectation(std::span<const cplx> amps, const PauliMasks& p);
void accumulate_apply(std::span<const cplx> amps, const PauliMasks& p, cplx coeff,
                      std::span<cplx> out);

}  // namespace omp

}  // namespace mtqite::kernels
