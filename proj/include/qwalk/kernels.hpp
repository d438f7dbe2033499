#pragma once

// Inner loops of the simulators. Every kernel has a serial reference
// (suffix _serial) kept for testing and benchmarking, and an OpenMP version
// used by the library. Both produce bit-identical results: output elements are
// written independently and every reduction is done serially in a fixed order.

#include <complex>
#include <cstddef>
#include <span>

namespace qwalk::kernels {

using cplx = std::complex<double>;

struct EdgeLoss {
  double left = 0.0;
  double right = 0.0;
};

// One application of the banded 1D operator to an interleaved (R, L) state.
// Returns the squared amplitude that steps past site 1 (left) and site n (right).
EdgeLoss walk_step_serial(std::span<const cplx> in, std::span<cplx> out, cplx a, cplx b);
EdgeLoss walk_step(std::span<const cplx> in, std::span<cplx> out, cplx a, cplx b);

// One Grover-coin + moving-shift step on an nx-by-ny box with layout
// ((i * ny + j) * 4 + d), d in {E, W, N, S}. When `absorbing` is set the
// boundary ring is zeroed before and after the step and the removed squared
// norm is returned; otherwise amplitude leaving the box is dropped silently
// and the return value is 0.
double grover_step_serial(std::span<const cplx> in, std::span<cplx> out, int nx, int ny,
                          bool absorbing);
double grover_step(std::span<const cplx> in, std::span<cplx> out, int nx, int ny,
                   bool absorbing);

// c = a * b for dense row-major dim-by-dim complex matrices. `c` must not alias.
void matmul_serial(std::span<const cplx> a, std::span<const cplx> b, std::span<cplx> c,
                   std::size_t dim);
void matmul(std::span<const cplx> a, std::span<const cplx> b, std::span<cplx> c,
            std::size_t dim);

// Thread cap for the OpenMP kernels; 0 restores the runtime default.
void set_thread_limit(int threads);
int thread_limit();

}  // namespace qwalk::kernels
