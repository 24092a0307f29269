#pragma once

#include <complex>
#include <cstddef>
#include <limits>
#include <new>
#include <vector>

#include <fftw3.h>

#include "modspec/grid.hpp"

namespace modspec {

using cplx = std::complex<double>;

// Allocator returning FFTW-aligned storage so new-array execution matches planning alignment.
template <class T>
struct FftwAllocator {
  using value_type = T;
  FftwAllocator() noexcept = default;
  template <class U>
  FftwAllocator(const FftwAllocator<U>&) noexcept {}
  T* allocate(std::size_t n) {
    if (n > std::numeric_limits<std::size_t>::max() / sizeof(T)) throw std::bad_alloc();
    void* p = fftw_malloc(n * sizeof(T));
    if (!p && n) throw std::bad_alloc();
    return static_cast<T*>(p);
  }
  void deallocate(T* p, std::size_t) noexcept { fftw_free(p); }
  template <class U>
  bool operator==(const FftwAllocator<U>&) const noexcept { return true; }
};

using CVector = std::vector<cplx, FftwAllocator<cplx>>;

namespace fft {

enum class Direction { Forward, Backward };

// Unnormalized n-D DFT over a row-major array of the given shape (dim <= 3).
// Forward uses exp(-i), backward exp(+i). in == out is allowed.
void execute(int dim, const std::array<int, kMaxDim>& shape, Direction dir, const cplx* in,
             cplx* out);

// Unitary transforms (scaled by 1/sqrt(total points)).
void forward_unitary(int dim, const std::array<int, kMaxDim>& shape, const cplx* in, cplx* out);
void inverse_unitary(int dim, const std::array<int, kMaxDim>& shape, const cplx* in, cplx* out);

// Number of cached plans (diagnostics).
std::size_t cached_plans();

}  // namespace fft
}  // namespace modspec
