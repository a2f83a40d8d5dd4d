#pragma once
// Data-parallel inner loops used by the Liouvillian apply and the RK
// integrators. Each kernel has a scalar reference implementation and, on
// x86-64, an AVX2+FMA variant. The active variant is chosen once at startup
// from CPUID; NONRECIP_SIMD=scalar forces the reference path.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace nonrecip::kernels {

using cplx = std::complex<double>;

/// Compressed-sparse-row view over externally owned storage.
struct CsrView {
  std::size_t rows = 0;
  std::span<const int> row_ptr;  // rows + 1 entries
  std::span<const int> col_idx;
  std::span<const cplx> values;
};

enum class Isa { scalar, avx2 };

/// Table of kernel entry points for one instruction set.
struct KernelTable {
  Isa isa;
  // y += alpha * x
  void (*axpy)(cplx alpha, const cplx* x, cplx* y, std::size_t n);
  // out = x + alpha * y
  void (*add_scaled)(const cplx* x, cplx alpha, const cplx* y, cplx* out, std::size_t n);
  // y = A x
  void (*spmv)(const CsrView& a, const cplx* x, cplx* y);
  // sum_i w_i x_i (no conjugation)
  cplx (*dot)(const cplx* w, const cplx* x, std::size_t n);
  // max_i |x_i| with |.| the complex modulus
  double (*max_abs)(const cplx* x, std::size_t n);
};

const KernelTable& scalar_table();
/// Null when the AVX2 variant was not compiled in.
const KernelTable* avx2_table();

bool cpu_supports_avx2();

/// Table selected for this process (cached after first call).
const KernelTable& active();

std::string_view isa_name(Isa isa);

// Convenience wrappers dispatching through active().
inline void axpy(cplx alpha, std::span<const cplx> x, std::span<cplx> y) {
  active().axpy(alpha, x.data(), y.data(), y.size());
}
inline void add_scaled(std::span<const cplx> x, cplx alpha, std::span<const cplx> y,
                       std::span<cplx> out) {
  active().add_scaled(x.data(), alpha, y.data(), out.data(), out.size());
}
inline void spmv(const CsrView& a, std::span<const cplx> x, std::span<cplx> y) {
  active().spmv(a, x.data(), y.data());
}
inline cplx dot(std::span<const cplx> w, std::span<const cplx> x) {
  return active().dot(w.data(), x.data(), x.size());
}
inline double max_abs(std::span<const cplx> x) { return active().max_abs(x.data(), x.size()); }

}  // namespace nonrecip::kernels
