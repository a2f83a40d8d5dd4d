#include "nonrecip/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <cstring>

namespace nonrecip::kernels {

namespace {

void axpy_scalar(cplx alpha, const cplx* x, cplx* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void add_scaled_scalar(const cplx* x, cplx alpha, const cplx* y, cplx* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = x[i] + alpha * y[i];
}

void spmv_scalar(const CsrView& a, const cplx* x, cplx* y) {
  for (std::size_t r = 0; r < a.rows; ++r) {
    cplx acc{0.0, 0.0};
    for (int k = a.row_ptr[r]; k < a.row_ptr[r + 1]; ++k) acc += a.values[k] * x[a.col_idx[k]];
    y[r] = acc;
  }
}

cplx dot_scalar(const cplx* w, const cplx* x, std::size_t n) {
  cplx acc{0.0, 0.0};
  for (std::size_t i = 0; i < n; ++i) acc += w[i] * x[i];
  return acc;
}

double max_abs_scalar(const cplx* x, std::size_t n) {
  double m2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) m2 = std::max(m2, std::norm(x[i]));
  return std::sqrt(m2);
}

constexpr KernelTable kScalar{Isa::scalar, axpy_scalar, add_scaled_scalar, spmv_scalar,
                              dot_scalar, max_abs_scalar};

const KernelTable& select() {
  if (const char* env = std::getenv("NONRECIP_SIMD"); env && std::strcmp(env, "scalar") == 0)
    return kScalar;
  if (const KernelTable* t = avx2_table(); t && cpu_supports_avx2()) return *t;
  return kScalar;
}

}  // namespace

const KernelTable& scalar_table() { return kScalar; }

bool cpu_supports_avx2() {
#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable& active() {
  static const KernelTable& table = select();
  return table;
}

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
  }
  return "unknown";
}

#if !defined(NONRECIP_HAVE_AVX2)
const KernelTable* avx2_table() { return nullptr; }
#endif

}  // namespace nonrecip::kernels
