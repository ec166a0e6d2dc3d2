#include <immintrin.h>

#include "sghb/kernels.hpp"

namespace sghb::kernels {

namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double dot(const double* x, const double* y, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void xpay(const double* x, double a, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(y + i), _mm256_loadu_pd(x + i)));
  }
  for (; i < n; ++i) y[i] = a * y[i] + x[i];
}

void hadamard(const double* s, const double* x, double* y, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) _mm256_storeu_pd(y + i, _mm256_mul_pd(_mm256_loadu_pd(s + i), _mm256_loadu_pd(x + i)));
  for (; i < n; ++i) y[i] = s[i] * x[i];
}

void csr_spmv(CsrView a, const double* x, double* y, std::size_t row_begin, std::size_t row_end) {
  for (std::size_t r = row_begin; r < row_end; ++r) {
    auto k = a.row_ptr[r];
    const auto end = a.row_ptr[r + 1];
    __m256d acc = _mm256_setzero_pd();
    for (; k + 4 <= end; k += 4) {
      const __m128i idx = _mm_loadu_si128(reinterpret_cast<const __m128i*>(a.col + k));
      const __m256d xv = _mm256_i32gather_pd(x, idx, 8);
      acc = _mm256_fmadd_pd(_mm256_loadu_pd(a.val + k), xv, acc);
    }
    double s = hsum(acc);
    for (; k < end; ++k) s += a.val[k] * x[a.col[k]];
    y[r] = s;
  }
}

void stencil(const double* src, const std::int32_t* left, const std::int32_t* right, double* dst, std::size_t n,
             double sign) {
  const __m256d h = _mm256_set1_pd(0.5 * sign);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m128i li = _mm_loadu_si128(reinterpret_cast<const __m128i*>(left + i));
    const __m128i ri = _mm_loadu_si128(reinterpret_cast<const __m128i*>(right + i));
    const __m256d sum = _mm256_add_pd(_mm256_i32gather_pd(src, li, 8), _mm256_i32gather_pd(src, ri, 8));
    _mm256_storeu_pd(dst + i, _mm256_fmadd_pd(h, sum, _mm256_loadu_pd(src + i)));
  }
  const double hs = 0.5 * sign;
  for (; i < n; ++i) dst[i] = src[i] + hs * (src[left[i]] + src[right[i]]);
}

void stencil_indexed(const std::int32_t* idx, std::size_t count, const double* src, const std::int32_t* left,
                     const std::int32_t* right, double* dst, double sign) {
  const __m256d h = _mm256_set1_pd(0.5 * sign);
  std::size_t t = 0;
  alignas(32) double out[4];
  for (; t + 4 <= count; t += 4) {
    const __m128i ii = _mm_loadu_si128(reinterpret_cast<const __m128i*>(idx + t));
    const __m128i li = _mm_i32gather_epi32(left, ii, 4);
    const __m128i ri = _mm_i32gather_epi32(right, ii, 4);
    const __m256d sum = _mm256_add_pd(_mm256_i32gather_pd(src, li, 8), _mm256_i32gather_pd(src, ri, 8));
    _mm256_store_pd(out, _mm256_fmadd_pd(h, sum, _mm256_i32gather_pd(src, ii, 8)));
    for (int l = 0; l < 4; ++l) dst[idx[t + static_cast<std::size_t>(l)]] = out[l];
  }
  const double hs = 0.5 * sign;
  for (; t < count; ++t) {
    const auto i = idx[t];
    dst[i] = src[i] + hs * (src[left[i]] + src[right[i]]);
  }
}

}  // namespace

const KernelTable& avx2_table() {
  static const KernelTable table{Isa::avx2, dot, axpy, xpay, hadamard, csr_spmv, stencil, stencil_indexed};
  return table;
}

}  // namespace sghb::kernels
