#include "sghb/kernels.hpp"

namespace sghb::kernels {

namespace {

double dot(const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void xpay(const double* x, double a, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = a * y[i] + x[i];
}

void hadamard(const double* s, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = s[i] * x[i];
}

void csr_spmv(CsrView a, const double* x, double* y, std::size_t row_begin, std::size_t row_end) {
  for (std::size_t r = row_begin; r < row_end; ++r) {
    double s = 0.0;
    for (auto k = a.row_ptr[r]; k < a.row_ptr[r + 1]; ++k) s += a.val[k] * x[a.col[k]];
    y[r] = s;
  }
}

void stencil(const double* src, const std::int32_t* left, const std::int32_t* right, double* dst, std::size_t n,
             double sign) {
  const double h = 0.5 * sign;
  for (std::size_t i = 0; i < n; ++i) dst[i] = src[i] + h * (src[left[i]] + src[right[i]]);
}

void stencil_indexed(const std::int32_t* idx, std::size_t count, const double* src, const std::int32_t* left,
                     const std::int32_t* right, double* dst, double sign) {
  const double h = 0.5 * sign;
  for (std::size_t t = 0; t < count; ++t) {
    const auto i = idx[t];
    dst[i] = src[i] + h * (src[left[i]] + src[right[i]]);
  }
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table{Isa::scalar, dot, axpy, xpay, hadamard, csr_spmv, stencil, stencil_indexed};
  return table;
}

}  // namespace sghb::kernels
