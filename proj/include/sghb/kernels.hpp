#pragma once

// Data-parallel inner loops behind the Lanczos, PCG and hierarchization code.
// Every kernel has a portable scalar reference version and, on x86-64, an
// AVX2/FMA version. The active table is chosen once at startup from CPUID;
// SGHB_ISA=scalar|avx2 in the environment or select_isa() overrides it.

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace sghb::kernels {

enum class Isa { scalar, avx2 };

std::string_view to_string(Isa isa);

/// Compressed sparse row view; columns sorted within each row.
struct CsrView {
  const std::int64_t* row_ptr = nullptr;
  const std::int32_t* col = nullptr;
  const double* val = nullptr;
};

struct KernelTable {
  Isa isa;
  double (*dot)(const double* x, const double* y, std::size_t n);
  /// y += a * x
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  /// y = a * y + x
  void (*xpay)(const double* x, double a, double* y, std::size_t n);
  /// y = s .* x (elementwise)
  void (*hadamard)(const double* s, const double* x, double* y, std::size_t n);
  /// y[r] = sum_k val[k] x[col[k]] for rows [row_begin, row_end)
  void (*csr_spmv)(CsrView a, const double* x, double* y, std::size_t row_begin, std::size_t row_end);
  /// dst[i] = src[i] + sign/2 (src[left[i]] + src[right[i]]), i in [0, n).
  /// src must hold a readable slot at every index in left/right.
  void (*stencil)(const double* src, const std::int32_t* left, const std::int32_t* right, double* dst,
                  std::size_t n, double sign);
  /// Same update restricted to i = idx[t], t in [0, count). dst may alias src
  /// as long as no listed index is a parent of another listed index.
  void (*stencil_indexed)(const std::int32_t* idx, std::size_t count, const double* src, const std::int32_t* left,
                          const std::int32_t* right, double* dst, double sign);
};

const KernelTable& scalar_table();
#if defined(SGHB_HAVE_AVX2)
const KernelTable& avx2_table();
#endif

bool isa_supported(Isa isa);
/// Table for a given ISA; throws ConfigError when unsupported on this CPU.
const KernelTable& table(Isa isa);

const KernelTable& active();
Isa active_isa();
void select_isa(Isa isa);

/// Upper bound on worker threads for row-parallel kernels (default 1).
void set_num_threads(int n);
int num_threads();

/// y = A x with rows split across num_threads() workers; each row is summed
/// by one worker in a fixed order, so the result does not depend on the
/// thread count.
void parallel_spmv(CsrView a, std::size_t rows, const double* x, double* y);

}  // namespace sghb::kernels
