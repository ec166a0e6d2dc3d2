#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

#include "sghb/errors.hpp"
#include "sghb/kernels.hpp"

namespace sghb::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(SGHB_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable* initial_table() {
  if (const char* env = std::getenv("SGHB_ISA")) {
    const std::string want(env);
    if (want == "scalar") return &scalar_table();
    if (want == "avx2" && isa_supported(Isa::avx2)) return &table(Isa::avx2);
  }
  return isa_supported(Isa::avx2) ? &table(Isa::avx2) : &scalar_table();
}

std::atomic<const KernelTable*>& current() {
  static std::atomic<const KernelTable*> ptr{initial_table()};
  return ptr;
}

std::atomic<int> g_threads{1};

}  // namespace

std::string_view to_string(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

bool isa_supported(Isa isa) {
  if (isa == Isa::scalar) return true;
  static const bool avx2 = cpu_has_avx2();
  return avx2;
}

const KernelTable& table(Isa isa) {
  if (!isa_supported(isa)) throw ConfigError("instruction set " + std::string(to_string(isa)) + " not available");
#if defined(SGHB_HAVE_AVX2)
  if (isa == Isa::avx2) return avx2_table();
#endif
  return scalar_table();
}

const KernelTable& active() { return *current().load(std::memory_order_acquire); }
Isa active_isa() { return active().isa; }
void select_isa(Isa isa) { current().store(&table(isa), std::memory_order_release); }

void set_num_threads(int n) { g_threads.store(std::max(1, n)); }
int num_threads() { return g_threads.load(); }

void parallel_spmv(CsrView a, std::size_t rows, const double* x, double* y) {
  const auto& k = active();
  const auto workers = static_cast<std::size_t>(std::min<std::size_t>(static_cast<std::size_t>(num_threads()),
                                                                       std::max<std::size_t>(rows / 256, 1)));
  if (workers <= 1) {
    k.csr_spmv(a, x, y, 0, rows);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  const std::size_t chunk = (rows + workers - 1) / workers;
  for (std::size_t w = 1; w < workers; ++w) {
    const std::size_t b = w * chunk;
    const std::size_t e = std::min(rows, b + chunk);
    if (b < e) pool.emplace_back([&k, a, x, y, b, e] { k.csr_spmv(a, x, y, b, e); });
  }
  k.csr_spmv(a, x, y, 0, std::min(rows, chunk));
  for (auto& t : pool) t.join();
}

}  // namespace sghb::kernels
