#include <doctest.h>

#include <random>

#include "sghb/assembly.hpp"
#include "sghb/errors.hpp"
#include "sghb/kernels.hpp"
#include "sghb/spectral.hpp"
#include "sghb/transform.hpp"

using namespace sghb;
using namespace sghb::kernels;

namespace {

std::vector<double> random_vector(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

double rel(double a, double b) { return std::fabs(a - b) / std::max(1e-300, std::fabs(b)); }

}  // namespace

TEST_CASE("scalar table is always available") {
  CHECK(isa_supported(Isa::scalar));
  CHECK(table(Isa::scalar).isa == Isa::scalar);
  CHECK(to_string(Isa::scalar) == "scalar");
}

TEST_CASE("vector kernels agree across instruction sets") {
  if (!isa_supported(Isa::avx2)) {
    MESSAGE("AVX2 not available; skipping equivalence");
    return;
  }
  const auto& s = table(Isa::scalar);
  const auto& v = table(Isa::avx2);
  for (std::size_t n : {0u, 1u, 3u, 4u, 7u, 8u, 15u, 16u, 17u, 33u, 1000u, 4099u}) {
    CAPTURE(n);
    const auto x = random_vector(n, n + 1), y = random_vector(n, n + 2);
    CHECK(rel(v.dot(x.data(), y.data(), n), s.dot(x.data(), y.data(), n)) <= 1e-12 * std::sqrt(static_cast<double>(n) + 1));

    auto ya = y, yb = y;
    s.axpy(0.37, x.data(), ya.data(), n);
    v.axpy(0.37, x.data(), yb.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::fabs(ya[i] - yb[i]) <= 1e-15);

    ya = y;
    yb = y;
    s.xpay(x.data(), -1.25, ya.data(), n);
    v.xpay(x.data(), -1.25, yb.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::fabs(ya[i] - yb[i]) <= 1e-15);

    std::vector<double> ha(n), hb(n);
    s.hadamard(x.data(), y.data(), ha.data(), n);
    v.hadamard(x.data(), y.data(), hb.data(), n);
    CHECK(ha == hb);
  }
}

TEST_CASE("sparse and stencil kernels agree across instruction sets") {
  if (!isa_supported(Isa::avx2)) return;
  const auto& s = table(Isa::scalar);
  const auto& v = table(Isa::avx2);
  for (const auto& set : {make_standard_sparse(7, 2), make_standard_sparse(4, 3), make_isotropic_full_grid(4, 2)}) {
    auto sp = make_space(set);
    const auto g = assemble_stiffness(*sp);
    const auto x = random_vector(sp->dim(), 9);
    std::vector<double> ya(sp->dim()), yb(sp->dim());
    s.csr_spmv(g.view(), x.data(), ya.data(), 0, sp->dim());
    v.csr_spmv(g.view(), x.data(), yb.data(), 0, sp->dim());
    for (std::size_t i = 0; i < ya.size(); ++i) CHECK(std::fabs(ya[i] - yb[i]) <= 1e-12 * (1 + std::fabs(ya[i])));

    for (int j = 0; j < sp->d(); ++j) {
      const auto& par = sp->parents(j);
      auto src = x;
      src.push_back(0.0);  // sentinel slot
      std::vector<double> da(sp->dim()), db(sp->dim());
      s.stencil(src.data(), par.left.data(), par.right.data(), da.data(), sp->dim(), -1.0);
      v.stencil(src.data(), par.left.data(), par.right.data(), db.data(), sp->dim(), -1.0);
      CHECK(da == db);
      auto ia = src, ib = src;
      for (std::size_t grp = 0; grp + 1 < par.group_start.size(); ++grp) {
        const auto* idx = par.order.data() + par.group_start[grp];
        const auto cnt = par.group_start[grp + 1] - par.group_start[grp];
        s.stencil_indexed(idx, cnt, ia.data(), par.left.data(), par.right.data(), ia.data(), 1.0);
        v.stencil_indexed(idx, cnt, ib.data(), par.left.data(), par.right.data(), ib.data(), 1.0);
      }
      CHECK(ia == ib);
    }
  }
}

TEST_CASE("library results do not depend on the selected ISA") {
  if (!isa_supported(Isa::avx2)) return;
  const auto sys = assemble_system(make_space(make_standard_sparse(8, 2)));
  const auto nod = NodalVector(sys.space, random_vector(sys.dim(), 4));
  select_isa(Isa::scalar);
  const auto ks = lanczos_extremal_eigs(sys).kappa;
  const auto cs = hierarchize(nod).values;
  select_isa(Isa::avx2);
  CHECK(active_isa() == Isa::avx2);
  const auto kv = lanczos_extremal_eigs(sys).kappa;
  const auto cv = hierarchize(nod).values;
  CHECK(rel(kv, ks) <= 1e-9);
  for (std::size_t i = 0; i < cs.size(); ++i) CHECK(std::fabs(cs[i] - cv[i]) <= 1e-14);
}

TEST_CASE("parallel spmv is independent of the thread count") {
  auto sp = make_space(make_standard_sparse(8, 2));
  const auto g = assemble_stiffness(*sp);
  const auto x = random_vector(sp->dim(), 3);
  std::vector<double> y1(sp->dim()), y4(sp->dim());
  set_num_threads(1);
  parallel_spmv(g.view(), sp->dim(), x.data(), y1.data());
  set_num_threads(4);
  CHECK(num_threads() == 4);
  parallel_spmv(g.view(), sp->dim(), x.data(), y4.data());
  set_num_threads(1);
  CHECK(y1 == y4);
}
