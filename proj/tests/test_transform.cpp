#include <doctest.h>

#include <numeric>
#include <random>

#include "oracles.hpp"
#include "sghb/assembly.hpp"
#include "sghb/extremal.hpp"
#include "sghb/transform.hpp"

using namespace sghb;
using doctest::Approx;

namespace {

std::vector<double> random_vector(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a[i] - b[i]));
  return m;
}

std::vector<SpacePtr> test_spaces() {
  return {make_space(make_standard_sparse(5, 2)),      make_space(make_standard_sparse(4, 3)),
          make_space(make_isotropic_full_grid(3, 2)),  make_space(make_energy_optimized(6, 2, Rational(1, 2))),
          make_space(make_energy_optimized(3, 3, Rational(-1))), make_space(gap_example(2, 3).closure),
          make_space(make_standard_sparse(3, 4)),      make_space(make_full_grid({4, 1}))};
}

}  // namespace

TEST_CASE("vector types validate their length") {
  auto sp = make_space(make_standard_sparse(2, 2));
  CHECK(HBVector(sp).size() == 5);
  CHECK_THROWS(HBVector(sp, std::vector<double>(4)));
  CHECK_THROWS(NodalVector(sp, std::vector<double>(6)));
}

TEST_CASE("hierarchize matches a dense solve of the interpolation conditions") {
  for (const auto& sp : test_spaces()) {
    if (sp->dim() > 400) continue;
    const auto e = oracle::evaluation_matrix(*sp);
    const auto v = random_vector(sp->dim(), 3);
    const Eigen::Map<const Eigen::VectorXd> vv(v.data(), static_cast<Eigen::Index>(v.size()));
    const Eigen::VectorXd ref = e.partialPivLu().solve(vv);
    const auto c = hierarchize(NodalVector(sp, v));
    for (std::size_t i = 0; i < c.size(); ++i) CHECK(c.values[i] == Approx(ref(static_cast<Eigen::Index>(i))).epsilon(1e-11).scale(1.0));
    // Dehierarchization is pointwise evaluation at the grid points.
    const Eigen::Map<const Eigen::VectorXd> cc(c.values.data(), static_cast<Eigen::Index>(c.size()));
    const Eigen::VectorXd back = e * cc;
    const auto nod = dehierarchize(c);
    for (std::size_t i = 0; i < nod.size(); ++i) CHECK(nod.values[i] == Approx(back(static_cast<Eigen::Index>(i))).scale(1.0).epsilon(1e-12));
  }
}

TEST_CASE("round trips and sweep order") {
  for (const auto& sp : test_spaces()) {
    for (std::uint64_t s = 0; s < 5; ++s) {
      const auto v = random_vector(sp->dim(), s);
      const auto c = hierarchize(NodalVector(sp, v));
      CHECK(max_abs_diff(dehierarchize(c).values, v) <= 1e-12);
      const auto back = hierarchize(dehierarchize(HBVector(sp, v)));
      CHECK(max_abs_diff(back.values, v) <= 1e-12);
      std::vector<int> order(static_cast<std::size_t>(sp->d()));
      std::iota(order.rbegin(), order.rend(), 0);
      CHECK(max_abs_diff(hierarchize(NodalVector(sp, v), order).values, c.values) <= 1e-14);
    }
  }
}

TEST_CASE("delta property and psi_(2,1)") {
  auto sp = make_space(make_standard_sparse(3, 2));
  for (std::size_t a = 0; a < sp->dim(); ++a) {
    std::vector<double> unit(sp->dim(), 0.0);
    unit[a] = 1.0;
    // Nodal samples of a single phi_alpha hierarchize to the unit vector.
    const auto nod = sample(sp, [&](std::span<const double> x) { return evaluate(sp->function(a), x); });
    CHECK(max_abs_diff(hierarchize(nod).values, unit) <= 1e-15);
    CHECK(max_abs_diff(dehierarchize(HBVector(sp, unit)).values, nod.values) <= 1e-15);
    CHECK(evaluate_function(HBVector(sp, unit), oracle::node(sp->function(a))) == 1.0);
  }

  auto full = make_space(make_full_grid({2, 1}));
  const auto psi = [](std::span<const double> x) { return hat(4.0 * x[0] - 2.0) * hat(2.0 * x[1] - 1.0); };
  const auto c = hierarchize(sample(full, psi));
  CHECK(c.values == std::vector<double>{1.0, -0.5, -0.5});
  const auto nod = dehierarchize(c);
  CHECK(nod.values == sample(full, psi).values);
  const std::vector<double> center{0.5, 0.5};
  CHECK(evaluate_function(c, center) == 1.0);
  CHECK(dehierarchize(HBVector(full)).values == std::vector<double>(3, 0.0));
  CHECK(evaluate_function(HBVector(full), center) == 0.0);
}

TEST_CASE("evaluate_function agrees with the nodal values and direct summation") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const auto& sp : test_spaces()) {
    const auto c = HBVector(sp, random_vector(sp->dim(), 5));
    const auto nod = dehierarchize(c);
    for (std::size_t a = 0; a < sp->dim(); ++a) {
      CHECK(evaluate_function(c, oracle::node(sp->function(a))) == Approx(nod.values[a]).scale(1.0).epsilon(1e-12));
    }
    for (int t = 0; t < 20; ++t) {
      std::vector<double> x(static_cast<std::size_t>(sp->d()));
      for (auto& v : x) v = u(rng);
      double ref = 0.0;
      for (std::size_t a = 0; a < sp->dim(); ++a) ref += c.values[a] * oracle::eval(sp->function(a), x);
      CHECK(evaluate_function(c, x) == Approx(ref).scale(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("interpolation") {
  auto sp = make_space(make_full_grid({3, 2}));
  const auto c = HBVector(sp, random_vector(sp->dim(), 1));
  CHECK(max_abs_diff(interpolate(c, {3, 2}).values, c.values) <= 1e-14);

  auto s = make_space(make_standard_sparse(4, 2));
  const auto v = HBVector(s, random_vector(s->dim(), 2));
  const auto center = interpolate(v, {1, 1});
  REQUIRE(center.size() == 1);
  const std::vector<double> mid{0.5, 0.5};
  CHECK(center.values[0] == Approx(evaluate_function(v, mid)).epsilon(1e-14));

  // Restriction to a lower monotone set equals interpolation onto it.
  const auto low = interpolate(v, {2, 2});
  for (std::size_t a = 0; a < low.size(); ++a) {
    const auto f = low.space->function(a);
    const auto idx = s->index_of(f.block, f.offsets);
    REQUIRE(idx >= 0);
    CHECK(low.values[a] == Approx(v.values[static_cast<std::size_t>(idx)]).scale(1.0).epsilon(1e-12));
  }

  // Stability of nodal sampling on full grids: 2^-|b|_1 sum |v(P)|^2 vs ||I v||^2.
  double lo = 1e300, hi = 0.0;
  for (const auto& target : {MultiIndex{2, 2}, MultiIndex{3, 2}, MultiIndex{4, 3}}) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const auto w = HBVector(s, random_vector(s->dim(), seed + 20));
      const auto iw = interpolate(w, target);
      const auto sys = assemble_system(iw.space);
      const double l2 = sys.mass.quadratic_form(iw.values);
      double sum = 0.0;
      for (double p : dehierarchize(iw).values) sum += p * p;
      const double r = std::ldexp(sum, -target.l1()) / l2;
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
  }
  // Nodal-basis Riesz constants of piecewise d-linears: (1/3)^d .. 1 scaled.
  CHECK(lo >= 1.0);
  CHECK(hi <= 9.0);
}
