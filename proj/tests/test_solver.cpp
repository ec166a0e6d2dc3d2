#include <doctest.h>

#include <map>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "sghb/prewavelet.hpp"
#include "sghb/solver.hpp"
#include "sghb/transform.hpp"

using namespace sghb;
using doctest::Approx;

TEST_CASE("one by one system") {
  const auto sys = assemble_system(make_space(make_full_grid({1, 1})));
  const auto r = pcg(sys, std::vector<double>{1.0});
  CHECK(r.x[0] == Approx(3.0 / 8.0).epsilon(1e-14));
  CHECK(r.stats.iterations == 1);
  CHECK(r.stats.converged);
}

TEST_CASE("zero right-hand side") {
  const auto sys = assemble_system(make_space(make_standard_sparse(3, 2)));
  const auto r = pcg(sys, std::vector<double>(sys.dim(), 0.0));
  CHECK(r.stats.iterations == 0);
  CHECK(r.x == std::vector<double>(sys.dim(), 0.0));
  CHECK(r.stats.residual_history.empty());
}

TEST_CASE("errors") {
  const auto sys = assemble_system(make_space(make_standard_sparse(6, 2)));
  const auto b = model_rhs(*sys.space, ModelRhs::constant_one);
  try {
    pcg(sys, b, 1e-12, 3);
    FAIL("expected a solve error");
  } catch (const SolveError& e) {
    CHECK(e.stats().iterations == 3);
    CHECK(e.stats().residual_history.size() == 4);
    CHECK_FALSE(e.stats().converged);
  }
  CHECK_THROWS_AS(pcg(sys, std::vector<double>(3, 1.0)), ConfigError);
  CHECK_THROWS_AS(parse_model_rhs("cubic"), ConfigError);
  CHECK(parse_model_rhs("product_sine") == ModelRhs::product_sine);
}

TEST_CASE("model right-hand sides") {
  auto sp = make_space(make_full_grid({2, 1}));
  const auto one = model_rhs(*sp, ModelRhs::constant_one);
  CHECK(one == std::vector<double>{0.25, 0.125, 0.125});

  // Against a composite Gauss oracle on a fine grid.
  auto s = make_space(make_standard_sparse(4, 2));
  const auto sine = model_rhs(*s, ModelRhs::product_sine);
  for (std::size_t a = 0; a < s->dim(); ++a) {
    const auto f = s->function(a);
    double ref = 1.0;
    for (int j = 0; j < 2; ++j) {
      const oracle::Hat h = oracle::factor(f, j);
      // Simpson on 4096 subcells per support: error far below 1e-12.
      const int n = 4096;
      const double lo = h.lo(), step = (h.hi() - h.lo()) / n;
      double acc = 0.0;
      for (int i = 0; i <= n; ++i) {
        const double t = lo + i * step;
        const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        acc += w * std::sin(std::numbers::pi * t) * oracle::hat(h.l, h.i, t);
      }
      ref *= acc * step / 3.0;
    }
    CHECK(sine[a] == Approx(ref).epsilon(1e-11));
  }
}

TEST_CASE("agreement with a dense direct solve and monotone energy error") {
  for (const auto& set : {make_standard_sparse(6, 2), make_isotropic_full_grid(4, 2), make_standard_sparse(4, 3),
                          make_energy_optimized(8, 2, Rational(1, 2))}) {
    const auto sys = assemble_system(make_space(set));
    REQUIRE(sys.dim() <= 2000);
    const Eigen::MatrixXd g = to_dense(sys.stiffness);
    for (const auto f : {ModelRhs::constant_one, ModelRhs::product_sine}) {
      const auto b = model_rhs(*sys.space, f);
      const Eigen::Map<const Eigen::VectorXd> bb(b.data(), static_cast<Eigen::Index>(b.size()));
      const Eigen::VectorXd ref = g.llt().solve(bb);
      const auto r = pcg(sys, b, 1e-10);
      const Eigen::Map<const Eigen::VectorXd> x(r.x.data(), ref.size());
      const double err = std::sqrt((x - ref).dot(g * (x - ref)));
      CHECK(err <= 1e-6 * std::sqrt(ref.dot(g * ref)));
      for (std::size_t i = 0; i < r.stats.residual_history.size(); ++i) CHECK(r.stats.residual_history[i] > 0.0);
      CHECK(r.stats.final_relative_residual <= 1e-10);
    }

    // Energy error of the iterates never grows. Stopping at the tolerance
    // reached in iteration `it` of a full run yields that PCG iterate.
    const auto b = model_rhs(*sys.space, ModelRhs::product_sine);
    const Eigen::Map<const Eigen::VectorXd> bb(b.data(), static_cast<Eigen::Index>(b.size()));
    const Eigen::VectorXd ref = g.llt().solve(bb);
    const auto full = pcg(sys, b, 1e-12);
    std::map<int, double> errors;
    for (std::size_t it = 1; it < full.stats.residual_history.size(); ++it) {
      const auto r = pcg(sys, b, full.stats.residual_history[it]);
      const Eigen::Map<const Eigen::VectorXd> x(r.x.data(), ref.size());
      errors[r.stats.iterations] = std::sqrt((x - ref).dot(g * (x - ref)));
    }
    CHECK(errors.size() >= 5);
    double prev = std::sqrt(ref.dot(g * ref));
    for (const auto& [it, e] : errors) {
      CHECK(e <= prev * (1 + 1e-10) + 1e-14);
      prev = e;
    }
  }
}

TEST_CASE("discrete centre values approach the exact solution") {
  // -Laplace u = sin(pi x) sin(pi y): u = sin(pi x) sin(pi y) / (2 pi^2).
  const double exact = 1.0 / (2.0 * std::numbers::pi * std::numbers::pi);
  double prev = 1e300;
  const std::vector<double> centre{0.5, 0.5};
  // pointwise error wobbles on the coarsest levels, monotone from k = 4
  for (int k = 4; k <= 8; ++k) {
    const auto sys = assemble_system(make_space(make_standard_sparse(k, 2)));
    const auto r = pcg(sys, model_rhs(*sys.space, ModelRhs::product_sine), 1e-12);
    const double err = std::fabs(evaluate_function(HBVector(sys.space, r.x), centre) - exact);
    CHECK(err < prev);
    prev = err;
  }
  CHECK(prev < 3e-6);
}
