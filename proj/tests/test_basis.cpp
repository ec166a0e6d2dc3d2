#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "sghb/basis.hpp"
#include "sghb/errors.hpp"

using namespace sghb;
using doctest::Approx;

TEST_CASE("block enumeration") {
  CHECK(enumerate_block({1, 1}).size() == 1);
  const auto b21 = enumerate_block({2, 1});
  REQUIRE(b21.size() == 2);
  CHECK(b21[0].offsets == std::vector<std::int64_t>{0, 0});
  CHECK(b21[1].offsets == std::vector<std::int64_t>{1, 0});
  CHECK(enumerate_block({3, 2}).size() == 8);
  CHECK(block_size({4, 3, 2}) == 64);
  const auto b = enumerate_block({2, 3});
  CHECK(std::is_sorted(b.begin(), b.end(), [](const BasisFunction& f, const BasisFunction& g) { return f.offsets < g.offsets; }));
}

TEST_CASE("point evaluation") {
  const std::vector<double> half{0.5};
  CHECK(evaluate(BasisFunction{{1}, {0}}, half) == 1.0);
  const std::vector<double> q1{0.25}, q3{0.75};
  CHECK(evaluate(BasisFunction{{2}, {0}}, q1) == 1.0);
  CHECK(evaluate(BasisFunction{{2}, {0}}, q3) == 0.0);
  const std::vector<double> x{0.25, 0.25};
  CHECK(evaluate(BasisFunction{{1, 1}, {0, 0}}, x) == 0.25);
  CHECK(evaluate(Hat1D{3, 2}, 0.625) == 1.0);
  CHECK(evaluate(Hat1D{3, 2}, 0.5) == 0.0);
  CHECK(evaluate(Hat1D{3, 2}, 0.5625) == 0.5);

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const auto& beta : {MultiIndex{3, 2}, MultiIndex{1, 4, 2}, MultiIndex{5}}) {
    const auto fs = enumerate_block(beta);
    for (int t = 0; t < 200; ++t) {
      std::vector<double> p(static_cast<std::size_t>(beta.dim()));
      for (auto& c : p) c = u(rng);
      int nonzero = 0;
      for (const auto& f : fs) {
        const double v = evaluate(f, p);
        CHECK(v == Approx(oracle::eval(f, p)).epsilon(1e-15));
        nonzero += v != 0.0;
      }
      // Disjoint supports within a block.
      CHECK(nonzero <= 1);
    }
  }
}

TEST_CASE("nodal points") {
  const auto p1 = nodal_points({1});
  REQUIRE(p1.size() == 1);
  CHECK(p1[0].values() == std::vector<double>{0.5});
  const auto p2 = nodal_points({2});
  REQUIRE(p2.size() == 3);
  CHECK(p2[0].values()[0] == 0.25);
  CHECK(p2[1].values()[0] == 0.5);
  CHECK(p2[2].values()[0] == 0.75);
  CHECK(nodal_points({2, 1}).size() == 3);
  CHECK(nodal_points({3, 2, 2}).size() == 7 * 3 * 3);
  // Monotone family: Sigma_(2,1) inside Sigma_(3,2).
  const auto small = nodal_points({2, 1});
  const auto large = nodal_points({3, 2});
  for (const auto& p : small) CHECK(std::find(large.begin(), large.end(), p) != large.end());
  CHECK(DyadicCoord{2, 2} == DyadicCoord{1, 1});
  CHECK(DyadicCoord{2, 2}.reduced().numerator == 1);
}

TEST_CASE("Kronecker delta property on lower grids") {
  for (const auto& beta : {MultiIndex{3, 2}, MultiIndex{2, 2, 2}}) {
    for (const auto& f : enumerate_block(beta)) {
      const auto own = f.node();
      CHECK(evaluate(f, own.values()) == 1.0);
      for (const auto& lower : make_full_grid(beta)) {
        for (const auto& p : nodal_points(lower)) {
          if (p == own) continue;
          CHECK(evaluate(f, p.values()) == 0.0);
        }
      }
    }
  }
}

TEST_CASE("closed-form norms") {
  CHECK(l2_norm_sq(MultiIndex{1}) == Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(h1_norm_sq(MultiIndex{1}) == Approx(4.0).epsilon(1e-15));
  CHECK(l2_norm_sq(MultiIndex{1, 1}) == Approx(1.0 / 9.0).epsilon(1e-15));
  CHECK(h1_norm_sq(MultiIndex{1, 1}) == Approx(8.0 / 3.0).epsilon(1e-15));
  CHECK(l2_norm_sq(MultiIndex{2, 1}) == Approx(1.0 / 18.0).epsilon(1e-15));

  for (int d = 1; d <= 3; ++d) {
    for (const auto& beta : make_isotropic_full_grid(5, d)) {
      const auto f = enumerate_block(beta).back();
      CHECK(l2_norm_sq(f) == Approx(oracle::mass_entry(f, f)).epsilon(1e-12));
      CHECK(h1_norm_sq(f) == Approx(oracle::stiffness_entry(f, f)).epsilon(1e-12));
    }
  }
}

TEST_CASE("block L2 norms") {
  const std::vector<double> one{1.0};
  CHECK(block_l2_norm_sq({1, 1}, one) == Approx(1.0 / 9.0).epsilon(1e-15));
  const std::vector<double> two{1.0, 1.0};
  CHECK(block_l2_norm_sq({2}, two) == Approx(1.0 / 3.0).epsilon(1e-15));
  const std::vector<double> zeros(8, 0.0);
  CHECK(block_l2_norm_sq({3, 2}, zeros) == 0.0);
  CHECK_THROWS_AS(block_l2_norm_sq({3, 2}, two), ConfigError);

  // Against the mass-matrix quadratic form of the block.
  const MultiIndex beta{2, 3};
  const auto fs = enumerate_block(beta);
  std::vector<double> c(fs.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = 0.5 + static_cast<double>(i) * 0.25;
  double ref = 0.0;
  for (std::size_t i = 0; i < fs.size(); ++i) {
    for (std::size_t j = 0; j < fs.size(); ++j) ref += c[i] * c[j] * oracle::mass_entry(fs[i], fs[j]);
  }
  CHECK(block_l2_norm_sq(beta, c) == Approx(ref).epsilon(1e-12));
}
