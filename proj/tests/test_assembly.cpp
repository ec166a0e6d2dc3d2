#include <doctest.h>

#include <random>
#include <sstream>

#include "oracles.hpp"
#include "sghb/assembly.hpp"
#include "sghb/errors.hpp"
#include "sghb/kernels.hpp"

using namespace sghb;
using doctest::Approx;

namespace {

Eigen::MatrixXd dense(const CsrMatrix& a) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(a.rows()), static_cast<Eigen::Index>(a.rows()));
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (auto p = a.row_ptr()[i]; p < a.row_ptr()[i + 1]; ++p) {
      m(static_cast<Eigen::Index>(i), a.col()[static_cast<std::size_t>(p)]) = a.val()[static_cast<std::size_t>(p)];
    }
  }
  return m;
}

double rel_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) { return (a - b).norm() / b.norm(); }

}  // namespace

TEST_CASE("1D integrals") {
  CHECK(stiffness_1d({1, 0}, {1, 0}) == 4.0);
  for (int k = 1; k <= 8; ++k) CHECK(stiffness_1d({k, 0}, {k, 0}) == std::ldexp(1.0, k + 1));
  CHECK(stiffness_1d({1, 0}, {2, 0}) == 0.0);
  CHECK(mass_1d({1, 0}, {2, 0}) == 0.125);
  CHECK(mass_1d({2, 0}, {1, 0}) == 0.125);
  CHECK(mass_1d({2, 0}, {2, 1}) == 0.0);
  CHECK(mass_1d({1, 0}, {1, 0}) == Approx(1.0 / 3.0).epsilon(1e-15));

  // All pairs up to level 5 against Gauss quadrature; off-diagonal
  // stiffness vanishes.
  for (int la = 1; la <= 5; ++la) {
    for (std::int64_t ia = 0; ia < (std::int64_t{1} << (la - 1)); ++ia) {
      for (int lb = 1; lb <= 5; ++lb) {
        for (std::int64_t ib = 0; ib < (std::int64_t{1} << (lb - 1)); ++ib) {
          const double m = mass_1d({la, ia}, {lb, ib});
          const double s = stiffness_1d({la, ia}, {lb, ib});
          CHECK(m == Approx(oracle::mass_1d({la, ia}, {lb, ib})).scale(1e-3).epsilon(1e-13));
          CHECK(s == Approx(oracle::stiffness_1d({la, ia}, {lb, ib})).scale(1.0).epsilon(1e-13));
          if (la != lb || ia != ib) CHECK(std::fabs(s) <= 1e-14);
        }
      }
    }
  }
}

TEST_CASE("single block and 1D full grid") {
  const auto sys = assemble_system(make_space(make_full_grid({1, 1})));
  CHECK(sys.stiffness.entry(0, 0) == Approx(8.0 / 3.0).epsilon(1e-15));
  CHECK(sys.mass.entry(0, 0) == Approx(1.0 / 9.0).epsilon(1e-15));
  const auto n = norms(HBVector(sys.space, {1.0}), sys);
  CHECK(n.l2_sq == Approx(1.0 / 9.0));
  CHECK(n.h1_sq == Approx(8.0 / 3.0));
  CHECK(n.hb_sq == Approx(4.0 / 9.0));
  const auto y = preconditioned_apply(sys, std::vector<double>{1.0});
  CHECK(y[0] == Approx(6.0).epsilon(1e-14));
  CHECK(preconditioned_apply(sys, std::vector<double>{0.0})[0] == 0.0);
  const auto z = norms(HBVector(sys.space), sys);
  CHECK(z.l2_sq == 0.0);
  CHECK(z.h1_sq == 0.0);
  CHECK(z.hb_sq == 0.0);

  const auto g = assemble_stiffness(*make_space(make_full_grid({2})));
  CHECK(dense(g) == Eigen::Vector3d(4, 8, 8).asDiagonal().toDenseMatrix());
}

TEST_CASE("scaling diagonal") {
  auto sp = make_space(make_full_grid({2, 1}));
  const auto d = scaling_diagonal(*sp);
  CHECK(d[0] == Approx(4.0 / 9.0).epsilon(1e-15));
  CHECK(d[1] == Approx(8.0 / 9.0).epsilon(1e-15));
  CHECK(d[2] == Approx(8.0 / 9.0).epsilon(1e-15));

  auto s = make_space(make_standard_sparse(4, 3));
  std::mt19937_64 rng(5);
  std::normal_distribution<double> nd;
  HBVector c(s);
  for (auto& v : c.values) v = nd(rng);
  double blockwise = 0.0;
  for (std::size_t b = 0; b < s->num_blocks(); ++b) {
    const std::span<const double> part(c.values.data() + s->block_start(b), s->block_size(b));
    blockwise += std::ldexp(1.0, 2 * s->block(b).linf()) * block_l2_norm_sq(s->block(b), part);
  }
  CHECK(hb_norm_sq(c) == Approx(blockwise).epsilon(1e-13));
}

TEST_CASE("assembly equals brute-force quadrature and the nodal route") {
  const std::vector<SpacePtr> spaces{
      make_space(make_standard_sparse(5, 2)), make_space(make_standard_sparse(3, 3)),
      make_space(make_isotropic_full_grid(3, 2)), make_space(make_energy_optimized(5, 2, Rational(1, 2))),
      make_space(make_full_grid({4, 1})),         make_space(make_full_grid({2, 2, 2})),
      make_space(gap_example(2, 2).closure),      make_space(make_standard_sparse(2, 4))};
  for (const auto& sp : spaces) {
    CAPTURE(sp->dim());
    const auto sys = assemble_system(sp);
    const Eigen::MatrixXd g = dense(sys.stiffness), m = dense(sys.mass);
    CHECK((g - g.transpose()).norm() <= 1e-14 * g.norm());
    CHECK((m - m.transpose()).norm() <= 1e-14 * m.norm());

    Eigen::MatrixXd gb, mb;
    oracle::dense_brute(*sp, gb, mb);
    CHECK(rel_diff(g, gb) <= 1e-12);
    CHECK(rel_diff(m, mb) <= 1e-12);
    CHECK(sys.stiffness.nnz() <= overlap_count(*sp));

    const auto nod = oracle::nodal_assembly(*sp);
    CHECK(rel_diff(g, nod.g) <= 1e-10);
    CHECK(rel_diff(m, nod.m) <= 1e-10);

    CHECK(Eigen::LLT<Eigen::MatrixXd>(g).info() == Eigen::Success);
    CHECK(Eigen::LLT<Eigen::MatrixXd>(m).info() == Eigen::Success);
  }
}

TEST_CASE("assembly is independent of the thread count") {
  auto sp = make_space(make_standard_sparse(7, 2));
  kernels::set_num_threads(1);
  const auto a = assemble_system(sp);
  kernels::set_num_threads(3);
  const auto b = assemble_system(sp);
  kernels::set_num_threads(1);
  CHECK(a.stiffness.val() == b.stiffness.val());
  CHECK(a.stiffness.col() == b.stiffness.col());
  CHECK(a.mass.val() == b.mass.val());
}

TEST_CASE("nnz guard and export") {
  auto sp = make_space(make_standard_sparse(4, 2));
  AssemblyOptions tiny;
  tiny.nnz_cap = 10;
  CHECK_THROWS_AS(assemble_stiffness(*sp, tiny), NumericalError);

  const auto g = assemble_stiffness(*make_space(make_full_grid({2, 1})));
  std::ostringstream out;
  write_coordinate(g, out);
  std::istringstream in(out.str());
  std::size_t r, c, lines = 0;
  double v;
  while (in >> r >> c >> v) {
    CHECK(v == g.entry(r, c));
    ++lines;
  }
  CHECK(lines == g.nnz());
  CHECK(out.str().substr(0, 4) == "0 0 ");
}

TEST_CASE("eigenvector sanity of the preconditioned operator") {
  const auto sys = assemble_system(make_space(make_standard_sparse(4, 2)));
  const Eigen::MatrixXd g = dense(sys.stiffness);
  Eigen::VectorXd s(static_cast<Eigen::Index>(sys.dim()));
  for (Eigen::Index i = 0; i < s.size(); ++i) s(i) = sys.inv_sqrt_scaling[static_cast<std::size_t>(i)];
  const Eigen::MatrixXd a = s.asDiagonal() * g * s.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    const Eigen::VectorXd x = es.eigenvectors().col(j);
    const auto y = preconditioned_apply(sys, std::span<const double>(x.data(), static_cast<std::size_t>(x.size())));
    const Eigen::Map<const Eigen::VectorXd> yy(y.data(), x.size());
    CHECK((yy - es.eigenvalues()(j) * x).norm() <= 1e-8 * es.eigenvalues()(j));
  }
}
