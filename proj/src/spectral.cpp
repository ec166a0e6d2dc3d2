#include "sghb/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include "sghb/kernels.hpp"

namespace sghb {

std::string_view to_string(Method m) { return m == Method::dense ? "dense" : "lanczos"; }

SpectralReport dense_extremal_eigs(const GalerkinSystem& system, std::size_t dense_cap) {
  const std::size_t n = system.dim();
  if (n > dense_cap) {
    throw NumericalError("dense eigensolve of dimension " + std::to_string(n) + " exceeds the cap of " +
                         std::to_string(dense_cap));
  }
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  const auto& g = system.stiffness;
  for (std::size_t r = 0; r < n; ++r) {
    for (auto k = g.row_ptr()[r]; k < g.row_ptr()[r + 1]; ++k) {
      const auto c = static_cast<std::size_t>(g.col()[static_cast<std::size_t>(k)]);
      a(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          g.val()[static_cast<std::size_t>(k)] * system.inv_sqrt_scaling[r] * system.inv_sqrt_scaling[c];
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) throw NumericalError("dense symmetric eigensolver failed");
  SpectralReport rep;
  rep.method = Method::dense;
  rep.lambda_min = eig.eigenvalues()(0);
  rep.lambda_max = eig.eigenvalues()(static_cast<Eigen::Index>(n) - 1);
  if (!(rep.lambda_min > 0.0)) throw NumericalError("operator is not positive definite");
  rep.kappa = rep.lambda_max / rep.lambda_min;
  return rep;
}

LanczosResult lanczos(const LinearOperator& op, std::size_t n, double tol, std::uint64_t seed, int max_iterations,
                      LanczosTarget target) {
  if (n == 0) throw ConfigError("Lanczos on an empty operator");
  const auto& k = kernels::active();
  std::mt19937_64 rng(seed);
  std::vector<std::vector<double>> q;
  std::vector<double> v(n);
  for (auto& x : v) x = static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5;
  {
    const double nv = std::sqrt(k.dot(v.data(), v.data(), n));
    for (auto& x : v) x /= nv;
  }
  std::vector<double> alpha, beta;  // beta[i] couples q_i and q_{i+1}
  std::vector<double> w(n);
  LanczosResult res;
  const auto limit = static_cast<std::size_t>(std::min<std::size_t>(n, static_cast<std::size_t>(max_iterations)));
  double anorm = 0.0;
  for (std::size_t m = 0; m < limit; ++m) {
    q.push_back(v);
    op(q.back(), w);
    const double a = k.dot(q.back().data(), w.data(), n);
    alpha.push_back(a);
    // Two passes of classical Gram-Schmidt against the whole basis.
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& qi : q) k.axpy(-k.dot(qi.data(), w.data(), n), qi.data(), w.data(), n);
    }
    const double b = std::sqrt(k.dot(w.data(), w.data(), n));
    anorm = std::max(anorm, std::abs(a) + b + (beta.empty() ? 0.0 : beta.back()));
    const std::size_t size = m + 1;
    const bool invariant = b <= 1e-13 * anorm || size == n;
    const bool check = invariant || size == limit || size < 40 || size % std::max<std::size_t>(1, size / 20) == 0;
    if (check) {
      Eigen::VectorXd diag(static_cast<Eigen::Index>(size));
      Eigen::VectorXd sub(static_cast<Eigen::Index>(size > 1 ? size - 1 : 0));
      for (std::size_t i = 0; i < size; ++i) diag(static_cast<Eigen::Index>(i)) = alpha[i];
      for (std::size_t i = 0; i + 1 < size; ++i) sub(static_cast<Eigen::Index>(i)) = beta[i];
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
      tri.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
      const auto last = static_cast<Eigen::Index>(size - 1);
      const double tmin = tri.eigenvalues()(0);
      const double tmax = tri.eigenvalues()(last);
      res.theta_min = tmin;
      res.theta_max = tmax;
      res.residual_min = invariant ? 0.0 : std::abs(b * tri.eigenvectors()(last, 0)) / std::abs(tmin);
      res.residual_max = invariant ? 0.0 : std::abs(b * tri.eigenvectors()(last, last)) / std::abs(tmax);
      res.iterations = static_cast<int>(size);
      const bool done_max = res.residual_max <= tol;
      const bool done_min = target == LanczosTarget::largest || res.residual_min <= tol;
      if (invariant || (done_max && done_min)) {
        res.converged = true;
        return res;
      }
    }
    beta.push_back(b);
    for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / b;
  }
  res.converged = false;
  return res;
}

SpectralReport lanczos_extremal_eigs(const LinearOperator& apply, std::size_t n, double tol, std::uint64_t seed,
                                     const LinearOperator* inverse, int max_iterations) {
  SpectralReport rep;
  rep.method = Method::lanczos;
  rep.residual_tol = tol;
  rep.seed = seed;
  const auto top = lanczos(apply, n, tol, seed, max_iterations,
                           inverse ? LanczosTarget::largest : LanczosTarget::both);
  rep.lambda_max = top.theta_max;
  rep.residual_max = top.residual_max;
  rep.iterations = top.iterations;
  bool converged = top.converged;
  if (inverse) {
    const auto bottom = lanczos(*inverse, n, tol, seed, max_iterations, LanczosTarget::largest);
    rep.lambda_min = 1.0 / bottom.theta_max;
    rep.residual_min = bottom.residual_max;
    rep.iterations += bottom.iterations;
    converged = converged && bottom.converged;
  } else {
    rep.lambda_min = top.theta_min;
    rep.residual_min = top.residual_min;
  }
  rep.kappa = rep.lambda_max / rep.lambda_min;
  if (!converged) {
    throw ConvergenceError("Lanczos did not reach relative residual " + std::to_string(tol) + " within " +
                               std::to_string(max_iterations) + " iterations",
                           rep);
  }
  if (!(rep.lambda_min > 0.0)) throw NumericalError("operator is not positive definite");
  return rep;
}

SpectralReport lanczos_extremal_eigs(const GalerkinSystem& system, const SpectralOptions& opts) {
  const std::size_t n = system.dim();
  const auto& g = system.stiffness;
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(g.nnz());
  for (std::size_t r = 0; r < n; ++r) {
    for (auto k = g.row_ptr()[r]; k < g.row_ptr()[r + 1]; ++k) {
      triplets.emplace_back(static_cast<int>(r), g.col()[static_cast<std::size_t>(k)],
                            g.val()[static_cast<std::size_t>(k)]);
    }
  }
  Eigen::SparseMatrix<double> gm(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  gm.setFromTriplets(triplets.begin(), triplets.end());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(gm);
  if (ldlt.info() != Eigen::Success) throw NumericalError("sparse LDL^T factorization of the stiffness failed");

  LinearOperator apply = [&system](std::span<const double> x, std::span<double> y) {
    preconditioned_apply(system, x, y);
  };
  LinearOperator inverse = [&system, &ldlt, n](std::span<const double> x, std::span<double> y) {
    Eigen::VectorXd rhs(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) rhs(static_cast<Eigen::Index>(i)) = x[i] / system.inv_sqrt_scaling[i];
    const Eigen::VectorXd sol = ldlt.solve(rhs);
    for (std::size_t i = 0; i < n; ++i) y[i] = sol(static_cast<Eigen::Index>(i)) / system.inv_sqrt_scaling[i];
  };
  return lanczos_extremal_eigs(apply, n, opts.tol, opts.seed, &inverse, opts.max_iterations);
}

SpectralReport extremal_eigs(const GalerkinSystem& system, const SpectralOptions& opts) {
  if (system.dim() <= opts.dense_cap) return dense_extremal_eigs(system, opts.dense_cap);
  return lanczos_extremal_eigs(system, opts);
}

SandwichReport sandwich_check(const BoundsReport& bounds, const SpectralReport& report) {
  SandwichReport s;
  s.kappa = report.kappa;
  s.lower = bounds.n_lambda * bounds.n_tilde_prime;
  s.upper = bounds.n_lambda * bounds.n_tilde;
  s.ratio_lower = report.kappa / s.lower.convert_to<double>();
  s.ratio_upper = report.kappa / s.upper.convert_to<double>();
  return s;
}

}  // namespace sghb
