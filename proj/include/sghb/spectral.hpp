#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string_view>

#include "sghb/assembly.hpp"
#include "sghb/errors.hpp"
#include "sghb/index_sets.hpp"

namespace sghb {

enum class Method { dense, lanczos };
std::string_view to_string(Method m);

/// Extreme eigenvalues of A = D^-1/2 G D^-1/2. lambda_max is the best
/// constant of the upper HB-norm inequality, lambda_min the best constant of
/// the lower one.
struct SpectralReport {
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  double kappa = 0.0;
  Method method = Method::dense;
  double residual_tol = 0.0;
  /// Relative eigen-residuals ||Ax - lambda x|| / (lambda ||x||) of the
  /// returned Ritz pairs (0 for dense).
  double residual_min = 0.0;
  double residual_max = 0.0;
  int iterations = 0;
  std::uint64_t seed = 0;
};

/// Thrown when Lanczos exhausts its iteration budget.
class ConvergenceError : public NumericalError {
 public:
  ConvergenceError(const std::string& what, SpectralReport best) : NumericalError(what), best_(best) {}
  const SpectralReport& best_estimates() const { return best_; }

 private:
  SpectralReport best_;
};

struct SpectralOptions {
  std::size_t dense_cap = 4000;
  double tol = 1e-8;
  int max_iterations = 5000;
  std::uint64_t seed = 42;
};

/// Full symmetric eigensolve; throws NumericalError above `dense_cap` rows.
SpectralReport dense_extremal_eigs(const GalerkinSystem& system, std::size_t dense_cap = 4000);

using LinearOperator = std::function<void(std::span<const double> x, std::span<double> y)>;

struct LanczosResult {
  double theta_min = 0.0;
  double theta_max = 0.0;
  /// Relative residual estimates |beta_m s_m| / |theta| of the extreme Ritz values.
  double residual_min = 0.0;
  double residual_max = 0.0;
  int iterations = 0;
  bool converged = false;
};

enum class LanczosTarget { largest, both };

/// Lanczos with full (twice-applied classical Gram-Schmidt) reorthogonalization
/// from a seeded uniform start vector. Stops when the requested extreme Ritz
/// values have relative residual <= tol, or on an invariant subspace.
LanczosResult lanczos(const LinearOperator& op, std::size_t n, double tol, std::uint64_t seed, int max_iterations,
                      LanczosTarget target = LanczosTarget::both);

/// lambda_max from Lanczos on `apply`; lambda_min from Lanczos on `inverse`
/// (shift-invert at zero) when given, otherwise the smallest Ritz value.
SpectralReport lanczos_extremal_eigs(const LinearOperator& apply, std::size_t n, double tol, std::uint64_t seed,
                                     const LinearOperator* inverse = nullptr, int max_iterations = 5000);

/// Lanczos on A for lambda_max and on A^-1 = D^1/2 G^-1 D^1/2 (sparse
/// LDL^T of G) for lambda_min.
SpectralReport lanczos_extremal_eigs(const GalerkinSystem& system, const SpectralOptions& opts = {});

/// Dense at or below the cap, Lanczos above.
SpectralReport extremal_eigs(const GalerkinSystem& system, const SpectralOptions& opts = {});

struct SandwichReport {
  double kappa = 0.0;
  BigInt lower;  ///< n_Lambda * n~'_Lambda
  BigInt upper;  ///< n_Lambda * n~_Lambda
  double ratio_lower = 0.0;
  double ratio_upper = 0.0;
};

SandwichReport sandwich_check(const BoundsReport& bounds, const SpectralReport& report);
inline SandwichReport sandwich_check(const MonotoneIndexSet& set, const SpectralReport& report) {
  return sandwich_check(bounds_quantities(set), report);
}

}  // namespace sghb
