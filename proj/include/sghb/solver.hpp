#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "sghb/assembly.hpp"
#include "sghb/errors.hpp"

namespace sghb {

struct SolveStats {
  int iterations = 0;
  /// sqrt(r^T D^-1 r) / sqrt(r0^T D^-1 r0) after each iteration, starting
  /// with 1 for the initial residual; empty for b = 0.
  std::vector<double> residual_history;
  double final_relative_residual = 0.0;
  std::uint64_t seed = 0;
  bool converged = false;
};

class SolveError : public NumericalError {
 public:
  SolveError(const std::string& what, SolveStats stats) : NumericalError(what), stats_(std::move(stats)) {}
  const SolveStats& stats() const { return stats_; }

 private:
  SolveStats stats_;
};

struct SolveResult {
  std::vector<double> x;
  SolveStats stats;
};

/// Conjugate gradients for G x = b with the HB preconditioner D^-1, started
/// from x = 0. Stops once the preconditioned relative residual is <= tol.
SolveResult pcg(const GalerkinSystem& system, std::span<const double> b, double tol = 1e-8, int max_iterations = 10000);

enum class ModelRhs { constant_one, product_sine };
std::string_view to_string(ModelRhs f);
/// Parses "constant_one" or "product_sine"; throws ConfigError otherwise.
ModelRhs parse_model_rhs(std::string_view text);

/// Load vector b_alpha = integral of f phi_alpha over the unit cube.
std::vector<double> model_rhs(const SparseGridSpace& space, ModelRhs f);

}  // namespace sghb
