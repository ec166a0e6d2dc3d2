#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "sghb/basis.hpp"
#include "sghb/kernels.hpp"
#include "sghb/space.hpp"
#include "sghb/transform.hpp"

namespace sghb {

/// Exact integral of phi_a phi_b over [0,1].
double mass_1d(const Hat1D& a, const Hat1D& b);
/// Exact integral of phi_a' phi_b' over [0,1]. Hierarchical hats on
/// different levels are orthogonal here, so only a == b is nonzero.
double stiffness_1d(const Hat1D& a, const Hat1D& b);

double mass_entry(const BasisFunction& f, const BasisFunction& g);
double stiffness_entry(const BasisFunction& f, const BasisFunction& g);

/// Square sparse matrix in CSR form with sorted columns. Symmetric matrices
/// store both triangles.
class CsrMatrix {
 public:
  CsrMatrix() = default;
  CsrMatrix(std::size_t n, std::vector<std::int64_t> row_ptr, std::vector<std::int32_t> col, std::vector<double> val);

  std::size_t rows() const { return n_; }
  std::size_t nnz() const { return val_.size(); }
  const std::vector<std::int64_t>& row_ptr() const { return row_ptr_; }
  const std::vector<std::int32_t>& col() const { return col_; }
  const std::vector<double>& val() const { return val_; }
  kernels::CsrView view() const { return {row_ptr_.data(), col_.data(), val_.data()}; }

  /// Stored entry (i, j) or 0.
  double entry(std::size_t i, std::size_t j) const;
  void apply(std::span<const double> x, std::span<double> y) const;
  std::vector<double> apply(std::span<const double> x) const;
  /// x^T A x
  double quadratic_form(std::span<const double> x) const;

 private:
  std::size_t n_ = 0;
  std::vector<std::int64_t> row_ptr_{0};
  std::vector<std::int32_t> col_;
  std::vector<double> val_;
};

using SymmetricSparseMatrix = CsrMatrix;

struct AssemblyOptions {
  std::size_t nnz_cap = 200'000'000;
  double drop_tolerance = 1e-15;
};

/// Number of support-overlapping function pairs (the mass-matrix pattern).
std::size_t overlap_count(const SparseGridSpace& space);

SymmetricSparseMatrix assemble_stiffness(const SparseGridSpace& space, const AssemblyOptions& opts = {});
SymmetricSparseMatrix assemble_mass(const SparseGridSpace& space, const AssemblyOptions& opts = {});

/// d_alpha = 2^(2|beta|_inf) ||phi_alpha||^2_L2, alpha in J_beta. The quadratic
/// form sum_alpha d_alpha c_alpha^2 is the HB norm.
std::vector<double> scaling_diagonal(const SparseGridSpace& space);

struct GalerkinSystem {
  SpacePtr space;
  SymmetricSparseMatrix stiffness;  ///< G
  SymmetricSparseMatrix mass;       ///< M
  std::vector<double> scaling;      ///< diagonal of D
  std::vector<double> inv_sqrt_scaling;

  std::size_t dim() const { return scaling.size(); }
};

GalerkinSystem assemble_system(const SpacePtr& space, const AssemblyOptions& opts = {});

struct Norms {
  double l2_sq = 0.0;
  double h1_sq = 0.0;
  double hb_sq = 0.0;
};

Norms norms(const HBVector& c, const GalerkinSystem& system);
/// HB norm squared from the scaling diagonal alone.
double hb_norm_sq(const HBVector& c);

/// y = D^-1/2 G D^-1/2 x.
void preconditioned_apply(const GalerkinSystem& system, std::span<const double> x, std::span<double> y);
std::vector<double> preconditioned_apply(const GalerkinSystem& system, std::span<const double> x);

/// "row col value" per line, 0-based, shortest round-trip decimals.
void write_coordinate(const CsrMatrix& a, std::ostream& out);

}  // namespace sghb
