#pragma once

#include <vector>

#include <Eigen/Dense>

#include "sghb/assembly.hpp"
#include "sghb/transform.hpp"

namespace sghb {

/// L2-orthonormal bases of the orthogonal complements
/// W_beta = V_beta - sum_{beta' < beta} V_beta', in HB coordinates.
/// Built by dense projection, so only meant for small spaces.
class PrewaveletBasis {
 public:
  PrewaveletBasis(const GalerkinSystem& system, std::size_t dense_cap = 2500);

  const SpacePtr& space() const { return space_; }
  const Eigen::MatrixXd& mass() const { return mass_; }
  /// n x |J_beta| matrix with M-orthonormal columns spanning W_beta.
  const Eigen::MatrixXd& basis(std::size_t block) const { return q_[block]; }

 private:
  SpacePtr space_;
  Eigen::MatrixXd mass_;
  std::vector<Eigen::MatrixXd> q_;
};

struct PWDecomposition {
  SpacePtr space;
  /// w_beta in HB coordinates, one per block of the space (block order).
  std::vector<std::vector<double>> components;
  /// ||w_beta||^2_L2
  std::vector<double> l2_sq;
};

PWDecomposition pw_decompose(const PrewaveletBasis& pw, const HBVector& c);
/// Convenience overload assembling everything on c's space.
PWDecomposition pw_decompose(const HBVector& c, std::size_t dense_cap = 2500);

/// sum_beta 2^(2|beta|_inf) ||w_beta||^2_L2
double pw_norm_sq(const PWDecomposition& dec);

/// Gram matrix of the PW norm in HB coordinates:
/// P = sum_beta 2^(2|beta|_inf) (M Q_beta)(M Q_beta)^T.
Eigen::MatrixXd pw_norm_matrix(const PrewaveletBasis& pw);

struct PWConstants {
  double c_pw_est = 0.0;
  double C_pw_est = 0.0;
};

/// Extreme eigenvalues of the pencil (G, P) for dense symmetric G and SPD P.
PWConstants pencil_extremes(const Eigen::MatrixXd& g, const Eigen::MatrixXd& p);

PWConstants estimate_pw_constants(const GalerkinSystem& system, std::size_t dense_cap = 2500);
PWConstants estimate_pw_constants(const SpacePtr& space, std::size_t dense_cap = 2500);

/// Dense copy of a CSR matrix.
Eigen::MatrixXd to_dense(const CsrMatrix& a);

}  // namespace sghb
