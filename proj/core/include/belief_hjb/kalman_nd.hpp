#pragma once

#include <cstdint>
#include <functional>

#include <Eigen/Dense>

namespace belief_hjb {

/// Multivariate Gaussian belief N(mean, cov). The covariance is stored as a
/// full symmetric matrix; half_vectorization() is the packed (i <= j) view.
struct NdBelief {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;

  /// Symmetric within 1e-12 and smallest eigenvalue >= -1e-10.
  void validate() const;

  /// Entries cov(i, j), i <= j, row by row: d(d+1)/2 values.
  Eigen::VectorXd half_vectorization() const;
  static NdBelief from_half_vectorization(const Eigen::VectorXd& mean,
                                          const Eigen::VectorXd& packed);
};

/// d-dimensional OU model with observation y = H x + eps Z.
struct NdModelParams {
  Eigen::VectorXd theta;      // d
  Eigen::MatrixXd b;          // d x d, upper triangle used
  Eigen::VectorXd c_control;  // d
  Eigen::MatrixXd obs_matrix; // n x d
  double eps = 0.0;

  void validate() const;
};

/// dU/dm_i and dU/dz_ij (upper triangle, i <= j).
struct NdGradient {
  Eigen::VectorXd d_m;
  Eigen::MatrixXd d_z;
};

/// K = S H^T (H S H^T + eps^2 I)^{-1}, computed by Cholesky solves of the
/// innovation covariance. Throws SingularMatrixError if it is not positive definite.
Eigen::MatrixXd kalman_gain(const Eigen::MatrixXd& cov, const Eigen::MatrixXd& obs_matrix,
                            double eps);

/// mean + K (y - H mean), (I - K H) cov re-symmetrised.
NdBelief kalman_update(const NdBelief& belief, const Eigen::MatrixXd& obs_matrix, double eps,
                       const Eigen::VectorXd& y);

/// Lower-triangular L with L L^T = s and positive diagonal. Throws
/// SingularMatrixError when s is not symmetric positive definite.
Eigen::MatrixXd cholesky_factor(const Eigen::MatrixXd& s);

using NdBeliefFunction = std::function<double(const Eigen::VectorXd& mean,
                                              const Eigen::MatrixXd& cov)>;

/// Integration rule for expected_update_value: tensor Gauss-Hermite when the
/// observation dimension is at most max_tensor_dim, seeded Monte Carlo otherwise.
struct NdExpectationRule {
  int gauss_hermite_nodes = 10;
  int max_tensor_dim = 3;
  std::size_t monte_carlo_samples = 100000;
  std::uint64_t seed = 0;
};

/// E_w[phi(m + K L w, (I - K H) S)], w ~ N(0, I_n), L L^T = H S H^T + eps^2 I.
double expected_update_value(const NdBeliefFunction& phi, const NdBelief& belief,
                             const Eigen::MatrixXd& obs_matrix, double eps,
                             const NdExpectationRule& rule = {});

/// Mean/covariance Hamiltonian of the d-dimensional problem, term by term:
///   sum_i [ z_ii + m_i^2 - theta_i m_i dU/dm_i + (b_ii^2 - 2 theta_i z_ii) dU/dz_ii
///           - theta_i sum_{l<i} (z_li + m_l m_i) dU/dz_li
///           + sum_{j>i} (b_ij^2 / 2 - theta_i z_ij) dU/dz_ij
///           - (dU/dm_i + sum_{l<i} m_l dU/dz_li)^2 / (4 C_i) ].
/// Only the upper triangles of z and grad.d_z are read.
double hamiltonian_nd(const Eigen::VectorXd& m, const Eigen::MatrixXd& z, const NdGradient& grad,
                      const NdModelParams& params);

}  // namespace belief_hjb
