#include "belief_hjb/kalman_nd.hpp"

#include <random>
#include <sstream>
#include <vector>

#include "belief_hjb/error.hpp"
#include "belief_hjb/quadrature.hpp"

namespace belief_hjb {
namespace {

Eigen::MatrixXd symmetrize(const Eigen::MatrixXd& a) { return 0.5 * (a + a.transpose()); }

void check_shapes(const Eigen::MatrixXd& cov, const Eigen::MatrixXd& obs_matrix, double eps) {
  if (cov.rows() != cov.cols()) throw ValidationError("covariance must be square");
  if (obs_matrix.cols() != cov.rows()) {
    throw ValidationError("observation matrix column count must equal the state dimension");
  }
  if (!(eps >= 0.0)) throw ValidationError("observation noise eps must be >= 0");
}

Eigen::MatrixXd innovation(const Eigen::MatrixXd& cov, const Eigen::MatrixXd& h, double eps) {
  const auto n = h.rows();
  return symmetrize(h * cov * h.transpose()) +
         eps * eps * Eigen::MatrixXd::Identity(n, n);
}

}  // namespace

void NdBelief::validate() const {
  if (cov.rows() != cov.cols() || cov.rows() != mean.size()) {
    throw ValidationError("belief mean/covariance dimensions disagree");
  }
  const double scale = std::max(1.0, cov.cwiseAbs().maxCoeff());
  if ((cov - cov.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw ValidationError("belief covariance is not symmetric");
  }
  if (cov.size() > 0) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov, Eigen::EigenvaluesOnly);
    if (eig.eigenvalues().minCoeff() < -1e-10) {
      throw ValidationError("belief covariance is not nonnegative definite");
    }
  }
}

Eigen::VectorXd NdBelief::half_vectorization() const {
  const auto d = cov.rows();
  Eigen::VectorXd packed(d * (d + 1) / 2);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = i; j < d; ++j) packed(k++) = cov(i, j);
  }
  return packed;
}

NdBelief NdBelief::from_half_vectorization(const Eigen::VectorXd& mean,
                                           const Eigen::VectorXd& packed) {
  const auto d = mean.size();
  if (packed.size() != d * (d + 1) / 2) {
    throw ValidationError("packed covariance has the wrong length");
  }
  NdBelief belief{mean, Eigen::MatrixXd(d, d)};
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = i; j < d; ++j) {
      belief.cov(i, j) = packed(k);
      belief.cov(j, i) = packed(k);
      ++k;
    }
  }
  return belief;
}

void NdModelParams::validate() const {
  const auto d = theta.size();
  std::string problems;
  if (b.rows() != d || b.cols() != d) problems += " [b is d x d]";
  if (c_control.size() != d) problems += " [c_control has d entries]";
  if (obs_matrix.cols() != d) problems += " [obs_matrix has d columns]";
  if (d > 0 && !(theta.minCoeff() > 0.0)) problems += " [theta_i > 0]";
  if (c_control.size() > 0 && !(c_control.minCoeff() > 0.0)) problems += " [C_i > 0]";
  if (!(eps >= 0.0)) problems += " [eps >= 0]";
  if (!problems.empty()) throw ValidationError("invalid multi-dimensional model:" + problems);
}

Eigen::MatrixXd cholesky_factor(const Eigen::MatrixXd& s) {
  if (s.rows() != s.cols()) throw ValidationError("Cholesky factor needs a square matrix");
  const double scale = std::max(1.0, s.cwiseAbs().maxCoeff());
  if ((s - s.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw SingularMatrixError("Cholesky factor needs a symmetric matrix");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(s);
  if (llt.info() != Eigen::Success) {
    throw SingularMatrixError("matrix is not positive definite");
  }
  Eigen::MatrixXd l = llt.matrixL();
  if (l.diagonal().minCoeff() <= 0.0) throw SingularMatrixError("matrix is not positive definite");
  return l;
}

Eigen::MatrixXd kalman_gain(const Eigen::MatrixXd& cov, const Eigen::MatrixXd& obs_matrix,
                            double eps) {
  check_shapes(cov, obs_matrix, eps);
  const Eigen::MatrixXd s = innovation(cov, obs_matrix, eps);
  Eigen::LLT<Eigen::MatrixXd> llt(s);
  if (llt.info() != Eigen::Success) {
    throw SingularMatrixError("innovation covariance H S H^T + eps^2 I is singular");
  }
  // K S_innov = cov H^T  <=>  S_innov K^T = H cov^T.
  const Eigen::MatrixXd rhs = obs_matrix * cov.transpose();
  return llt.solve(rhs).transpose();
}

NdBelief kalman_update(const NdBelief& belief, const Eigen::MatrixXd& obs_matrix, double eps,
                       const Eigen::VectorXd& y) {
  check_shapes(belief.cov, obs_matrix, eps);
  if (y.size() != obs_matrix.rows()) throw ValidationError("observation has the wrong length");
  const Eigen::MatrixXd k = kalman_gain(belief.cov, obs_matrix, eps);
  const auto d = belief.cov.rows();
  NdBelief post;
  post.mean = belief.mean + k * (y - obs_matrix * belief.mean);
  post.cov = symmetrize((Eigen::MatrixXd::Identity(d, d) - k * obs_matrix) * belief.cov);
  return post;
}

double expected_update_value(const NdBeliefFunction& phi, const NdBelief& belief,
                             const Eigen::MatrixXd& obs_matrix, double eps,
                             const NdExpectationRule& rule) {
  check_shapes(belief.cov, obs_matrix, eps);
  const Eigen::MatrixXd k = kalman_gain(belief.cov, obs_matrix, eps);
  const Eigen::MatrixXd l = cholesky_factor(innovation(belief.cov, obs_matrix, eps));
  const Eigen::MatrixXd shift = k * l;
  const auto d = belief.cov.rows();
  const Eigen::MatrixXd cov_post =
      symmetrize((Eigen::MatrixXd::Identity(d, d) - k * obs_matrix) * belief.cov);
  const auto n = static_cast<int>(obs_matrix.rows());

  if (n <= rule.max_tensor_dim) {
    const auto gh = QuadratureRule::gauss_hermite(rule.gauss_hermite_nodes);
    const auto q = static_cast<int>(gh.size());
    std::vector<int> idx(static_cast<std::size_t>(n), 0);
    Eigen::VectorXd w(n);
    double total = 0.0;
    while (true) {
      double weight = 1.0;
      for (int a = 0; a < n; ++a) {
        w(a) = gh.nodes[idx[a]];
        weight *= gh.weights[idx[a]];
      }
      total += weight * phi(belief.mean + shift * w, cov_post);
      int a = 0;
      while (a < n && ++idx[a] == q) idx[a++] = 0;
      if (a == n) break;
    }
    return total;
  }

  if (rule.monte_carlo_samples == 0) throw ValidationError("Monte Carlo rule needs samples");
  std::mt19937_64 rng(rule.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd w(n);
  double total = 0.0;
  for (std::size_t s = 0; s < rule.monte_carlo_samples; ++s) {
    for (int a = 0; a < n; ++a) w(a) = normal(rng);
    total += phi(belief.mean + shift * w, cov_post);
  }
  return total / static_cast<double>(rule.monte_carlo_samples);
}

double hamiltonian_nd(const Eigen::VectorXd& m, const Eigen::MatrixXd& z, const NdGradient& grad,
                      const NdModelParams& params) {
  const auto d = m.size();
  if (z.rows() != d || z.cols() != d || grad.d_m.size() != d || grad.d_z.rows() != d ||
      grad.d_z.cols() != d || params.theta.size() != d) {
    throw ValidationError("hamiltonian_nd: dimension mismatch");
  }
  double total = 0.0;
  for (Eigen::Index i = 0; i < d; ++i) {
    const double th = params.theta(i);
    const double bii = params.b(i, i);
    double term = z(i, i) + m(i) * m(i) - th * m(i) * grad.d_m(i) +
                  (bii * bii - 2.0 * th * z(i, i)) * grad.d_z(i, i);
    double control_arg = grad.d_m(i);
    for (Eigen::Index l = 0; l < i; ++l) {
      term -= th * (z(l, i) + m(l) * m(i)) * grad.d_z(l, i);
      control_arg += m(l) * grad.d_z(l, i);
    }
    for (Eigen::Index j = i + 1; j < d; ++j) {
      const double bij = params.b(i, j);
      term += (bij * bij / 2.0 - th * z(i, j)) * grad.d_z(i, j);
    }
    term -= control_arg * control_arg / (4.0 * params.c_control(i));
    total += term;
  }
  return total;
}

}  // namespace belief_hjb
