#pragma once

#include <vector>

#include <Eigen/Core>

namespace lisg {

/// Hyperparameters of a one-dimensional Matern kernel.
struct MaternParams {
  double nu;      // smoothness, > 0
  double lambda;  // lengthscale, > 0
  double sigma;   // standard deviation, > 0
};

/// phi_{nu,lambda}(x, y). Half-integer nu in {1/2, 3/2, 5/2} dispatches to
/// the exponential-polynomial closed forms; other orders go through the
/// modified Bessel function. Zero distance returns sigma^2 exactly.
double matern_1d(const MaternParams& params, double x, double y);

/// General-order evaluation through K_nu, for any nu. matern_1d routes
/// non-half-integer orders here; exposed so the two routes can be compared.
double matern_1d_bessel(const MaternParams& params, double x, double y);

/// Separable (product) Matern kernel: one factor per input dimension.
struct SeparableMaternKernel {
  std::vector<MaternParams> dims;

  int dim() const { return static_cast<int>(dims.size()); }
  double operator()(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const;
  /// Product of the per-dimension factors without the final rounding;
  /// the value the Kronecker-structured solver works with implicitly.
  long double eval_extended(const Eigen::VectorXd& x,
                            const Eigen::VectorXd& y) const;
  double total_variance() const;  // product of sigma_j^2

  static SeparableMaternKernel isotropic(int dim, double nu, double lambda,
                                         double sigma = 1.0);
};

struct GramMatrix {
  Eigen::MatrixXd entries;
  bool toeplitz = false;  // consecutive gaps equal
};

/// Kernel matrix over a 1-D point set; points must be pairwise distinct.
GramMatrix gram_1d(const MaternParams& params, const std::vector<double>& pts);

/// Vector [phi(x, p_1), ..., phi(x, p_N)].
Eigen::VectorXd cross_vector(const MaternParams& params, double x,
                             const std::vector<double>& pts);

/// Scale every point by a positive factor.
std::vector<double> stretch_points(std::vector<double> pts, double factor);

}  // namespace lisg
