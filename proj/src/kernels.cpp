#include "lisg/kernels.hpp"

#include <cmath>
#include <stdexcept>

#include "lisg/bessel.hpp"

namespace lisg {

namespace {

void require(bool condition, const char* message) {
  if (!condition) throw std::invalid_argument(message);
}

constexpr double kSqrt3 = 1.7320508075688772;
constexpr double kSqrt5 = 2.23606797749979;

bool near(double a, double b) { return std::fabs(a - b) < 1e-12; }

}  // namespace

double matern_1d(const MaternParams& params, double x, double y) {
  require(params.nu > 0.0 && params.lambda > 0.0 && params.sigma > 0.0,
          "Matern parameters must be positive");
  require(std::isfinite(x) && std::isfinite(y), "non-finite input");
  const double variance = params.sigma * params.sigma;
  const double r = std::fabs(x - y);
  if (r == 0.0) return variance;
  const double scaled = r / params.lambda;

  if (near(params.nu, 0.5)) return variance * std::exp(-scaled);
  if (near(params.nu, 1.5)) {
    const double t = kSqrt3 * scaled;
    return variance * (1.0 + t) * std::exp(-t);
  }
  if (near(params.nu, 2.5)) {
    const double t = kSqrt5 * scaled;
    return variance * (1.0 + t + t * t / 3.0) * std::exp(-t);
  }

  return matern_1d_bessel(params, x, y);
}

double matern_1d_bessel(const MaternParams& params, double x, double y) {
  require(params.nu > 0.0 && params.lambda > 0.0 && params.sigma > 0.0,
          "Matern parameters must be positive");
  require(std::isfinite(x) && std::isfinite(y), "non-finite input");
  const double variance = params.sigma * params.sigma;
  const double r = std::fabs(x - y);
  const double t = std::sqrt(2.0 * params.nu) * r / params.lambda;
  if (t < 1e-300) return variance;  // t^nu K_nu(t) -> Gamma(nu) 2^{nu-1}
  const double k = bessel_k(params.nu, t);
  if (k == 0.0) return 0.0;  // underflow at large distance
  const double log_t_pow = params.nu * std::log(t);
  if (params.nu < 170.0 && std::fabs(log_t_pow) < 600.0) {
    return variance * std::pow(2.0, 1.0 - params.nu) /
           std::tgamma(params.nu) * std::pow(t, params.nu) * k;
  }
  const double log_value = (1.0 - params.nu) * std::log(2.0) -
                           std::lgamma(params.nu) + log_t_pow + std::log(k);
  return variance * std::exp(log_value);
}

double SeparableMaternKernel::operator()(const Eigen::VectorXd& x,
                                         const Eigen::VectorXd& y) const {
  return static_cast<double>(eval_extended(x, y));
}

long double SeparableMaternKernel::eval_extended(
    const Eigen::VectorXd& x, const Eigen::VectorXd& y) const {
  require(x.size() == y.size() && x.size() == dim(), "dimension mismatch");
  long double product = 1.0L;
  for (int j = 0; j < dim(); ++j)
    product *= static_cast<long double>(matern_1d(dims[j], x[j], y[j]));
  return product;
}

double SeparableMaternKernel::total_variance() const {
  double product = 1.0;
  for (const MaternParams& p : dims) product *= p.sigma * p.sigma;
  return product;
}

SeparableMaternKernel SeparableMaternKernel::isotropic(int dim, double nu,
                                                       double lambda,
                                                       double sigma) {
  require(dim >= 1, "dimension must be >= 1");
  SeparableMaternKernel kernel;
  kernel.dims.assign(static_cast<std::size_t>(dim),
                     MaternParams{nu, lambda, sigma});
  return kernel;
}

GramMatrix gram_1d(const MaternParams& params, const std::vector<double>& pts) {
  const auto n = static_cast<Eigen::Index>(pts.size());
  for (std::size_t i = 0; i + 1 < pts.size(); ++i)
    for (std::size_t k = i + 1; k < pts.size(); ++k)
      require(pts[i] != pts[k], "duplicate points in gram_1d");

  GramMatrix gram;
  gram.entries.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    gram.entries(i, i) = params.sigma * params.sigma;
    for (Eigen::Index k = i + 1; k < n; ++k) {
      const double value = matern_1d(params, pts[i], pts[k]);
      gram.entries(i, k) = value;
      gram.entries(k, i) = value;
    }
  }

  gram.toeplitz = true;
  for (std::size_t i = 1; i + 1 < pts.size() && gram.toeplitz; ++i)
    if (std::fabs((pts[i + 1] - pts[i]) - (pts[1] - pts[0])) > 1e-15)
      gram.toeplitz = false;
  return gram;
}

Eigen::VectorXd cross_vector(const MaternParams& params, double x,
                             const std::vector<double>& pts) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(pts.size()));
  for (std::size_t i = 0; i < pts.size(); ++i)
    v[static_cast<Eigen::Index>(i)] = matern_1d(params, x, pts[i]);
  return v;
}

std::vector<double> stretch_points(std::vector<double> pts, double factor) {
  require(factor > 0.0, "stretch factor must be positive");
  for (double& p : pts) p *= factor;
  return pts;
}

}  // namespace lisg
