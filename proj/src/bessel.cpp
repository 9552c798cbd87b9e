// Modified Bessel K of fractional order via the Temme series (x < 2) and
// the Thompson-Barnett continued fraction (x >= 2), with upward recurrence
// from order mu in [-1/2, 1/2].

#include "lisg/bessel.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace lisg {

namespace {

constexpr double kPi = 3.14159265358979323846;

double chebyshev(const double* c, int m, double x) {
  double d = 0.0, dd = 0.0;
  const double y2 = 2.0 * x;
  for (int j = m - 1; j > 0; --j) {
    const double sv = d;
    d = y2 * d - dd + c[j];
    dd = sv;
  }
  return x * d - dd + 0.5 * c[0];
}

// Gamma-ratio helpers 1/Gamma(1 +- mu) combined into the cancellation-free
// pair gam1 = (1/G(1-mu) - 1/G(1+mu))/(2 mu) and gam2 = their mean.
void gamma_pair(double mu, double& gam1, double& gam2, double& gampl,
                double& gammi) {
  static const double c1[] = {-1.142022680371168e0, 6.5165112670737e-3,
                              3.087090173086e-4,    -3.4706269649e-6,
                              6.9437664e-9,         3.67795e-11,
                              -1.356e-13};
  static const double c2[] = {1.843740587300905e0, -7.68528408447867e-2,
                              1.2719271366546e-3,  -4.9717367042e-6,
                              -3.31261198e-8,      2.423096e-10,
                              -1.702e-13,          -1.49e-15};
  const double xx = 8.0 * mu * mu - 1.0;
  gam1 = chebyshev(c1, 7, xx);
  gam2 = chebyshev(c2, 8, xx);
  gampl = gam2 - mu * gam1;
  gammi = gam2 + mu * gam1;
}

}  // namespace

double bessel_k(double nu, double x) {
  if (!(x > 0.0) || nu < 0.0 || !std::isfinite(nu))
    throw std::invalid_argument("bessel_k requires x > 0 and nu >= 0");

  constexpr int kMaxIter = 10000;
  const double eps = std::numeric_limits<double>::epsilon();

  const int n = static_cast<int>(nu + 0.5);
  const double mu = nu - n;
  const double mu2 = mu * mu;
  const double xi = 1.0 / x;
  const double xi2 = 2.0 * xi;

  double k_mu, k_mu1;
  if (x < 2.0) {
    const double x2 = 0.5 * x;
    const double pimu = kPi * mu;
    const double fact = (std::fabs(pimu) < eps) ? 1.0 : pimu / std::sin(pimu);
    const double d = -std::log(x2);
    double e = mu * d;
    const double fact2 = (std::fabs(e) < eps) ? 1.0 : std::sinh(e) / e;
    double gam1, gam2, gampl, gammi;
    gamma_pair(mu, gam1, gam2, gampl, gammi);
    double ff = fact * (gam1 * std::cosh(e) + gam2 * fact2 * d);
    double sum = ff;
    e = std::exp(e);
    double p = 0.5 * e / gampl;
    double q = 0.5 / (e * gammi);
    double c = 1.0;
    const double x2sq = x2 * x2;
    double sum1 = p;
    int i = 1;
    for (; i <= kMaxIter; ++i) {
      ff = (i * ff + p + q) / (i * i - mu2);
      c *= x2sq / i;
      p /= (i - mu);
      q /= (i + mu);
      const double del = c * ff;
      sum += del;
      sum1 += c * (p - i * ff);
      if (std::fabs(del) < std::fabs(sum) * eps) break;
    }
    if (i > kMaxIter)
      throw std::runtime_error("bessel_k: series failed to converge");
    k_mu = sum;
    k_mu1 = sum1 * xi2;
  } else {
    double b = 2.0 * (1.0 + x);
    double d = 1.0 / b;
    double h = d, delh = d;
    double q1 = 0.0, q2 = 1.0;
    const double a1 = 0.25 - mu2;
    double q = a1, c = a1;
    double a = -a1;
    double s = 1.0 + q * delh;
    int i = 1;
    for (; i < kMaxIter; ++i) {
      a -= 2 * i;
      c = -a * c / (i + 1.0);
      const double qnew = (q1 - b * q2) / a;
      q1 = q2;
      q2 = qnew;
      q += c * qnew;
      b += 2.0;
      d = 1.0 / (b + a * d);
      delh = (b * d - 1.0) * delh;
      h += delh;
      const double dels = q * delh;
      s += dels;
      if (std::fabs(dels / s) <= eps) break;
    }
    if (i >= kMaxIter)
      throw std::runtime_error("bessel_k: continued fraction failed");
    h = a1 * h;
    k_mu = std::sqrt(kPi / (2.0 * x)) * std::exp(-x) / s;
    k_mu1 = k_mu * (mu + x + 0.5 - h) * xi;
  }

  for (int i = 1; i <= n; ++i) {
    const double k_next = (mu + i) * xi2 * k_mu1 + k_mu;
    k_mu = k_mu1;
    k_mu1 = k_next;
  }
  return k_mu;
}

}  // namespace lisg
