#include "lisg/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lisg {

namespace {

void require(bool condition, const char* message) {
  if (!condition) throw std::invalid_argument(message);
}

void check_hypothesis(const std::vector<double>& nu,
                      const std::vector<double>& alpha) {
  require(!nu.empty() && nu.size() == alpha.size(),
          "nu and alpha must match and be nonempty");
  for (std::size_t j = 0; j < nu.size(); ++j)
    require(nu[j] >= alpha[j] && alpha[j] >= 0.5,
            "requires nu_j >= alpha_j >= 1/2");
}

}  // namespace

double epsilon_k(int k, double gap, long long level, double constant) {
  require(k >= 1, "k must be >= 1");
  require(gap > 0.0, "gap c must be > 0 (tail diverges at c = 0)");
  require(constant >= 0.0, "constant must be >= 0");
  const long long l_max = std::max(level, 0LL);
  const double x = std::exp2(-gap);
  double partial = 0.0;
  double term = 1.0;  // binomial(m + k - 1, k - 1) * x^m
  for (long long m = 0; m <= l_max; ++m) {
    if (m > 0) term *= x * static_cast<double>(m + k - 1) / static_cast<double>(m);
    partial += term;
  }
  const double full = std::pow(1.0 - x, -k);
  double tail = std::max(full - partial, 0.0);
  if (tail < full * 1e-9) {
    // The subtraction has cancelled most digits; sum the tail forwards
    // instead. Same value, full relative precision.
    tail = 0.0;
    for (long long m = l_max + 1;; ++m) {
      term *= x * static_cast<double>(m + k - 1) / static_cast<double>(m);
      tail += term;
      if (term < tail * 1e-18 || term == 0.0) break;
    }
  }
  return constant * tail;
}

double tensor_constant(const std::vector<double>& nu,
                       const std::vector<double>& alpha) {
  check_hypothesis(nu, alpha);
  double log_product = 0.0;
  for (std::size_t j = 0; j < nu.size(); ++j) {
    log_product += 0.5 * (std::lgamma(alpha[j] + 0.5) + std::lgamma(nu[j]) -
                          std::lgamma(alpha[j]) - std::lgamma(nu[j] + 0.5));
  }
  return std::exp(log_product);
}

double native_error_bound(const PenaltyVector& penalties,
                       const BoundParams& params, int level) {
  const int dim = static_cast<int>(penalties.size());
  require(dim >= 1, "dimension must be >= 1");
  check_hypothesis(params.nu, params.alpha);
  require(static_cast<int>(params.nu.size()) == dim, "length mismatch");
  const double gap = params.nu[0] - params.alpha[0];
  for (std::size_t j = 0; j < params.nu.size(); ++j)
    require(std::fabs((params.nu[j] - params.alpha[j]) - gap) < 1e-12,
            "requires a constant gap nu_j - alpha_j");
  require(gap > 0.0, "gap c must be > 0");
  require(params.pruning_floor >= 0.0, "pruning floor must be >= 0");

  // Terms depend on the subset only through its size k and penalty sum s,
  // so count subsets per (k, s) by dynamic programming. Sums with
  // 2^{-c s} below the pruning floor are dropped; with the default floor
  // those terms sit below machine precision relative to the k = 1 terms.
  int s_cut = 0;
  for (const int p : penalties) {
    require(p >= 0, "penalties must be >= 0");
    s_cut += p;
  }
  if (params.pruning_floor > 0.0) {
    const int floor_cut = static_cast<int>(
        std::ceil(-std::log2(params.pruning_floor) / gap)) + 1;
    s_cut = std::min(s_cut, floor_cut);
  }

  std::vector<std::vector<double>> subsets(
      static_cast<std::size_t>(dim) + 1,
      std::vector<double>(static_cast<std::size_t>(s_cut) + 1, 0.0));
  subsets[0][0] = 1.0;
  for (int j = 0; j < dim; ++j) {
    const int pj = penalties[static_cast<std::size_t>(j)];
    if (pj > s_cut) continue;
    for (int k = std::min(j + 1, dim); k >= 1; --k)
      for (int s = s_cut; s >= pj; --s)
        subsets[static_cast<std::size_t>(k)][static_cast<std::size_t>(s)] +=
            subsets[static_cast<std::size_t>(k - 1)]
                   [static_cast<std::size_t>(s - pj)];
  }

  double total = 0.0;
  for (int k = 1; k <= dim; ++k) {
    const double k_factor = std::exp2(-gap * k);
    const double constant = std::pow(params.approximation_constant, k);
    for (int s = 0; s <= s_cut; ++s) {
      const double count =
          subsets[static_cast<std::size_t>(k)][static_cast<std::size_t>(s)];
      if (count == 0.0) continue;
      const double s_factor = std::exp2(-gap * s);
      if (params.pruning_floor > 0.0 && s_factor < params.pruning_floor)
        continue;
      total += k_factor * count * s_factor *
               epsilon_k(k, gap, static_cast<long long>(level) - s - k,
                         constant);
    }
  }
  return tensor_constant(params.nu, params.alpha) * total;
}

double supnorm_bound(const std::vector<double>& sigma, double bound_value) {
  require(bound_value >= 0.0, "bound value must be >= 0");
  double product = 1.0;
  for (const double s : sigma) {
    require(s > 0.0, "sigma must be positive");
    product *= s;
  }
  return product * bound_value;
}

}  // namespace lisg
