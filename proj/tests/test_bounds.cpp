#include <doctest.h>

#include <cmath>

#include "lisg/bounds.hpp"
#include "lisg/multiindex.hpp"
#include "lisg/rng.hpp"
#include "oracles.hpp"

using namespace lisg;

namespace {

// Direct tail sum over multi-indices outside the simplex, truncated far
// enough that the analytic remainder is below the assertion tolerance.
double epsilon_direct(int k, double gap, int level, int extra = 40) {
  double sum = 0.0;
  const int lo = std::max(level, 0) + 1;
  for (const auto& l : oracle::all_indices(k, lo, std::max(level, 0) + extra)) {
    const int s = std::accumulate(l.begin(), l.end(), 0);
    sum += std::exp2(-gap * s);
  }
  return sum;
}

// Small-d evaluation of the level bound straight from the double sum over
// explicit subsets, no grouping or pruning.
double bound_direct(const PenaltyVector& p, const BoundParams& params,
                    int level) {
  const int d = static_cast<int>(p.size());
  const double gap = params.nu[0] - params.alpha[0];
  double total = 0.0;
  for (int mask = 1; mask < (1 << d); ++mask) {
    int k = 0, s = 0;
    for (int j = 0; j < d; ++j)
      if (mask & (1 << j)) {
        ++k;
        s += p[static_cast<std::size_t>(j)];
      }
    total += std::exp2(-gap * (k + s)) *
             epsilon_k(k, gap, level - s - k,
                       std::pow(params.approximation_constant, k));
  }
  return tensor_constant(params.nu, params.alpha) * total;
}

BoundParams unit_params(int d, double nu, double alpha) {
  BoundParams params;
  params.nu.assign(static_cast<std::size_t>(d), nu);
  params.alpha.assign(static_cast<std::size_t>(d), alpha);
  params.sigma.assign(static_cast<std::size_t>(d), 1.0);
  return params;
}

}  // namespace

TEST_SUITE("bounds") {

TEST_CASE("epsilon_k closed-form values") {
  CHECK(epsilon_k(1, 1.0, 0, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(epsilon_k(1, 1.0, 3, 1.0) == doctest::Approx(0.125).epsilon(1e-14));
  CHECK(epsilon_k(2, 1.0, -5, 1.0) == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(epsilon_k(2, 1.0, 0, 1.0) == doctest::Approx(3.0).epsilon(1e-14));
  CHECK_THROWS_AS(epsilon_k(1, 0.0, 3, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(epsilon_k(0, 1.0, 3, 1.0), std::invalid_argument);
}

TEST_CASE("epsilon_k equals the direct tail sum") {
  for (const int k : {1, 2, 3}) {
    for (const double c : {0.5, 1.0, 2.0}) {
      for (const int L : {-3, 0, 1, 2, 4, 7}) {
        const double closed = epsilon_k(k, c, L, 1.0);
        const double direct = epsilon_direct(k, c, L);
        // The direct sum stops at |l|_1 = max(L,0) + 40. For s >= S the
        // term ratio is at most 2^-c (S+k)/(S+1) < 3/4, so the dropped
        // tail is below four times its first term.
        const int S = std::max(L, 0) + 41;
        const double remainder =
            4.0 * static_cast<double>(binomial(S + k - 1, k - 1)) *
            std::exp2(-c * S);
        CHECK(std::fabs(closed - direct) <=
              remainder + 1e-12 * std::max(1.0, closed));
      }
    }
  }
}

TEST_CASE("epsilon_k scales by the constant and decays in L") {
  CHECK(epsilon_k(2, 1.0, 3, 2.5) ==
        doctest::Approx(2.5 * epsilon_k(2, 1.0, 3, 1.0)));
  double previous = epsilon_k(2, 0.7, 0, 1.0);
  for (int L = 1; L <= 30; ++L) {
    const double value = epsilon_k(2, 0.7, L, 1.0);
    CHECK(value < previous);
    previous = value;
  }
  CHECK(epsilon_k(2, 0.7, 200, 1.0) < 1e-30);
}

TEST_CASE("tensor constant") {
  CHECK(tensor_constant({1.5}, {1.5}) == doctest::Approx(1.0));
  CHECK(tensor_constant({1.5}, {0.5}) ==
        doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
  CHECK_THROWS_AS(tensor_constant({0.5}, {1.5}), std::invalid_argument);
  CHECK_THROWS_AS(tensor_constant({1.5}, {0.3}), std::invalid_argument);

  CounterRng rng(73, 0, StreamPurpose::Generic);
  for (int trial = 0; trial < 200; ++trial) {
    const int d = 1 + static_cast<int>(rng.next_u64() % 6);
    std::vector<double> nu(static_cast<std::size_t>(d));
    std::vector<double> alpha(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j) {
      alpha[static_cast<std::size_t>(j)] = rng.next_uniform(0.5, 4.0);
      nu[static_cast<std::size_t>(j)] =
          alpha[static_cast<std::size_t>(j)] + rng.next_uniform(0.0, 3.0);
    }
    const double value = tensor_constant(nu, alpha);
    CHECK(value > 0.0);
    CHECK(value <= 1.0 + 1e-12);
  }
}

TEST_CASE("native_error_bound single-term case") {
  // d=1, p=0, c=1, L=3: the double sum is 2^-1 epsilon^(1)(2) = 1/8,
  // scaled by the leading tensor constant.
  const auto params = unit_params(1, 1.5, 0.5);
  const double leading = tensor_constant(params.nu, params.alpha);
  CHECK(native_error_bound({0}, params, 3) ==
        doctest::Approx(leading * 0.125).epsilon(1e-12));
}

TEST_CASE("native_error_bound equals the direct subset sum for small d") {
  CounterRng rng(79, 0, StreamPurpose::Generic);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 1 + static_cast<int>(rng.next_u64() % 4);
    const double alpha = rng.next_uniform(0.5, 2.0);
    const double gap = rng.next_uniform(0.3, 2.0);
    auto params = unit_params(d, alpha + gap, alpha);
    params.pruning_floor = 0.0;  // exact comparison
    PenaltyVector p(static_cast<std::size_t>(d));
    for (int& v : p) v = static_cast<int>(rng.next_u64() % 4);
    const int L = static_cast<int>(rng.next_u64() % 7);
    CHECK(native_error_bound(p, params, L) ==
          doctest::Approx(bound_direct(p, params, L)).epsilon(1e-11));
  }
}

TEST_CASE("native_error_bound zero-penalty specialization") {
  // with p = 0 the subset sum collapses to binomial(d, k) epsilon^k(L - k)
  for (const int d : {2, 3, 5}) {
    auto params = unit_params(d, 1.5, 0.5);
    params.pruning_floor = 0.0;
    const PenaltyVector zero(static_cast<std::size_t>(d), 0);
    for (const int L : {0, 2, 5}) {
      double expected = 0.0;
      for (int k = 1; k <= d; ++k)
        expected += static_cast<double>(binomial(d, k)) * std::exp2(-1.0 * k) *
                    epsilon_k(k, 1.0, L - k, 1.0);
      expected *= tensor_constant(params.nu, params.alpha);
      CHECK(native_error_bound(zero, params, L) ==
            doctest::Approx(expected).epsilon(1e-12));
    }
  }
}

TEST_CASE("native_error_bound monotone non-increasing in L") {
  PenaltyVector p(10);
  for (int j = 0; j < 10; ++j) p[static_cast<std::size_t>(j)] = j;
  const auto params = unit_params(10, 1.5, 0.5);
  double previous = native_error_bound(p, params, 0);
  for (int L = 1; L <= 12; ++L) {
    const double value = native_error_bound(p, params, L);
    CHECK(value <= previous * (1.0 + 1e-12));
    previous = value;
  }
}

TEST_CASE("pruning floor matches the machine-precision discussion") {
  // linear penalties in d = 11: the full-subset factor is 2^-55 ~ 3e-17
  PenaltyVector p(11);
  int sum = 0;
  for (int j = 0; j < 11; ++j) {
    p[static_cast<std::size_t>(j)] = j;
    sum += j;
  }
  CHECK(sum == 55);
  CHECK(std::exp2(-1.0 * sum) == doctest::Approx(3e-17).epsilon(0.1));

  // floored and unfloored evaluations agree to well under the floor
  auto params = unit_params(11, 1.5, 0.5);
  const double floored = native_error_bound(p, params, 6);
  params.pruning_floor = 0.0;
  const double exact = native_error_bound(p, params, 6);
  CHECK(std::fabs(floored - exact) <= 1e-12 * exact);
}

TEST_CASE("supnorm scaling") {
  CHECK(supnorm_bound({1.0, 1.0}, 0.37) == doctest::Approx(0.37));
  CHECK(supnorm_bound({2.0, 3.0}, 0.5) == doctest::Approx(3.0));
  const auto params = unit_params(3, 1.5, 0.5);
  const double bound = native_error_bound({0, 1, 2}, params, 4);
  CHECK(supnorm_bound({1.0, 1.0, 1.0}, bound) == doctest::Approx(bound));
  CHECK_THROWS_AS(supnorm_bound({1.0}, -0.1), std::invalid_argument);
}

}  // TEST_SUITE
