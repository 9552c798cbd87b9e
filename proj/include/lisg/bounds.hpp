#pragma once

#include <vector>

#include "lisg/multiindex.hpp"

namespace lisg {

/// Parameters of the level-L error bound: per-dimension smoothness nu and
/// target smoothness alpha with a common gap c = nu_j - alpha_j, the
/// (unanalysed) per-dimension approximation constant, and the standard
/// deviations used for the sup-norm scaling.
struct BoundParams {
  std::vector<double> nu;
  std::vector<double> alpha;
  std::vector<double> sigma;
  double approximation_constant = 1.0;  // per-dimension factor inside epsilon^(k)
  double pruning_floor = 1e-17;    // drop subset terms below this factor
};

/// Tail sum C * sum over multi-indices outside the level-L simplex in k
/// dimensions of 2^{-c |l|_1}, in closed form. Negative levels clamp to
/// level 0. Requires c > 0 (the sum diverges at c = 0).
double epsilon_k(int k, double gap, long long level, double constant);

/// Product of gamma-ratio square roots sqrt(G(a+1/2)G(n) / (G(a)G(n+1/2)));
/// always in (0, 1] under the hypothesis nu_j >= alpha_j >= 1/2.
double tensor_constant(const std::vector<double>& nu,
                       const std::vector<double>& alpha);

/// The level-L native-space error bound: tensor constant times the double
/// sum over subspace sizes k and subsets u of 2^{-ck} 2^{-c|p_u|}
/// epsilon^(k)(L - |p_u| - k). Subsets are grouped by penalty sum and
/// counted by dynamic programming; tails below the pruning floor are
/// truncated.
double native_error_bound(const PenaltyVector& penalties,
                       const BoundParams& params, int level);

/// Sup-norm scaling: product of the sigmas times the bound value.
double supnorm_bound(const std::vector<double>& sigma, double bound_value);

}  // namespace lisg
