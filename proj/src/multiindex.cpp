#include "lisg/multiindex.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace lisg {

namespace {

void require(bool condition, const char* message) {
  if (!condition) throw std::invalid_argument(message);
}

int level_sum(const MultiIndex& l) {
  return std::accumulate(l.begin(), l.end(), 0);
}

int shell_floor(int dim, int level) { return std::max(0, level - dim + 1); }

// Depth-first enumeration in lexicographic order: entries of `current`
// are fixed left to right, so emitted indices are already sorted.
void enumerate_rec(int dim, int pos, int min_sum, int max_sum, int used,
                   MultiIndex& current, std::vector<MultiIndex>& out) {
  if (pos == dim - 1) {
    for (int v = std::max(0, min_sum - used); used + v <= max_sum; ++v) {
      current[pos] = v;
      out.push_back(current);
    }
    current[pos] = 0;
    return;
  }
  for (int v = 0; used + v <= max_sum; ++v) {
    current[pos] = v;
    enumerate_rec(dim, pos + 1, min_sum, max_sum, used + v, current, out);
  }
  current[pos] = 0;
}

std::vector<MultiIndex> enumerate_band(int dim, int min_sum, int max_sum) {
  require(dim >= 1, "dimension must be >= 1");
  std::vector<MultiIndex> out;
  if (max_sum < 0) return out;
  MultiIndex current(dim, 0);
  enumerate_rec(dim, 0, min_sum, max_sum, 0, current, out);
  return out;
}

}  // namespace

std::int64_t binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  __int128 result = 1;
  for (std::int64_t i = 1; i <= k; ++i) {
    result = result * (n - k + i) / i;
    if (result > std::numeric_limits<std::int64_t>::max())
      throw std::overflow_error("binomial coefficient exceeds 64 bits");
  }
  return static_cast<std::int64_t>(result);
}

std::vector<MultiIndex> enumerate_simplex(int dim, int level) {
  require(level >= 0, "level must be >= 0");
  return enumerate_band(dim, 0, level);
}

std::vector<MultiIndex> enumerate_shell(int dim, int level) {
  require(level >= 0, "level must be >= 0");
  return enumerate_band(dim, shell_floor(dim, level), level);
}

std::int64_t combination_coefficient(const MultiIndex& l, int level) {
  const int dim = static_cast<int>(l.size());
  require(dim >= 1, "dimension must be >= 1");
  const int sum = level_sum(l);
  require(sum >= shell_floor(dim, level) && sum <= level,
          "multi-index outside the combination shell");
  const int t = level - sum;
  const std::int64_t magnitude = binomial(dim - 1, t);
  return (t % 2 == 0) ? magnitude : -magnitude;
}

MultiIndex q_map(const MultiIndex& l, const PenaltyVector& penalties) {
  require(l.size() == penalties.size(), "length mismatch");
  MultiIndex a(l.size());
  for (std::size_t j = 0; j < l.size(); ++j)
    a[j] = std::max(l[j] - penalties[j], 0);
  return a;
}

bool in_reduced_set(const MultiIndex& a, const PenaltyVector& penalties,
                    int level) {
  if (a.size() != penalties.size()) return false;
  if (level < 0) return false;
  // Smallest preimage sum puts l_j = a_j + p_j on the support and 0
  // elsewhere; the largest additionally raises every zero entry to p_j.
  int min_sum = 0;
  int slack = 0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (a[j] < 0) return false;
    if (a[j] > 0)
      min_sum += a[j] + penalties[j];
    else
      slack += penalties[j];
  }
  const int dim = static_cast<int>(a.size());
  return min_sum <= level && min_sum + slack >= shell_floor(dim, level);
}

std::vector<MultiIndex> enumerate_reduced(int dim,
                                          const PenaltyVector& penalties,
                                          int level) {
  require(dim >= 1, "dimension must be >= 1");
  require(static_cast<int>(penalties.size()) == dim, "length mismatch");
  require(level >= 0, "level must be >= 0");

  // Cheapest extension cost of a support entry at position >= j; lets the
  // recursion stop as soon as no further dimension fits the budget.
  std::vector<int> suffix_min(dim + 1, std::numeric_limits<int>::max());
  for (int j = dim - 1; j >= 0; --j)
    suffix_min[j] = std::min(suffix_min[j + 1], penalties[j] + 1);

  const int total_penalty =
      std::accumulate(penalties.begin(), penalties.end(), 0);
  const int floor = shell_floor(dim, level);

  std::vector<MultiIndex> out;
  MultiIndex current(dim, 0);
  // zero_slack: sum of penalties over positions currently set to zero.
  auto rec = [&](auto&& self, int pos, int min_sum, int zero_slack) -> void {
    if (pos == dim) {
      if (min_sum + zero_slack >= floor) out.push_back(current);
      return;
    }
    if (min_sum + suffix_min[pos] > level) {
      // No dimension from here on can take a positive entry; the all-zero
      // tail is the only completion.
      if (min_sum + zero_slack >= floor) out.push_back(current);
      return;
    }
    self(self, pos + 1, min_sum, zero_slack);
    const int base = min_sum + penalties[pos] + 1;
    for (int v = 1; base + (v - 1) <= level; ++v) {
      current[pos] = v;
      self(self, pos + 1, base + (v - 1), zero_slack - penalties[pos]);
    }
    current[pos] = 0;
  };
  rec(rec, 0, 0, total_penalty);
  std::sort(out.begin(), out.end());
  return out;
}

std::int64_t bounded_composition_count(std::int64_t m, std::vector<int> caps) {
  require(!caps.empty(), "caps must be nonempty");
  if (m < 0) return 0;
  std::int64_t total_cap = 0;
  for (int c : caps) {
    require(c >= 0, "caps must be nonnegative");
    total_cap += c;
  }
  if (m > total_cap) return 0;
  const int k = static_cast<int>(caps.size());
  // Inclusion-exclusion over subsets w of violated caps. Sorting lets the
  // recursion cut off once cap+1 charges exceed m, where every remaining
  // binomial is zero.
  std::sort(caps.begin(), caps.end());
  std::int64_t total = 0;
  // charged = |w| + sum of caps over w, the total shift of the subset.
  auto rec = [&](auto&& self, int start, int size, std::int64_t charged)
      -> void {
    const std::int64_t term = binomial(m + k - charged - 1, k - 1);
    total += (size % 2 == 0) ? term : -term;
    for (int i = start; i < k; ++i) {
      if (charged + caps[i] + 1 > m) break;
      self(self, i + 1, size + 1, charged + caps[i] + 1);
    }
  };
  rec(rec, 0, 0, 0);
  return total;
}

std::int64_t reduced_weight(const MultiIndex& a,
                            const PenaltyVector& penalties, int level) {
  require(in_reduced_set(a, penalties, level),
          "multi-index not in the reduced set");
  const int dim = static_cast<int>(a.size());

  std::vector<int> zero_caps;        // penalties over u(a) = {j : a_j = 0}
  std::int64_t support_sum = 0;      // |(a + p)_{v(a)}|_1
  for (int j = 0; j < dim; ++j) {
    if (a[j] == 0)
      zero_caps.push_back(penalties[j]);
    else
      support_sum += a[j] + penalties[j];
  }

  if (zero_caps.empty()) {
    // Singleton preimage l = a + p.
    const std::int64_t t = level - support_sum;
    const std::int64_t magnitude = binomial(dim - 1, t);
    return (t % 2 == 0) ? magnitude : -magnitude;
  }

  const std::int64_t cap_sum =
      std::accumulate(zero_caps.begin(), zero_caps.end(), std::int64_t{0});
  __int128 weight = 0;
  // Terms with level - m - support_sum outside [0, dim-1] vanish.
  std::int64_t m_hi = std::min<std::int64_t>(cap_sum, level - support_sum);
  std::int64_t m_lo = std::max<std::int64_t>(0, level - support_sum - (dim - 1));
  for (std::int64_t m = m_lo; m <= m_hi; ++m) {
    const std::int64_t compositions = bounded_composition_count(m, zero_caps);
    if (compositions == 0) continue;
    const std::int64_t t = level - m - support_sum;
    const __int128 term =
        static_cast<__int128>(binomial(dim - 1, t)) * compositions;
    weight += (t % 2 == 0) ? term : -term;
  }
  if (weight > std::numeric_limits<std::int64_t>::max() ||
      weight < std::numeric_limits<std::int64_t>::min())
    throw std::overflow_error("combination weight exceeds 64 bits");
  return static_cast<std::int64_t>(weight);
}

RhoImage rho(const MultiIndex& l) {
  RhoImage image;
  for (std::size_t j = 0; j < l.size(); ++j) {
    require(l[j] >= 0, "multi-index entries must be >= 0");
    if (l[j] > 0) {
      image.support.push_back(static_cast<int>(j));
      image.positive.push_back(l[j]);
    }
  }
  return image;
}

MultiIndex rho_inverse(const RhoImage& image, int dim) {
  require(dim >= 1, "dimension must be >= 1");
  require(image.support.size() == image.positive.size(),
          "support/value length mismatch");
  MultiIndex l(dim, 0);
  int previous = -1;
  for (std::size_t i = 0; i < image.support.size(); ++i) {
    const int j = image.support[i];
    require(j > previous && j < dim, "support must be strictly increasing");
    require(image.positive[i] > 0, "compressed entries must be positive");
    l[j] = image.positive[i];
    previous = j;
  }
  return l;
}

}  // namespace lisg
