#pragma once

#include <cstdint>
#include <vector>

namespace lisg {

/// Level multi-index l in N_0^d; one entry per input dimension.
using MultiIndex = std::vector<int>;

/// Integer penalty exponents p; lengthscale in dimension j is 2^{p_j}.
using PenaltyVector = std::vector<int>;

/// Strictly increasing subset of {0,...,d-1} (zero-based).
using IndexSubset = std::vector<int>;

/// Exact binomial coefficient. Returns 0 for k < 0 or k > n (including
/// negative n). Throws std::overflow_error if the value does not fit in
/// a signed 64-bit integer.
std::int64_t binomial(std::int64_t n, std::int64_t k);

/// All l in N_0^d with |l|_1 <= level, in ascending lexicographic order.
/// Cardinality binomial(level + dim, dim).
std::vector<MultiIndex> enumerate_simplex(int dim, int level);

/// The combination shell: all l with max{0, level-dim+1} <= |l|_1 <= level,
/// in ascending lexicographic order.
std::vector<MultiIndex> enumerate_shell(int dim, int level);

/// Combination coefficient b_L(l) = (-1)^{L-|l|_1} C(d-1, L-|l|_1) for a
/// shell member l. Throws std::invalid_argument for l outside the shell.
std::int64_t combination_coefficient(const MultiIndex& l, int level);

/// Componentwise clamped subtraction a_j = max{l_j - p_j, 0}.
MultiIndex q_map(const MultiIndex& l, const PenaltyVector& penalties);

/// Membership test for the reduced index set (the image of the shell
/// under q_map) without enumerating preimages.
bool in_reduced_set(const MultiIndex& a, const PenaltyVector& penalties,
                    int level);

/// The reduced index set: image of enumerate_shell(dim, level) under q_map,
/// deduplicated, ascending lexicographic. Uses pruned recursion so large
/// dimensions with growing penalties stay cheap; never materialises the
/// shell itself.
std::vector<MultiIndex> enumerate_reduced(int dim,
                                          const PenaltyVector& penalties,
                                          int level);

/// Number of compositions: #{ l in N_0^k : |l|_1 = m, l_i <= caps_i },
/// computed by inclusion-exclusion over subsets of the capped positions.
std::int64_t bounded_composition_count(std::int64_t m, std::vector<int> caps);

/// Collapsed combination weight u_{p,L}(a): the sum of b_L over the q_map
/// preimage of a within the shell, evaluated in closed form. Throws
/// std::invalid_argument if a is not in the reduced set.
std::int64_t reduced_weight(const MultiIndex& a,
                            const PenaltyVector& penalties, int level);

/// Support/value split of a multi-index: positions of the non-zero entries
/// plus the compressed positive entries. The zero multi-index maps to a
/// pair of empty sequences.
struct RhoImage {
  IndexSubset support;   // zero-based, strictly increasing
  MultiIndex positive;   // entries > 0, same length as support
};

RhoImage rho(const MultiIndex& l);
MultiIndex rho_inverse(const RhoImage& image, int dim);

}  // namespace lisg
