#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>

#include "lisg/multiindex.hpp"

namespace lisg {

enum class PointFamily { Uniform, Boundary, ClenshawCurtis };

std::string family_name(PointFamily family);
PointFamily family_from_name(const std::string& name);

/// One-dimensional abscissa in canonical exact form. For the uniform and
/// boundary families the value is num / 2^log_den; for Clenshaw-Curtis it
/// is sin(num * pi / 2^log_den) / 2. Canonical form (num odd or zero with
/// minimal log_den, |value| <= 1/2) makes equality and ordering exact.
struct Point1 {
  std::int64_t num = 0;
  std::int32_t log_den = 0;

  // Field order, not value order; gives containers a strict weak order.
  friend auto operator<=>(const Point1&, const Point1&) = default;
};

/// Exact value comparison. Both families are strictly increasing in
/// num / 2^log_den on the canonical range, so one comparator serves both.
bool point1_less(const Point1& a, const Point1& b);

Point1 make_dyadic(std::int64_t num, std::int32_t log_den);
Point1 make_cc(std::int64_t num, std::int32_t log_den);
double point1_value(const Point1& p, PointFamily family);

/// X_l: the 2^{l+1} - 1 points n/2^{l+1} strictly inside (-1/2, 1/2).
std::vector<Point1> uniform_points(int level);

/// Penalised set X_l^p = X_{l-p} for l >= p+1 and {0} for 0 <= l <= p.
std::vector<Point1> penalised_points(int level, int penalty);

/// Clenshaw-Curtis abscissae {sin(theta)/2 : theta = n pi / 2^l, |theta| < pi}.
std::vector<Point1> cc_points(int level);

/// Uniform points including the endpoints: X_{l-1} united with {-1/2, 1/2}
/// for l >= 2, with the l = 0, 1 base cases.
std::vector<Point1> boundary_points(int level);

std::vector<Point1> family_points(PointFamily family, int level);
std::vector<Point1> penalised_family_points(PointFamily family, int level,
                                            int penalty);

using GridPoint = std::vector<Point1>;

struct GridPointHash {
  std::size_t operator()(const GridPoint& p) const;
};

/// Assembled sparse-grid design: deduplicated points in global
/// lexicographic order plus, for every reduced multi-index a, the scatter
/// map from the component tensor grid's local lexicographic ordering to
/// global point indices.
struct SparseGridDesign {
  int dim = 0;
  PenaltyVector penalties;
  int level = 0;
  PointFamily family = PointFamily::Uniform;
  std::vector<GridPoint> points;
  std::map<MultiIndex, std::vector<std::int64_t>> component_maps;
  std::unordered_map<GridPoint, std::int64_t, GridPointHash> point_index;

  Eigen::VectorXd coordinates(std::int64_t i) const;
  Eigen::MatrixXd coordinate_matrix() const;

  /// Scatter map for a shell multi-index l, looked up through q_map.
  const std::vector<std::int64_t>& component_map(const MultiIndex& l) const;
};

SparseGridDesign assemble_lisg(int dim, const PenaltyVector& penalties,
                               int level, PointFamily family);

/// Closed-form |X^tensor_{k,0}(L)| for the uniform family; 0 for L < 0.
std::int64_t count_isotropic(int dim, int level);

/// Closed-form design size for the uniform family, any penalty vector.
std::int64_t count_lisg(int dim, const PenaltyVector& penalties, int level);

/// Fill distance of uniform_points(level) in [-1/2, 1/2]: exactly 2^-(l+1).
double fill_distance_uniform(int level);

}  // namespace lisg
