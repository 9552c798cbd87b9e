#include "lisg/grids.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace lisg {

namespace {

void require(bool condition, const char* message) {
  if (!condition) throw std::invalid_argument(message);
}

constexpr double kPi = 3.14159265358979323846;

Point1 canonicalise(std::int64_t num, std::int32_t log_den) {
  if (num == 0) return Point1{0, 0};
  while (num % 2 == 0 && log_den > 0) {
    num /= 2;
    --log_den;
  }
  return Point1{num, log_den};
}

}  // namespace

std::string family_name(PointFamily family) {
  switch (family) {
    case PointFamily::Uniform: return "uniform";
    case PointFamily::Boundary: return "boundary";
    case PointFamily::ClenshawCurtis: return "clenshaw-curtis";
  }
  return "uniform";
}

PointFamily family_from_name(const std::string& name) {
  if (name == "uniform") return PointFamily::Uniform;
  if (name == "boundary") return PointFamily::Boundary;
  if (name == "clenshaw-curtis" || name == "cc")
    return PointFamily::ClenshawCurtis;
  throw std::invalid_argument("unknown point family: " + name);
}

bool point1_less(const Point1& a, const Point1& b) {
  const __int128 lhs = static_cast<__int128>(a.num) << b.log_den;
  const __int128 rhs = static_cast<__int128>(b.num) << a.log_den;
  return lhs < rhs;
}

Point1 make_dyadic(std::int64_t num, std::int32_t log_den) {
  require(log_den >= 0 && log_den < 62, "denominator exponent out of range");
  require(std::abs(num) * 2 <= (std::int64_t{1} << log_den),
          "dyadic point outside [-1/2, 1/2]");
  return canonicalise(num, log_den);
}

Point1 make_cc(std::int64_t num, std::int32_t log_den) {
  require(log_den >= 0 && log_den < 62, "denominator exponent out of range");
  const std::int64_t den = std::int64_t{1} << log_den;
  require(std::abs(num) < den, "angle index outside (-pi, pi)");
  // Fold angles beyond pi/2 onto the monotone branch: sin(pi - t) = sin(t).
  if (std::abs(num) * 2 > den)
    num = (num > 0) ? den - num : -(den + num);
  return canonicalise(num, log_den);
}

double point1_value(const Point1& p, PointFamily family) {
  if (family == PointFamily::ClenshawCurtis)
    return std::sin(kPi * std::ldexp(static_cast<double>(p.num), -p.log_den)) /
           2.0;
  return std::ldexp(static_cast<double>(p.num), -p.log_den);
}

std::vector<Point1> uniform_points(int level) {
  require(level >= 0 && level < 40, "level out of range");
  const std::int64_t half = std::int64_t{1} << level;  // n/2^{l+1}, |n| < 2^l
  std::vector<Point1> out;
  out.reserve(static_cast<std::size_t>(2 * half - 1));
  for (std::int64_t n = -(half - 1); n <= half - 1; ++n)
    out.push_back(make_dyadic(n, level + 1));
  return out;
}

std::vector<Point1> penalised_points(int level, int penalty) {
  require(penalty >= 0, "penalty must be >= 0");
  return uniform_points(std::max(level - penalty, 0));
}

std::vector<Point1> cc_points(int level) {
  require(level >= 0 && level < 40, "level out of range");
  if (level == 0) return {Point1{0, 0}};
  const std::int64_t quarter = std::int64_t{1} << (level - 1);
  std::vector<Point1> out;
  out.reserve(static_cast<std::size_t>(2 * quarter + 1));
  // Canonical angle indices cover [-pi/2, pi/2]; the remaining angles in
  // the definition fold onto these with equal sines.
  for (std::int64_t n = -quarter; n <= quarter; ++n)
    out.push_back(make_cc(n, level));
  return out;
}

std::vector<Point1> boundary_points(int level) {
  require(level >= 0, "level must be >= 0");
  if (level == 0) return {Point1{0, 0}};
  std::vector<Point1> out;
  out.push_back(make_dyadic(-1, 1));
  if (level >= 2) {
    auto interior = uniform_points(level - 1);
    out.insert(out.end(), interior.begin(), interior.end());
  } else {
    out.push_back(Point1{0, 0});
  }
  out.push_back(make_dyadic(1, 1));
  return out;
}

std::vector<Point1> family_points(PointFamily family, int level) {
  switch (family) {
    case PointFamily::Uniform: return uniform_points(level);
    case PointFamily::Boundary: return boundary_points(level);
    case PointFamily::ClenshawCurtis: return cc_points(level);
  }
  return uniform_points(level);
}

std::vector<Point1> penalised_family_points(PointFamily family, int level,
                                            int penalty) {
  require(penalty >= 0, "penalty must be >= 0");
  return family_points(family, std::max(level - penalty, 0));
}

std::size_t GridPointHash::operator()(const GridPoint& p) const {
  std::size_t h = 0xcbf29ce484222325ull;
  auto mix = [&h](std::uint64_t v) {
    h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  };
  for (const Point1& c : p) {
    mix(static_cast<std::uint64_t>(c.num));
    mix(static_cast<std::uint64_t>(c.log_den));
  }
  return h;
}

Eigen::VectorXd SparseGridDesign::coordinates(std::int64_t i) const {
  const GridPoint& p = points.at(static_cast<std::size_t>(i));
  Eigen::VectorXd x(dim);
  for (int j = 0; j < dim; ++j) x[j] = point1_value(p[j], family);
  return x;
}

Eigen::MatrixXd SparseGridDesign::coordinate_matrix() const {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(points.size()), dim);
  for (std::size_t i = 0; i < points.size(); ++i)
    m.row(static_cast<Eigen::Index>(i)) =
        coordinates(static_cast<std::int64_t>(i)).transpose();
  return m;
}

const std::vector<std::int64_t>& SparseGridDesign::component_map(
    const MultiIndex& l) const {
  const auto it = component_maps.find(q_map(l, penalties));
  if (it == component_maps.end())
    throw std::invalid_argument("no component map for this multi-index");
  return it->second;
}

SparseGridDesign assemble_lisg(int dim, const PenaltyVector& penalties,
                               int level, PointFamily family) {
  require(dim >= 1, "dimension must be >= 1");
  require(static_cast<int>(penalties.size()) == dim, "length mismatch");
  require(level >= 0, "level must be >= 0");

  SparseGridDesign design;
  design.dim = dim;
  design.penalties = penalties;
  design.level = level;
  design.family = family;

  const std::vector<MultiIndex> reduced =
      enumerate_reduced(dim, penalties, level);

  // 1-D sets per distinct level, shared across dimensions and components.
  int max_level = 0;
  for (const MultiIndex& a : reduced)
    max_level = std::max(max_level, *std::max_element(a.begin(), a.end()));
  std::vector<std::vector<Point1>> axis(max_level + 1);
  for (int l = 0; l <= max_level; ++l) axis[l] = family_points(family, l);

  // Pass 1: collect the union of all component tensor grids.
  std::unordered_map<GridPoint, std::int64_t, GridPointHash> index;
  GridPoint point(dim);
  for (const MultiIndex& a : reduced) {
    std::vector<int> counter(dim, 0);
    for (;;) {
      for (int j = 0; j < dim; ++j) point[j] = axis[a[j]][counter[j]];
      index.emplace(point, 0);
      int j = dim - 1;
      while (j >= 0 && ++counter[j] == static_cast<int>(axis[a[j]].size())) {
        counter[j] = 0;
        --j;
      }
      if (j < 0) break;
    }
  }

  design.points.reserve(index.size());
  for (const auto& [p, unused] : index) design.points.push_back(p);
  std::sort(design.points.begin(), design.points.end(),
            [](const GridPoint& a, const GridPoint& b) {
              for (std::size_t j = 0; j < a.size(); ++j) {
                if (a[j] == b[j]) continue;
                return point1_less(a[j], b[j]);
              }
              return false;
            });
  for (std::size_t i = 0; i < design.points.size(); ++i)
    index[design.points[i]] = static_cast<std::int64_t>(i);
  design.point_index = std::move(index);

  // Pass 2: scatter maps, local lexicographic (last dimension fastest).
  for (const MultiIndex& a : reduced) {
    std::int64_t size = 1;
    for (int j = 0; j < dim; ++j)
      size *= static_cast<std::int64_t>(axis[a[j]].size());
    std::vector<std::int64_t> map;
    map.reserve(static_cast<std::size_t>(size));
    std::vector<int> counter(dim, 0);
    for (;;) {
      for (int j = 0; j < dim; ++j) point[j] = axis[a[j]][counter[j]];
      map.push_back(design.point_index.at(point));
      int j = dim - 1;
      while (j >= 0 && ++counter[j] == static_cast<int>(axis[a[j]].size())) {
        counter[j] = 0;
        --j;
      }
      if (j < 0) break;
    }
    design.component_maps.emplace(a, std::move(map));
  }
  return design;
}

std::int64_t count_isotropic(int dim, int level) {
  require(dim >= 1, "dimension must be >= 1");
  if (level < 0) return 0;
  if (level >= 62)  // 2^level alone exceeds the representable sizes
    throw std::overflow_error("design size exceeds 64 bits");
  __int128 total = 0;
  for (int l = 0; l <= level; ++l) {
    total += static_cast<__int128>(binomial(l + dim - 1, dim - 1))
             << l;
    if (total > std::numeric_limits<std::int64_t>::max())
      throw std::overflow_error("design size exceeds 64 bits");
  }
  return static_cast<std::int64_t>(total);
}

std::int64_t count_lisg(int dim, const PenaltyVector& penalties, int level) {
  require(dim >= 1, "dimension must be >= 1");
  require(static_cast<int>(penalties.size()) == dim, "length mismatch");
  if (level < 0) return 0;
  if (level >= 62)  // the axis grid alone exceeds the representable sizes
    throw std::overflow_error("design size exceeds 64 bits");
  const int L = level;

  // The double sum over subsets depends only on the subset size k and the
  // penalty sum s, and only pairs with k + s <= L contribute. Counting
  // subsets per (k, s) by dynamic programming keeps d = 100 with any
  // penalty vector cheap.
  const int kmax = std::min(dim, L);
  std::vector<std::vector<__int128>> subsets(
      kmax + 1, std::vector<__int128>(L + 1, 0));
  subsets[0][0] = 1;
  constexpr __int128 kLimit = std::numeric_limits<std::int64_t>::max();
  for (int j = 0; j < dim; ++j) {
    const int pj = penalties[j];
    require(pj >= 0, "penalties must be >= 0");
    if (pj + 1 > L) continue;
    for (int k = kmax; k >= 1; --k) {
      for (int s = L - k; s >= pj; --s) {
        subsets[k][s] += subsets[k - 1][s - pj];
        if (subsets[k][s] > kLimit)
          throw std::overflow_error("design size exceeds 64 bits");
      }
    }
  }

  __int128 total = 1;
  for (int k = 1; k <= kmax; ++k) {
    for (int s = 0; s + k <= L; ++s) {
      if (subsets[k][s] == 0) continue;
      const __int128 term = subsets[k][s] * count_isotropic(k, L - s - k);
      if (term > (kLimit >> k))
        throw std::overflow_error("design size exceeds 64 bits");
      total += term << k;
      if (total > kLimit)
        throw std::overflow_error("design size exceeds 64 bits");
    }
  }
  return static_cast<std::int64_t>(total);
}

double fill_distance_uniform(int level) {
  require(level >= 0, "level must be >= 0");
  return std::ldexp(1.0, -(level + 1));
}

}  // namespace lisg
