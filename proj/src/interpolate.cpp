#include "lisg/interpolate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lisg {

namespace {

void require(bool condition, const char* message) {
  if (!condition) throw std::invalid_argument(message);
}

using VectorXld = Eigen::Matrix<long double, Eigen::Dynamic, 1>;

// Apply K_j^{-1} along every mode of the value tensor (row-major layout,
// last dimension fastest).
void kronecker_solve_once(const std::vector<
                              const ComponentFactorCache::Entry*>& factors,
                          Eigen::VectorXd& values) {
  const int dim = static_cast<int>(factors.size());
  Eigen::Index stride = 1;
  for (int j = dim - 1; j >= 0; --j) {
    const auto n = static_cast<Eigen::Index>(factors[j]->coordinates.size());
    const Eigen::Index block = n * stride;
    const Eigen::Index blocks = values.size() / block;
    Eigen::MatrixXd fibers(n, stride);
    for (Eigen::Index b = 0; b < blocks; ++b) {
      const Eigen::Index base = b * block;
      for (Eigen::Index i = 0; i < n; ++i)
        fibers.row(i) = values.segment(base + i * stride, stride).transpose();
      factors[j]->llt.solveInPlace(fibers);
      for (Eigen::Index i = 0; i < n; ++i)
        values.segment(base + i * stride, stride) = fibers.row(i).transpose();
    }
    stride *= n;
  }
}

// Extended-precision mode products with the Gram matrices, for residuals.
void kronecker_multiply_ld(const std::vector<
                               const ComponentFactorCache::Entry*>& factors,
                           VectorXld& values) {
  const int dim = static_cast<int>(factors.size());
  Eigen::Index stride = 1;
  for (int j = dim - 1; j >= 0; --j) {
    const auto n = static_cast<Eigen::Index>(factors[j]->coordinates.size());
    const Eigen::Index block = n * stride;
    const Eigen::Index blocks = values.size() / block;
    const Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic> gram =
        factors[j]->gram.cast<long double>();
    Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic> fibers(n,
                                                                      stride);
    for (Eigen::Index b = 0; b < blocks; ++b) {
      const Eigen::Index base = b * block;
      for (Eigen::Index i = 0; i < n; ++i)
        fibers.row(i) = values.segment(base + i * stride, stride).transpose();
      fibers = gram * fibers;
      for (Eigen::Index i = 0; i < n; ++i)
        values.segment(base + i * stride, stride) = fibers.row(i).transpose();
    }
    stride *= n;
  }
}

// Kronecker solve with one refinement pass through extended-precision
// residuals; recovers the digits the per-mode solves lose on fine grids.
void kronecker_solve(const std::vector<const ComponentFactorCache::Entry*>&
                         factors,
                     Eigen::VectorXd& values) {
  const Eigen::VectorXd rhs = values;
  kronecker_solve_once(factors, values);
  VectorXld product = values.cast<long double>();
  kronecker_multiply_ld(factors, product);
  Eigen::VectorXd residual(values.size());
  for (Eigen::Index i = 0; i < values.size(); ++i)
    residual[i] =
        static_cast<double>(static_cast<long double>(rhs[i]) - product[i]);
  kronecker_solve_once(factors, residual);
  values += residual;
}

}  // namespace

double Interpolant::evaluate(const Eigen::VectorXd& x) const {
  require(x.size() == points.cols(), "dimension mismatch");
  double sum = 0.0;
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    if (weights[i] == 0.0) continue;
    sum += weights[i] * kernel(points.row(i).transpose(), x);
  }
  return sum;
}

double Interpolant::native_norm() const {
  const double square = weights.dot(training_values);
  return std::sqrt(std::max(square, 0.0));
}

// Up to this size an extended-precision Gram copy is kept during fitting,
// so iterative refinement converges to the exact-product system that the
// Kronecker-structured solver works with.
constexpr Eigen::Index kExtendedGramLimit = 3072;

Interpolant fit_dense(const Eigen::MatrixXd& points,
                      const SeparableMaternKernel& kernel,
                      const Eigen::VectorXd& values, double nugget) {
  const Eigen::Index n = points.rows();
  require(values.size() == n, "one value per point required");
  require(points.cols() == kernel.dim(), "dimension mismatch");
  require(nugget >= 0.0, "nugget must be >= 0");

  const bool extended = n <= kExtendedGramLimit;
  Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic> gram_ext;
  if (extended) gram_ext.resize(n, n);
  Eigen::MatrixXd gram(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const long double diagonal =
        static_cast<long double>(kernel.total_variance()) + nugget;
    gram(i, i) = static_cast<double>(diagonal);
    if (extended) gram_ext(i, i) = diagonal;
    for (Eigen::Index k = i + 1; k < n; ++k) {
      const long double value = kernel.eval_extended(
          points.row(i).transpose(), points.row(k).transpose());
      gram(i, k) = static_cast<double>(value);
      gram(k, i) = gram(i, k);
      if (extended) {
        gram_ext(i, k) = value;
        gram_ext(k, i) = value;
      }
    }
  }

  Eigen::LLT<Eigen::MatrixXd> llt(gram);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error(
        "fit_dense: Gram factorization failed (matrix not numerically SPD; "
        "consider a nugget)");

  Eigen::VectorXd weights = llt.solve(values);
  // Iterative refinement with extended-precision residuals; recovers the
  // digits the factorization loses on ill-conditioned Gram matrices.
  for (int step = 0; step < 2; ++step) {
    Eigen::VectorXd residual(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      long double acc = values[i];
      if (extended) {
        for (Eigen::Index k = 0; k < n; ++k)
          acc -= gram_ext(i, k) * static_cast<long double>(weights[k]);
      } else {
        for (Eigen::Index k = 0; k < n; ++k)
          acc -= static_cast<long double>(gram(i, k)) *
                 static_cast<long double>(weights[k]);
      }
      residual[i] = static_cast<double>(acc);
    }
    if (residual.cwiseAbs().maxCoeff() == 0.0) break;
    weights += llt.solve(residual);
  }

  Interpolant interp;
  interp.points = points;
  interp.kernel = kernel;
  interp.weights = std::move(weights);
  interp.training_values = values;
  return interp;
}

const ComponentFactorCache::Entry& ComponentFactorCache::get(
    const SeparableMaternKernel& kernel, PointFamily family, int dim_index,
    int level) {
  const auto key = std::make_pair(dim_index, level);
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;

  Entry entry;
  const std::vector<Point1> pts = family_points(family, level);
  entry.coordinates.reserve(pts.size());
  for (const Point1& p : pts)
    entry.coordinates.push_back(point1_value(p, family));
  entry.gram = gram_1d(kernel.dims.at(static_cast<std::size_t>(dim_index)),
                       entry.coordinates)
                   .entries;
  entry.llt.compute(entry.gram);
  if (entry.llt.info() != Eigen::Success)
    throw std::runtime_error(
        "component Gram factorization failed (matrix not numerically SPD)");
  return cache_.emplace(key, std::move(entry)).first->second;
}

double MemoEvaluator::operator()(const GridPoint& p) {
  const auto it = memo_.find(p);
  if (it != memo_.end()) return it->second;
  Eigen::VectorXd x(static_cast<Eigen::Index>(p.size()));
  for (std::size_t j = 0; j < p.size(); ++j)
    x[static_cast<Eigen::Index>(j)] = point1_value(p[j], family_);
  const double value = fn_(x);
  memo_.emplace(p, value);
  ++count_;
  return value;
}

Interpolant fit_fast(const SparseGridDesign& design,
                     const SeparableMaternKernel& kernel, MemoEvaluator& f,
                     ComponentFactorCache* cache) {
  require(design.family == PointFamily::Uniform,
          "fit_fast requires the uniform point family");
  require(kernel.dim() == design.dim, "dimension mismatch");
  for (int j = 0; j < design.dim; ++j) {
    require(kernel.dims[static_cast<std::size_t>(j)].lambda ==
                std::ldexp(1.0, design.penalties[static_cast<std::size_t>(j)]),
            "fit_fast requires lengthscales lambda_j = 2^{p_j}");
  }

  ComponentFactorCache local_cache;
  ComponentFactorCache& factors = cache ? *cache : local_cache;

  const auto n_points = static_cast<Eigen::Index>(design.points.size());
  // Signed combination terms can exceed the final weights by orders of
  // magnitude; accumulate in extended precision.
  VectorXld weights = VectorXld::Zero(n_points);

  // Axis point sets per level, shared across components.
  std::vector<std::vector<Point1>> axis;
  auto axis_points = [&](int level) -> const std::vector<Point1>& {
    if (level >= static_cast<int>(axis.size()))
      axis.resize(static_cast<std::size_t>(level) + 1);
    auto& pts = axis[static_cast<std::size_t>(level)];
    if (pts.empty()) pts = family_points(design.family, level);
    return pts;
  };

  GridPoint point(static_cast<std::size_t>(design.dim));
  for (const auto& [a, scatter] : design.component_maps) {
    const std::int64_t weight = reduced_weight(a, design.penalties,
                                               design.level);
    if (weight == 0) continue;

    std::vector<const ComponentFactorCache::Entry*> entries(
        static_cast<std::size_t>(design.dim));
    for (int j = 0; j < design.dim; ++j)
      entries[static_cast<std::size_t>(j)] = &factors.get(
          kernel, design.family, j, a[static_cast<std::size_t>(j)]);

    // Evaluate f on the component tensor grid in local lexicographic
    // order (matches the scatter map).
    Eigen::VectorXd values(static_cast<Eigen::Index>(scatter.size()));
    std::vector<int> counter(static_cast<std::size_t>(design.dim), 0);
    for (Eigen::Index local = 0;; ++local) {
      for (int j = 0; j < design.dim; ++j)
        point[static_cast<std::size_t>(j)] =
            axis_points(a[static_cast<std::size_t>(j)])
                [static_cast<std::size_t>(counter[static_cast<std::size_t>(j)])];
      values[local] = f(point);
      int j = design.dim - 1;
      while (j >= 0) {
        auto& c = counter[static_cast<std::size_t>(j)];
        const int size = static_cast<int>(
            axis_points(a[static_cast<std::size_t>(j)]).size());
        if (++c < size) break;
        c = 0;
        --j;
      }
      if (j < 0) break;
    }

    kronecker_solve(entries, values);

    const auto scale = static_cast<long double>(weight);
    for (std::size_t local = 0; local < scatter.size(); ++local)
      weights[scatter[local]] +=
          scale * static_cast<long double>(
                      values[static_cast<Eigen::Index>(local)]);
  }

  Interpolant interp;
  interp.points = design.coordinate_matrix();
  interp.kernel = kernel;
  interp.weights = weights.cast<double>();
  interp.training_values.resize(n_points);
  for (Eigen::Index i = 0; i < n_points; ++i)
    interp.training_values[i] = f(design.points[static_cast<std::size_t>(i)]);
  interp.structured = true;
  interp.penalties = design.penalties;
  interp.level = design.level;
  interp.family = design.family;
  return interp;
}

double posterior_variance(int dim, const PenaltyVector& penalties, int level,
                          const SeparableMaternKernel& kernel,
                          const Eigen::VectorXd& x,
                          ComponentFactorCache* cache,
                          VarianceDiagnostics* diagnostics) {
  require(dim >= 1 && static_cast<int>(penalties.size()) == dim,
          "length mismatch");
  require(kernel.dim() == dim && x.size() == dim, "dimension mismatch");
  require(level >= 0, "level must be >= 0");

  ComponentFactorCache local_cache;
  ComponentFactorCache& factors = cache ? *cache : local_cache;

  double explained = 0.0;
  for (const MultiIndex& a : enumerate_reduced(dim, penalties, level)) {
    const std::int64_t weight = reduced_weight(a, penalties, level);
    if (weight == 0) continue;
    double product = 1.0;
    for (int j = 0; j < dim; ++j) {
      const auto& entry = factors.get(kernel, PointFamily::Uniform, j,
                                      a[static_cast<std::size_t>(j)]);
      const Eigen::VectorXd k = cross_vector(
          kernel.dims[static_cast<std::size_t>(j)], x[j], entry.coordinates);
      product *= k.dot(entry.llt.solve(k));
    }
    explained += static_cast<double>(weight) * product;
  }

  const double variance = kernel.total_variance() - explained;
  if (variance < 0.0) {
    if (variance < -1e-10 && diagnostics) {
      ++diagnostics->clamp_events;
      diagnostics->worst_negative =
          std::min(diagnostics->worst_negative, variance);
    }
    return 0.0;
  }
  return variance;
}

}  // namespace lisg
