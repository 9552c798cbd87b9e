#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <unordered_map>
#include <utility>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "lisg/grids.hpp"
#include "lisg/kernels.hpp"
#include "lisg/multiindex.hpp"

namespace lisg {

/// Fitted kernel interpolant: weights w solve Phi(X, X) w = f(X).
struct Interpolant {
  Eigen::MatrixXd points;  // one design point per row
  SeparableMaternKernel kernel;
  Eigen::VectorXd weights;
  Eigen::VectorXd training_values;

  // Present when the design is a structured grid; used for serialization.
  bool structured = false;
  PenaltyVector penalties;
  int level = 0;
  PointFamily family = PointFamily::Uniform;

  /// Posterior mean at x: sum_i w_i Phi(x_i, x).
  double evaluate(const Eigen::VectorXd& x) const;

  /// Native-space norm sqrt(w . f(X)); tiny negative round-off clamps to 0.
  double native_norm() const;
};

/// Solve the full Gram system by Cholesky. The nugget is added to the
/// diagonal; factorization failure without a sufficient nugget throws.
Interpolant fit_dense(const Eigen::MatrixXd& points,
                      const SeparableMaternKernel& kernel,
                      const Eigen::VectorXd& values, double nugget = 0.0);

/// Factorized 1-D component Gram matrices keyed by (dimension index,
/// level). One cache serves one (kernel, family) pair.
class ComponentFactorCache {
 public:
  struct Entry {
    std::vector<double> coordinates;
    Eigen::MatrixXd gram;
    Eigen::LLT<Eigen::MatrixXd> llt;
  };

  const Entry& get(const SeparableMaternKernel& kernel, PointFamily family,
                   int dim_index, int level);
  void clear() { cache_.clear(); }

 private:
  std::map<std::pair<int, int>, Entry> cache_;
};

/// Target evaluations memoized on the exact grid point, so abscissae
/// shared between component grids are evaluated once.
class MemoEvaluator {
 public:
  MemoEvaluator(PointFamily family,
                std::function<double(const Eigen::VectorXd&)> fn)
      : family_(family), fn_(std::move(fn)) {}

  double operator()(const GridPoint& p);
  std::int64_t unique_evaluations() const { return count_; }

 private:
  PointFamily family_;
  std::function<double(const Eigen::VectorXd&)> fn_;
  std::unordered_map<GridPoint, double, GridPointHash> memo_;
  std::int64_t count_ = 0;
};

/// Combination-technique solver: one Kronecker solve per reduced
/// multi-index, scaled by the collapsed combination weight and
/// scatter-added into the global weight vector. Requires the uniform
/// family and kernel lengthscales lambda_j = 2^{p_j}; the result matches
/// fit_dense on the same design.
Interpolant fit_fast(const SparseGridDesign& design,
                     const SeparableMaternKernel& kernel, MemoEvaluator& f,
                     ComponentFactorCache* cache = nullptr);

struct VarianceDiagnostics {
  std::int64_t clamp_events = 0;  // negatives beyond tolerance
  double worst_negative = 0.0;
};

/// Posterior marginal variance at x for the grid design (dim, penalties,
/// level): Phi(x,x) minus the combination of per-component quadratic
/// forms. Clamped at zero; negatives beyond 1e-10 are reported through
/// the diagnostics.
double posterior_variance(int dim, const PenaltyVector& penalties, int level,
                          const SeparableMaternKernel& kernel,
                          const Eigen::VectorXd& x,
                          ComponentFactorCache* cache = nullptr,
                          VarianceDiagnostics* diagnostics = nullptr);

}  // namespace lisg
