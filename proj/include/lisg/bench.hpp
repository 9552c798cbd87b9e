#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "lisg/grids.hpp"
#include "lisg/interpolate.hpp"
#include "lisg/kernels.hpp"
#include "lisg/multiindex.hpp"
#include "lisg/rng.hpp"

namespace lisg {

enum class ScheduleKind { Lin, Log, Zero, Explicit };
enum class DesignKind { Lisg, IsotropicSg, MonteCarlo };
enum class KernelAniso { Matched, Isotropic };

std::string schedule_name(ScheduleKind kind);
std::string design_name(DesignKind kind);
std::string kernel_aniso_name(KernelAniso kind);

/// Penalty vectors from the growth rules: lin p_j = j - 1 and
/// log p_j = ceil(log2 j), perturbed entrywise to ceil((1 + eta) p_j).
PenaltyVector penalty_schedule(ScheduleKind kind, int dim, double eta = 0.0);

/// Random linear combination of kernel translates; its native norm with
/// respect to its own kernel is known exactly.
struct TargetFunction {
  Eigen::MatrixXd centers;  // one center per row
  Eigen::VectorXd coefficients;
  SeparableMaternKernel kernel;

  double operator()(const Eigen::VectorXd& x) const;
  double exact_native_norm() const;
};

struct ExperimentConfig {
  int dim = 2;
  double nu = 1.5;
  ScheduleKind schedule = ScheduleKind::Lin;
  PenaltyVector explicit_penalties;  // used when schedule == Explicit
  double eta = 0.0;
  PointFamily family = PointFamily::Uniform;
  std::vector<int> levels = {0, 1, 2, 3};
  DesignKind design = DesignKind::Lisg;
  KernelAniso kernel_aniso = KernelAniso::Matched;
  int centers = 50;       // target kernel translates, M
  int mc_samples = 100;   // error-estimation samples per run
  int runs = 10;
  std::uint64_t seed = 1;
  double nugget = 0.0;
  double xi_stddev = 2.23606797749978969;  // N(0, 5) read as variance 5
  std::int64_t max_points = 2000000;       // rows above this are skipped
};

/// Design penalties implied by the config (schedule + eta); zero for the
/// isotropic-grid design.
PenaltyVector design_penalties(const ExperimentConfig& config);

/// Interpolating kernel implied by the config.
SeparableMaternKernel interpolating_kernel(const ExperimentConfig& config);

/// Deterministic target realization: centers and coefficients come from
/// streams keyed by (seed, run_index); the target kernel always uses the
/// unperturbed (eta = 0) schedule.
TargetFunction gen_target(const ExperimentConfig& config, int run_index);

/// sqrt(sum (f - s)^2 / sum f^2) over uniform samples; the absolute RMS
/// if the denominator is zero.
double relative_l2_error(const Interpolant& interp,
                         const TargetFunction& target, int n_samples,
                         CounterRng& rng);

struct ResultRow {
  int level = 0;
  std::int64_t n_points = 0;
  double err_mean = 0.0;
  double err_std = 0.0;
  double fit_seconds = 0.0;
  std::string design_label;
  std::string kernel_label;
  bool skipped = false;    // design larger than max_points
  bool failed = false;     // factorization failure et al.
  std::string message;
};

/// One row per level: assemble the design, fit each run (fast path for
/// matched uniform grids, dense otherwise), estimate the relative L2
/// error, and record the mean solve time. Per-row failures are flagged,
/// not fatal.
std::vector<ResultRow> run_convergence(const ExperimentConfig& config);

struct MisspecCurve {
  double eta = 0.0;
  std::vector<ResultRow> rows;
};

/// Convergence curves for perturbed penalties. Targets keep the eta = 0
/// anisotropy; designs and kernels use the perturbed schedule.
std::vector<MisspecCurve> run_misspecification(const ExperimentConfig& config,
                                               const std::vector<double>& etas);

/// Posterior-variance surface on a resolution x resolution closed mesh
/// over the square; entry (i, j) is the variance at x1 = mesh[i],
/// x2 = mesh[j]. Requires dim == 2.
Eigen::MatrixXd run_variance_map(const ExperimentConfig& config, int level,
                                 int resolution,
                                 VarianceDiagnostics* diagnostics = nullptr);

}  // namespace lisg
