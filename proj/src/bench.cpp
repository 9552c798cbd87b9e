#include "lisg/bench.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include <Eigen/Cholesky>

namespace lisg {

namespace {

void require(bool condition, const char* message) {
  if (!condition) throw std::invalid_argument(message);
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       start)
      .count();
}

}  // namespace

std::string schedule_name(ScheduleKind kind) {
  switch (kind) {
    case ScheduleKind::Lin: return "lin";
    case ScheduleKind::Log: return "log";
    case ScheduleKind::Zero: return "zero";
    case ScheduleKind::Explicit: return "list";
  }
  return "lin";
}

std::string design_name(DesignKind kind) {
  switch (kind) {
    case DesignKind::Lisg: return "lisg";
    case DesignKind::IsotropicSg: return "sg";
    case DesignKind::MonteCarlo: return "mc";
  }
  return "lisg";
}

std::string kernel_aniso_name(KernelAniso kind) {
  return kind == KernelAniso::Matched ? "matched" : "isotropic";
}

PenaltyVector penalty_schedule(ScheduleKind kind, int dim, double eta) {
  require(dim >= 1, "dimension must be >= 1");
  require(eta >= -1.0, "eta must be >= -1");
  require(kind != ScheduleKind::Explicit,
          "explicit schedules carry their own penalties");
  PenaltyVector p(static_cast<std::size_t>(dim), 0);
  for (int j = 1; j <= dim; ++j) {
    int base = 0;
    if (kind == ScheduleKind::Lin) base = j - 1;
    if (kind == ScheduleKind::Log)
      base = std::bit_width(static_cast<unsigned>(j - 1));  // ceil(log2 j)
    // Nudge before ceil so exact integers (e.g. 1.2 * 5) do not round up.
    p[static_cast<std::size_t>(j - 1)] = std::max(
        0, static_cast<int>(std::ceil((1.0 + eta) * base - 1e-9)));
  }
  return p;
}

double TargetFunction::operator()(const Eigen::VectorXd& x) const {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < centers.rows(); ++i)
    sum += coefficients[i] * kernel(centers.row(i).transpose(), x);
  return sum;
}

double TargetFunction::exact_native_norm() const {
  const Eigen::Index m = centers.rows();
  Eigen::MatrixXd gram(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index k = 0; k < m; ++k)
      gram(i, k) = kernel(centers.row(i).transpose(),
                          centers.row(k).transpose());
  return std::sqrt(std::max(coefficients.dot(gram * coefficients), 0.0));
}

PenaltyVector design_penalties(const ExperimentConfig& config) {
  if (config.design == DesignKind::IsotropicSg)
    return PenaltyVector(static_cast<std::size_t>(config.dim), 0);
  if (config.schedule == ScheduleKind::Explicit) {
    require(static_cast<int>(config.explicit_penalties.size()) == config.dim,
            "explicit penalty list must match the dimension");
    return config.explicit_penalties;
  }
  return penalty_schedule(config.schedule, config.dim, config.eta);
}

SeparableMaternKernel interpolating_kernel(const ExperimentConfig& config) {
  SeparableMaternKernel kernel;
  kernel.dims.reserve(static_cast<std::size_t>(config.dim));
  const PenaltyVector p = design_penalties(config);
  for (int j = 0; j < config.dim; ++j) {
    const double lambda =
        config.kernel_aniso == KernelAniso::Matched
            ? std::ldexp(1.0, p[static_cast<std::size_t>(j)])
            : 1.0;
    kernel.dims.push_back(MaternParams{config.nu, lambda, 1.0});
  }
  return kernel;
}

TargetFunction gen_target(const ExperimentConfig& config, int run_index) {
  require(config.centers >= 1, "need at least one target center");
  TargetFunction target;

  target.kernel.dims.reserve(static_cast<std::size_t>(config.dim));
  PenaltyVector p0;
  if (config.schedule == ScheduleKind::Explicit) {
    require(static_cast<int>(config.explicit_penalties.size()) == config.dim,
            "explicit penalty list must match the dimension");
    p0 = config.explicit_penalties;
  } else {
    p0 = penalty_schedule(config.schedule, config.dim, 0.0);
  }
  for (int j = 0; j < config.dim; ++j)
    target.kernel.dims.push_back(MaternParams{
        config.nu, std::ldexp(1.0, p0[static_cast<std::size_t>(j)]), 1.0});

  CounterRng center_rng(config.seed, static_cast<std::uint64_t>(run_index),
                        StreamPurpose::TargetCenters);
  target.centers.resize(config.centers, config.dim);
  for (Eigen::Index i = 0; i < target.centers.rows(); ++i)
    for (Eigen::Index j = 0; j < target.centers.cols(); ++j)
      target.centers(i, j) = center_rng.next_uniform(-0.5, 0.5);

  CounterRng coeff_rng(config.seed, static_cast<std::uint64_t>(run_index),
                       StreamPurpose::TargetCoefficients);
  target.coefficients.resize(config.centers);
  for (Eigen::Index i = 0; i < target.coefficients.size(); ++i)
    target.coefficients[i] = coeff_rng.next_normal(0.0, config.xi_stddev);
  return target;
}

double relative_l2_error(const Interpolant& interp,
                         const TargetFunction& target, int n_samples,
                         CounterRng& rng) {
  require(n_samples >= 1, "need at least one sample");
  const int dim = static_cast<int>(interp.points.cols());
  Eigen::VectorXd x(dim);
  double num = 0.0;
  double den = 0.0;
  for (int s = 0; s < n_samples; ++s) {
    for (int j = 0; j < dim; ++j) x[j] = rng.next_uniform(-0.5, 0.5);
    const double truth = target(x);
    const double diff = truth - interp.evaluate(x);
    num += diff * diff;
    den += truth * truth;
  }
  if (den > 0.0) return std::sqrt(num / den);
  return std::sqrt(num / n_samples);
}

std::vector<ResultRow> run_convergence(const ExperimentConfig& config) {
  require(config.runs >= 1, "need at least one run");
  const PenaltyVector p_design = design_penalties(config);
  const SeparableMaternKernel kernel = interpolating_kernel(config);
  const bool grid_design = config.design != DesignKind::MonteCarlo;

  // The fast path applies when the component-grid factorization matches
  // the interpolating kernel exactly.
  bool fast = grid_design && config.family == PointFamily::Uniform;
  for (int j = 0; fast && j < config.dim; ++j)
    fast = kernel.dims[static_cast<std::size_t>(j)].lambda ==
           std::ldexp(1.0, p_design[static_cast<std::size_t>(j)]);

  std::vector<ResultRow> rows;
  for (const int level : config.levels) {
    ResultRow row;
    row.level = level;
    row.design_label = design_name(config.design);
    row.kernel_label = kernel_aniso_name(config.kernel_aniso);

    try {
      std::int64_t n_expected = 0;
      SparseGridDesign design;
      if (grid_design) {
        if (config.family == PointFamily::Uniform) {
          n_expected = count_lisg(config.dim, p_design, level);
          if (n_expected > config.max_points) {
            row.skipped = true;
            row.n_points = n_expected;
            row.message = "design exceeds max_points";
            rows.push_back(row);
            continue;
          }
        }
        design = assemble_lisg(config.dim, p_design, level, config.family);
        n_expected = static_cast<std::int64_t>(design.points.size());
      } else {
        // Monte Carlo designs are size-matched to the penalised grid.
        n_expected = count_lisg(
            config.dim,
            config.schedule == ScheduleKind::Explicit
                ? config.explicit_penalties
                : penalty_schedule(config.schedule, config.dim, config.eta),
            level);
      }
      if (n_expected > config.max_points) {
        row.skipped = true;
        row.n_points = n_expected;
        row.message = "design exceeds max_points";
        rows.push_back(row);
        continue;
      }
      row.n_points = n_expected;

      ComponentFactorCache cache;
      std::vector<double> errors;
      double total_fit_seconds = 0.0;
      for (int run = 0; run < config.runs; ++run) {
        const TargetFunction target = gen_target(config, run);
        Interpolant interp;
        if (grid_design) {
          MemoEvaluator memo(config.family, [&target](const Eigen::VectorXd&
                                                          x) {
            return target(x);
          });
          for (const GridPoint& p : design.points) memo(p);  // warm
          const auto start = std::chrono::steady_clock::now();
          if (fast) {
            interp = fit_fast(design, kernel, memo, &cache);
          } else {
            Eigen::VectorXd values(
                static_cast<Eigen::Index>(design.points.size()));
            for (std::size_t i = 0; i < design.points.size(); ++i)
              values[static_cast<Eigen::Index>(i)] = memo(design.points[i]);
            interp = fit_dense(design.coordinate_matrix(), kernel, values,
                               config.nugget);
            interp.structured = true;
            interp.penalties = p_design;
            interp.level = level;
            interp.family = config.family;
          }
          total_fit_seconds += seconds_since(start);
          row.n_points = memo.unique_evaluations();
        } else {
          CounterRng design_rng(config.seed, static_cast<std::uint64_t>(run),
                                StreamPurpose::McDesign);
          Eigen::MatrixXd points(n_expected, config.dim);
          for (Eigen::Index i = 0; i < points.rows(); ++i)
            for (Eigen::Index j = 0; j < points.cols(); ++j)
              points(i, j) = design_rng.next_uniform(-0.5, 0.5);
          Eigen::VectorXd values(points.rows());
          for (Eigen::Index i = 0; i < points.rows(); ++i)
            values[i] = target(points.row(i).transpose());
          const auto start = std::chrono::steady_clock::now();
          interp = fit_dense(points, kernel, values, config.nugget);
          total_fit_seconds += seconds_since(start);
        }

        CounterRng error_rng(config.seed, static_cast<std::uint64_t>(run),
                             StreamPurpose::ErrorSamples);
        errors.push_back(
            relative_l2_error(interp, target, config.mc_samples, error_rng));
      }

      double mean = 0.0;
      for (const double e : errors) mean += e;
      mean /= static_cast<double>(errors.size());
      double variance = 0.0;
      for (const double e : errors) variance += (e - mean) * (e - mean);
      row.err_mean = mean;
      row.err_std = errors.size() > 1
                        ? std::sqrt(variance /
                                    static_cast<double>(errors.size() - 1))
                        : 0.0;
      row.fit_seconds = total_fit_seconds / static_cast<double>(config.runs);
    } catch (const std::exception& error) {
      row.failed = true;
      row.message = error.what();
    }
    rows.push_back(row);
  }
  return rows;
}

std::vector<MisspecCurve> run_misspecification(
    const ExperimentConfig& config, const std::vector<double>& etas) {
  require(config.design == DesignKind::Lisg &&
              config.kernel_aniso == KernelAniso::Matched,
          "misspecification sweeps perturb matched-kernel grid runs");
  std::vector<MisspecCurve> curves;
  for (const double eta : etas) {
    ExperimentConfig perturbed = config;
    perturbed.eta = eta;
    curves.push_back(MisspecCurve{eta, run_convergence(perturbed)});
  }
  return curves;
}

Eigen::MatrixXd run_variance_map(const ExperimentConfig& config, int level,
                                 int resolution,
                                 VarianceDiagnostics* diagnostics) {
  require(config.dim == 2, "variance maps are two-dimensional");
  require(resolution >= 2, "resolution must be >= 2");
  const PenaltyVector p = design_penalties(config);
  const SeparableMaternKernel kernel = interpolating_kernel(config);

  ComponentFactorCache cache;
  Eigen::MatrixXd map(resolution, resolution);
  Eigen::VectorXd x(2);
  for (int i = 0; i < resolution; ++i) {
    x[0] = -0.5 + static_cast<double>(i) / (resolution - 1);
    for (int j = 0; j < resolution; ++j) {
      x[1] = -0.5 + static_cast<double>(j) / (resolution - 1);
      map(i, j) = posterior_variance(2, p, level, kernel, x, &cache,
                                     diagnostics);
    }
  }
  return map;
}

}  // namespace lisg
