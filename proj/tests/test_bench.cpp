#include <doctest.h>

#include <cmath>

#include "lisg/bench.hpp"
#include "lisg/io.hpp"

using namespace lisg;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig config;
  config.dim = 2;
  config.nu = 1.5;
  config.schedule = ScheduleKind::Lin;
  config.levels = {0, 1, 2, 3};
  config.centers = 8;
  config.mc_samples = 40;
  config.runs = 3;
  config.seed = 424242;
  return config;
}

}  // namespace

TEST_SUITE("bench") {

TEST_CASE("penalty schedules") {
  CHECK(penalty_schedule(ScheduleKind::Lin, 4) == PenaltyVector{0, 1, 2, 3});
  CHECK(penalty_schedule(ScheduleKind::Log, 5) == PenaltyVector{0, 1, 2, 2, 3});
  CHECK(penalty_schedule(ScheduleKind::Log, 9) ==
        PenaltyVector{0, 1, 2, 2, 3, 3, 3, 3, 4});
  CHECK(penalty_schedule(ScheduleKind::Zero, 3) == PenaltyVector{0, 0, 0});
  CHECK(penalty_schedule(ScheduleKind::Lin, 4, -1.0) ==
        PenaltyVector{0, 0, 0, 0});
  CHECK(penalty_schedule(ScheduleKind::Lin, 4, 0.5) ==
        PenaltyVector{0, 2, 3, 5});
  // ceil((1+0.2) * 5) must stay 6 despite 1.2 * 5 rounding up in binary
  CHECK(penalty_schedule(ScheduleKind::Lin, 6, 0.2) ==
        PenaltyVector{0, 2, 3, 4, 5, 6});
  CHECK_THROWS_AS(penalty_schedule(ScheduleKind::Lin, 0), std::invalid_argument);
  CHECK_THROWS_AS(penalty_schedule(ScheduleKind::Lin, 3, -2.0),
                  std::invalid_argument);
}

TEST_CASE("target generation is deterministic and stream-split") {
  const auto config = small_config();
  const TargetFunction a = gen_target(config, 2);
  const TargetFunction b = gen_target(config, 2);
  CHECK(a.centers == b.centers);
  CHECK(a.coefficients == b.coefficients);

  const TargetFunction other_run = gen_target(config, 3);
  CHECK(a.centers != other_run.centers);

  // kernel lengthscales come from the unperturbed schedule
  ExperimentConfig perturbed = config;
  perturbed.eta = 1.0;
  const TargetFunction c = gen_target(perturbed, 2);
  CHECK(c.kernel.dims[1].lambda == 2.0);
  CHECK(a.kernel.dims[1].lambda == 2.0);
  CHECK(interpolating_kernel(perturbed).dims[1].lambda == 4.0);
}

TEST_CASE("single-translate target has a closed-form norm") {
  auto config = small_config();
  config.centers = 1;
  TargetFunction target = gen_target(config, 0);
  target.coefficients[0] = -3.0;
  CHECK(target.exact_native_norm() == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("coefficient stream mean obeys the law of large numbers") {
  auto config = small_config();
  config.centers = 10000;
  const TargetFunction target = gen_target(config, 0);
  const double mean = target.coefficients.mean();
  const double stderr_bound =
      3.0 * config.xi_stddev / std::sqrt(static_cast<double>(config.centers));
  CHECK(std::fabs(mean) <= stderr_bound);
  // sample stddev near sqrt(5)
  const double var =
      (target.coefficients.array() - mean).square().sum() /
      static_cast<double>(config.centers - 1);
  CHECK(std::sqrt(var) == doctest::Approx(config.xi_stddev).epsilon(0.05));
}

TEST_CASE("relative error of trivial predictors") {
  auto config = small_config();
  config.centers = 4;
  const TargetFunction target = gen_target(config, 0);

  // interpolant that reproduces the target exactly: fit on its own span
  const auto design = assemble_lisg(2, {0, 1}, 3, PointFamily::Uniform);
  SUBCASE("exact reproduction when f lies in the design span") {
    // place the target's kernel translates on design points
    TargetFunction in_span = target;
    for (Eigen::Index i = 0; i < in_span.centers.rows(); ++i)
      in_span.centers.row(i) =
          design.coordinates(static_cast<std::int64_t>(i) * 3).transpose();
    MemoEvaluator memo(PointFamily::Uniform, [&](const Eigen::VectorXd& x) {
      return in_span(x);
    });
    const Interpolant interp =
        fit_fast(design, interpolating_kernel(config), memo);
    CounterRng rng(config.seed, 0, StreamPurpose::ErrorSamples);
    CHECK(relative_l2_error(interp, in_span, 50, rng) <= 1e-7);
  }

  SUBCASE("zero predictor scores one") {
    Interpolant zero;
    zero.points = Eigen::MatrixXd::Zero(1, 2);
    zero.kernel = interpolating_kernel(config);
    zero.weights = Eigen::VectorXd::Zero(1);
    zero.training_values = Eigen::VectorXd::Zero(1);
    CounterRng rng(config.seed, 0, StreamPurpose::ErrorSamples);
    CHECK(relative_l2_error(zero, target, 60, rng) ==
          doctest::Approx(1.0).epsilon(1e-12));
  }

  SUBCASE("matches an independent reimplementation") {
    MemoEvaluator memo(PointFamily::Uniform, [&](const Eigen::VectorXd& x) {
      return target(x);
    });
    const Interpolant interp =
        fit_fast(design, interpolating_kernel(config), memo);
    CounterRng rng_a(config.seed, 7, StreamPurpose::ErrorSamples);
    const double got = relative_l2_error(interp, target, 64, rng_a);

    CounterRng rng_b(config.seed, 7, StreamPurpose::ErrorSamples);
    double num = 0.0, den = 0.0;
    for (int s = 0; s < 64; ++s) {
      Eigen::VectorXd x(2);
      x[0] = rng_b.next_uniform(-0.5, 0.5);
      x[1] = rng_b.next_uniform(-0.5, 0.5);
      const double truth = target(x);
      num += (truth - interp.evaluate(x)) * (truth - interp.evaluate(x));
      den += truth * truth;
    }
    CHECK(got == doctest::Approx(std::sqrt(num / den)).epsilon(1e-12));
  }
}

TEST_CASE("convergence runs") {
  const auto config = small_config();
  const auto rows = run_convergence(config);
  REQUIRE(rows.size() == 4);

  SUBCASE("evaluation counts match the closed-form design size") {
    const PenaltyVector p = design_penalties(config);
    for (const auto& row : rows) {
      CHECK_FALSE(row.failed);
      CHECK(row.n_points == count_lisg(config.dim, p, row.level));
      CHECK(row.err_mean >= 0.0);
    }
    CHECK(rows[0].n_points == 1);
  }

  SUBCASE("errors trend down in L") {
    for (std::size_t i = 1; i < rows.size(); ++i)
      CHECK(rows[i].err_mean <=
            rows[i - 1].err_mean + 2.0 * (rows[i].err_std +
                                          rows[i - 1].err_std) + 1e-12);
  }

  SUBCASE("determinism: identical config gives identical data columns") {
    const auto again = run_convergence(config);
    REQUIRE(again.size() == rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      CHECK(again[i].level == rows[i].level);
      CHECK(again[i].n_points == rows[i].n_points);
      CHECK(again[i].err_mean == rows[i].err_mean);
      CHECK(again[i].err_std == rows[i].err_std);
    }
  }

  SUBCASE("flattened LISG equals the isotropic-SG runs") {
    // eta = -1 zeroes the design penalties while the targets keep their
    // anisotropy, which is exactly the isotropic-SG baseline.
    ExperimentConfig lisg_flat = config;
    lisg_flat.eta = -1.0;
    lisg_flat.kernel_aniso = KernelAniso::Isotropic;
    ExperimentConfig sg = config;
    sg.design = DesignKind::IsotropicSg;
    sg.kernel_aniso = KernelAniso::Isotropic;
    const auto a = run_convergence(lisg_flat);
    const auto b = run_convergence(sg);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].n_points == b[i].n_points);
      CHECK(a[i].err_mean == b[i].err_mean);
      CHECK(a[i].err_std == b[i].err_std);
    }
  }
}

TEST_CASE("non-uniform families run through the dense path") {
  for (const PointFamily family :
       {PointFamily::Boundary, PointFamily::ClenshawCurtis}) {
    auto config = small_config();
    config.family = family;
    config.levels = {0, 1, 2};
    config.runs = 2;
    config.mc_samples = 20;
    const auto rows = run_convergence(config);
    REQUIRE(rows.size() == 3);
    for (const auto& row : rows) {
      CHECK_FALSE(row.failed);
      const auto design = assemble_lisg(config.dim, design_penalties(config),
                                        row.level, family);
      CHECK(row.n_points == static_cast<std::int64_t>(design.points.size()));
    }
    CHECK(rows[2].err_mean <= rows[0].err_mean + 1e-12);
  }
}

TEST_CASE("monte carlo design rows are size-matched") {
  auto config = small_config();
  config.design = DesignKind::MonteCarlo;
  config.runs = 2;
  const auto rows = run_convergence(config);
  const PenaltyVector p = penalty_schedule(config.schedule, config.dim,
                                           config.eta);
  for (const auto& row : rows) {
    CHECK_FALSE(row.failed);
    CHECK(row.n_points == count_lisg(config.dim, p, row.level));
  }
}

TEST_CASE("misspecification sweep") {
  auto config = small_config();
  config.levels = {0, 1, 2};
  config.runs = 2;
  const auto curves = run_misspecification(config, {-1.0, 0.0, 1.0});
  REQUIRE(curves.size() == 3);
  CHECK(curves[0].eta == -1.0);

  // eta = 0 reproduces the unperturbed convergence run
  const auto matched = run_convergence(config);
  for (std::size_t i = 0; i < matched.size(); ++i) {
    CHECK(curves[1].rows[i].err_mean == matched[i].err_mean);
    CHECK(curves[1].rows[i].n_points == matched[i].n_points);
  }

  // eta = -1 is the isotropic-design, isotropic-kernel run
  ExperimentConfig iso = config;
  iso.eta = -1.0;
  const auto iso_rows = run_convergence(iso);
  for (std::size_t i = 0; i < iso_rows.size(); ++i)
    CHECK(curves[0].rows[i].err_mean == iso_rows[i].err_mean);
}

TEST_CASE("variance map") {
  ExperimentConfig config;
  config.dim = 2;
  config.nu = 1.5;
  config.schedule = ScheduleKind::Explicit;
  config.explicit_penalties = {1, 3};
  const int level = 4;

  VarianceDiagnostics diag;
  const Eigen::MatrixXd map = run_variance_map(config, level, 33, &diag);
  REQUIRE(map.rows() == 33);
  REQUIRE(map.cols() == 33);
  CHECK(diag.clamp_events == 0);

  SUBCASE("values within [0, total variance]") {
    CHECK(map.minCoeff() >= 0.0);
    CHECK(map.maxCoeff() <= 1.0 + 1e-10);
  }

  SUBCASE("anisotropic banding: faster variation along the first axis") {
    // The striping is visible on the rough kernel; the smooth one pins
    // the surface too tightly between design points.
    ExperimentConfig rough = config;
    rough.nu = 0.5;
    const Eigen::MatrixXd rough_map = run_variance_map(rough, level, 33);
    double grad_x1 = 0.0, grad_x2 = 0.0;
    for (int i = 0; i + 1 < rough_map.rows(); ++i)
      for (int j = 0; j + 1 < rough_map.cols(); ++j) {
        grad_x1 += std::fabs(rough_map(i + 1, j) - rough_map(i, j));
        grad_x2 += std::fabs(rough_map(i, j + 1) - rough_map(i, j));
      }
    CHECK(grad_x1 > grad_x2);
  }

  SUBCASE("dimension restriction") {
    ExperimentConfig bad = config;
    bad.dim = 3;
    bad.explicit_penalties = {1, 3, 0};
    CHECK_THROWS_AS(run_variance_map(bad, level, 9), std::invalid_argument);
  }
}

}  // TEST_SUITE
