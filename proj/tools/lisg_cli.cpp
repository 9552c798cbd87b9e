// Command-line driver: grid/count/fit/convergence/misspec/variance-map/bound.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lisg/bench.hpp"
#include "lisg/bounds.hpp"
#include "lisg/grids.hpp"
#include "lisg/io.hpp"

namespace {

using namespace lisg;

struct CliOptions {
  ExperimentConfig config;
  std::string schedule = "lin";
  std::string family = "uniform";
  std::string design = "lisg";
  std::string kernel = "matched";
  std::string levels = "0..3";
  std::string out;
  std::string format = "csv";
};

std::vector<int> parse_levels(const std::string& text) {
  std::vector<int> levels;
  const auto dots = text.find("..");
  if (dots != std::string::npos) {
    const int lo = std::stoi(text.substr(0, dots));
    const int hi = std::stoi(text.substr(dots + 2));
    for (int l = lo; l <= hi; ++l) levels.push_back(l);
    return levels;
  }
  std::stringstream stream(text);
  for (std::string item; std::getline(stream, item, ',');)
    levels.push_back(std::stoi(item));
  return levels;
}

void apply_strings(CliOptions& options) {
  ExperimentConfig& config = options.config;
  if (options.schedule.rfind("list:", 0) == 0) {
    config.schedule = ScheduleKind::Explicit;
    config.explicit_penalties.clear();
    std::stringstream stream(options.schedule.substr(5));
    for (std::string item; std::getline(stream, item, ',');)
      config.explicit_penalties.push_back(std::stoi(item));
  } else if (options.schedule == "lin") {
    config.schedule = ScheduleKind::Lin;
  } else if (options.schedule == "log") {
    config.schedule = ScheduleKind::Log;
  } else if (options.schedule == "zero") {
    config.schedule = ScheduleKind::Zero;
  } else {
    throw CLI::ValidationError("--schedule", "unknown schedule kind");
  }
  config.family = family_from_name(options.family);
  if (options.design == "lisg") config.design = DesignKind::Lisg;
  else if (options.design == "sg") config.design = DesignKind::IsotropicSg;
  else if (options.design == "mc") config.design = DesignKind::MonteCarlo;
  else throw CLI::ValidationError("--design", "unknown design kind");
  config.kernel_aniso = options.kernel == "isotropic" ? KernelAniso::Isotropic
                                                      : KernelAniso::Matched;
  config.levels = parse_levels(options.levels);
}

std::ostream& open_output(std::ofstream& file, const std::string& path) {
  if (path.empty()) return std::cout;
  file.open(path);
  if (!file) throw CLI::RuntimeError("cannot open output file", 1);
  return file;
}

void add_common_flags(CLI::App& app, CliOptions& options) {
  ExperimentConfig& config = options.config;
  app.add_option("--dim", config.dim, "input dimension");
  app.add_option("--nu", config.nu, "Matern smoothness (all dimensions)");
  app.add_option("--schedule", options.schedule,
                 "penalty schedule: lin, log, zero, list:p1,p2,...");
  app.add_option("--eta", config.eta, "penalty perturbation");
  app.add_option("--family", options.family,
                 "point family: uniform, boundary, clenshaw-curtis");
  app.add_option("--levels", options.levels, "levels, e.g. 0..8 or 0,2,4");
  app.add_option("--design", options.design, "design: lisg, sg, mc");
  app.add_option("--kernel", options.kernel, "kernel: matched, isotropic");
  app.add_option("--centers", config.centers, "target kernel translates M");
  app.add_option("--mc-samples", config.mc_samples, "error samples per run");
  app.add_option("--runs", config.runs, "independent target realizations");
  app.add_option("--seed", config.seed, "random seed");
  app.add_option("--nugget", config.nugget, "diagonal nugget");
  app.add_option("--xi-std", config.xi_stddev,
                 "target coefficient standard deviation");
  app.add_option("--max-n", config.max_points,
                 "skip levels with more design points than this");
  app.add_option("--out", options.out, "output path (default stdout)");
  app.add_option("--format", options.format, "csv or json");
  app.set_config("--config", "", "key=value config file (flags override)");
}

int level_or_default(const std::vector<int>& levels) {
  return levels.empty() ? 0 : levels.back();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lengthscale-informed sparse-grid kernel interpolation"};
  app.fallthrough();  // common flags live on the app, after the subcommand
  app.require_subcommand(1);
  CliOptions options;
  add_common_flags(app, options);

  auto* grid = app.add_subcommand("grid", "emit a design as CSV");
  auto* count = app.add_subcommand("count", "print the design size");
  auto* fit = app.add_subcommand("fit", "fit one target, serialize to JSON");
  auto* convergence =
      app.add_subcommand("convergence", "error-vs-size sweep over levels");
  auto* misspec =
      app.add_subcommand("misspec", "convergence under perturbed penalties");
  std::vector<double> etas{-1.0, -0.5, -0.2, 0.0, 0.2, 0.5, 1.0};
  misspec->add_option("--etas", etas, "perturbations to sweep");
  auto* variance =
      app.add_subcommand("variance-map", "posterior-variance heat map data");
  int resolution = 65;
  double clip_max = 0.0;
  variance->add_option("--resolution", resolution, "mesh points per axis");
  variance->add_option("--clip-max", clip_max,
                       "also write a copy clipped at this maximum");
  auto* bound = app.add_subcommand("bound", "theoretical error-bound curve");
  double alpha = 0.5;
  double approx_constant = 1.0;
  bound->add_option("--alpha", alpha, "target smoothness (constant gap)");
  bound->add_option("--approx-c", approx_constant,
                    "per-dimension approximation constant");

  CLI11_PARSE(app, argc, argv);

  try {
    apply_strings(options);
    ExperimentConfig& config = options.config;
    std::ofstream file;

    if (grid->parsed()) {
      const int level = level_or_default(config.levels);
      const auto design = assemble_lisg(config.dim, design_penalties(config),
                                        level, config.family);
      if (options.out.empty())
        throw CLI::RuntimeError("grid requires --out", 1);
      write_design_csv(design, options.out);
      std::cout << "wrote " << design.points.size() << " points to "
                << options.out << "\n";
    } else if (count->parsed()) {
      const int level = level_or_default(config.levels);
      const PenaltyVector p = design_penalties(config);
      if (config.family == PointFamily::Uniform) {
        std::cout << count_lisg(config.dim, p, level) << "\n";
      } else {
        std::cout << assemble_lisg(config.dim, p, level, config.family)
                         .points.size()
                  << "\n";
      }
    } else if (fit->parsed()) {
      const int level = level_or_default(config.levels);
      const TargetFunction target = gen_target(config, 0);
      const auto design = assemble_lisg(config.dim, design_penalties(config),
                                        level, config.family);
      MemoEvaluator memo(config.family, [&](const Eigen::VectorXd& x) {
        return target(x);
      });
      Interpolant interp;
      bool fast = config.family == PointFamily::Uniform;
      const SeparableMaternKernel kernel = interpolating_kernel(config);
      for (int j = 0; fast && j < config.dim; ++j)
        fast = kernel.dims[static_cast<std::size_t>(j)].lambda ==
               std::ldexp(1.0,
                          design.penalties[static_cast<std::size_t>(j)]);
      if (fast) {
        interp = fit_fast(design, kernel, memo);
      } else {
        Eigen::VectorXd values(
            static_cast<Eigen::Index>(design.points.size()));
        for (std::size_t i = 0; i < design.points.size(); ++i)
          values[static_cast<Eigen::Index>(i)] = memo(design.points[i]);
        interp = fit_dense(design.coordinate_matrix(), kernel, values,
                           config.nugget);
        interp.structured = true;
        interp.penalties = design.penalties;
        interp.level = design.level;
        interp.family = design.family;
      }
      open_output(file, options.out) << interpolant_to_json(interp) << "\n";
    } else if (convergence->parsed()) {
      const auto rows = run_convergence(config);
      auto& out = open_output(file, options.out);
      if (options.format == "json")
        out << convergence_json(rows, config) << "\n";
      else
        write_convergence_csv(rows, config, out);
    } else if (misspec->parsed()) {
      const auto curves = run_misspecification(config, etas);
      write_convergence_csv(curves, config, open_output(file, options.out));
    } else if (variance->parsed()) {
      const int level = level_or_default(config.levels);
      VarianceDiagnostics diag;
      const Eigen::MatrixXd map =
          run_variance_map(config, level, resolution, &diag);
      write_matrix_csv(map, open_output(file, options.out));
      if (clip_max > 0.0 && !options.out.empty()) {
        std::ofstream clipped(options.out + ".clipped.csv");
        write_matrix_csv(map.cwiseMin(clip_max), clipped);
      }
      if (diag.clamp_events > 0)
        std::cerr << "warning: " << diag.clamp_events
                  << " variance values clamped (worst "
                  << diag.worst_negative << ")\n";
    } else if (bound->parsed()) {
      BoundParams params;
      params.nu.assign(static_cast<std::size_t>(config.dim), config.nu);
      params.alpha.assign(static_cast<std::size_t>(config.dim), alpha);
      params.sigma.assign(static_cast<std::size_t>(config.dim), 1.0);
      params.approximation_constant = approx_constant;
      const PenaltyVector p = design_penalties(config);
      auto& out = open_output(file, options.out);
      out << "L,N,bound\n";
      for (const int level : config.levels)
        out << level << ',' << count_lisg(config.dim, p, level) << ','
            << format_double(native_error_bound(p, params, level)) << "\n";
    }
  } catch (const CLI::Error& error) {
    return app.exit(error);
  } catch (const std::exception& error) {
    std::cerr << "error: " << error.what() << "\n";
    return 1;
  }
  return 0;
}
