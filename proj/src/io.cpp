#include "lisg/io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

namespace lisg {

namespace {

using nlohmann::json;

json config_json(const ExperimentConfig& config) {
  json j;
  j["d"] = config.dim;
  j["nu"] = config.nu;
  j["schedule"] = schedule_name(config.schedule);
  j["eta"] = config.eta;
  j["family"] = family_name(config.family);
  j["design"] = design_name(config.design);
  j["kernel"] = kernel_aniso_name(config.kernel_aniso);
  j["centers"] = config.centers;
  j["mc_samples"] = config.mc_samples;
  j["runs"] = config.runs;
  j["seed"] = config.seed;
  j["nugget"] = config.nugget;
  return j;
}

void write_row(std::ostream& out, const ResultRow& row,
               const ExperimentConfig& config, double eta) {
  out << row.design_label << ',' << row.kernel_label << ',' << config.dim
      << ',' << format_double(config.nu) << ','
      << schedule_name(config.schedule) << ',' << format_double(eta) << ','
      << row.level << ',' << row.n_points << ',';
  if (row.skipped || row.failed) {
    out << ",,";
    out << (row.skipped ? "skipped" : "failed");
  } else {
    out << format_double(row.err_mean) << ',' << format_double(row.err_std)
        << ',' << format_double(row.fit_seconds);
  }
  out << '\n';
}

}  // namespace

std::string format_double(double value) {
  char buffer[40];
  for (const int precision : {15, 16, 17}) {
    std::snprintf(buffer, sizeof(buffer), "%.*g", precision, value);
    if (std::strtod(buffer, nullptr) == value) break;
  }
  return buffer;
}

std::string dyadic_decimal(const Point1& p) {
  if (p.num == 0) return "0";
  if (p.log_den > 38) return format_double(std::ldexp(
      static_cast<double>(p.num), -p.log_den));
  unsigned __int128 scaled = static_cast<unsigned __int128>(
      p.num < 0 ? -p.num : p.num);
  for (int i = 0; i < p.log_den; ++i) scaled *= 5;  // |n|/2^s = |n| 5^s/10^s
  std::string digits;
  while (scaled > 0) {
    digits.insert(digits.begin(),
                  static_cast<char>('0' + static_cast<int>(scaled % 10)));
    scaled /= 10;
  }
  while (static_cast<int>(digits.size()) < p.log_den)
    digits.insert(digits.begin(), '0');
  std::string out = p.num < 0 ? "-0." : "0.";
  out += digits;
  while (out.back() == '0') out.pop_back();
  return out;
}

void write_design_csv(const SparseGridDesign& design,
                      const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  for (int j = 0; j < design.dim; ++j)
    out << (j ? "," : "") << "dim_" << j;
  out << '\n';
  for (const GridPoint& p : design.points) {
    for (int j = 0; j < design.dim; ++j) {
      if (j) out << ',';
      const Point1& c = p[static_cast<std::size_t>(j)];
      if (design.family == PointFamily::ClenshawCurtis)
        out << format_double(point1_value(c, design.family));
      else
        out << dyadic_decimal(c);
    }
    out << '\n';
  }

  json sidecar;
  sidecar["d"] = design.dim;
  sidecar["penalties"] = design.penalties;
  sidecar["L"] = design.level;
  sidecar["family"] = family_name(design.family);
  sidecar["N"] = design.points.size();
  std::ofstream side(path + ".json");
  if (!side) throw std::runtime_error("cannot open " + path + ".json");
  side << sidecar.dump(2) << '\n';
}

void write_convergence_csv(const std::vector<ResultRow>& rows,
                           const ExperimentConfig& config, std::ostream& out) {
  out << "design,kernel,d,nu,schedule,eta,L,N,err_mean,err_std,fit_seconds\n";
  for (const ResultRow& row : rows) write_row(out, row, config, config.eta);
}

void write_convergence_csv(const std::vector<MisspecCurve>& curves,
                           const ExperimentConfig& config, std::ostream& out) {
  out << "design,kernel,d,nu,schedule,eta,L,N,err_mean,err_std,fit_seconds\n";
  for (const MisspecCurve& curve : curves)
    for (const ResultRow& row : curve.rows)
      write_row(out, row, config, curve.eta);
}

void write_matrix_csv(const Eigen::MatrixXd& matrix, std::ostream& out) {
  for (Eigen::Index i = 0; i < matrix.rows(); ++i) {
    for (Eigen::Index j = 0; j < matrix.cols(); ++j) {
      if (j) out << ',';
      out << format_double(matrix(i, j));
    }
    out << '\n';
  }
}

std::string interpolant_to_json(const Interpolant& interp) {
  json j;
  j["dim"] = interp.points.cols();
  j["n"] = interp.points.rows();
  json kernel = json::array();
  for (const MaternParams& p : interp.kernel.dims)
    kernel.push_back({{"nu", p.nu}, {"lambda", p.lambda}, {"sigma", p.sigma}});
  j["kernel"] = kernel;
  std::vector<double> flat(
      interp.points.data(),
      interp.points.data() + interp.points.size());
  j["points_col_major"] = flat;
  j["weights"] = std::vector<double>(
      interp.weights.data(), interp.weights.data() + interp.weights.size());
  j["training_values"] = std::vector<double>(
      interp.training_values.data(),
      interp.training_values.data() + interp.training_values.size());
  if (interp.structured) {
    j["design"] = {{"penalties", interp.penalties},
                   {"L", interp.level},
                   {"family", family_name(interp.family)}};
  }
  return j.dump(2);
}

Interpolant interpolant_from_json(const std::string& text) {
  const json j = json::parse(text);
  Interpolant interp;
  const Eigen::Index dim = j.at("dim").get<Eigen::Index>();
  const Eigen::Index n = j.at("n").get<Eigen::Index>();
  for (const json& entry : j.at("kernel"))
    interp.kernel.dims.push_back(MaternParams{entry.at("nu").get<double>(),
                                              entry.at("lambda").get<double>(),
                                              entry.at("sigma").get<double>()});
  const auto flat = j.at("points_col_major").get<std::vector<double>>();
  if (static_cast<Eigen::Index>(flat.size()) != n * dim)
    throw std::runtime_error("interpolant JSON: point array size mismatch");
  interp.points = Eigen::Map<const Eigen::MatrixXd>(flat.data(), n, dim);
  const auto weights = j.at("weights").get<std::vector<double>>();
  const auto values = j.at("training_values").get<std::vector<double>>();
  interp.weights = Eigen::Map<const Eigen::VectorXd>(
      weights.data(), static_cast<Eigen::Index>(weights.size()));
  interp.training_values = Eigen::Map<const Eigen::VectorXd>(
      values.data(), static_cast<Eigen::Index>(values.size()));
  if (j.contains("design")) {
    interp.structured = true;
    interp.penalties = j["design"].at("penalties").get<PenaltyVector>();
    interp.level = j["design"].at("L").get<int>();
    interp.family = family_from_name(j["design"].at("family").get<std::string>());
  }
  return interp;
}

std::string convergence_json(const std::vector<ResultRow>& rows,
                             const ExperimentConfig& config) {
  json j;
  j["config"] = config_json(config);
  json out_rows = json::array();
  for (const ResultRow& row : rows) {
    json r;
    r["L"] = row.level;
    r["N"] = row.n_points;
    if (row.skipped) {
      r["status"] = "skipped";
    } else if (row.failed) {
      r["status"] = "failed";
      r["message"] = row.message;
    } else {
      r["status"] = "ok";
      r["err_mean"] = row.err_mean;
      r["err_std"] = row.err_std;
      r["fit_seconds"] = row.fit_seconds;
    }
    out_rows.push_back(r);
  }
  j["rows"] = out_rows;
  return j.dump(2);
}

}  // namespace lisg
