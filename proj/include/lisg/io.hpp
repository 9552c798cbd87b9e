#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "lisg/bench.hpp"
#include "lisg/grids.hpp"
#include "lisg/interpolate.hpp"

namespace lisg {

/// Shortest representation that parses back to the same double.
std::string format_double(double value);

/// Exact decimal expansion of a dyadic point (dyadic rationals terminate).
std::string dyadic_decimal(const Point1& p);

/// Design CSV with header dim_0,...,dim_{d-1}; dyadic coordinates are
/// written as exact decimals. A JSON sidecar (path + ".json") carries
/// (d, penalties, L, family, N).
void write_design_csv(const SparseGridDesign& design, const std::string& path);

void write_convergence_csv(const std::vector<ResultRow>& rows,
                           const ExperimentConfig& config, std::ostream& out);
void write_convergence_csv(const std::vector<MisspecCurve>& curves,
                           const ExperimentConfig& config, std::ostream& out);

void write_matrix_csv(const Eigen::MatrixXd& matrix, std::ostream& out);

/// Bit-exact round-trippable interpolant serialization.
std::string interpolant_to_json(const Interpolant& interp);
Interpolant interpolant_from_json(const std::string& text);

std::string convergence_json(const std::vector<ResultRow>& rows,
                             const ExperimentConfig& config);

}  // namespace lisg
