#pragma once

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "phasecon/flow.hpp"
#include "phasecon/mesh.hpp"

namespace phasecon {

/// Legacy ASCII VTK (version 3.0) UNSTRUCTURED_GRID dump with triangle cells
/// (cell type 5), optional nodal scalar fields and per-cell integer fields.
/// Output bytes are a deterministic function of the inputs.
void write_vtk(const Mesh& mesh,
               const std::vector<std::pair<std::string, const Eigen::VectorXd*>>& point_fields,
               const std::vector<std::pair<std::string, const std::vector<int>*>>& cell_fields,
               const std::string& path);

/// Energy log as CSV with a fixed header, one row per logged step, full
/// double precision (round-trips exactly).
void write_energy_csv(const std::vector<EnergyRecord>& log, const std::string& path);
std::vector<EnergyRecord> read_energy_csv(const std::string& path);

/// Plain nodal field files: one value per line, '#' starts a comment.
void write_field(const Eigen::VectorXd& u, const std::string& path);
Eigen::VectorXd read_field(const std::string& path, int expected_size);

}  // namespace phasecon
