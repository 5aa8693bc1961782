#include "phasecon/io.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace phasecon {

namespace {

[[noreturn]] void io_fail(const std::string& what, const std::string& path) {
  throw std::runtime_error(what + ": " + path);
}

// Shortest representation that parses back to the same double.
std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void write_vtk(const Mesh& mesh,
               const std::vector<std::pair<std::string, const Eigen::VectorXd*>>& point_fields,
               const std::vector<std::pair<std::string, const std::vector<int>*>>& cell_fields,
               const std::string& path) {
  std::ofstream out(path);
  if (!out) io_fail("write_vtk: cannot open", path);

  out << "# vtk DataFile Version 3.0\n";
  out << "phasecon snapshot\n";
  out << "ASCII\n";
  out << "DATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << mesh.node_count() << " double\n";
  for (const auto& p : mesh.nodes) {
    out << format_double(p[0]) << ' ' << format_double(p[1]) << " 0\n";
  }
  const int ne = mesh.element_count();
  out << "CELLS " << ne << ' ' << 4 * ne << '\n';
  for (const auto& tri : mesh.triangles) {
    out << "3 " << tri[0] << ' ' << tri[1] << ' ' << tri[2] << '\n';
  }
  out << "CELL_TYPES " << ne << '\n';
  for (int t = 0; t < ne; ++t) out << "5\n";

  if (!point_fields.empty()) {
    out << "POINT_DATA " << mesh.node_count() << '\n';
    for (const auto& [name, field] : point_fields) {
      if (field->size() != mesh.node_count()) io_fail("write_vtk: field size mismatch", name);
      out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
      for (Eigen::Index i = 0; i < field->size(); ++i) {
        out << format_double((*field)[i]) << '\n';
      }
    }
  }
  if (!cell_fields.empty()) {
    out << "CELL_DATA " << ne << '\n';
    for (const auto& [name, field] : cell_fields) {
      if (static_cast<int>(field->size()) != ne) io_fail("write_vtk: cell field size mismatch", name);
      out << "SCALARS " << name << " int 1\nLOOKUP_TABLE default\n";
      for (int v : *field) out << v << '\n';
    }
  }
  if (!out) io_fail("write_vtk: write failed", path);
}

namespace {
constexpr const char* kEnergyHeader =
    "step,time,perimeter,curvature,fidelity,penalty_plus,penalty_minus,"
    "penalty_total,total,components_plus,components_minus,cbar_plus,cbar_minus,"
    "step_delta";
}

void write_energy_csv(const std::vector<EnergyRecord>& log, const std::string& path) {
  std::ofstream out(path);
  if (!out) io_fail("write_energy_csv: cannot open", path);
  out << kEnergyHeader << '\n';
  for (const auto& r : log) {
    out << r.step << ',' << format_double(r.time) << ',' << format_double(r.perimeter)
        << ',' << format_double(r.curvature) << ',' << format_double(r.fidelity) << ','
        << format_double(r.penalty_plus) << ',' << format_double(r.penalty_minus) << ','
        << format_double(r.penalty_total()) << ',' << format_double(r.total) << ','
        << r.components_plus << ',' << r.components_minus << ','
        << format_double(r.cbar_plus) << ',' << format_double(r.cbar_minus) << ','
        << format_double(r.step_delta) << '\n';
  }
  if (!out) io_fail("write_energy_csv: write failed", path);
}

std::vector<EnergyRecord> read_energy_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) io_fail("read_energy_csv: cannot open", path);
  std::string line;
  if (!std::getline(in, line) || line != kEnergyHeader) {
    io_fail("read_energy_csv: unexpected header", path);
  }
  std::vector<EnergyRecord> log;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 14) io_fail("read_energy_csv: malformed row", path);
    EnergyRecord r;
    r.step = std::stoi(cells[0]);
    r.time = std::stod(cells[1]);
    r.perimeter = std::stod(cells[2]);
    r.curvature = std::stod(cells[3]);
    r.fidelity = std::stod(cells[4]);
    r.penalty_plus = std::stod(cells[5]);
    r.penalty_minus = std::stod(cells[6]);
    // cells[7] is the derived penalty total
    r.total = std::stod(cells[8]);
    r.components_plus = std::stoi(cells[9]);
    r.components_minus = std::stoi(cells[10]);
    r.cbar_plus = std::stod(cells[11]);
    r.cbar_minus = std::stod(cells[12]);
    r.step_delta = std::stod(cells[13]);
    log.push_back(r);
  }
  return log;
}

void write_field(const Eigen::VectorXd& u, const std::string& path) {
  std::ofstream out(path);
  if (!out) io_fail("write_field: cannot open", path);
  out << "# nodal values, one per line\n";
  for (Eigen::Index i = 0; i < u.size(); ++i) out << format_double(u[i]) << '\n';
  if (!out) io_fail("write_field: write failed", path);
}

Eigen::VectorXd read_field(const std::string& path, int expected_size) {
  std::ifstream in(path);
  if (!in) io_fail("read_field: cannot open", path);
  std::vector<double> values;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::stringstream ss(line);
    std::string token;
    while (ss >> token) {
      try {
        values.push_back(std::stod(token));
      } catch (const std::exception&) {
        throw std::runtime_error("read_field: " + path + ":" +
                                 std::to_string(line_no) + ": not a number: " + token);
      }
    }
  }
  if (expected_size >= 0 && static_cast<int>(values.size()) != expected_size) {
    throw std::runtime_error("read_field: " + path + ": expected " +
                             std::to_string(expected_size) + " values, got " +
                             std::to_string(values.size()));
  }
  return Eigen::Map<const Eigen::VectorXd>(values.data(),
                                           static_cast<Eigen::Index>(values.size()));
}

}  // namespace phasecon
