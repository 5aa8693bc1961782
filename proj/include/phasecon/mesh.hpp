#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace phasecon {

/// Structured 2D triangulation of an axis-aligned square with cached
/// per-element geometry and incidence tables. Immutable after construction.
struct Mesh {
  std::vector<std::array<double, 2>> nodes;
  std::vector<std::array<int, 3>> triangles;  // counterclockwise vertex ids

  std::vector<double> element_area;      // |T|
  std::vector<double> element_diameter;  // longest edge of T

  // Neighbor across the edge opposite local vertex k, or -1 on the boundary.
  std::vector<std::array<int, 3>> triangle_adjacency;
  std::vector<std::vector<int>> node_to_elements;
  std::vector<int> boundary_nodes;  // ascending
  std::vector<char> node_on_boundary;

  double domain_area = 0.0;
  int interior_edge_count = 0;
  int boundary_edge_count = 0;

  // Generator parameters (0 side length for hand-built meshes).
  int grid_subdivisions = 0;
  double origin_x = 0.0;
  double origin_y = 0.0;
  double side_length = 0.0;

  int node_count() const { return static_cast<int>(nodes.size()); }
  int element_count() const { return static_cast<int>(triangles.size()); }
};

/// Builds derived quantities (areas, diameters, adjacency, incidence,
/// boundary sets) for a raw node/triangle list. Triangles with negative
/// signed area are reoriented; zero-area triangles are kept and rejected
/// later by the assembler.
Mesh make_mesh(std::vector<std::array<double, 2>> nodes,
               std::vector<std::array<int, 3>> triangles);

/// Uniform triangulation of the square (x0, x0+side) x (y0, y0+side) with
/// n cells per side, each split along the same diagonal: (n+1)^2 nodes and
/// 2 n^2 congruent right triangles. Deterministic node ordering.
Mesh build_square_mesh(int n, double x0, double y0, double side);

/// build_square_mesh on (-1/2, 1/2)^2.
Mesh build_unit_square_mesh(int n);

/// Mean of u over element t; for P1 fields this is the vertex average.
double element_average(const Mesh& mesh, const Eigen::VectorXd& u, int t);

/// All element averages at once.
void element_averages(const Mesh& mesh, const Eigen::VectorXd& u,
                      std::vector<double>& out);

/// Integral of the P1 hat function of `node` over element t:
/// |T|/3 when node is a vertex of t, 0 otherwise.
double basis_element_integral(const Mesh& mesh, int t, int node);

/// Mean-integral of the hat function over t: 1/3 or 0.
double basis_element_mean(const Mesh& mesh, int t, int node);

}  // namespace phasecon
