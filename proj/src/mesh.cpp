#include "phasecon/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <tuple>

namespace phasecon {

namespace {

double signed_area(const std::array<double, 2>& a, const std::array<double, 2>& b,
                   const std::array<double, 2>& c) {
  return 0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]));
}

double edge_length(const std::array<double, 2>& a, const std::array<double, 2>& b) {
  return std::hypot(b[0] - a[0], b[1] - a[1]);
}

}  // namespace

Mesh make_mesh(std::vector<std::array<double, 2>> nodes,
               std::vector<std::array<int, 3>> triangles) {
  Mesh mesh;
  mesh.nodes = std::move(nodes);
  mesh.triangles = std::move(triangles);

  const int nn = mesh.node_count();
  const int ne = mesh.element_count();
  for (auto& tri : mesh.triangles) {
    for (int v : tri) {
      if (v < 0 || v >= nn) throw std::invalid_argument("mesh: vertex id out of range");
    }
    if (signed_area(mesh.nodes[tri[0]], mesh.nodes[tri[1]], mesh.nodes[tri[2]]) < 0.0) {
      std::swap(tri[1], tri[2]);
    }
  }

  mesh.element_area.resize(ne);
  mesh.element_diameter.resize(ne);
  mesh.domain_area = 0.0;
  for (int t = 0; t < ne; ++t) {
    const auto& tri = mesh.triangles[t];
    const auto& a = mesh.nodes[tri[0]];
    const auto& b = mesh.nodes[tri[1]];
    const auto& c = mesh.nodes[tri[2]];
    mesh.element_area[t] = signed_area(a, b, c);
    mesh.element_diameter[t] =
        std::max({edge_length(a, b), edge_length(b, c), edge_length(c, a)});
    mesh.domain_area += mesh.element_area[t];
  }

  // Edge -> triangle matching. Interior edges carry exactly two triangles.
  struct EdgeRef {
    int lo, hi, tri, local;  // local = index of the opposite vertex
  };
  std::vector<EdgeRef> refs;
  refs.reserve(3 * static_cast<size_t>(ne));
  for (int t = 0; t < ne; ++t) {
    const auto& tri = mesh.triangles[t];
    for (int k = 0; k < 3; ++k) {
      int u = tri[(k + 1) % 3];
      int v = tri[(k + 2) % 3];
      refs.push_back({std::min(u, v), std::max(u, v), t, k});
    }
  }
  std::sort(refs.begin(), refs.end(), [](const EdgeRef& x, const EdgeRef& y) {
    return std::tie(x.lo, x.hi, x.tri) < std::tie(y.lo, y.hi, y.tri);
  });

  mesh.triangle_adjacency.assign(ne, {-1, -1, -1});
  mesh.node_on_boundary.assign(nn, 0);
  mesh.interior_edge_count = 0;
  mesh.boundary_edge_count = 0;
  size_t i = 0;
  while (i < refs.size()) {
    size_t j = i + 1;
    while (j < refs.size() && refs[j].lo == refs[i].lo && refs[j].hi == refs[i].hi) ++j;
    const size_t mult = j - i;
    if (mult == 1) {
      mesh.boundary_edge_count += 1;
      mesh.node_on_boundary[refs[i].lo] = 1;
      mesh.node_on_boundary[refs[i].hi] = 1;
    } else if (mult == 2) {
      mesh.interior_edge_count += 1;
      mesh.triangle_adjacency[refs[i].tri][refs[i].local] = refs[i + 1].tri;
      mesh.triangle_adjacency[refs[i + 1].tri][refs[i + 1].local] = refs[i].tri;
    } else {
      throw std::invalid_argument("mesh: edge shared by more than two triangles");
    }
    i = j;
  }

  mesh.boundary_nodes.clear();
  for (int v = 0; v < nn; ++v) {
    if (mesh.node_on_boundary[v]) mesh.boundary_nodes.push_back(v);
  }

  mesh.node_to_elements.assign(nn, {});
  for (int t = 0; t < ne; ++t) {
    for (int v : mesh.triangles[t]) mesh.node_to_elements[v].push_back(t);
  }

  return mesh;
}

Mesh build_square_mesh(int n, double x0, double y0, double side) {
  if (n < 1) throw std::invalid_argument("mesh: subdivision count must be >= 1");
  if (!(side > 0.0)) throw std::invalid_argument("mesh: side length must be positive");

  const double h = side / n;
  std::vector<std::array<double, 2>> nodes;
  nodes.reserve(static_cast<size_t>(n + 1) * (n + 1));
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      nodes.push_back({x0 + i * h, y0 + j * h});
    }
  }

  // Every cell is split along the same diagonal (lower-left to upper-right).
  std::vector<std::array<int, 3>> triangles;
  triangles.reserve(2 * static_cast<size_t>(n) * n);
  auto id = [n](int i, int j) { return j * (n + 1) + i; };
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int a = id(i, j), b = id(i + 1, j), c = id(i + 1, j + 1), d = id(i, j + 1);
      triangles.push_back({a, b, c});
      triangles.push_back({a, c, d});
    }
  }

  Mesh mesh = make_mesh(std::move(nodes), std::move(triangles));
  mesh.grid_subdivisions = n;
  mesh.origin_x = x0;
  mesh.origin_y = y0;
  mesh.side_length = side;
  return mesh;
}

Mesh build_unit_square_mesh(int n) { return build_square_mesh(n, -0.5, -0.5, 1.0); }

double element_average(const Mesh& mesh, const Eigen::VectorXd& u, int t) {
  const auto& tri = mesh.triangles[t];
  return (u[tri[0]] + u[tri[1]] + u[tri[2]]) / 3.0;
}

void element_averages(const Mesh& mesh, const Eigen::VectorXd& u,
                      std::vector<double>& out) {
  const int ne = mesh.element_count();
  out.resize(ne);
  for (int t = 0; t < ne; ++t) {
    const auto& tri = mesh.triangles[t];
    out[t] = (u[tri[0]] + u[tri[1]] + u[tri[2]]) / 3.0;
  }
}

double basis_element_integral(const Mesh& mesh, int t, int node) {
  const auto& tri = mesh.triangles[t];
  if (tri[0] == node || tri[1] == node || tri[2] == node) {
    return mesh.element_area[t] / 3.0;
  }
  return 0.0;
}

double basis_element_mean(const Mesh& mesh, int t, int node) {
  const auto& tri = mesh.triangles[t];
  return (tri[0] == node || tri[1] == node || tri[2] == node) ? 1.0 / 3.0 : 0.0;
}

}  // namespace phasecon
