#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <random>
#include <vector>

#include <Eigen/Core>

#include "phasecon/band.hpp"
#include "phasecon/connectivity.hpp"
#include "phasecon/fem.hpp"
#include "phasecon/mesh.hpp"
#include "phasecon/penalty.hpp"

namespace testsupport {

struct System {
  phasecon::Mesh mesh;
  phasecon::P1Operators ops;
  phasecon::DualGraph graph;
};

inline System make_system(int n) {
  System s;
  s.mesh = phasecon::build_unit_square_mesh(n);
  s.ops = phasecon::assemble_p1(s.mesh);
  s.graph = phasecon::build_dual_graph(s.mesh);
  return s;
}

/// Random connected weighted graph: spanning tree plus extra edges.
inline phasecon::DualGraph random_connected_graph(std::mt19937_64& rng, int max_vertices) {
  std::uniform_int_distribution<int> vertex_count_dist(2, max_vertices);
  const int n = vertex_count_dist(rng);
  std::uniform_real_distribution<double> weight_dist(0.0, 1.0);
  std::vector<std::array<int, 2>> edges;
  std::vector<double> weights;
  auto add_edge = [&](int a, int b) {
    edges.push_back({std::min(a, b), std::max(a, b)});
    weights.push_back(weight_dist(rng));
  };
  for (int v = 1; v < n; ++v) {
    std::uniform_int_distribution<int> parent_dist(0, v - 1);
    add_edge(parent_dist(rng), v);
  }
  const int extra = std::uniform_int_distribution<int>(0, 2 * n)(rng);
  for (int k = 0; k < extra; ++k) {
    std::uniform_int_distribution<int> any(0, n - 1);
    const int a = any(rng), b = any(rng);
    if (a == b) continue;
    add_edge(a, b);
  }
  phasecon::DualGraph g = phasecon::DualGraph::from_edges(n, std::move(edges), {});
  g.weight = std::move(weights);
  return g;
}

/// Breadth-first-search components of the interface under the same edge rule
/// as the production union-find (both endpoints in the interface).
inline std::vector<std::vector<int>> bfs_components(const phasecon::DualGraph& graph,
                                                    const std::vector<int>& interface) {
  std::vector<char> in_interface(graph.vertex_count, 0);
  for (int t : interface) in_interface[t] = 1;
  std::vector<char> seen(graph.vertex_count, 0);
  std::vector<std::vector<int>> components;
  for (int start : interface) {
    if (seen[start]) continue;
    components.emplace_back();
    std::vector<int> stack{start};
    seen[start] = 1;
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      components.back().push_back(v);
      for (int k = graph.adjacency_offsets[v]; k < graph.adjacency_offsets[v + 1]; ++k) {
        const int w = graph.adjacent_vertex[k];
        if (in_interface[w] && !seen[w]) {
          seen[w] = 1;
          stack.push_back(w);
        }
      }
    }
  }
  return components;
}

/// Steps 1-7 of the connectedness pipeline as a plain energy evaluation,
/// used as the finite-difference oracle for the assembled variation.
inline double pipeline_energy(const phasecon::Mesh& mesh, phasecon::DualGraph& graph,
                              const Eigen::VectorXd& u, const phasecon::BandConfig& band) {
  std::vector<double> averages;
  phasecon::element_averages(mesh, u, averages);
  const std::vector<int> interface =
      phasecon::extract_interface(averages, band.alpha, band.beta);
  phasecon::ComponentDecomposition d =
      phasecon::decompose_components(graph, interface, averages, band);
  if (d.count() < 2) return 0.0;
  phasecon::assign_edge_weights(graph, averages, band);
  phasecon::component_distances(graph, d);
  phasecon::component_masses(d, averages, mesh, band);
  return phasecon::penalty_energy(d);
}

/// Two in-band plateaus over a noisy background, rejected and regenerated
/// until every element average keeps a safe margin from the band edges and
/// the decomposition has exactly two components. Deterministic per seed.
inline Eigen::VectorXd two_component_field(const System& s, const phasecon::BandConfig& band,
                                           unsigned seed) {
  const double mid = 0.5 * (band.alpha + band.beta);
  const double quarter_width = 0.25 * (band.beta - band.alpha);
  const double h = s.mesh.side_length / s.mesh.grid_subdivisions;
  for (unsigned attempt = 0; attempt < 64; ++attempt) {
    std::mt19937_64 rng(seed * 977u + attempt);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double r0 = 0.10 + 0.06 * unit(rng);
    const double r1 = 0.10 + 0.06 * unit(rng);
    const double cx0 = -0.5 + (r0 + 0.06) + unit(rng) * 0.08;
    const double cy0 = -0.18 + unit(rng) * 0.36;
    const double cx1 = 0.5 - (r1 + 0.06) - unit(rng) * 0.08;
    const double cy1 = -0.18 + unit(rng) * 0.36;
    const double ramp = 2.5 * h;

    Eigen::VectorXd u(s.mesh.node_count());
    for (int i = 0; i < s.mesh.node_count(); ++i) {
      const auto& p = s.mesh.nodes[i];
      const double d0 = std::hypot(p[0] - cx0, p[1] - cy0) - r0;
      const double d1 = std::hypot(p[0] - cx1, p[1] - cy1) - r1;
      const double d = std::min(d0, d1);
      double value;
      if (d <= 0.0) {
        value = mid + quarter_width * (2.0 * unit(rng) - 1.0) * 0.4;
      } else if (d >= ramp) {
        value = -1.0 + 0.1 * (2.0 * unit(rng) - 1.0);
      } else {
        const double t = d / ramp;
        value = mid + t * (-1.0 - mid) + 0.02 * (2.0 * unit(rng) - 1.0);
      }
      u[i] = value;
    }

    std::vector<double> averages;
    phasecon::element_averages(s.mesh, u, averages);
    bool margins_ok = true;
    for (double v : averages) {
      if (std::abs(v - band.alpha) < 1e-4 || std::abs(v - band.beta) < 1e-4) {
        margins_ok = false;
        break;
      }
    }
    if (!margins_ok) continue;
    const std::vector<int> interface =
        phasecon::extract_interface(averages, band.alpha, band.beta);
    const phasecon::ComponentDecomposition d =
        phasecon::decompose_components(s.graph, interface, averages, band);
    if (d.count() != 2) continue;
    bool masses_ok = true;
    phasecon::ComponentDecomposition dm = d;
    phasecon::component_masses(dm, averages, s.mesh, band);
    for (double m : dm.masses) {
      if (!(m > 0.0)) masses_ok = false;
    }
    if (!masses_ok) continue;
    return u;
  }
  throw std::runtime_error("two_component_field: no admissible sample for seed");
}

}  // namespace testsupport
