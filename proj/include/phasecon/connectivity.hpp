#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "phasecon/band.hpp"
#include "phasecon/mesh.hpp"

namespace phasecon {

/// Dual graph of a triangulation: one vertex per element, one undirected
/// edge per interior mesh edge. Edge weights are recomputed from the phase
/// field each step; the geometric half-sum of diameters is cached.
struct DualGraph {
  int vertex_count = 0;
  std::vector<std::array<int, 2>> edges;  // a < b, lexicographic order
  std::vector<double> geometric_factor;   // (diam(a) + diam(b)) / 2
  std::vector<double> weight;             // w_e >= 0

  // CSR adjacency; neighbors of each vertex sorted ascending so that all
  // traversals relax edges in a fixed order.
  std::vector<int> adjacency_offsets;
  std::vector<int> adjacent_vertex;
  std::vector<int> adjacent_edge;

  int edge_count() const { return static_cast<int>(edges.size()); }

  /// Builds the CSR adjacency from `edges`; called by the constructors.
  void finalize();

  static DualGraph from_edges(int vertex_count, std::vector<std::array<int, 2>> edges,
                              std::vector<double> geometric_factor);
};

/// Dual graph of the mesh, weights initialized to zero.
DualGraph build_dual_graph(const Mesh& mesh);

/// Sets every edge weight to the half-sum of the band distance weights at
/// the two element averages times the cached geometric factor. Throws on
/// non-finite averages.
void assign_edge_weights(DualGraph& graph, std::span<const double> element_averages,
                         const BandConfig& band);

/// Elements whose average lies in the closed band [alpha, beta], ascending.
std::vector<int> extract_interface(std::span<const double> element_averages,
                                   double alpha, double beta);

/// Connected components of the interface set plus the per-pair geodesic
/// data computed on demand. Components are labeled in order of their
/// smallest element id. `source_stamp` ties the decomposition to the phase
/// field it was computed from.
struct ComponentDecomposition {
  std::vector<std::vector<int>> components;  // ascending element ids
  std::vector<int> component_of;             // -1 outside the interface
  std::vector<double> masses;                // filled by component_masses
  std::vector<double> pair_distance;         // unordered pairs, i < j
  std::vector<std::vector<int>> pair_path;   // element chains, front in C_i
  bool distances_computed = false;
  std::uint64_t source_stamp = 0;

  int count() const { return static_cast<int>(components.size()); }
  int pair_index(int i, int j) const;  // requires i != j
  double distance(int i, int j) const { return pair_distance[pair_index(i, j)]; }
  const std::vector<int>& path(int i, int j) const { return pair_path[pair_index(i, j)]; }
};

/// Stamp of a phase-field configuration (element averages + band); used to
/// reject stale decompositions in downstream evaluations.
std::uint64_t field_stamp(std::span<const double> element_averages,
                          const BandConfig& band);

/// Groups the interface elements into components connected through
/// zero-weight (both-endpoint-in-band) dual edges. Union-find based.
ComponentDecomposition decompose_components(const DualGraph& graph,
                                            std::span<const int> interface_elements,
                                            std::span<const double> element_averages,
                                            const BandConfig& band);

/// Fills the pairwise component distances and one shortest connecting path
/// per unordered pair via multi-source Dijkstra sweeps (all elements of the
/// source component seeded at distance zero). Ties are broken toward the
/// smallest element id so repeated runs yield identical paths. Requires at
/// least two components and assigned weights.
void component_distances(const DualGraph& graph, ComponentDecomposition& decomposition);

constexpr double kUnreachable = std::numeric_limits<double>::infinity();

/// Single/multi-source Dijkstra over the weighted dual graph.
struct ShortestPaths {
  std::vector<double> distance;   // kUnreachable where never settled
  std::vector<int> predecessor;   // -1 at sources and unreached vertices
};
ShortestPaths dijkstra(const DualGraph& graph, std::span<const int> sources);

/// Exact all-pairs distances, O(V^3); guard limits V to 200. Test oracle.
std::vector<double> floyd_warshall_reference(const DualGraph& graph);

}  // namespace phasecon
