#include "phasecon/connectivity.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <string>

namespace phasecon {

void DualGraph::finalize() {
  adjacency_offsets.assign(vertex_count + 1, 0);
  for (const auto& e : edges) {
    adjacency_offsets[e[0] + 1] += 1;
    adjacency_offsets[e[1] + 1] += 1;
  }
  for (int v = 0; v < vertex_count; ++v) {
    adjacency_offsets[v + 1] += adjacency_offsets[v];
  }
  adjacent_vertex.assign(adjacency_offsets.back(), -1);
  adjacent_edge.assign(adjacency_offsets.back(), -1);
  std::vector<int> cursor(adjacency_offsets.begin(), adjacency_offsets.end() - 1);
  for (int e = 0; e < edge_count(); ++e) {
    const auto [a, b] = edges[e];
    adjacent_vertex[cursor[a]] = b;
    adjacent_edge[cursor[a]++] = e;
    adjacent_vertex[cursor[b]] = a;
    adjacent_edge[cursor[b]++] = e;
  }
  // Sort each neighbor list ascending, keeping edge ids aligned.
  for (int v = 0; v < vertex_count; ++v) {
    const int lo = adjacency_offsets[v], hi = adjacency_offsets[v + 1];
    std::vector<std::pair<int, int>> tmp;
    tmp.reserve(hi - lo);
    for (int k = lo; k < hi; ++k) tmp.emplace_back(adjacent_vertex[k], adjacent_edge[k]);
    std::sort(tmp.begin(), tmp.end());
    for (int k = lo; k < hi; ++k) {
      adjacent_vertex[k] = tmp[k - lo].first;
      adjacent_edge[k] = tmp[k - lo].second;
    }
  }
}

DualGraph DualGraph::from_edges(int vertex_count, std::vector<std::array<int, 2>> edges,
                                std::vector<double> geometric_factor) {
  DualGraph g;
  g.vertex_count = vertex_count;
  for (auto& e : edges) {
    if (e[0] == e[1]) throw std::invalid_argument("dual graph: self loop");
    if (e[0] > e[1]) std::swap(e[0], e[1]);
  }
  g.edges = std::move(edges);
  if (geometric_factor.empty()) {
    g.geometric_factor.assign(g.edges.size(), 1.0);
  } else {
    if (geometric_factor.size() != g.edges.size()) {
      throw std::invalid_argument("dual graph: geometric factor size mismatch");
    }
    g.geometric_factor = std::move(geometric_factor);
  }
  g.weight.assign(g.edges.size(), 0.0);
  g.finalize();
  return g;
}

DualGraph build_dual_graph(const Mesh& mesh) {
  DualGraph g;
  g.vertex_count = mesh.element_count();
  g.edges.reserve(mesh.interior_edge_count);
  g.geometric_factor.reserve(mesh.interior_edge_count);
  for (int t = 0; t < mesh.element_count(); ++t) {
    for (int neighbor : mesh.triangle_adjacency[t]) {
      if (neighbor > t) {
        g.edges.push_back({t, neighbor});
        g.geometric_factor.push_back(
            0.5 * (mesh.element_diameter[t] + mesh.element_diameter[neighbor]));
      }
    }
  }
  // Triangle order already yields lexicographic (a, b) up to duplicates of a;
  // sort to make the edge order independent of adjacency-slot order.
  std::vector<int> order(g.edges.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int x, int y) {
    return g.edges[x] < g.edges[y];
  });
  std::vector<std::array<int, 2>> sorted_edges(g.edges.size());
  std::vector<double> sorted_factor(g.edges.size());
  for (size_t k = 0; k < order.size(); ++k) {
    sorted_edges[k] = g.edges[order[k]];
    sorted_factor[k] = g.geometric_factor[order[k]];
  }
  g.edges = std::move(sorted_edges);
  g.geometric_factor = std::move(sorted_factor);
  g.weight.assign(g.edges.size(), 0.0);
  g.finalize();
  return g;
}

void assign_edge_weights(DualGraph& graph, std::span<const double> element_averages,
                         const BandConfig& band) {
  if (static_cast<int>(element_averages.size()) != graph.vertex_count) {
    throw std::invalid_argument("assign_edge_weights: average count mismatch");
  }
  for (double v : element_averages) {
    if (!std::isfinite(v)) {
      throw std::runtime_error("assign_edge_weights: non-finite element average");
    }
  }
  for (int e = 0; e < graph.edge_count(); ++e) {
    const auto [a, b] = graph.edges[e];
    const double fa = band_profile(element_averages[a], band).distance_weight;
    const double fb = band_profile(element_averages[b], band).distance_weight;
    graph.weight[e] = 0.5 * (fa + fb) * graph.geometric_factor[e];
  }
}

std::vector<int> extract_interface(std::span<const double> element_averages,
                                   double alpha, double beta) {
  if (!(alpha < beta)) throw std::invalid_argument("extract_interface: alpha >= beta");
  std::vector<int> interface;
  for (size_t t = 0; t < element_averages.size(); ++t) {
    if (element_averages[t] >= alpha && element_averages[t] <= beta) {
      interface.push_back(static_cast<int>(t));
    }
  }
  return interface;
}

int ComponentDecomposition::pair_index(int i, int j) const {
  if (i > j) std::swap(i, j);
  // Row-major upper triangle of an M x M table.
  const int m = count();
  return i * m - i * (i + 1) / 2 + (j - i - 1);
}

std::uint64_t field_stamp(std::span<const double> element_averages,
                          const BandConfig& band) {
  // Word-wise FNV-1a over the bit patterns of the averages and the band
  // interval; sensitive to any single-value change.
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof(bits));
    h ^= bits;
    h *= 1099511628211ull;
  };
  for (double v : element_averages) mix(v);
  mix(band.alpha);
  mix(band.beta);
  return h;
}

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace

ComponentDecomposition decompose_components(const DualGraph& graph,
                                            std::span<const int> interface_elements,
                                            std::span<const double> element_averages,
                                            const BandConfig& band) {
  ComponentDecomposition d;
  d.component_of.assign(graph.vertex_count, -1);
  d.source_stamp = field_stamp(element_averages, band);
  if (interface_elements.empty()) return d;

  std::vector<char> in_interface(graph.vertex_count, 0);
  for (int t : interface_elements) in_interface[t] = 1;

  // A dual edge has weight zero exactly when the distance weight vanishes at
  // both endpoints; restricted to the interface set that is equivalent to
  // both endpoints being interface elements.
  UnionFind uf(graph.vertex_count);
  for (int t : interface_elements) {
    for (int k = graph.adjacency_offsets[t]; k < graph.adjacency_offsets[t + 1]; ++k) {
      const int other = graph.adjacent_vertex[k];
      if (other > t && in_interface[other]) uf.unite(t, other);
    }
  }

  // Label components by ascending smallest element id.
  std::vector<int> label_of_root(graph.vertex_count, -1);
  for (int t : interface_elements) {  // interface_elements is ascending
    const int root = uf.find(t);
    if (label_of_root[root] < 0) {
      label_of_root[root] = d.count();
      d.components.emplace_back();
    }
    const int label = label_of_root[root];
    d.component_of[t] = label;
    d.components[label].push_back(t);
  }
  d.masses.assign(d.count(), 0.0);
  return d;
}

ShortestPaths dijkstra(const DualGraph& graph, std::span<const int> sources) {
  ShortestPaths sp;
  sp.distance.assign(graph.vertex_count, kUnreachable);
  sp.predecessor.assign(graph.vertex_count, -1);

  using Item = std::pair<double, int>;  // (distance, vertex); vertex breaks ties
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
  for (int s : sources) {
    sp.distance[s] = 0.0;
    heap.emplace(0.0, s);
  }
  while (!heap.empty()) {
    const auto [dist, v] = heap.top();
    heap.pop();
    if (dist > sp.distance[v]) continue;
    for (int k = graph.adjacency_offsets[v]; k < graph.adjacency_offsets[v + 1]; ++k) {
      const int w = graph.adjacent_vertex[k];
      const double candidate = dist + graph.weight[graph.adjacent_edge[k]];
      if (candidate < sp.distance[w]) {
        sp.distance[w] = candidate;
        sp.predecessor[w] = v;
        heap.emplace(candidate, w);
      }
    }
  }
  return sp;
}

void component_distances(const DualGraph& graph, ComponentDecomposition& d) {
  const int m = d.count();
  if (m < 2) {
    d.pair_distance.clear();
    d.pair_path.clear();
    d.distances_computed = true;
    return;
  }
  d.pair_distance.assign(static_cast<size_t>(m) * (m - 1) / 2, kUnreachable);
  d.pair_path.assign(d.pair_distance.size(), {});

  std::vector<double> dist(graph.vertex_count);
  std::vector<int> pred(graph.vertex_count);
  using Item = std::pair<double, int>;

  // Sweep i = 0..m-2; each sweep settles the first reached element of every
  // component j > i, which by the settle order is the component distance.
  for (int i = 0; i + 1 < m; ++i) {
    std::fill(dist.begin(), dist.end(), kUnreachable);
    std::fill(pred.begin(), pred.end(), -1);
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
    for (int s : d.components[i]) {
      dist[s] = 0.0;
      heap.emplace(0.0, s);
    }
    int remaining = m - 1 - i;
    std::vector<char> found(m, 0);
    while (!heap.empty() && remaining > 0) {
      const auto [dv, v] = heap.top();
      heap.pop();
      if (dv > dist[v]) continue;
      const int cv = d.component_of[v];
      if (cv > i && !found[cv]) {
        found[cv] = 1;
        remaining -= 1;
        const int pi = d.pair_index(i, cv);
        d.pair_distance[pi] = dv;
        auto& path = d.pair_path[pi];
        for (int cur = v; cur != -1; cur = pred[cur]) path.push_back(cur);
        std::reverse(path.begin(), path.end());
      }
      for (int k = graph.adjacency_offsets[v]; k < graph.adjacency_offsets[v + 1]; ++k) {
        const int w = graph.adjacent_vertex[k];
        const double candidate = dv + graph.weight[graph.adjacent_edge[k]];
        if (candidate < dist[w]) {
          dist[w] = candidate;
          pred[w] = v;
          heap.emplace(candidate, w);
        }
      }
    }
    if (remaining > 0) {
      throw std::logic_error(
          "component_distances: unreachable component pair on a connected mesh");
    }
  }
  d.distances_computed = true;
}

std::vector<double> floyd_warshall_reference(const DualGraph& graph) {
  const int n = graph.vertex_count;
  if (n > 200) {
    throw std::invalid_argument("floyd_warshall_reference: more than 200 vertices");
  }
  std::vector<double> dist(static_cast<size_t>(n) * n, kUnreachable);
  for (int v = 0; v < n; ++v) dist[static_cast<size_t>(v) * n + v] = 0.0;
  for (int e = 0; e < graph.edge_count(); ++e) {
    const auto [a, b] = graph.edges[e];
    const double w = graph.weight[e];
    dist[static_cast<size_t>(a) * n + b] = std::min(dist[static_cast<size_t>(a) * n + b], w);
    dist[static_cast<size_t>(b) * n + a] = std::min(dist[static_cast<size_t>(b) * n + a], w);
  }
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      const double dik = dist[static_cast<size_t>(i) * n + k];
      if (dik == kUnreachable) continue;
      for (int j = 0; j < n; ++j) {
        const double via = dik + dist[static_cast<size_t>(k) * n + j];
        if (via < dist[static_cast<size_t>(i) * n + j]) {
          dist[static_cast<size_t>(i) * n + j] = via;
        }
      }
    }
  }
  return dist;
}

}  // namespace phasecon
