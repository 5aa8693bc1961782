#include <doctest.h>

#include <algorithm>
#include <random>

#include "phasecon/connectivity.hpp"
#include "support.hpp"

using namespace phasecon;
using testsupport::make_system;
using testsupport::random_connected_graph;

namespace {
const BandConfig kBand = BandConfig::make(0.85, 0.95, 0.01, 1.0, 1);
}

TEST_CASE("dual graph of structured meshes") {
  const Mesh m1 = build_unit_square_mesh(1);
  const DualGraph g1 = build_dual_graph(m1);
  CHECK(g1.vertex_count == 2);
  CHECK(g1.edge_count() == 1);

  const Mesh m2 = build_unit_square_mesh(2);
  const DualGraph g2 = build_dual_graph(m2);
  CHECK(g2.vertex_count == 8);
  CHECK(g2.edge_count() == 8);

  // Handshake: vertex degrees sum to twice the edge count.
  int degree_sum = 0;
  for (int v = 0; v < g2.vertex_count; ++v) {
    degree_sum += g2.adjacency_offsets[v + 1] - g2.adjacency_offsets[v];
  }
  CHECK(degree_sum == 2 * g2.edge_count());
}

TEST_CASE("edge weight formula") {
  DualGraph g = DualGraph::from_edges(2, {{0, 1}}, {0.1});

  std::vector<double> in_band = {0.9, 0.9};
  assign_edge_weights(g, in_band, kBand);
  CHECK(g.weight[0] == 0.0);

  std::vector<double> pure = {-1.0, -1.0};  // distance weight normalized to 1
  assign_edge_weights(g, pure, kBand);
  CHECK(g.weight[0] == doctest::Approx(0.1).epsilon(1e-14));

  std::vector<double> mixed = {-1.0, 0.9};
  assign_edge_weights(g, mixed, kBand);
  CHECK(g.weight[0] == doctest::Approx(0.05).epsilon(1e-14));

  std::vector<double> bad = {std::nan(""), 0.0};
  CHECK_THROWS_AS(assign_edge_weights(g, bad, kBand), std::runtime_error);
}

TEST_CASE("interface extraction uses the closed band") {
  std::vector<double> averages = {0.0, 0.85, 0.95, 0.951, 0.9, -1.0};
  const std::vector<int> interface = extract_interface(averages, 0.85, 0.95);
  CHECK(interface == std::vector<int>{1, 2, 4});

  std::vector<double> flat(10, 0.0);
  CHECK(extract_interface(flat, 0.85, 0.95).empty());
  CHECK_THROWS_AS(extract_interface(flat, 0.95, 0.85), std::invalid_argument);
}

TEST_CASE("component decomposition against a BFS oracle") {
  const auto s = make_system(12);
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  for (int round = 0; round < 20; ++round) {
    std::vector<double> averages(s.mesh.element_count());
    for (auto& v : averages) v = coin(rng) < 0.3 ? 0.9 : -1.0;
    const std::vector<int> interface = extract_interface(averages, 0.85, 0.95);
    const ComponentDecomposition d =
        decompose_components(s.graph, interface, averages, kBand);
    const auto oracle = testsupport::bfs_components(s.graph, interface);
    REQUIRE(d.count() == static_cast<int>(oracle.size()));
    // Same partition: every oracle component maps to one label.
    for (const auto& component : oracle) {
      const int label = d.component_of[component.front()];
      for (int t : component) CHECK(d.component_of[t] == label);
    }
  }

  std::vector<double> empty_field(s.mesh.element_count(), 0.0);
  const ComponentDecomposition none =
      decompose_components(s.graph, {}, empty_field, kBand);
  CHECK(none.count() == 0);
}

TEST_CASE("two separated bands give two components") {
  const auto s = make_system(16);
  // Two vertical strips of in-band elements separated by background.
  std::vector<double> averages(s.mesh.element_count(), -1.0);
  for (int t = 0; t < s.mesh.element_count(); ++t) {
    double cx = 0.0;
    for (int v : s.mesh.triangles[t]) cx += s.mesh.nodes[v][0];
    cx /= 3.0;
    if (cx < -0.3 || cx > 0.3) averages[t] = 0.9;
  }
  const std::vector<int> interface = extract_interface(averages, 0.85, 0.95);
  const ComponentDecomposition d =
      decompose_components(s.graph, interface, averages, kBand);
  CHECK(d.count() == 2);
}

TEST_CASE("component distance along a forced chain") {
  // Components {0} and {3} joined through two non-interface vertices with
  // edge weights 0.05, 0.02, 0.05 on the only path: distance 0.12.
  DualGraph g = DualGraph::from_edges(4, {{0, 1}, {1, 2}, {2, 3}}, {});
  g.weight = {0.05, 0.02, 0.05};

  ComponentDecomposition d;
  d.components = {{0}, {3}};
  d.component_of = {0, -1, -1, 1};
  d.masses = {1.0, 1.0};
  component_distances(g, d);
  CHECK(d.distance(0, 1) == doctest::Approx(0.12).epsilon(1e-14));
  const std::vector<int> expected_path = {0, 1, 2, 3};
  CHECK(d.path(0, 1) == expected_path);
}

TEST_CASE("single component has an empty distance table") {
  DualGraph g = DualGraph::from_edges(3, {{0, 1}, {1, 2}}, {});
  ComponentDecomposition d;
  d.components = {{0, 1, 2}};
  d.component_of = {0, 0, 0};
  component_distances(g, d);
  CHECK(d.pair_distance.empty());
  CHECK(d.distances_computed);
}

TEST_CASE("floyd-warshall basics") {
  DualGraph triangle = DualGraph::from_edges(3, {{0, 1}, {1, 2}, {0, 2}}, {});
  triangle.weight = {1.0, 2.0, 3.0};
  const auto dist = floyd_warshall_reference(triangle);
  CHECK(dist[0 * 3 + 2] == doctest::Approx(3.0));  // min(3, 1 + 2)

  DualGraph single = DualGraph::from_edges(1, {}, {});
  CHECK(floyd_warshall_reference(single)[0] == 0.0);

  DualGraph path = DualGraph::from_edges(3, {{0, 1}, {1, 2}}, {});
  path.weight = {0.1, 0.2};
  CHECK(floyd_warshall_reference(path)[0 * 3 + 2] == doctest::Approx(0.3).epsilon(1e-15));

  DualGraph big = DualGraph::from_edges(201, {{0, 1}}, {});
  CHECK_THROWS_AS(floyd_warshall_reference(big), std::invalid_argument);
}

TEST_CASE("dijkstra equals floyd-warshall on random graphs") {
  std::mt19937_64 rng(7);
  for (int round = 0; round < 40; ++round) {
    const DualGraph g = random_connected_graph(rng, 40);
    const auto oracle = floyd_warshall_reference(g);
    for (int source = 0; source < g.vertex_count; ++source) {
      const ShortestPaths sp = dijkstra(g, std::vector<int>{source});
      for (int v = 0; v < g.vertex_count; ++v) {
        CHECK(std::abs(sp.distance[v] - oracle[source * g.vertex_count + v]) <= 1e-12);
      }
    }
  }
}

TEST_CASE("component distance properties on random two-component fields") {
  const auto s = make_system(16);
  std::mt19937_64 rng(99);
  for (int round = 0; round < 8; ++round) {
    const Eigen::VectorXd u =
        testsupport::two_component_field(s, kBand, 100 + round);
    std::vector<double> averages;
    element_averages(s.mesh, u, averages);
    const std::vector<int> interface =
        extract_interface(averages, kBand.alpha, kBand.beta);
    DualGraph graph = s.graph;
    assign_edge_weights(graph, averages, kBand);
    ComponentDecomposition d =
        decompose_components(graph, interface, averages, kBand);
    REQUIRE(d.count() == 2);
    component_distances(graph, d);

    const double base = d.distance(0, 1);
    CHECK(base > 0.0);

    // Path validity: the stored chain is adjacent, starts and ends in the
    // right components, and its weight sum reproduces the distance.
    const auto& path = d.path(0, 1);
    REQUIRE(path.size() >= 2);
    CHECK(d.component_of[path.front()] == 0);
    CHECK(d.component_of[path.back()] == 1);
    double sum = 0.0;
    for (size_t k = 1; k < path.size(); ++k) {
      bool adjacent = false;
      for (int off = graph.adjacency_offsets[path[k - 1]];
           off < graph.adjacency_offsets[path[k - 1] + 1]; ++off) {
        if (graph.adjacent_vertex[off] == path[k]) {
          adjacent = true;
          sum += graph.weight[graph.adjacent_edge[off]];
        }
      }
      CHECK(adjacent);
    }
    CHECK(std::abs(sum - base) <= 1e-12);

    // Monotonicity: increasing a single edge weight never shrinks it.
    std::uniform_int_distribution<int> edge_pick(0, graph.edge_count() - 1);
    for (int trial = 0; trial < 4; ++trial) {
      DualGraph bumped = graph;
      bumped.weight[edge_pick(rng)] += 0.37;
      ComponentDecomposition d2 =
          decompose_components(bumped, interface, averages, kBand);
      component_distances(bumped, d2);
      CHECK(d2.distance(0, 1) >= base - 1e-15);
    }

    // Zero-homogeneity: scaling all weights by a power of two scales the
    // distance exactly and keeps the decomposition unchanged.
    DualGraph scaled = graph;
    for (auto& w : scaled.weight) w *= 4.0;
    ComponentDecomposition d4 = decompose_components(scaled, interface, averages, kBand);
    REQUIRE(d4.count() == d.count());
    component_distances(scaled, d4);
    CHECK(d4.distance(0, 1) == 4.0 * base);
    // And by a general factor up to rounding.
    DualGraph scaled17 = graph;
    for (auto& w : scaled17.weight) w *= 1.7;
    ComponentDecomposition d17 =
        decompose_components(scaled17, interface, averages, kBand);
    component_distances(scaled17, d17);
    CHECK(d17.distance(0, 1) == doctest::Approx(1.7 * base).epsilon(1e-12));
  }
}

TEST_CASE("triangle inequality across component pairs") {
  // Three in-band plateaus; set distances must satisfy the triangle
  // inequality because intra-component hops are free.
  const auto s = make_system(20);
  std::vector<double> averages(s.mesh.element_count(), -1.0);
  const std::array<std::array<double, 2>, 3> centers = {
      {{-0.3, -0.3}, {0.3, -0.25}, {0.0, 0.32}}};
  for (int t = 0; t < s.mesh.element_count(); ++t) {
    double cx = 0.0, cy = 0.0;
    for (int v : s.mesh.triangles[t]) {
      cx += s.mesh.nodes[v][0];
      cy += s.mesh.nodes[v][1];
    }
    cx /= 3.0;
    cy /= 3.0;
    for (const auto& c : centers) {
      if (std::hypot(cx - c[0], cy - c[1]) < 0.12) averages[t] = 0.9;
    }
  }
  DualGraph graph = s.graph;
  assign_edge_weights(graph, averages, kBand);
  const std::vector<int> interface = extract_interface(averages, 0.85, 0.95);
  ComponentDecomposition d = decompose_components(graph, interface, averages, kBand);
  REQUIRE(d.count() == 3);
  component_distances(graph, d);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      for (int k = 0; k < 3; ++k) {
        if (i == j || j == k || i == k) continue;
        CHECK(d.distance(i, k) <= d.distance(i, j) + d.distance(j, k) + 1e-12);
      }
    }
  }
}
