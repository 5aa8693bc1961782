#include "phasecon/penalty.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace phasecon {

namespace {

void require_fresh(const ComponentDecomposition& d,
                   std::span<const double> element_averages, const BandConfig& band,
                   const char* caller) {
  if (d.source_stamp != field_stamp(element_averages, band)) {
    throw std::logic_error(std::string(caller) +
                           ": decomposition is stale for the given field");
  }
}

}  // namespace

void component_masses(ComponentDecomposition& d,
                      std::span<const double> element_averages, const Mesh& mesh,
                      const BandConfig& band) {
  require_fresh(d, element_averages, band, "component_masses");
  d.masses.assign(d.count(), 0.0);
  for (int j = 0; j < d.count(); ++j) {
    double sum = 0.0;
    for (int t : d.components[j]) {
      sum += band_profile(element_averages[t], band).mass_density * mesh.element_area[t];
    }
    d.masses[j] = sum / band.epsilon;
  }
}

double penalty_energy(const ComponentDecomposition& d) {
  const int m = d.count();
  if (m < 2) return 0.0;
  if (!d.distances_computed) {
    throw std::logic_error("penalty_energy: distances not computed");
  }
  double energy = 0.0;
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      energy += 2.0 * d.distance(i, j) * d.masses[i] * d.masses[j];
    }
  }
  return energy;
}

void add_penalty_variation(const ComponentDecomposition& d,
                           std::span<const double> element_averages, const Mesh& mesh,
                           const BandConfig& band, double scale, Eigen::VectorXd& out) {
  require_fresh(d, element_averages, band, "add_penalty_variation");
  const int m = d.count();
  if (m < 2 || scale == 0.0) return;
  if (!d.distances_computed) {
    throw std::logic_error("add_penalty_variation: distances not computed");
  }

  // Mass term: d(mass_i)/du weighted by the distance-mass coupling of all
  // other components. The coupling per component collapses to one scalar.
  for (int i = 0; i < m; ++i) {
    double coupling = 0.0;  // sum over j != i of mass_j * distance(i, j)
    for (int j = 0; j < m; ++j) {
      if (j != i) coupling += d.masses[j] * d.distance(i, j);
    }
    if (coupling == 0.0) continue;
    const double factor = scale * 2.0 * coupling / band.epsilon;
    for (int t : d.components[i]) {
      const double slope = band_profile(element_averages[t], band).mass_density_slope;
      if (slope == 0.0) continue;
      const double node_value = factor * slope * mesh.element_area[t] / 3.0;
      for (int v : mesh.triangles[t]) out[v] += node_value;
    }
  }

  // Distance term along the stored shortest path of each unordered pair;
  // the ordered sum contributes each pair twice. Path endpoints lie inside
  // components where the distance-weight slope vanishes, so including them
  // adds nothing.
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      const double pair_factor = scale * 2.0 * d.masses[i] * d.masses[j];
      if (pair_factor == 0.0) continue;
      const auto& path = d.path(i, j);
      for (size_t k = 1; k < path.size(); ++k) {
        const int prev = path[k - 1];
        const int cur = path[k];
        const double hop =
            0.5 * (mesh.element_diameter[prev] + mesh.element_diameter[cur]);
        for (int t : {prev, cur}) {
          const double slope =
              band_profile(element_averages[t], band).distance_weight_slope;
          if (slope == 0.0) continue;
          // d(u_T)/d(u_v) = 1/3 at each vertex of T.
          const double node_value = pair_factor * hop * 0.5 * slope / 3.0;
          for (int v : mesh.triangles[t]) out[v] += node_value;
        }
      }
    }
  }
}

const ComponentDecomposition& PenaltyPipeline::decomposition() const {
  if (!have_decomposition_) {
    throw std::logic_error(
        "PenaltyPipeline::decomposition: last evaluation short-circuited with "
        "fewer than two components");
  }
  return decomposition_;
}

int PenaltyPipeline::fast_component_count(const Mesh& mesh, const DualGraph& graph,
                                          const Eigen::VectorXd& u,
                                          const BandConfig& band) {
  if (parent_.size() != static_cast<size_t>(graph.vertex_count)) {
    parent_.resize(graph.vertex_count);
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  mask_.assign(graph.vertex_count, 0);

  // Band test on the vertex sum, with a guard strip around the scaled
  // endpoints inside which the canonical averaged comparison decides, so the
  // membership agrees exactly with extract_interface.
  const double lo = 3.0 * band.alpha;
  const double hi = 3.0 * band.beta;
  const double guard = 1e-12 * std::max({1.0, std::abs(lo), std::abs(hi)});
  auto sum_in_band = [&](double sum) {
    if (sum < lo - guard || sum > hi + guard) return false;
    if (sum > lo + guard && sum < hi - guard) return true;
    const double v = sum / 3.0;
    return v >= band.alpha && v <= band.beta;
  };

  auto find = [this](int x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  };
  auto unite = [&](int x, int y) {
    const int a = find(x), b = find(y);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  };

  interface_scratch_.clear();
  const int n = mesh.grid_subdivisions;
  if (n > 0 && graph.vertex_count == 2 * n * n) {
    // Structured grid: row-wise sweep over cells, sequential access to the
    // two node rows of each cell row; element ids are 2*(j*n + i) (lower
    // triangle, nodes a b c) and +1 (upper triangle, nodes a c d) with
    // a = (i, j), b = (i+1, j), c = (i+1, j+1), d = (i, j+1). Each interior
    // edge is merged when its later cell is visited: the in-cell diagonal,
    // the upper triangle's left edge (lower triangle of the previous cell),
    // and the lower triangle's bottom edge (upper triangle one row down).
    const double* v = u.data();
    for (int j = 0; j < n; ++j) {
      const double* row0 = v + static_cast<size_t>(j) * (n + 1);
      const double* row1 = row0 + (n + 1);
      const int base = 2 * j * n;
      for (int i = 0; i < n; ++i) {
        const double a = row0[i], b = row0[i + 1], c = row1[i + 1], d = row1[i];
        const double ac = a + c;
        const int low = base + 2 * i;
        const bool low_in = sum_in_band(ac + b);
        const bool up_in = sum_in_band(ac + d);
        if (low_in) {
          mask_[low] = 1;
          interface_scratch_.push_back(low);
          if (j > 0 && mask_[low - 2 * n + 1]) unite(low, low - 2 * n + 1);
          if (up_in) unite(low, low + 1);
        }
        if (up_in) {
          mask_[low + 1] = 1;
          interface_scratch_.push_back(low + 1);
          if (i > 0 && mask_[low - 2]) unite(low + 1, low - 2);
        }
      }
    }
  } else {
    for (int t = 0; t < graph.vertex_count; ++t) {
      const auto& tri = mesh.triangles[t];
      if (sum_in_band(u[tri[0]] + u[tri[1]] + u[tri[2]])) {
        mask_[t] = 1;
        interface_scratch_.push_back(t);
      }
    }
    for (int t : interface_scratch_) {
      for (int k = graph.adjacency_offsets[t]; k < graph.adjacency_offsets[t + 1];
           ++k) {
        const int other = graph.adjacent_vertex[k];
        if (other > t && mask_[other]) unite(t, other);
      }
    }
  }
  int count = 0;
  for (int t : interface_scratch_) {
    if (find(t) == t) ++count;
  }
  for (int t : interface_scratch_) parent_[t] = t;  // restore identity
  return count;
}

PenaltyResult PenaltyPipeline::evaluate(const Mesh& mesh, DualGraph& graph,
                                        const Eigen::VectorXd& u,
                                        const BandConfig& band,
                                        Eigen::VectorXd* gradient) {
  PenaltyResult result;
  have_decomposition_ = false;
  result.component_count = fast_component_count(mesh, graph, u, band);
  if (result.component_count < 2) {
    // Single or empty interface: the energy and its variation vanish.
    return result;
  }
  element_averages(mesh, u, averages_);
  decomposition_ = decompose_components(graph, interface_scratch_, averages_, band);
  have_decomposition_ = true;
  assign_edge_weights(graph, averages_, band);
  component_distances(graph, decomposition_);
  component_masses(decomposition_, averages_, mesh, band);
  result.cbar = penalty_energy(decomposition_);
  result.scaled_energy = band.flow_scale() * result.cbar;
  if (gradient != nullptr) {
    add_penalty_variation(decomposition_, averages_, mesh, band, band.flow_scale(),
                          *gradient);
  }
  return result;
}

DualBandPenalty dual_band_penalty(const Mesh& mesh, DualGraph& graph,
                                  const Eigen::VectorXd& u, const BandConfig& cfg_plus,
                                  const BandConfig& cfg_minus) {
  DualBandPenalty result;
  result.variation = Eigen::VectorXd::Zero(u.size());
  PenaltyPipeline pipeline;
  result.plus = pipeline.evaluate(mesh, graph, u, cfg_plus, &result.variation);
  result.minus = pipeline.evaluate(mesh, graph, u, cfg_minus, &result.variation);
  result.energy = result.plus.scaled_energy + result.minus.scaled_energy;
  return result;
}

}  // namespace phasecon
