#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

#include "phasecon/band.hpp"
#include "phasecon/connectivity.hpp"
#include "phasecon/fem.hpp"
#include "phasecon/mesh.hpp"

namespace phasecon {

/// Fills the per-component interface masses: (1/eps) * sum over component
/// elements of mass_density(u_T) * |T|. Rejects decompositions computed
/// from a different field (stamp mismatch).
void component_masses(ComponentDecomposition& decomposition,
                      std::span<const double> element_averages, const Mesh& mesh,
                      const BandConfig& band);

/// Discrete connectedness energy: sum over ordered component pairs i != j of
/// distance(i,j) * mass_i * mass_j. Zero when fewer than two components.
double penalty_energy(const ComponentDecomposition& decomposition);

/// Adds `scale` times the variation of the connectedness energy with respect
/// to each nodal hat function into `out`. Two contributions per ordered pair:
/// the mass-bump derivative over the pair's components, and the distance
/// variation accumulated along the stored shortest path. Rejects stale
/// decompositions.
void add_penalty_variation(const ComponentDecomposition& decomposition,
                           std::span<const double> element_averages, const Mesh& mesh,
                           const BandConfig& band, double scale, Eigen::VectorXd& out);

struct PenaltyResult {
  int component_count = 0;
  double cbar = 0.0;           // raw discrete connectedness energy
  double scaled_energy = 0.0;  // flow_scale() * cbar
};

/// Per-band evaluation of the whole per-step pipeline: interface extraction,
/// component decomposition, and (only when two or more components exist)
/// edge weights, pairwise distances, masses, energy, and optionally the
/// scaled variation accumulated into `gradient`. The component count is
/// first taken on a union-find fast path with scratch reused across steps;
/// the full decomposition is materialized only when at least two components
/// exist (the energy and variation vanish otherwise).
class PenaltyPipeline {
 public:
  PenaltyResult evaluate(const Mesh& mesh, DualGraph& graph, const Eigen::VectorXd& u,
                         const BandConfig& band, Eigen::VectorXd* gradient);

  /// Valid after an evaluate() that found two or more components.
  const ComponentDecomposition& decomposition() const;

 private:
  int fast_component_count(const Mesh& mesh, const DualGraph& graph,
                           const Eigen::VectorXd& u, const BandConfig& band);

  std::vector<int> parent_;           // identity except while counting
  std::vector<int> interface_scratch_;
  std::vector<char> mask_;
  std::vector<double> averages_;      // filled on the slow path only
  ComponentDecomposition decomposition_;
  bool have_decomposition_ = false;
};

/// Sum of two independently decomposed band penalties, each scaled by its
/// own flow prefactor. Returns the total energy and the variation vector.
struct DualBandPenalty {
  double energy = 0.0;
  Eigen::VectorXd variation;
  PenaltyResult plus;
  PenaltyResult minus;
};
DualBandPenalty dual_band_penalty(const Mesh& mesh, DualGraph& graph,
                                  const Eigen::VectorXd& u, const BandConfig& cfg_plus,
                                  const BandConfig& cfg_minus);

}  // namespace phasecon
