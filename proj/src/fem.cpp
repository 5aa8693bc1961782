#include "phasecon/fem.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace phasecon {

P1Operators assemble_p1(const Mesh& mesh) {
  const int nn = mesh.node_count();
  const int ne = mesh.element_count();

  std::vector<Eigen::Triplet<double>> mass_entries;
  std::vector<Eigen::Triplet<double>> stiffness_entries;
  mass_entries.reserve(9 * static_cast<size_t>(ne));
  stiffness_entries.reserve(9 * static_cast<size_t>(ne));
  Eigen::VectorXd lumped = Eigen::VectorXd::Zero(nn);

  for (int t = 0; t < ne; ++t) {
    const auto& tri = mesh.triangles[t];
    const double area = mesh.element_area[t];
    if (!(area > 0.0)) {
      throw std::runtime_error("assemble_p1: degenerate (zero-area) triangle " +
                               std::to_string(t));
    }
    // Edge vector opposite each vertex; grad(lambda_i).grad(lambda_j) * |T|
    // reduces to dot(e_i, e_j) / (4 |T|).
    std::array<std::array<double, 2>, 3> e;
    for (int k = 0; k < 3; ++k) {
      const auto& p = mesh.nodes[tri[(k + 1) % 3]];
      const auto& q = mesh.nodes[tri[(k + 2) % 3]];
      e[k] = {q[0] - p[0], q[1] - p[1]};
    }
    for (int i = 0; i < 3; ++i) {
      lumped[tri[i]] += area / 3.0;
      for (int j = 0; j < 3; ++j) {
        const double kij = (e[i][0] * e[j][0] + e[i][1] * e[j][1]) / (4.0 * area);
        stiffness_entries.emplace_back(tri[i], tri[j], kij);
        const double mij = (i == j) ? area / 6.0 : area / 12.0;
        mass_entries.emplace_back(tri[i], tri[j], mij);
      }
    }
  }

  P1Operators ops;
  ops.mass.resize(nn, nn);
  ops.mass.setFromTriplets(mass_entries.begin(), mass_entries.end());
  ops.stiffness.resize(nn, nn);
  ops.stiffness.setFromTriplets(stiffness_entries.begin(), stiffness_entries.end());
  ops.lumped_mass = std::move(lumped);
  return ops;
}

}  // namespace phasecon
