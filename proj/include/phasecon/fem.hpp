#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "phasecon/mesh.hpp"

namespace phasecon {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Assembled P1 operators on a mesh. `mass` is the consistent mass matrix,
/// `stiffness` the Dirichlet form of the gradient, `lumped_mass` the
/// row-sum lumping of `mass` (strictly positive entries).
struct P1Operators {
  SparseMatrix mass;
  SparseMatrix stiffness;
  Eigen::VectorXd lumped_mass;
};

/// Standard P1 assembly over all elements. Throws std::runtime_error naming
/// the element if a zero-area triangle is encountered.
P1Operators assemble_p1(const Mesh& mesh);

}  // namespace phasecon
