#pragma once

#include <array>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "phasecon/fem.hpp"
#include "phasecon/mesh.hpp"

namespace phasecon {

enum class WellVariant {
  symmetric,  // W(u) = (u^2 - 1)^2 / 4, minima at -1 and +1
  shifted,    // W(u) = u^2 (u - 1)^2 / 4, minima at 0 and 1
};

struct WellValues {
  double value = 0.0;
  double derivative = 0.0;
  double second_derivative = 0.0;
};

WellValues double_well(double u, WellVariant variant);

/// Optimal-profile constant: the integral of sqrt(2 W) between the two well
/// minima. 2*sqrt(2)/3 for the symmetric well, sqrt(2)/12 for the shifted.
double profile_constant(WellVariant variant);

/// Parameters of the phase-field energies.
struct ModelParams {
  double epsilon = 0.03;
  double lambda = 0.0;                 // perimeter-penalty weight in the curvature energy
  double spontaneous_curvature = 0.0;  // H0
  double fidelity_weight = 0.0;        // eta
  WellVariant well = WellVariant::symmetric;
  double curvature_sign = 1.0;  // sigma multiplying the well-derivative term

  double c0() const { return profile_constant(well); }
};

struct EnergyGradient {
  double value = 0.0;
  Eigen::VectorXd gradient;
};

/// Diffuse perimeter: (1/c0) [ (eps/2) u^T K u + (1/eps) sum_i m_i W(u_i) ]
/// with vertex-rule quadrature for the well term, so the returned gradient
/// is the exact derivative of the returned value.
EnergyGradient modica_mortola(const Eigen::VectorXd& u, const P1Operators& ops,
                              const ModelParams& params);

/// Lumped discrete Laplacian, -M_L^{-1} K u (natural boundary behavior).
Eigen::VectorXd discrete_laplacian(const P1Operators& ops, const Eigen::VectorXd& u);

/// Squared curvature-type residual energy:
/// (1/(c0 eps)) * sum_i m_i r_i^2 with
/// r = -eps * laplacian(u) + sigma W'(u)/eps - H0 (1 - u^2)/sqrt(2).
EnergyGradient bending_energy(const Eigen::VectorXd& u, const P1Operators& ops,
                              const ModelParams& params);

/// bending_energy + lambda * modica_mortola. Rejects lambda < 0.
EnergyGradient curvature_energy(const Eigen::VectorXd& u, const P1Operators& ops,
                                const ModelParams& params);

/// eta * (u - g)^T M (u - g) and its gradient.
EnergyGradient fidelity_energy(const Eigen::VectorXd& u, const Eigen::VectorXd& g,
                               const P1Operators& ops, const ModelParams& params);

/// modica_mortola + fidelity_energy (the smooth part of the segmentation
/// functional; the connectedness term is added by the flow driver).
EnergyGradient segmentation_energy(const Eigen::VectorXd& u, const Eigen::VectorXd& g,
                                   const P1Operators& ops, const ModelParams& params);

/// Nodal image of a union of disks with common radius: 1 inside, 0 outside,
/// or a tanh ramp of the given width when smooth_width > 0. Disks must fit
/// inside the mesh domain.
Eigen::VectorXd disk_image(const Mesh& mesh,
                           std::span<const std::array<double, 2>> centers,
                           double radius, double smooth_width);

/// Nodal indicator (optionally smoothed) of the polar set
/// r < base + amplitude * cos(petals * theta), centered at the origin.
Eigen::VectorXd flower_field(const Mesh& mesh, double base_radius,
                             double petal_amplitude, int petal_count,
                             double smooth_width);

/// Two-phase (-1/+1) dumbbell: two disks of the given radius centered at
/// (+-half_separation, 0) joined by a straight neck of the given half-width,
/// with a tanh optimal profile of width parameter eps across the boundary.
Eigen::VectorXd dumbbell_field(const Mesh& mesh, double bulb_radius,
                               double half_separation, double neck_half_width,
                               double epsilon);

}  // namespace phasecon
