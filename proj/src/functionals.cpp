#include "phasecon/functionals.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace phasecon {

WellValues double_well(double u, WellVariant variant) {
  WellValues w;
  if (variant == WellVariant::symmetric) {
    const double q = u * u - 1.0;
    w.value = 0.25 * q * q;
    w.derivative = u * q;           // u^3 - u
    w.second_derivative = 3.0 * u * u - 1.0;
  } else {
    const double q = u - 1.0;
    w.value = 0.25 * u * u * q * q;
    w.derivative = u * (u - 0.5) * q;  // u^3 - 1.5 u^2 + 0.5 u
    w.second_derivative = 3.0 * u * u - 3.0 * u + 0.5;
  }
  return w;
}

double profile_constant(WellVariant variant) {
  // integral of sqrt(2 W) between the minima:
  //   symmetric: (1/sqrt2) int_{-1}^{1} (1 - s^2) ds = 2 sqrt(2) / 3
  //   shifted:   (1/sqrt2) int_{0}^{1} s (1 - s) ds = sqrt(2) / 12
  return variant == WellVariant::symmetric ? 2.0 * std::numbers::sqrt2_v<double> / 3.0
                                           : std::numbers::sqrt2_v<double> / 12.0;
}

EnergyGradient modica_mortola(const Eigen::VectorXd& u, const P1Operators& ops,
                              const ModelParams& params) {
  const double c0 = params.c0();
  const double eps = params.epsilon;
  EnergyGradient out;
  const Eigen::VectorXd ku = ops.stiffness * u;
  double well_sum = 0.0;
  Eigen::VectorXd well_grad(u.size());
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    const WellValues w = double_well(u[i], params.well);
    well_sum += ops.lumped_mass[i] * w.value;
    well_grad[i] = ops.lumped_mass[i] * w.derivative;
  }
  out.value = (0.5 * eps * u.dot(ku) + well_sum / eps) / c0;
  out.gradient = (eps * ku + well_grad / eps) / c0;
  return out;
}

Eigen::VectorXd discrete_laplacian(const P1Operators& ops, const Eigen::VectorXd& u) {
  return -(ops.stiffness * u).cwiseQuotient(ops.lumped_mass);
}

EnergyGradient bending_energy(const Eigen::VectorXd& u, const P1Operators& ops,
                              const ModelParams& params) {
  const double c0 = params.c0();
  const double eps = params.epsilon;
  const double h0 = params.spontaneous_curvature;
  const double sigma = params.curvature_sign;
  const double inv_sqrt2 = 1.0 / std::numbers::sqrt2_v<double>;

  const Eigen::Index n = u.size();
  Eigen::VectorXd residual(n);
  Eigen::VectorXd residual_local_slope(n);  // d r_i / d u_i without the Laplacian part
  const Eigen::VectorXd lap = discrete_laplacian(ops, u);
  for (Eigen::Index i = 0; i < n; ++i) {
    const WellValues w = double_well(u[i], params.well);
    // sqrt(2 W) realized as the smooth polynomial (1 - u^2)/sqrt(2).
    const double profile = (1.0 - u[i] * u[i]) * inv_sqrt2;
    const double profile_slope = -2.0 * u[i] * inv_sqrt2;
    residual[i] = -eps * lap[i] + sigma * w.derivative / eps - h0 * profile;
    residual_local_slope[i] = sigma * w.second_derivative / eps - h0 * profile_slope;
  }

  EnergyGradient out;
  const Eigen::VectorXd weighted = ops.lumped_mass.cwiseProduct(residual);
  out.value = residual.dot(weighted) / (c0 * eps);
  // Chain rule: the Laplacian contributes eps * K^T M_L^{-1} (M_L r) = eps K r.
  out.gradient = (2.0 / (c0 * eps)) *
                 (eps * (ops.stiffness * residual) +
                  weighted.cwiseProduct(residual_local_slope));
  return out;
}

EnergyGradient curvature_energy(const Eigen::VectorXd& u, const P1Operators& ops,
                                const ModelParams& params) {
  if (params.lambda < 0.0) {
    throw std::invalid_argument("curvature_energy: lambda must be >= 0");
  }
  EnergyGradient out = bending_energy(u, ops, params);
  if (params.lambda != 0.0) {
    const EnergyGradient perimeter = modica_mortola(u, ops, params);
    out.value += params.lambda * perimeter.value;
    out.gradient += params.lambda * perimeter.gradient;
  }
  return out;
}

EnergyGradient fidelity_energy(const Eigen::VectorXd& u, const Eigen::VectorXd& g,
                               const P1Operators& ops, const ModelParams& params) {
  EnergyGradient out;
  const Eigen::VectorXd diff = u - g;
  const Eigen::VectorXd mdiff = ops.mass * diff;
  out.value = params.fidelity_weight * diff.dot(mdiff);
  out.gradient = (2.0 * params.fidelity_weight) * mdiff;
  return out;
}

EnergyGradient segmentation_energy(const Eigen::VectorXd& u, const Eigen::VectorXd& g,
                                   const P1Operators& ops, const ModelParams& params) {
  EnergyGradient out = modica_mortola(u, ops, params);
  const EnergyGradient fid = fidelity_energy(u, g, ops, params);
  out.value += fid.value;
  out.gradient += fid.gradient;
  return out;
}

namespace {

double indicator_from_distance(double signed_distance, double smooth_width) {
  if (smooth_width <= 0.0) return signed_distance < 0.0 ? 1.0 : 0.0;
  return 0.5 * (1.0 - std::tanh(signed_distance / smooth_width));
}

void require_inside_domain(const Mesh& mesh, double x_lo, double x_hi, double y_lo,
                           double y_hi, const char* what) {
  if (mesh.side_length <= 0.0) return;  // hand-built mesh, no box to check
  const double x0 = mesh.origin_x, x1 = mesh.origin_x + mesh.side_length;
  const double y0 = mesh.origin_y, y1 = mesh.origin_y + mesh.side_length;
  if (x_lo < x0 || x_hi > x1 || y_lo < y0 || y_hi > y1) {
    throw std::invalid_argument(std::string(what) + ": geometry outside the domain");
  }
}

}  // namespace

Eigen::VectorXd disk_image(const Mesh& mesh,
                           std::span<const std::array<double, 2>> centers,
                           double radius, double smooth_width) {
  if (!(radius > 0.0)) throw std::invalid_argument("disk_image: radius must be positive");
  for (const auto& c : centers) {
    require_inside_domain(mesh, c[0] - radius, c[0] + radius, c[1] - radius,
                          c[1] + radius, "disk_image");
  }
  Eigen::VectorXd g(mesh.node_count());
  for (int i = 0; i < mesh.node_count(); ++i) {
    const auto& p = mesh.nodes[i];
    double sd = std::numeric_limits<double>::infinity();
    for (const auto& c : centers) {
      sd = std::min(sd, std::hypot(p[0] - c[0], p[1] - c[1]) - radius);
    }
    g[i] = indicator_from_distance(sd, smooth_width);
  }
  return g;
}

Eigen::VectorXd flower_field(const Mesh& mesh, double base_radius,
                             double petal_amplitude, int petal_count,
                             double smooth_width) {
  if (!(base_radius > 0.0) || petal_amplitude < 0.0 || petal_count < 1) {
    throw std::invalid_argument("flower_field: invalid geometry");
  }
  require_inside_domain(mesh, -(base_radius + petal_amplitude),
                        base_radius + petal_amplitude,
                        -(base_radius + petal_amplitude),
                        base_radius + petal_amplitude, "flower_field");
  Eigen::VectorXd u(mesh.node_count());
  for (int i = 0; i < mesh.node_count(); ++i) {
    const auto& p = mesh.nodes[i];
    const double r = std::hypot(p[0], p[1]);
    const double theta = std::atan2(p[1], p[0]);
    const double boundary = base_radius + petal_amplitude * std::cos(petal_count * theta);
    u[i] = indicator_from_distance(r - boundary, smooth_width);
  }
  return u;
}

Eigen::VectorXd dumbbell_field(const Mesh& mesh, double bulb_radius,
                               double half_separation, double neck_half_width,
                               double epsilon) {
  if (!(bulb_radius > 0.0) || !(half_separation >= 0.0) || !(neck_half_width > 0.0)) {
    throw std::invalid_argument("dumbbell_field: invalid geometry");
  }
  require_inside_domain(mesh, -(half_separation + bulb_radius),
                        half_separation + bulb_radius, -bulb_radius, bulb_radius,
                        "dumbbell_field");
  const double w = std::numbers::sqrt2_v<double> * epsilon;
  Eigen::VectorXd u(mesh.node_count());
  for (int i = 0; i < mesh.node_count(); ++i) {
    const auto& p = mesh.nodes[i];
    const double d1 = std::hypot(p[0] - half_separation, p[1]) - bulb_radius;
    const double d2 = std::hypot(p[0] + half_separation, p[1]) - bulb_radius;
    // Signed distance to the neck rectangle |x| <= half_separation,
    // |y| <= neck_half_width (exact outside, conservative inside).
    const double dx = std::abs(p[0]) - half_separation;
    const double dy = std::abs(p[1]) - neck_half_width;
    double dn;
    if (dx <= 0.0 && dy <= 0.0) {
      dn = std::max(dx, dy);
    } else {
      dn = std::hypot(std::max(dx, 0.0), std::max(dy, 0.0));
    }
    const double sd = std::min({d1, d2, dn});
    u[i] = std::tanh(-sd / w);
  }
  return u;
}

}  // namespace phasecon
