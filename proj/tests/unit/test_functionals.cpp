#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "phasecon/functionals.hpp"
#include "support.hpp"

using namespace phasecon;
using testsupport::make_system;

namespace {

Eigen::VectorXd tanh_circle(const Mesh& mesh, double radius, double epsilon,
                            double cx = 0.0, double cy = 0.0) {
  // +1 inside, -1 outside, optimal profile across the circle.
  Eigen::VectorXd u(mesh.node_count());
  const double w = std::numbers::sqrt2 * epsilon;
  for (int i = 0; i < mesh.node_count(); ++i) {
    const double d = std::hypot(mesh.nodes[i][0] - cx, mesh.nodes[i][1] - cy) - radius;
    u[i] = std::tanh(-d / w);
  }
  return u;
}

}  // namespace

TEST_CASE("double well values") {
  const WellValues sym_m1 = double_well(-1.0, WellVariant::symmetric);
  const WellValues sym_p1 = double_well(1.0, WellVariant::symmetric);
  const WellValues sym_0 = double_well(0.0, WellVariant::symmetric);
  CHECK(sym_m1.value == 0.0);
  CHECK(sym_p1.value == 0.0);
  CHECK(sym_0.value == doctest::Approx(0.25));
  CHECK(sym_0.derivative == 0.0);
  CHECK(sym_m1.second_derivative == doctest::Approx(2.0));
  CHECK(sym_p1.second_derivative == doctest::Approx(2.0));

  const WellValues sh_0 = double_well(0.0, WellVariant::shifted);
  const WellValues sh_1 = double_well(1.0, WellVariant::shifted);
  const WellValues sh_half = double_well(0.5, WellVariant::shifted);
  CHECK(sh_0.value == 0.0);
  CHECK(sh_1.value == 0.0);
  CHECK(sh_half.value == doctest::Approx(1.0 / 64.0).epsilon(1e-14));

  // Derivatives agree with finite differences.
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> dist(-1.5, 1.5);
  for (int k = 0; k < 20; ++k) {
    const double x = dist(rng);
    for (WellVariant variant : {WellVariant::symmetric, WellVariant::shifted}) {
      const double d = 1e-6;
      const WellValues mid = double_well(x, variant);
      const WellValues up = double_well(x + d, variant);
      const WellValues down = double_well(x - d, variant);
      CHECK(mid.derivative ==
            doctest::Approx((up.value - down.value) / (2 * d)).epsilon(1e-6));
      CHECK(mid.second_derivative ==
            doctest::Approx((up.derivative - down.derivative) / (2 * d)).epsilon(1e-6));
    }
  }
}

TEST_CASE("profile constants match the defining integral") {
  CHECK(profile_constant(WellVariant::symmetric) ==
        doctest::Approx(2.0 * std::numbers::sqrt2 / 3.0).epsilon(1e-15));
  CHECK(profile_constant(WellVariant::shifted) ==
        doctest::Approx(std::numbers::sqrt2 / 12.0).epsilon(1e-15));

  // Simpson quadrature of sqrt(2 W) between the minima.
  auto integral = [](WellVariant variant, double lo, double hi) {
    const int intervals = 20000;
    const double h = (hi - lo) / intervals;
    double sum = 0.0;
    for (int k = 0; k <= intervals; ++k) {
      const double s = lo + k * h;
      const double f = std::sqrt(2.0 * double_well(s, variant).value);
      sum += ((k == 0 || k == intervals) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0)) * f;
    }
    return sum * h / 3.0;
  };
  CHECK(integral(WellVariant::symmetric, -1.0, 1.0) ==
        doctest::Approx(profile_constant(WellVariant::symmetric)).epsilon(1e-10));
  CHECK(integral(WellVariant::shifted, 0.0, 1.0) ==
        doctest::Approx(profile_constant(WellVariant::shifted)).epsilon(1e-10));
}

TEST_CASE("perimeter energy basics") {
  const auto s = make_system(16);
  ModelParams params;
  params.epsilon = 0.05;
  params.well = WellVariant::symmetric;

  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(s.mesh.node_count());
  const EnergyGradient at_one = modica_mortola(ones, s.ops, params);
  CHECK(at_one.value == doctest::Approx(0.0));
  CHECK(at_one.gradient.lpNorm<Eigen::Infinity>() <= 1e-12);

  const Eigen::VectorXd zeros = Eigen::VectorXd::Zero(s.mesh.node_count());
  const EnergyGradient at_zero = modica_mortola(zeros, s.ops, params);
  const double expected = 1.0 / (4.0 * params.epsilon * params.c0());
  CHECK(at_zero.value == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("perimeter of a tanh circle") {
  // Medium-resolution version of the acceptance check.
  const auto s = make_system(128);
  ModelParams params;
  params.epsilon = 0.03;
  params.well = WellVariant::symmetric;
  const Eigen::VectorXd u = tanh_circle(s.mesh, 0.3, params.epsilon);
  const EnergyGradient e = modica_mortola(u, s.ops, params);
  CHECK(e.value == doctest::Approx(2.0 * std::numbers::pi * 0.3).epsilon(0.03));
}

TEST_CASE("perimeter translation sensitivity is small") {
  const auto s = make_system(128);
  ModelParams params;
  params.epsilon = 0.03;
  params.well = WellVariant::symmetric;
  const double h = 1.0 / 128.0;
  const double e0 =
      modica_mortola(tanh_circle(s.mesh, 0.25, params.epsilon), s.ops, params).value;
  const double e1 =
      modica_mortola(tanh_circle(s.mesh, 0.25, params.epsilon, h, 0.0), s.ops, params)
          .value;
  CHECK(std::abs(e1 - e0) / e0 < 0.01);
}

TEST_CASE("discrete laplacian") {
  const auto s = make_system(64);
  const Eigen::VectorXd constant = Eigen::VectorXd::Constant(s.mesh.node_count(), 2.5);
  CHECK(discrete_laplacian(s.ops, constant).lpNorm<Eigen::Infinity>() <= 1e-9);

  Eigen::VectorXd affine(s.mesh.node_count());
  Eigen::VectorXd quadratic(s.mesh.node_count());
  for (int i = 0; i < s.mesh.node_count(); ++i) {
    affine[i] = 2.0 * s.mesh.nodes[i][0] - 3.0 * s.mesh.nodes[i][1] + 0.5;
    quadratic[i] = s.mesh.nodes[i][0] * s.mesh.nodes[i][0];
  }
  const Eigen::VectorXd lap_affine = discrete_laplacian(s.ops, affine);
  const Eigen::VectorXd lap_quadratic = discrete_laplacian(s.ops, quadratic);
  for (int i = 0; i < s.mesh.node_count(); ++i) {
    if (s.mesh.node_on_boundary[i]) continue;
    CHECK(std::abs(lap_affine[i]) <= 1e-8);
    CHECK(lap_quadratic[i] == doctest::Approx(2.0).epsilon(1e-2));
  }
}

TEST_CASE("curvature energy basics") {
  const auto s = make_system(24);
  ModelParams params;
  params.epsilon = 0.05;
  params.well = WellVariant::symmetric;
  params.spontaneous_curvature = 4.0;
  params.lambda = 0.1;

  const Eigen::VectorXd minus_one = Eigen::VectorXd::Constant(s.mesh.node_count(), -1.0);
  const EnergyGradient e = curvature_energy(minus_one, s.ops, params);
  CHECK(e.value == doctest::Approx(0.0));
  CHECK(e.gradient.lpNorm<Eigen::Infinity>() <= 1e-10);

  ModelParams bad = params;
  bad.lambda = -1.0;
  CHECK_THROWS_AS(curvature_energy(minus_one, s.ops, bad), std::invalid_argument);
}

TEST_CASE("straight wall has small bending energy") {
  const auto s = make_system(256);
  ModelParams params;
  params.epsilon = 0.05;
  params.well = WellVariant::symmetric;
  Eigen::VectorXd u(s.mesh.node_count());
  const double w = std::numbers::sqrt2 * params.epsilon;
  for (int i = 0; i < s.mesh.node_count(); ++i) {
    u[i] = std::tanh(s.mesh.nodes[i][0] / w);
  }
  const EnergyGradient bend = bending_energy(u, s.ops, params);
  CHECK(bend.value <= 0.05);
  const EnergyGradient perim = modica_mortola(u, s.ops, params);
  CHECK(perim.value == doctest::Approx(1.0).epsilon(0.03));
}

TEST_CASE("circle bending energy approximates the squared-curvature integral") {
  const auto s = make_system(384);
  ModelParams params;
  params.epsilon = 0.02;
  params.well = WellVariant::symmetric;
  const double radius = 0.25;
  const Eigen::VectorXd u = tanh_circle(s.mesh, radius, params.epsilon);
  const EnergyGradient bend = bending_energy(u, s.ops, params);
  CHECK(bend.value == doctest::Approx(2.0 * std::numbers::pi / radius).epsilon(0.10));
}

TEST_CASE("fidelity term") {
  const auto s = make_system(128);
  ModelParams params;
  params.epsilon = 0.01;
  params.well = WellVariant::shifted;
  params.fidelity_weight = 10.5;

  const std::array<std::array<double, 2>, 1> center = {{{0.0, 0.0}}};
  for (double radius : {0.16, 0.11}) {
    const Eigen::VectorXd g = disk_image(s.mesh, center, radius, 0.0);
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(s.mesh.node_count());
    const EnergyGradient fid = fidelity_energy(zero, g, s.ops, params);
    const double expected = params.fidelity_weight * std::numbers::pi * radius * radius;
    CHECK(fid.value == doctest::Approx(expected).epsilon(0.05));
    const EnergyGradient at_g = fidelity_energy(g, g, s.ops, params);
    CHECK(at_g.value == 0.0);
  }
}

TEST_CASE("energy gradients match finite differences") {
  const auto s = make_system(12);
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> dist(-1.2, 1.2);
  Eigen::VectorXd u(s.mesh.node_count()), g(s.mesh.node_count());
  for (int i = 0; i < s.mesh.node_count(); ++i) {
    u[i] = dist(rng);
    g[i] = 0.5 + 0.5 * std::tanh(dist(rng));
  }

  ModelParams params;
  params.epsilon = 0.08;
  params.lambda = 0.3;
  params.spontaneous_curvature = 2.0;
  params.fidelity_weight = 4.0;
  params.well = WellVariant::symmetric;

  auto check_gradient = [&](auto&& energy_fn) {
    const EnergyGradient at_u = energy_fn(u);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int trial = 0; trial < 5; ++trial) {
      Eigen::VectorXd direction(s.mesh.node_count());
      for (int i = 0; i < s.mesh.node_count(); ++i) direction[i] = normal(rng);
      direction.normalize();
      const double delta = 1e-6;
      const double up = energy_fn(u + delta * direction).value;
      const double down = energy_fn(u - delta * direction).value;
      const double fd = (up - down) / (2.0 * delta);
      const double analytic = at_u.gradient.dot(direction);
      CHECK(std::abs(fd - analytic) <=
            1e-5 * std::max({std::abs(fd), std::abs(analytic), 1e-8}));
    }
  };

  check_gradient([&](const Eigen::VectorXd& v) { return modica_mortola(v, s.ops, params); });
  check_gradient(
      [&](const Eigen::VectorXd& v) { return curvature_energy(v, s.ops, params); });
  check_gradient(
      [&](const Eigen::VectorXd& v) { return fidelity_energy(v, g, s.ops, params); });
  ModelParams seg = params;
  seg.well = WellVariant::shifted;
  check_gradient(
      [&](const Eigen::VectorXd& v) { return segmentation_energy(v, g, s.ops, seg); });
}

TEST_CASE("synthetic images") {
  const auto s = make_system(100);
  const std::array<std::array<double, 2>, 2> centers = {{{0.3, 0.0}, {-0.3, 0.0}}};
  const Eigen::VectorXd g = disk_image(s.mesh, centers, 0.16, 0.0);
  CHECK(g.minCoeff() == 0.0);
  CHECK(g.maxCoeff() == 1.0);
  // Indicator mass close to the two-disk area.
  double mass = 0.0;
  for (int t = 0; t < s.mesh.element_count(); ++t) {
    mass += s.mesh.element_area[t] * element_average(s.mesh, g, t);
  }
  CHECK(mass == doctest::Approx(2.0 * std::numbers::pi * 0.16 * 0.16).epsilon(0.05));

  const std::array<std::array<double, 2>, 1> outside = {{{0.45, 0.0}}};
  CHECK_THROWS_AS(disk_image(s.mesh, outside, 0.16, 0.0), std::invalid_argument);

  // Flower boundary radius 0.4 at angle 0 and 0.1 at angle pi/5: probe with
  // a hand-built mesh whose nodes sit on those rays.
  const double c = std::cos(std::numbers::pi / 5.0), sn = std::sin(std::numbers::pi / 5.0);
  const Mesh probe = make_mesh(
      {{0.395, 0.0}, {0.405, 0.0}, {0.095 * c, 0.095 * sn}, {0.105 * c, 0.105 * sn}},
      {{0, 1, 2}, {1, 2, 3}});
  const Eigen::VectorXd f = flower_field(probe, 0.25, 0.15, 5, 0.0);
  CHECK(f[0] == 1.0);
  CHECK(f[1] == 0.0);
  CHECK(f[2] == 1.0);
  CHECK(f[3] == 0.0);

  // Dumbbell: +1 in the bulbs, -1 far away, near 0 on the bulb boundary.
  const Eigen::VectorXd d = dumbbell_field(s.mesh, 0.17, 0.21, 0.06, 0.03);
  const auto node_at = [&](double x, double y) {
    int best = 0;
    double best_dist = 1e30;
    for (int i = 0; i < s.mesh.node_count(); ++i) {
      const double dist = std::hypot(s.mesh.nodes[i][0] - x, s.mesh.nodes[i][1] - y);
      if (dist < best_dist) {
        best_dist = dist;
        best = i;
      }
    }
    return best;
  };
  CHECK(d[node_at(0.21, 0.0)] > 0.99);
  CHECK(d[node_at(0.0, 0.0)] > 0.85);    // inside the neck
  CHECK(d[node_at(-0.45, 0.45)] < -0.99);
  CHECK(std::abs(d[node_at(0.21, 0.17)]) < 0.5);
}
