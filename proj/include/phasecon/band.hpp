#pragma once

#include <cmath>

namespace phasecon {

/// One connectedness band [alpha, beta] with its normalization constants.
///
/// The geodesic edge weight profile vanishes exactly on [alpha, beta] and is
/// normalized so that it equals 1 at the phase value -1 (and at +1 when
/// beta < 1; for beta >= 1 the upper branch is disabled, c2 = 0). The mass
/// bump is supported on (alpha, beta) with unit integral.
struct BandConfig {
  double alpha = 0.85;
  double beta = 0.95;
  double c1 = 0.0;  // lower branch of the distance weight
  double c2 = 0.0;  // upper branch; 0 disables it
  double c3 = 0.0;  // bump normalization, 30 / (beta - alpha)^5
  double epsilon = 0.03;
  double amplitude = 0.0;    // penalty amplitude a >= 0
  int scaling_exponent = 1;  // p in {0, 1}; flow prefactor a * eps^-p

  /// Prefactor applied to the discrete connectedness energy in the flow.
  double flow_scale() const {
    return scaling_exponent == 0 ? amplitude : amplitude / epsilon;
  }

  static BandConfig make(double alpha, double beta, double epsilon,
                         double amplitude, int scaling_exponent);
};

/// Values of the band functions at a phase value s: the geodesic distance
/// weight (zero on the band, quadratic growth outside), the interface mass
/// bump (positive inside the open band), and their one-sided-consistent
/// derivatives. Both functions are C1 across alpha and beta.
struct BandValues {
  double distance_weight = 0.0;
  double distance_weight_slope = 0.0;
  double mass_density = 0.0;
  double mass_density_slope = 0.0;
};

inline BandValues band_profile(double s, const BandConfig& cfg) {
  BandValues v;
  if (s < cfg.alpha) {
    const double d = s - cfg.alpha;
    v.distance_weight = cfg.c1 * d * d;
    v.distance_weight_slope = 2.0 * cfg.c1 * d;
  } else if (s > cfg.beta) {
    const double d = s - cfg.beta;
    v.distance_weight = cfg.c2 * d * d;
    v.distance_weight_slope = 2.0 * cfg.c2 * d;
  }
  if (s > cfg.alpha && s < cfg.beta) {
    const double a = s - cfg.alpha;
    const double b = cfg.beta - s;
    v.mass_density = cfg.c3 * a * a * b * b;
    v.mass_density_slope = 2.0 * cfg.c3 * a * b * (b - a);
  }
  return v;
}

}  // namespace phasecon
