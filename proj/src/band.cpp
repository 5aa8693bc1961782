#include "phasecon/band.hpp"

#include <stdexcept>

namespace phasecon {

BandConfig BandConfig::make(double alpha, double beta, double epsilon,
                            double amplitude, int scaling_exponent) {
  if (!(alpha < beta)) throw std::invalid_argument("band: alpha must be < beta");
  if (!(epsilon > 0.0)) throw std::invalid_argument("band: epsilon must be positive");
  if (amplitude < 0.0) throw std::invalid_argument("band: amplitude must be >= 0");
  if (scaling_exponent != 0 && scaling_exponent != 1) {
    throw std::invalid_argument("band: scaling exponent must be 0 or 1");
  }
  BandConfig cfg;
  cfg.alpha = alpha;
  cfg.beta = beta;
  cfg.epsilon = epsilon;
  cfg.amplitude = amplitude;
  cfg.scaling_exponent = scaling_exponent;
  // Normalize the distance weight to 1 at the pure phases. A branch whose
  // pure phase lies inside the band never fires; its constant is recorded
  // as 0 (for beta >= 1 the value of c2 is irrelevant in any admissible
  // field, since u stays below beta there).
  cfg.c1 = (alpha > -1.0) ? 1.0 / ((-1.0 - alpha) * (-1.0 - alpha)) : 0.0;
  cfg.c2 = (beta < 1.0) ? 1.0 / ((beta - 1.0) * (beta - 1.0)) : 0.0;
  const double width = beta - alpha;
  cfg.c3 = 30.0 / (width * width * width * width * width);
  return cfg;
}

}  // namespace phasecon
