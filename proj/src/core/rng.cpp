#include "core/rng.hpp"

#include <cmath>

namespace hybridloc {

double Rng::gaussian() {
  const double u1 = uniform01();
  const double u2 = uniform01();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

}  // namespace hybridloc
