#include "core/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "core/errors.hpp"

namespace hybridloc {

namespace {

void check_input(const std::vector<double>& z) {
  if (z.empty()) {
    throw InvalidInputError("cannot project an empty vector");
  }
  for (double v : z) {
    if (std::isnan(v)) {
      throw InvalidInputError("cannot project a vector with NaN entries");
    }
  }
}

// Kill accumulated float error: spread (sum - 1) over the positive support,
// then clamp the sub-ulp negatives that the subtraction can create.
void renormalize(std::vector<double>& w) {
  double sum = 0.0;
  std::size_t support = 0;
  for (double v : w) {
    sum += v;
    if (v > 0.0) ++support;
  }
  if (support == 0) return;
  const double correction = (sum - 1.0) / static_cast<double>(support);
  for (double& v : w) {
    if (v > 0.0) v -= correction;
    if (v < 0.0) v = 0.0;
  }
}

}  // namespace

ProjectionResult project_sorted(const std::vector<double>& z) {
  check_input(z);
  const std::size_t n = z.size();
  ProjectionResult out;
  if (n == 1) {
    out.point.weights = {1.0};
    out.support_size = 1;
    out.lambda = 1.0 - z[0];
    return out;
  }

  std::vector<double> m(n);
  for (std::size_t i = 0; i < n; ++i) m[i] = -z[i];
  std::stable_sort(m.begin(), m.end());

  double prefix = 0.0;
  double lambda = 0.0;
  std::size_t support = 0;
  for (std::size_t k = 1; k <= n; ++k) {
    prefix += m[k - 1];
    const double candidate = (1.0 + prefix) / static_cast<double>(k);
    const double upper = (k == n) ? m[0] + 1.0 : m[k];
    if (m[k - 1] <= candidate && candidate <= upper) {
      lambda = candidate;
      support = k;
      break;
    }
  }
  if (support == 0) {
    // The threshold rule always admits some n in exact arithmetic; reaching
    // this point means rounding broke both bracket comparisons at once.
    throw NumericalFailureError("simplex projection found no valid threshold");
  }

  out.point.weights.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.point.weights[i] = std::max(lambda - (-z[i]), 0.0);
  }
  renormalize(out.point.weights);
  out.support_size = support;
  out.lambda = lambda;
  return out;
}

ProjectionResult project_bisect(const std::vector<double>& z, double eps_tol) {
  check_input(z);
  if (!(eps_tol > 0.0)) {
    throw InvalidInputError("bisection tolerance must be positive");
  }
  const std::size_t n = z.size();
  ProjectionResult out;
  if (n == 1) {
    out.point.weights = {1.0};
    out.support_size = 1;
    out.lambda = 1.0 - z[0];
    return out;
  }

  std::vector<double> c(n);
  for (std::size_t i = 0; i < n; ++i) c[i] = -z[i];
  const double c_min = *std::min_element(c.begin(), c.end());

  const auto g = [&](double lambda) {
    double sum = 0.0;
    for (double ci : c) sum += std::max(lambda - ci, 0.0);
    return sum - 1.0;
  };

  double lo = c_min;        // g(lo) = -1
  double hi = c_min + 1.0;  // g(hi) >= 0
  while (hi - lo >= eps_tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // interval at float resolution
    if (g(mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double lambda = 0.5 * (lo + hi);

  out.point.weights.resize(n);
  std::size_t support = 0;
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = std::max(lambda - c[i], 0.0);
    out.point.weights[i] = w;
    sum += w;
    if (w > 0.0) ++support;
  }
  if (sum <= 0.0) {
    throw NumericalFailureError("bisection collapsed to an empty support");
  }
  for (double& w : out.point.weights) w /= sum;
  renormalize(out.point.weights);
  out.support_size = support;
  out.lambda = lambda;
  return out;
}

}  // namespace hybridloc
