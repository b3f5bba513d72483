#pragma once

#include <vector>

namespace hybridloc {

// Nonnegative weights summing to one.
struct CoefficientVector {
  std::vector<double> weights;

  std::size_t size() const { return weights.size(); }
  double operator[](std::size_t i) const { return weights[i]; }
};

// Euclidean projection of z onto the probability simplex, with the
// certificate of the sort-based threshold rule: the projection is
// alpha_i = max(lambda - c_i, 0) with c = -z, where lambda = (1 + sum of the
// support_size smallest c values) / support_size.
struct ProjectionResult {
  CoefficientVector point;
  std::size_t support_size = 0;  // the unique n of the threshold rule
  double lambda = 0.0;
};

// Exact O(N log N) projection: sort c = -z ascending as m_1..m_N, append
// m_{N+1} = m_1 + 1, and take the first n with m_n <= (1 + sum_{i<=n} m_i)/n
// <= m_{n+1}. A final renormalization on the positive support makes the
// weights sum to one exactly up to rounding.
ProjectionResult project_sorted(const std::vector<double>& z);

// Bisection variant: solves g(lambda) = sum_i max(lambda - c_i, 0) - 1 = 0
// on [min c, 1 + min c] to within eps_tol, then renormalizes.
ProjectionResult project_bisect(const std::vector<double>& z, double eps_tol);

}  // namespace hybridloc
