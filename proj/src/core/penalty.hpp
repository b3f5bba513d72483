#pragma once

#include <string>
#include <vector>

#include "core/axis_matrix.hpp"

namespace hybridloc {

// Residuals closer to zero than this are treated as being at this distance
// when the second derivative is evaluated with p != 2. For p < 2 the
// curvature |t|^(p-2) blows up at 0, which would force the step size to 0;
// for p > 2 it vanishes, which would void the lower curvature bound.
inline constexpr double kCurvatureClamp = 1e-6;

// Strictly convex scalar penalty V(t) = |t|^p, p > 1. p = 2 is squared
// error; p = 1 + eps with small eps approximates absolute error.
class PenaltyFunction {
public:
  explicit PenaltyFunction(double p);

  double p() const { return p_; }

  double value(double t) const;
  double first_derivative(double t) const;
  double second_derivative(double t) const;

  static PenaltyFunction mse() { return PenaltyFunction(2.0); }
  static PenaltyFunction pseudo_mae(double eps = 1e-4) {
    return PenaltyFunction(1.0 + eps);
  }

  // Config string: "p2" for MSE, "p1+eps:<eps>" for pseudo-MAE, and the
  // general escape hatch "p:<exponent>".
  static PenaltyFunction parse(const std::string& spec);
  std::string to_string() const;

private:
  double p_;
};

// Interval curvature data certifying the gradient-projection step size for
// one axis problem.
struct CurvatureBounds {
  std::vector<double> per_fingerprint_B;  // max V'' over residual interval j
  std::vector<double> per_fingerprint_b;  // min V'' over residual interval j
  double L_max = 0.0;
  double l_min = 0.0;
  double beta_max = 0.0;  // 2 / (N * L_max)
  double beta = 0.0;      // the step actually certified
  double q = 0.0;         // max(|1 - beta N l_min|, |1 - beta N L_max|)
  bool clamp_applied = false;
};

inline constexpr double kAutoBeta = 0.0;

// Computes B_j, b_j over each fingerprint's residual interval
// [min_i entries(j,i) - truth(j), max_i entries(j,i) - truth(j)], then
// L_max = max_{i,t} sum_j |u_ji u_jt| B_j, l_min = min_i sum_j u_ji^2 b_j,
// beta_max = 2/(N L_max) and q for the given step (kAutoBeta selects
// beta_max / 2). Throws DegenerateInputError when a column is all zero and
// InvalidInputError when an explicit beta falls outside (0, beta_max).
CurvatureBounds curvature_bounds(const PenaltyFunction& penalty,
                                 const AxisEstimateMatrix& u,
                                 double beta = kAutoBeta);

}  // namespace hybridloc
