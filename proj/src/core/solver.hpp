#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "core/axis_matrix.hpp"
#include "core/penalty.hpp"
#include "core/simplex.hpp"

namespace hybridloc {

// One axis's fitting problem: f(alpha) = sum_j V(sum_i alpha_i u_ji - truth_j).
struct AxisObjective {
  AxisEstimateMatrix matrix;
  PenaltyFunction penalty;
};

enum class StopReason { kTolerance, kIterateFixed, kMaxIter };

const char* stop_reason_name(StopReason r);

struct TracePoint {
  std::uint64_t k = 0;
  std::vector<double> alpha;
  double f = 0.0;
  double beta_used = 0.0;  // step size that produced this iterate
};

struct SolverTrace {
  std::vector<TracePoint> iterates;  // populated when record_trace is set
  double beta = 0.0;
  double q = 0.0;
  std::uint64_t k_bound = 0;  // contraction-rate iteration bound at eps_opt
  std::uint64_t steps = 0;    // projected-gradient updates performed
  double final_objective = 0.0;
  StopReason stop_reason = StopReason::kIterateFixed;
  bool degenerate_axis = false;  // no rows or all-zero matrix: uniform returned
  bool clamp_applied = false;    // curvature clamp engaged (p < 2 near 0)
};

struct SolverConfig {
  double beta = kAutoBeta;  // explicit step must lie in (0, 2/(N L_max))
  double eps_opt = 1e-10;   // stop when the iterate moves less than this
  std::uint64_t max_iter = 0;  // 0: max(10 * k_bound, 1e5)
  bool record_trace = false;
};

double objective(const AxisObjective& obj, const CoefficientVector& alpha);

std::vector<double> gradient(const AxisObjective& obj,
                             const CoefficientVector& alpha);

// Gradient projection from the uniform start. Stops when the iterate
// repeats exactly, moves less than eps_opt, or max_iter is hit.
std::pair<CoefficientVector, SolverTrace> solve_gpm(const AxisObjective& obj,
                                                    const SolverConfig& cfg);

// Exhaustive minimization over the simplex lattice with the given spacing;
// the independent check for solve_gpm. N <= 5 only.
CoefficientVector solve_oracle(const AxisObjective& obj, double resolution);

// Iterations guaranteeing a q-contraction from the uniform start lands
// within eps of the optimum: ceil(ln(sqrt(1 - 1/N)/eps) / ln(1/q)), >= 0.
std::uint64_t iteration_bound(double q, std::size_t n, double eps);

// CSV rows "k,f,alpha_1,...,alpha_N" for a recorded trace.
void write_trace_csv(const SolverTrace& trace, std::ostream& out);

}  // namespace hybridloc
