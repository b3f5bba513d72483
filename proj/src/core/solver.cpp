#include "core/solver.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <ostream>

#include "core/dataset_csv.hpp"
#include "core/errors.hpp"

namespace hybridloc {

namespace {

constexpr std::uint64_t kBoundCap = 1000000000;  // keep 10 * k_bound sane

void check_alpha_size(const AxisObjective& obj, const CoefficientVector& alpha) {
  if (static_cast<Eigen::Index>(alpha.size()) != obj.matrix.entries.cols()) {
    throw InvalidInputError(
        "coefficient vector has " + std::to_string(alpha.size()) +
        " entries, matrix has " + std::to_string(obj.matrix.entries.cols()) +
        " columns");
  }
}

double residual(const AxisObjective& obj, const std::vector<double>& alpha,
                Eigen::Index j) {
  double r = -obj.matrix.truth(j);
  for (Eigen::Index i = 0; i < obj.matrix.entries.cols(); ++i) {
    r += alpha[static_cast<std::size_t>(i)] * obj.matrix.entries(j, i);
  }
  return r;
}

bool all_zero(const Eigen::MatrixXd& m) {
  return m.size() == 0 || m.cwiseAbs().maxCoeff() == 0.0;
}

}  // namespace

const char* stop_reason_name(StopReason r) {
  switch (r) {
    case StopReason::kTolerance: return "tolerance";
    case StopReason::kIterateFixed: return "iterate_fixed";
    default: return "max_iter";
  }
}

double objective(const AxisObjective& obj, const CoefficientVector& alpha) {
  check_alpha_size(obj, alpha);
  // Compensated summation: descent checks downstream compare consecutive
  // values at 1e-12 slack, so the sum itself must not drift.
  double sum = 0.0;
  double carry = 0.0;
  for (Eigen::Index j = 0; j < obj.matrix.entries.rows(); ++j) {
    const double term =
        obj.penalty.value(residual(obj, alpha.weights, j)) - carry;
    const double next = sum + term;
    carry = (next - sum) - term;
    sum = next;
  }
  return sum;
}

std::vector<double> gradient(const AxisObjective& obj,
                             const CoefficientVector& alpha) {
  check_alpha_size(obj, alpha);
  const Eigen::Index n = obj.matrix.entries.cols();
  std::vector<double> grad(static_cast<std::size_t>(n), 0.0);
  for (Eigen::Index j = 0; j < obj.matrix.entries.rows(); ++j) {
    const double slope = obj.penalty.first_derivative(
        residual(obj, alpha.weights, j));
    for (Eigen::Index i = 0; i < n; ++i) {
      grad[static_cast<std::size_t>(i)] += obj.matrix.entries(j, i) * slope;
    }
  }
  return grad;
}

std::uint64_t iteration_bound(double q, std::size_t n, double eps) {
  if (!(q > 0.0) || !(q < 1.0)) {
    throw InvalidInputError("contraction constant must lie in (0, 1), got " +
                            std::to_string(q));
  }
  if (!(eps > 0.0) || n == 0) {
    throw InvalidInputError("iteration bound needs eps > 0 and N >= 1");
  }
  const double ratio =
      std::sqrt(1.0 - 1.0 / static_cast<double>(n)) / eps;
  if (!(ratio > 1.0)) return 0;
  const double bound = std::ceil(std::log(ratio) / std::log(1.0 / q));
  if (!(bound < static_cast<double>(kBoundCap))) return kBoundCap;
  return static_cast<std::uint64_t>(bound);
}

std::pair<CoefficientVector, SolverTrace> solve_gpm(const AxisObjective& obj,
                                                    const SolverConfig& cfg) {
  const Eigen::Index n = obj.matrix.entries.cols();
  if (n < 1) {
    throw InvalidInputError("objective has no technologies");
  }
  if (!(cfg.eps_opt > 0.0)) {
    throw InvalidInputError("eps_opt must be positive");
  }

  SolverTrace trace;
  CoefficientVector alpha;
  alpha.weights.assign(static_cast<std::size_t>(n),
                       1.0 / static_cast<double>(n));

  if (n == 1) {
    alpha.weights = {1.0};
    trace.final_objective = objective(obj, alpha);
    trace.stop_reason = StopReason::kIterateFixed;
    if (cfg.record_trace) trace.iterates.push_back({0, alpha.weights,
                                                    trace.final_objective});
    return {alpha, trace};
  }
  if (all_zero(obj.matrix.entries)) {
    // No signal on this axis: every feasible vector scores the same.
    trace.degenerate_axis = true;
    trace.final_objective =
        obj.matrix.entries.rows() == 0 ? 0.0 : objective(obj, alpha);
    trace.stop_reason = StopReason::kIterateFixed;
    if (cfg.record_trace) trace.iterates.push_back({0, alpha.weights,
                                                    trace.final_objective});
    return {alpha, trace};
  }

  const CurvatureBounds bounds = curvature_bounds(obj.penalty, obj.matrix,
                                                  cfg.beta);
  trace.beta = bounds.beta;
  trace.q = bounds.q;
  trace.clamp_applied = bounds.clamp_applied;
  trace.k_bound = bounds.q == 0.0
                      ? 1
                      : iteration_bound(bounds.q, static_cast<std::size_t>(n),
                                        cfg.eps_opt);
  const std::uint64_t max_iter =
      cfg.max_iter > 0
          ? cfg.max_iter
          : std::max<std::uint64_t>(
                std::min<std::uint64_t>(10 * trace.k_bound, 10 * kBoundCap),
                100000);

  double f = objective(obj, alpha);
  if (!std::isfinite(f)) {
    throw NumericalFailureError("objective is not finite at the start");
  }
  if (cfg.record_trace) {
    trace.iterates.push_back({0, alpha.weights, f, bounds.beta});
  }

  // The descent certificate can be violated for p < 2 when a residual
  // crosses the curvature clamp's dead zone (V'' is unbounded there, so
  // L_max understates the true curvature). An ascending step is rejected
  // and the step size halves; for p >= 2 the certificate is exact and a
  // rejection can only mean float-level stagnation at the optimum, which
  // the halving turns into a clean fixed-point or tolerance stop.
  double beta = bounds.beta;
  std::uint64_t recorded = 0;
  trace.stop_reason = StopReason::kMaxIter;
  for (std::uint64_t attempt = 1; attempt <= max_iter; ++attempt) {
    const std::vector<double> grad = gradient(obj, alpha);
    std::vector<double> step(alpha.weights.size());
    for (std::size_t i = 0; i < step.size(); ++i) {
      step[i] = alpha.weights[i] - beta * grad[i];
    }
    CoefficientVector next = project_sorted(step).point;
    const double f_next = objective(obj, next);
    if (!std::isfinite(f_next)) {
      throw NumericalFailureError("objective became non-finite at attempt " +
                                  std::to_string(attempt));
    }
    if (f_next > f) {
      beta *= 0.5;
      if (beta < bounds.beta * 0x1p-60) {
        trace.stop_reason = StopReason::kTolerance;
        break;
      }
      continue;
    }
    f = f_next;
    ++recorded;
    if (cfg.record_trace) {
      trace.iterates.push_back({recorded, next.weights, f, beta});
    }
    trace.steps = recorded;

    if (next.weights == alpha.weights) {
      trace.stop_reason = StopReason::kIterateFixed;
      alpha = std::move(next);
      break;
    }
    double dist2 = 0.0;
    for (std::size_t i = 0; i < step.size(); ++i) {
      const double d = next.weights[i] - alpha.weights[i];
      dist2 += d * d;
    }
    alpha = std::move(next);
    if (std::sqrt(dist2) < cfg.eps_opt) {
      trace.stop_reason = StopReason::kTolerance;
      break;
    }
  }
  trace.final_objective = f;
  return {alpha, trace};
}

namespace {

// Objective along one lattice slice: f(a) = sum_j V(base_j + a * dir_j),
// a in {0, ..., span}. Convex in a for any convex penalty.
struct Slice {
  const PenaltyFunction* penalty;
  const Eigen::VectorXd* base;
  const Eigen::VectorXd* dir;

  double eval(std::int64_t a) const {
    const double t = static_cast<double>(a);
    double sum = 0.0;
    for (Eigen::Index j = 0; j < base->size(); ++j) {
      sum += penalty->value((*base)(j) + t * (*dir)(j));
    }
    return sum;
  }
};

// Exact integer minimizer of a convex sequence on [0, span].
std::int64_t minimize_slice(const Slice& s, std::int64_t span, double p) {
  if (span <= 0) return 0;
  if (p == 2.0) {
    // Quadratic in a: sum d^2 * a^2 + 2 sum(base*d) * a + const.
    const double curvature = s.dir->squaredNorm();
    if (curvature == 0.0) return 0;  // flat slice
    const double linear = s.base->dot(*s.dir);
    const double cont = -linear / curvature;
    std::int64_t best = 0;
    double best_val = std::numeric_limits<double>::infinity();
    for (std::int64_t cand :
         {static_cast<std::int64_t>(std::floor(cont)),
          static_cast<std::int64_t>(std::ceil(cont)), std::int64_t{0}, span}) {
      const std::int64_t a = std::clamp<std::int64_t>(cand, 0, span);
      const double v = s.eval(a);
      if (v < best_val) {
        best_val = v;
        best = a;
      }
    }
    return best;
  }
  // Integer ternary search; plateaus (dependent columns) keep the minimum
  // value inside the shrinking bracket.
  std::int64_t lo = 0;
  std::int64_t hi = span;
  while (hi - lo > 2) {
    const std::int64_t m1 = lo + (hi - lo) / 3;
    const std::int64_t m2 = hi - (hi - lo) / 3;
    const double f1 = s.eval(m1);
    const double f2 = s.eval(m2);
    if (f1 < f2) {
      hi = m2;
    } else if (f1 > f2) {
      lo = m1;
    } else {
      lo = m1;
      hi = m2;
    }
  }
  std::int64_t best = lo;
  double best_val = s.eval(lo);
  for (std::int64_t a = lo + 1; a <= hi; ++a) {
    const double v = s.eval(a);
    if (v < best_val) {
      best_val = v;
      best = a;
    }
  }
  return best;
}

}  // namespace

CoefficientVector solve_oracle(const AxisObjective& obj, double resolution) {
  const Eigen::Index n = obj.matrix.entries.cols();
  const Eigen::Index m = obj.matrix.entries.rows();
  if (n < 1 || m < 1) {
    throw InvalidInputError("oracle needs a nonempty matrix");
  }
  if (n > 5) {
    throw UnsupportedError("exhaustive search supports N <= 5, got " +
                           std::to_string(n));
  }
  if (!(resolution > 0.0) || resolution > 1.0) {
    throw InvalidInputError("resolution must lie in (0, 1]");
  }
  CoefficientVector best;
  if (n == 1) {
    best.weights = {1.0};
    return best;
  }
  const auto k_total = static_cast<std::int64_t>(std::llround(1.0 / resolution));
  const double scale = 1.0 / static_cast<double>(k_total);

  std::vector<std::int64_t> counts(static_cast<std::size_t>(n), 0);
  std::vector<std::int64_t> best_counts;
  double best_val = std::numeric_limits<double>::infinity();
  const Eigen::VectorXd dir =
      (obj.matrix.entries.col(n - 2) - obj.matrix.entries.col(n - 1)) * scale;

  // Enumerate the first N-2 lattice coordinates; solve the final
  // two-coordinate slice exactly.
  const std::function<void(Eigen::Index, std::int64_t, Eigen::VectorXd)> visit =
      [&](Eigen::Index coord, std::int64_t remaining, Eigen::VectorXd partial) {
        if (coord == n - 2) {
          const Eigen::VectorXd base =
              partial +
              obj.matrix.entries.col(n - 1) *
                  (static_cast<double>(remaining) * scale);
          const Slice slice{&obj.penalty, &base, &dir};
          const std::int64_t a = minimize_slice(slice, remaining,
                                                obj.penalty.p());
          const double val = slice.eval(a);
          if (val < best_val) {
            best_val = val;
            counts[static_cast<std::size_t>(n - 2)] = a;
            counts[static_cast<std::size_t>(n - 1)] = remaining - a;
            best_counts = counts;
          }
          return;
        }
        for (std::int64_t k = 0; k <= remaining; ++k) {
          counts[static_cast<std::size_t>(coord)] = k;
          visit(coord + 1, remaining - k,
                partial + obj.matrix.entries.col(coord) *
                              (static_cast<double>(k) * scale));
        }
      };
  visit(0, k_total, -obj.matrix.truth);

  best.weights.resize(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < best.weights.size(); ++i) {
    best.weights[i] = static_cast<double>(best_counts[i]) * scale;
  }
  return best;
}

void write_trace_csv(const SolverTrace& trace, std::ostream& out) {
  const std::size_t n = trace.iterates.empty() ? 0
                                               : trace.iterates[0].alpha.size();
  out << "k,f";
  for (std::size_t i = 1; i <= n; ++i) out << ",alpha_" << i;
  out << "\n";
  for (const auto& point : trace.iterates) {
    out << point.k << ',' << format_double(point.f);
    for (double a : point.alpha) out << ',' << format_double(a);
    out << "\n";
  }
}

}  // namespace hybridloc
