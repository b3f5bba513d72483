#include "core/penalty.hpp"

#include <charconv>
#include <cmath>

#include "core/dataset_csv.hpp"
#include "core/errors.hpp"

namespace hybridloc {

PenaltyFunction::PenaltyFunction(double p) : p_(p) {
  if (!(p > 1.0) || !std::isfinite(p)) {
    throw InvalidInputError("penalty exponent must satisfy p > 1, got " +
                            std::to_string(p));
  }
}

double PenaltyFunction::value(double t) const {
  if (t == 0.0) return 0.0;
  return std::pow(std::abs(t), p_);
}

double PenaltyFunction::first_derivative(double t) const {
  if (t == 0.0) return 0.0;
  const double mag = p_ * std::pow(std::abs(t), p_ - 1.0);
  return t > 0.0 ? mag : -mag;
}

double PenaltyFunction::second_derivative(double t) const {
  if (p_ == 2.0) return 2.0;
  double a = std::abs(t);
  if (p_ < 2.0 && a < kCurvatureClamp) a = kCurvatureClamp;
  return p_ * (p_ - 1.0) * std::pow(a, p_ - 2.0);
}

namespace {

double parse_positive_double(const std::string& text, const char* what) {
  double v = 0.0;
  auto first = text.data();
  auto last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || !(v > 0.0) || !std::isfinite(v)) {
    throw InvalidInputError(std::string("bad ") + what + ": '" + text + "'");
  }
  return v;
}

}  // namespace

PenaltyFunction PenaltyFunction::parse(const std::string& spec) {
  if (spec == "p2") return mse();
  const std::string mae_prefix = "p1+eps:";
  if (spec.rfind(mae_prefix, 0) == 0) {
    const double eps =
        parse_positive_double(spec.substr(mae_prefix.size()), "penalty eps");
    if (eps >= 1.0) {
      throw InvalidInputError("pseudo-MAE eps must be < 1, got " + spec);
    }
    return pseudo_mae(eps);
  }
  const std::string raw_prefix = "p:";
  if (spec.rfind(raw_prefix, 0) == 0) {
    return PenaltyFunction(
        parse_positive_double(spec.substr(raw_prefix.size()), "penalty p"));
  }
  throw InvalidInputError("unknown penalty spec '" + spec +
                          "' (expected p2, p1+eps:<eps> or p:<p>)");
}

std::string PenaltyFunction::to_string() const {
  if (p_ == 2.0) return "p2";
  if (p_ < 2.0) return "p1+eps:" + format_double(p_ - 1.0);
  return "p:" + format_double(p_);
}

CurvatureBounds curvature_bounds(const PenaltyFunction& penalty,
                                 const AxisEstimateMatrix& u, double beta) {
  const Eigen::Index m = u.entries.rows();
  const Eigen::Index n = u.entries.cols();
  if (m == 0 || n == 0) {
    throw InvalidInputError("empty estimate matrix");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (u.entries.col(i).cwiseAbs().maxCoeff() == 0.0) {
      throw DegenerateInputError("technology column " + std::to_string(i) +
                                 " is all zero");
    }
  }

  CurvatureBounds out;
  out.per_fingerprint_B.resize(static_cast<std::size_t>(m));
  out.per_fingerprint_b.resize(static_cast<std::size_t>(m));
  const double p = penalty.p();
  for (Eigen::Index j = 0; j < m; ++j) {
    const double lo = u.entries.row(j).minCoeff() - u.truth(j);
    const double hi = u.entries.row(j).maxCoeff() - u.truth(j);
    double big = 2.0;
    double small = 2.0;
    if (p != 2.0) {
      // |t| over [lo, hi]: nearest and farthest distance from 0.
      const double amin = (lo <= 0.0 && 0.0 <= hi) ? 0.0
                                                   : std::min(std::abs(lo),
                                                              std::abs(hi));
      const double amax = std::max(std::abs(lo), std::abs(hi));
      if (amin < kCurvatureClamp) out.clamp_applied = true;
      const double near = penalty.second_derivative(
          (amin < kCurvatureClamp ? kCurvatureClamp : amin));
      const double far = penalty.second_derivative(
          (amax < kCurvatureClamp ? kCurvatureClamp : amax));
      // V'' is monotone in |t| away from 0: decreasing for p < 2,
      // increasing for p > 2.
      big = std::max(near, far);
      small = std::min(near, far);
    }
    out.per_fingerprint_B[static_cast<std::size_t>(j)] = big;
    out.per_fingerprint_b[static_cast<std::size_t>(j)] = small;
  }

  double l_max = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index t = 0; t < n; ++t) {
      double sum = 0.0;
      for (Eigen::Index j = 0; j < m; ++j) {
        sum += std::abs(u.entries(j, i) * u.entries(j, t)) *
               out.per_fingerprint_B[static_cast<std::size_t>(j)];
      }
      l_max = std::max(l_max, sum);
    }
  }
  double l_min = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < n; ++i) {
    double sum = 0.0;
    for (Eigen::Index j = 0; j < m; ++j) {
      sum += u.entries(j, i) * u.entries(j, i) *
             out.per_fingerprint_b[static_cast<std::size_t>(j)];
    }
    l_min = std::min(l_min, sum);
  }
  out.L_max = l_max;
  out.l_min = l_min;
  out.beta_max = 2.0 / (static_cast<double>(n) * l_max);
  out.beta = (beta == kAutoBeta) ? out.beta_max / 2.0 : beta;
  if (!(out.beta > 0.0) || !(out.beta < out.beta_max)) {
    throw InvalidInputError("step size must lie in (0, " +
                            std::to_string(out.beta_max) + "), got " +
                            std::to_string(beta));
  }
  const double nd = static_cast<double>(n);
  out.q = std::max(std::abs(1.0 - out.beta * nd * out.l_min),
                   std::abs(1.0 - out.beta * nd * out.L_max));
  return out;
}

}  // namespace hybridloc
