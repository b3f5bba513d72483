#include "core/axis_matrix.hpp"

#include <Eigen/SVD>

#include "core/errors.hpp"

namespace hybridloc {

AxisEstimateMatrix build_axis_matrix(const FingerprintDataset& dataset,
                                     Axis axis) {
  dataset.validate();
  const auto m = static_cast<Eigen::Index>(dataset.record_count());
  const auto n = static_cast<Eigen::Index>(dataset.technology_count());
  AxisEstimateMatrix out;
  out.axis = axis;
  out.entries.resize(m, n);
  out.truth.resize(m);
  for (Eigen::Index j = 0; j < m; ++j) {
    const auto& rec = dataset.records[static_cast<std::size_t>(j)];
    out.truth(j) = rec.true_position.coord(axis);
    for (Eigen::Index i = 0; i < n; ++i) {
      out.entries(j, i) = rec.estimates[static_cast<std::size_t>(i)].coord(axis);
    }
  }
  return out;
}

CorrelationMatrix correlation_matrix(const AxisEstimateMatrix& u) {
  if (u.entries.size() == 0) {
    throw InvalidInputError("empty estimate matrix");
  }
  return CorrelationMatrix{u.entries.transpose() * u.entries};
}

namespace {

// Ratio of smallest to largest singular value over all n column directions;
// 0 for a zero matrix or when there are more columns than rows (the SVD
// only reports the min(m, n) leading values, the rest are structural zeros).
double singular_ratio(const Eigen::MatrixXd& m) {
  if (m.cols() > m.rows()) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& sv = svd.singularValues();
  const double largest = sv(0);
  if (largest <= 0.0) return 0.0;
  return sv(sv.size() - 1) / largest;
}

}  // namespace

std::pair<AxisEstimateMatrix, std::vector<int>> remove_dependent_columns(
    const AxisEstimateMatrix& u, double tol) {
  if (tol <= 0.0) {
    throw InvalidInputError("rank tolerance must be positive");
  }
  const Eigen::Index n = u.entries.cols();
  std::vector<int> kept;
  std::vector<int> removed;
  Eigen::MatrixXd candidate(u.entries.rows(), 0);
  for (Eigen::Index i = 0; i < n; ++i) {
    candidate.conservativeResize(Eigen::NoChange, candidate.cols() + 1);
    candidate.col(candidate.cols() - 1) = u.entries.col(i);
    if (singular_ratio(candidate) > tol) {
      kept.push_back(static_cast<int>(i));
    } else {
      candidate.conservativeResize(Eigen::NoChange, candidate.cols() - 1);
      removed.push_back(static_cast<int>(i));
    }
  }
  if (kept.empty()) {
    throw DegenerateInputError("all columns are numerically zero");
  }
  AxisEstimateMatrix out;
  out.axis = u.axis;
  out.truth = u.truth;
  out.entries = candidate;
  return {std::move(out), std::move(removed)};
}

}  // namespace hybridloc
