#pragma once

#include <Eigen/Dense>
#include <vector>

#include "core/types.hpp"

namespace hybridloc {

// Per-axis location information: entries(j, i) is technology i's estimate of
// fingerprint j on this axis, truth(j) the fingerprint's true coordinate.
struct AxisEstimateMatrix {
  Axis axis = Axis::X;
  Eigen::MatrixXd entries;  // M x N
  Eigen::VectorXd truth;    // M

  Eigen::Index fingerprint_count() const { return entries.rows(); }
  Eigen::Index technology_count() const { return entries.cols(); }
};

struct CorrelationMatrix {
  Eigen::MatrixXd entries;  // N x N, U^T U
};

AxisEstimateMatrix build_axis_matrix(const FingerprintDataset& dataset,
                                     Axis axis);

CorrelationMatrix correlation_matrix(const AxisEstimateMatrix& u);

inline constexpr double kDefaultRankTolerance = 1e-10;

// Drops columns until the matrix has full numerical column rank
// (smallest/largest singular value > tol). Scans left to right, so the
// earlier-indexed column of a dependent pair is the one kept. Returns the
// reduced matrix and the dropped column indices (ascending).
// Throws DegenerateInputError when every column is zero.
std::pair<AxisEstimateMatrix, std::vector<int>> remove_dependent_columns(
    const AxisEstimateMatrix& u, double tol = kDefaultRankTolerance);

}  // namespace hybridloc
