#pragma once

#include <optional>
#include <string>
#include <vector>

#include "core/solver.hpp"
#include "core/types.hpp"

namespace hybridloc {

// Fitted per-axis fusion weights over the full technology list. Technologies
// dropped by rank hygiene keep a zero weight.
struct HybridModel {
  std::vector<std::string> technologies;
  PenaltyFunction penalty = PenaltyFunction::mse();
  CoefficientVector alpha_x;
  CoefficientVector alpha_y;
  CoefficientVector alpha_z;
  std::vector<std::string> flags;

  const CoefficientVector& alpha(Axis axis) const {
    switch (axis) {
      case Axis::X: return alpha_x;
      case Axis::Y: return alpha_y;
      default: return alpha_z;
    }
  }
};

// Ordered corridor sections [b_s, b_{s+1}) on one axis; the last interval is
// closed so the far wall belongs to the last section.
struct SectionPartition {
  Axis axis = Axis::X;
  std::vector<double> boundaries;  // strictly ascending, S + 1 values

  std::size_t section_count() const {
    return boundaries.empty() ? 0 : boundaries.size() - 1;
  }
  void validate() const;

  // Section containing the coordinate; InvalidInputError when out of range.
  std::size_t section_of(double coord) const;
  // Out-of-range coordinates land in the nearest section.
  std::size_t section_of_clamped(double coord) const;

  static SectionPartition uniform(Axis axis, double length,
                                  std::size_t sections);
};

enum class SectioningMode { kTwoLevel, kRfidOracle };

const char* sectioning_mode_name(SectioningMode mode);

struct SectionModel {
  HybridModel model;
  bool fallback = false;  // no usable training data; global model copied in
};

struct SectionedModel {
  SectionPartition partition;
  HybridModel global_model;
  std::vector<SectionModel> sections;
  SectioningMode mode = SectioningMode::kTwoLevel;
  std::vector<std::string> flags;
};

HybridModel fit_hybrid(const FingerprintDataset& dataset,
                       const PenaltyFunction& penalty,
                       const SolverConfig& cfg = {});

Position predict(const HybridModel& model,
                 const std::vector<Position>& estimates);

SectionedModel fit_sectioned(const FingerprintDataset& dataset,
                             const SectionPartition& partition,
                             const PenaltyFunction& penalty,
                             const SolverConfig& cfg, SectioningMode mode);

// two_level: locate the section from the global prediction, then re-predict
// with that section's model. rfid_oracle: the section id must be supplied.
Position predict_sectioned(const SectionedModel& model,
                           const std::vector<Position>& estimates,
                           std::optional<std::size_t> rfid_section = {});

// The tags-only baseline: the middle of the section on the partition axis.
Position rfid_midpoint(const SectionPartition& partition, std::size_t section);

std::string model_to_json(const HybridModel& model);
std::string model_to_json(const SectionedModel& model);

// Either shape, discriminated by the "mode" field.
struct LoadedModel {
  std::optional<HybridModel> hybrid;
  std::optional<SectionedModel> sectioned;
};
LoadedModel model_from_json(const std::string& text);

}  // namespace hybridloc
