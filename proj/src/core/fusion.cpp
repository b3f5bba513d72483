#include "core/fusion.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "core/errors.hpp"

namespace hybridloc {

using nlohmann::json;

void SectionPartition::validate() const {
  if (boundaries.size() < 2) {
    throw InvalidInputError("partition needs at least two boundaries");
  }
  for (std::size_t i = 0; i < boundaries.size(); ++i) {
    if (!std::isfinite(boundaries[i])) {
      throw InvalidInputError("partition boundary is not finite");
    }
    if (i > 0 && !(boundaries[i - 1] < boundaries[i])) {
      throw InvalidInputError("partition boundaries must be strictly ascending");
    }
  }
}

std::size_t SectionPartition::section_of(double coord) const {
  validate();
  if (coord < boundaries.front() || coord > boundaries.back()) {
    throw InvalidInputError("coordinate " + std::to_string(coord) +
                            " lies outside the partition");
  }
  if (coord == boundaries.back()) return section_count() - 1;
  const auto it = std::upper_bound(boundaries.begin(), boundaries.end(), coord);
  return static_cast<std::size_t>(it - boundaries.begin()) - 1;
}

std::size_t SectionPartition::section_of_clamped(double coord) const {
  validate();
  if (coord < boundaries.front()) return 0;
  if (coord > boundaries.back()) return section_count() - 1;
  return section_of(coord);
}

SectionPartition SectionPartition::uniform(Axis axis, double length,
                                           std::size_t sections) {
  if (!(length > 0.0) || sections == 0) {
    throw InvalidInputError("uniform partition needs length > 0 and S >= 1");
  }
  SectionPartition out;
  out.axis = axis;
  out.boundaries.resize(sections + 1);
  for (std::size_t i = 0; i <= sections; ++i) {
    out.boundaries[i] =
        length * static_cast<double>(i) / static_cast<double>(sections);
  }
  return out;
}

const char* sectioning_mode_name(SectioningMode mode) {
  return mode == SectioningMode::kTwoLevel ? "two_level" : "rfid_oracle";
}

namespace {

CoefficientVector uniform_alpha(std::size_t n) {
  CoefficientVector v;
  v.weights.assign(n, 1.0 / static_cast<double>(n));
  return v;
}

// Fit one axis: rank hygiene, solve on the kept columns, re-embed the
// weights over the full technology list.
CoefficientVector fit_axis(const FingerprintDataset& dataset, Axis axis,
                           const PenaltyFunction& penalty,
                           const SolverConfig& cfg,
                           std::vector<std::string>& flags) {
  const auto n = dataset.technology_count();
  const AxisEstimateMatrix full = build_axis_matrix(dataset, axis);
  AxisEstimateMatrix reduced;
  std::vector<int> removed;
  try {
    std::tie(reduced, removed) = remove_dependent_columns(full);
  } catch (const DegenerateInputError&) {
    // Every column zero: no information on this axis, no preference.
    flags.push_back(std::string("axis_") + axis_name(axis) + "_degenerate");
    return uniform_alpha(n);
  }
  for (int idx : removed) {
    flags.push_back(std::string("axis_") + axis_name(axis) + "_dropped_" +
                    dataset.technologies[static_cast<std::size_t>(idx)]);
  }

  AxisObjective obj{std::move(reduced), penalty};
  auto [alpha, trace] = solve_gpm(obj, cfg);
  if (trace.degenerate_axis) {
    flags.push_back(std::string("axis_") + axis_name(axis) + "_degenerate");
  }
  if (trace.clamp_applied) {
    flags.push_back(std::string("axis_") + axis_name(axis) +
                    "_curvature_clamped");
  }

  CoefficientVector out;
  out.weights.assign(n, 0.0);
  std::size_t kept_pos = 0;
  std::vector<bool> dropped(n, false);
  for (int idx : removed) dropped[static_cast<std::size_t>(idx)] = true;
  for (std::size_t i = 0; i < n; ++i) {
    if (!dropped[i]) out.weights[i] = alpha.weights[kept_pos++];
  }
  return out;
}

}  // namespace

HybridModel fit_hybrid(const FingerprintDataset& dataset,
                       const PenaltyFunction& penalty,
                       const SolverConfig& cfg) {
  dataset.validate();
  HybridModel model;
  model.technologies = dataset.technologies;
  model.penalty = penalty;
  model.alpha_x = fit_axis(dataset, Axis::X, penalty, cfg, model.flags);
  model.alpha_y = fit_axis(dataset, Axis::Y, penalty, cfg, model.flags);
  model.alpha_z = fit_axis(dataset, Axis::Z, penalty, cfg, model.flags);
  return model;
}

Position predict(const HybridModel& model,
                 const std::vector<Position>& estimates) {
  if (estimates.size() != model.technologies.size()) {
    throw InvalidInputError("expected " +
                            std::to_string(model.technologies.size()) +
                            " estimates, got " +
                            std::to_string(estimates.size()));
  }
  Position out;
  for (Axis axis : kAllAxes) {
    const auto& alpha = model.alpha(axis);
    double v = 0.0;
    for (std::size_t i = 0; i < estimates.size(); ++i) {
      v += alpha.weights[i] * estimates[i].coord(axis);
    }
    out.set_coord(axis, v);
  }
  return out;
}

SectionedModel fit_sectioned(const FingerprintDataset& dataset,
                             const SectionPartition& partition,
                             const PenaltyFunction& penalty,
                             const SolverConfig& cfg, SectioningMode mode) {
  dataset.validate();
  partition.validate();

  SectionedModel out;
  out.partition = partition;
  out.mode = mode;
  out.global_model = fit_hybrid(dataset, penalty, cfg);

  // Every true position must belong to some section, whichever mode does
  // the assignment.
  for (const auto& rec : dataset.records) {
    partition.section_of(rec.true_position.coord(partition.axis));
  }

  const std::size_t section_count = partition.section_count();
  std::vector<std::vector<FingerprintRecord>> assigned(section_count);
  for (const auto& rec : dataset.records) {
    std::size_t s = 0;
    if (mode == SectioningMode::kRfidOracle) {
      s = partition.section_of(rec.true_position.coord(partition.axis));
    } else {
      const Position predicted = predict(out.global_model, rec.estimates);
      s = partition.section_of_clamped(predicted.coord(partition.axis));
    }
    assigned[s].push_back(rec);
  }

  out.sections.reserve(section_count);
  for (std::size_t s = 0; s < section_count; ++s) {
    SectionModel section;
    if (assigned[s].empty()) {
      section.model = out.global_model;
      section.fallback = true;
      out.flags.push_back("section_" + std::to_string(s) + "_fallback");
    } else {
      FingerprintDataset subset;
      subset.technologies = dataset.technologies;
      subset.records = std::move(assigned[s]);
      section.model = fit_hybrid(subset, penalty, cfg);
      for (const auto& flag : section.model.flags) {
        out.flags.push_back("section_" + std::to_string(s) + "_" + flag);
      }
    }
    out.sections.push_back(std::move(section));
  }
  return out;
}

Position predict_sectioned(const SectionedModel& model,
                           const std::vector<Position>& estimates,
                           std::optional<std::size_t> rfid_section) {
  std::size_t s = 0;
  if (model.mode == SectioningMode::kRfidOracle) {
    if (!rfid_section.has_value()) {
      throw InvalidInputError("rfid_oracle prediction needs a section id");
    }
    s = *rfid_section;
    if (s >= model.sections.size()) {
      throw InvalidInputError("unknown section id " + std::to_string(s));
    }
  } else {
    const Position global = predict(model.global_model, estimates);
    s = model.partition.section_of_clamped(global.coord(model.partition.axis));
  }
  return predict(model.sections[s].model, estimates);
}

Position rfid_midpoint(const SectionPartition& partition, std::size_t section) {
  partition.validate();
  if (section >= partition.section_count()) {
    throw InvalidInputError("unknown section id " + std::to_string(section));
  }
  Position out;
  out.set_coord(partition.axis, 0.5 * (partition.boundaries[section] +
                                       partition.boundaries[section + 1]));
  return out;
}

namespace {

json alpha_to_json(const HybridModel& model) {
  return json{{"x", model.alpha_x.weights},
              {"y", model.alpha_y.weights},
              {"z", model.alpha_z.weights}};
}

void alpha_from_json(const json& j, HybridModel& model) {
  model.alpha_x.weights = j.at("x").get<std::vector<double>>();
  model.alpha_y.weights = j.at("y").get<std::vector<double>>();
  model.alpha_z.weights = j.at("z").get<std::vector<double>>();
}

json hybrid_to_json(const HybridModel& model, const std::string& mode) {
  return json{{"format", "hybridloc-model"},
              {"mode", mode},
              {"technologies", model.technologies},
              {"penalty", model.penalty.to_string()},
              {"alpha", alpha_to_json(model)},
              {"flags", model.flags}};
}

}  // namespace

std::string model_to_json(const HybridModel& model) {
  return hybrid_to_json(model, "global").dump(2);
}

std::string model_to_json(const SectionedModel& model) {
  json j = hybrid_to_json(model.global_model,
                          sectioning_mode_name(model.mode));
  j["partition"] = {{"axis", axis_name(model.partition.axis)},
                    {"boundaries", model.partition.boundaries}};
  json sections = json::array();
  for (const auto& section : model.sections) {
    sections.push_back(json{{"alpha", alpha_to_json(section.model)},
                            {"flags", section.model.flags},
                            {"fallback", section.fallback}});
  }
  j["sections"] = std::move(sections);
  j["flags"] = model.flags;
  j["global_flags"] = model.global_model.flags;
  return j.dump(2);
}

LoadedModel model_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw InvalidInputError(std::string("bad model JSON: ") + e.what());
  }
  try {
    if (j.at("format").get<std::string>() != "hybridloc-model") {
      throw InvalidInputError("not a hybridloc model file");
    }
    HybridModel base;
    base.technologies = j.at("technologies").get<std::vector<std::string>>();
    base.penalty = PenaltyFunction::parse(j.at("penalty").get<std::string>());
    alpha_from_json(j.at("alpha"), base);
    const std::string mode = j.at("mode").get<std::string>();

    LoadedModel out;
    if (mode == "global") {
      base.flags = j.at("flags").get<std::vector<std::string>>();
      out.hybrid = std::move(base);
      return out;
    }
    SectionedModel sectioned;
    if (mode == "two_level") {
      sectioned.mode = SectioningMode::kTwoLevel;
    } else if (mode == "rfid_oracle") {
      sectioned.mode = SectioningMode::kRfidOracle;
    } else {
      throw InvalidInputError("unknown model mode '" + mode + "'");
    }
    base.flags = j.value("global_flags", std::vector<std::string>{});
    sectioned.partition.axis =
        axis_from_name(j.at("partition").at("axis").get<std::string>());
    sectioned.partition.boundaries =
        j.at("partition").at("boundaries").get<std::vector<double>>();
    sectioned.partition.validate();
    for (const auto& js : j.at("sections")) {
      SectionModel section;
      section.model.technologies = base.technologies;
      section.model.penalty = base.penalty;
      alpha_from_json(js.at("alpha"), section.model);
      section.model.flags = js.at("flags").get<std::vector<std::string>>();
      section.fallback = js.at("fallback").get<bool>();
      sectioned.sections.push_back(std::move(section));
    }
    if (sectioned.sections.size() != sectioned.partition.section_count()) {
      throw InvalidInputError("section count does not match the partition");
    }
    sectioned.flags = j.at("flags").get<std::vector<std::string>>();
    sectioned.global_model = std::move(base);
    out.sectioned = std::move(sectioned);
    return out;
  } catch (const json::exception& e) {
    throw InvalidInputError(std::string("bad model JSON: ") + e.what());
  }
}

}  // namespace hybridloc
