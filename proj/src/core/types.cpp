#include "core/types.hpp"

#include <cmath>
#include <unordered_set>

#include "core/errors.hpp"

namespace hybridloc {

const char* axis_name(Axis axis) {
  switch (axis) {
    case Axis::X: return "x";
    case Axis::Y: return "y";
    default: return "z";
  }
}

Axis axis_from_name(const std::string& name) {
  if (name == "x") return Axis::X;
  if (name == "y") return Axis::Y;
  if (name == "z") return Axis::Z;
  throw InvalidInputError("unknown axis name: " + name);
}

bool Position::finite() const {
  return std::isfinite(x) && std::isfinite(y) && std::isfinite(z);
}

int FingerprintDataset::technology_index(const std::string& name) const {
  for (std::size_t i = 0; i < technologies.size(); ++i) {
    if (technologies[i] == name) return static_cast<int>(i);
  }
  return -1;
}

void FingerprintDataset::validate() const {
  if (technologies.empty()) {
    throw InvalidInputError("dataset has no technologies");
  }
  if (records.empty()) {
    throw InvalidInputError("dataset has no records");
  }
  std::unordered_set<std::string> names(technologies.begin(),
                                        technologies.end());
  if (names.size() != technologies.size()) {
    throw InvalidInputError("duplicate technology name");
  }
  std::unordered_set<std::string> ids;
  for (const auto& rec : records) {
    if (!ids.insert(rec.point_id).second) {
      throw InvalidInputError("duplicate point_id: " + rec.point_id);
    }
    if (!rec.true_position.finite()) {
      throw InvalidInputError("non-finite true position at " + rec.point_id);
    }
    if (rec.estimates.size() != technologies.size()) {
      throw InvalidInputError("record " + rec.point_id + " has " +
                              std::to_string(rec.estimates.size()) +
                              " estimates, expected " +
                              std::to_string(technologies.size()));
    }
    for (const auto& est : rec.estimates) {
      if (!est.finite()) {
        throw InvalidInputError("non-finite estimate at " + rec.point_id);
      }
    }
  }
}

}  // namespace hybridloc
