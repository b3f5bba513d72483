#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

namespace hybridloc {

enum class Axis { X = 0, Y = 1, Z = 2 };

inline constexpr std::array<Axis, 3> kAllAxes{Axis::X, Axis::Y, Axis::Z};

const char* axis_name(Axis axis);
Axis axis_from_name(const std::string& name);

struct Position {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double coord(Axis axis) const {
    switch (axis) {
      case Axis::X: return x;
      case Axis::Y: return y;
      default: return z;
    }
  }
  void set_coord(Axis axis, double v) {
    switch (axis) {
      case Axis::X: x = v; break;
      case Axis::Y: y = v; break;
      default: z = v; break;
    }
  }
  bool finite() const;
};

// One reference point: where it really is and where each technology puts it.
struct FingerprintRecord {
  std::string point_id;
  Position true_position;
  std::vector<Position> estimates;  // one per technology, technology order
};

struct FingerprintDataset {
  std::vector<std::string> technologies;
  std::vector<FingerprintRecord> records;

  std::size_t technology_count() const { return technologies.size(); }
  std::size_t record_count() const { return records.size(); }
  int technology_index(const std::string& name) const;  // -1 if absent

  // Enforces the structural invariants: M >= 1, N >= 1, unique point ids,
  // exactly N finite estimates per record. Throws InvalidInputError.
  void validate() const;
};

}  // namespace hybridloc
