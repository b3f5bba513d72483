#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/fusion.hpp"
#include "core/rng.hpp"
#include "core/types.hpp"

namespace hybridloc {

// Log-distance path-loss channel: rssi(d) = rssi_at_1m - 10 n log10(d) plus
// gaussian shadowing noise.
struct PathLossParams {
  std::string name;
  double rssi_at_1m = -40.0;  // dBm
  double exponent_n = 2.0;
  double noise_sigma = 0.0;  // dB

  void validate() const;
};

// Distances below this are treated as being at the floor (log singularity).
inline constexpr double kMinDistance = 0.1;

struct CorridorConfig {
  double length = 60.0;
  double grid_step = 0.915;
  std::vector<PathLossParams> technologies;
  std::uint64_t rng_seed = 0;

  void validate() const;
};

// Qualitative stand-ins for the three radio technologies; not measured
// values.
std::vector<PathLossParams> default_technologies();

double simulate_rssi(const PathLossParams& params, double distance, Rng& rng);

// Inverts the noiseless model; the result is capped at max_distance
// (pass 2x the corridor length, or infinity for no cap).
double invert_rssi(const PathLossParams& params, double rssi,
                   double max_distance);

// Least-squares calibration of (rssi_at_1m, exponent_n) against log10
// distance; noise_sigma is the residual standard deviation.
PathLossParams fit_path_loss(
    const std::vector<std::pair<double, double>>& distance_rssi_samples);

// Fingerprints along the x axis at 0, step, 2*step, ... (the origin point is
// shifted to the distance floor). One RSSI draw per (technology, point) from
// the documented per-pair stream.
FingerprintDataset generate_corridor_dataset(const CorridorConfig& cfg);

// Error-free sectioning from the true position.
std::size_t observe_rfid_section(const SectionPartition& partition,
                                 const Position& true_position);

// JSON shape:
// {"length": 60.0, "grid_step": 0.915, "seed": 7,
//  "technologies": [{"name": "BLE", "rssi_at_1m": -46.0,
//                    "exponent_n": 2.2, "noise_sigma": 4.0}, ...]}
// Missing fields take the defaults above; a missing technologies array
// selects default_technologies().
CorridorConfig corridor_config_from_json(const std::string& text);
std::string corridor_config_to_json(const CorridorConfig& cfg);

}  // namespace hybridloc
