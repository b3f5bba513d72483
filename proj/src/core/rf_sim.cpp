#include "core/rf_sim.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

#include "core/errors.hpp"

namespace hybridloc {

using nlohmann::json;

void PathLossParams::validate() const {
  if (name.empty()) {
    throw InvalidInputError("technology name must be non-empty");
  }
  if (!(exponent_n > 0.0) || !std::isfinite(exponent_n)) {
    throw InvalidInputError("path-loss exponent must be positive");
  }
  if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) {
    throw InvalidInputError("noise sigma must be >= 0");
  }
  if (!std::isfinite(rssi_at_1m)) {
    throw InvalidInputError("rssi_at_1m must be finite");
  }
}

void CorridorConfig::validate() const {
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw InvalidInputError("corridor length must be positive");
  }
  if (!(grid_step > 0.0) || !(grid_step <= length)) {
    throw InvalidInputError("grid step must lie in (0, length]");
  }
  if (technologies.empty()) {
    throw InvalidInputError("corridor needs at least one technology");
  }
  for (const auto& tech : technologies) tech.validate();
  for (std::size_t i = 0; i < technologies.size(); ++i) {
    for (std::size_t k = i + 1; k < technologies.size(); ++k) {
      if (technologies[i].name == technologies[k].name) {
        throw InvalidInputError("duplicate technology name " +
                                technologies[i].name);
      }
    }
  }
}

std::vector<PathLossParams> default_technologies() {
  return {{"BLE", -46.0, 2.2, 4.0},
          {"WiFi", -38.0, 2.0, 3.0},
          {"ZigBee", -44.0, 2.1, 3.5}};
}

double simulate_rssi(const PathLossParams& params, double distance, Rng& rng) {
  params.validate();
  const double d = std::max(distance, kMinDistance);
  return params.rssi_at_1m - 10.0 * params.exponent_n * std::log10(d) +
         params.noise_sigma * rng.gaussian();
}

double invert_rssi(const PathLossParams& params, double rssi,
                   double max_distance) {
  params.validate();
  const double d =
      std::pow(10.0, (params.rssi_at_1m - rssi) / (10.0 * params.exponent_n));
  return std::min(d, max_distance);
}

PathLossParams fit_path_loss(
    const std::vector<std::pair<double, double>>& distance_rssi_samples) {
  const std::size_t count = distance_rssi_samples.size();
  if (count < 2) {
    throw DegenerateInputError("path-loss fit needs at least two samples");
  }
  // rssi = a + s * log10(d); a = rssi_at_1m, s = -10 n.
  double sum_x = 0.0, sum_y = 0.0, sum_xx = 0.0, sum_xy = 0.0;
  for (const auto& [d, rssi] : distance_rssi_samples) {
    if (!(d > 0.0) || !std::isfinite(d) || !std::isfinite(rssi)) {
      throw InvalidInputError("samples need positive distance and finite rssi");
    }
    const double x = std::log10(d);
    sum_x += x;
    sum_y += rssi;
    sum_xx += x * x;
    sum_xy += x * rssi;
  }
  const double nd = static_cast<double>(count);
  const double det = nd * sum_xx - sum_x * sum_x;
  const double scale = std::max(1.0, sum_xx);
  if (std::abs(det) <= 1e-12 * nd * scale) {
    throw DegenerateInputError(
        "all samples at the same distance; path-loss slope is undetermined");
  }
  const double slope = (nd * sum_xy - sum_x * sum_y) / det;
  const double intercept = (sum_y - slope * sum_x) / nd;

  PathLossParams params;
  params.name = "fitted";
  params.rssi_at_1m = intercept;
  params.exponent_n = -slope / 10.0;
  if (!(params.exponent_n > 0.0)) {
    throw DegenerateInputError("fitted path-loss exponent is not positive");
  }
  double ssr = 0.0;
  for (const auto& [d, rssi] : distance_rssi_samples) {
    const double r = rssi - (intercept + slope * std::log10(d));
    ssr += r * r;
  }
  params.noise_sigma =
      std::sqrt(ssr / static_cast<double>(count > 2 ? count - 2 : 1));
  return params;
}

FingerprintDataset generate_corridor_dataset(const CorridorConfig& cfg) {
  cfg.validate();
  FingerprintDataset dataset;
  for (const auto& tech : cfg.technologies) {
    dataset.technologies.push_back(tech.name);
  }
  const auto points =
      static_cast<std::size_t>(std::floor(cfg.length / cfg.grid_step)) + 1;
  const double cap = 2.0 * cfg.length;
  for (std::size_t j = 0; j < points; ++j) {
    FingerprintRecord rec;
    rec.point_id = std::to_string(j);
    const double x =
        std::max(static_cast<double>(j) * cfg.grid_step, kMinDistance);
    rec.true_position = {x, 0.0, 0.0};
    for (std::size_t i = 0; i < cfg.technologies.size(); ++i) {
      Rng rng(Rng::stream_seed(cfg.rng_seed, kStreamSimulate, i, j));
      const double rssi = simulate_rssi(cfg.technologies[i], x, rng);
      const double est = invert_rssi(cfg.technologies[i], rssi, cap);
      rec.estimates.push_back({est, 0.0, 0.0});
    }
    dataset.records.push_back(std::move(rec));
  }
  return dataset;
}

std::size_t observe_rfid_section(const SectionPartition& partition,
                                 const Position& true_position) {
  return partition.section_of(true_position.coord(partition.axis));
}

CorridorConfig corridor_config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw InvalidInputError(std::string("bad corridor config JSON: ") +
                            e.what());
  }
  CorridorConfig cfg;
  try {
    cfg.length = j.value("length", cfg.length);
    cfg.grid_step = j.value("grid_step", cfg.grid_step);
    cfg.rng_seed = j.value("seed", cfg.rng_seed);
    if (j.contains("technologies")) {
      for (const auto& jt : j.at("technologies")) {
        PathLossParams params;
        params.name = jt.at("name").get<std::string>();
        params.rssi_at_1m = jt.at("rssi_at_1m").get<double>();
        params.exponent_n = jt.at("exponent_n").get<double>();
        params.noise_sigma = jt.value("noise_sigma", 0.0);
        cfg.technologies.push_back(std::move(params));
      }
    } else {
      cfg.technologies = default_technologies();
    }
  } catch (const json::exception& e) {
    throw InvalidInputError(std::string("bad corridor config JSON: ") +
                            e.what());
  }
  cfg.validate();
  return cfg;
}

std::string corridor_config_to_json(const CorridorConfig& cfg) {
  cfg.validate();
  json techs = json::array();
  for (const auto& tech : cfg.technologies) {
    techs.push_back(json{{"name", tech.name},
                         {"rssi_at_1m", tech.rssi_at_1m},
                         {"exponent_n", tech.exponent_n},
                         {"noise_sigma", tech.noise_sigma}});
  }
  return json{{"length", cfg.length},
              {"grid_step", cfg.grid_step},
              {"seed", cfg.rng_seed},
              {"technologies", std::move(techs)}}
      .dump(2);
}

}  // namespace hybridloc
