#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "core/fusion.hpp"
#include "core/rf_sim.hpp"

namespace hybridloc {

enum class Metric { kMse, kMae };

Metric metric_from_name(const std::string& name);
const char* metric_name(Metric metric);

// One evaluation method. kIndividual carries the technology name.
struct Method {
  enum class Kind { kGlobal, kTwoLevel, kRfidOracle, kRfidMidpoint, kIndividual };
  Kind kind = Kind::kGlobal;
  std::string technology;  // kIndividual only

  static Method parse(const std::string& text);
  std::string to_string() const;
};

struct ExperimentConfig {
  std::variant<std::string, CorridorConfig> dataset_source;  // CSV path or sim
  PenaltyFunction penalty = PenaltyFunction::mse();
  std::size_t sections = 1;
  std::vector<Method> methods;
  double split_fraction = 0.7;
  std::size_t repetitions = 1000;
  Metric metric = Metric::kMse;
  std::uint64_t seed = 0;
  std::vector<double> distance_ranges;  // optional "x <= r" rows
  std::optional<double> corridor_length;  // default: max true x in the data
  SolverConfig solver;

  void validate() const;
};

struct ReportRow {
  std::string method;
  std::size_t sections = 1;
  std::string metric;
  double value = 0.0;
  std::vector<std::string> flags;
};

struct RepetitionRow {
  std::string method;
  std::size_t repetition = 0;
  std::string metric;
  double value = 0.0;
};

struct EvalReport {
  std::vector<ReportRow> rows;              // means + final-repetition alphas
  std::vector<RepetitionRow> per_repetition;
};

// Random partition without replacement into ceil(fraction * M) train records
// and the rest; both sides keep the dataset's record order. fraction 1
// leaves the test side empty (callers evaluate on train).
std::pair<FingerprintDataset, FingerprintDataset> split_train_test(
    const FingerprintDataset& dataset, double fraction, Rng& rng);

using Predictor = std::function<Position(const FingerprintRecord&)>;

// Mean x-axis error over the test set: squared for mse, absolute for mae.
double evaluate(const Predictor& predictor, const FingerprintDataset& test,
                Metric metric);
double evaluate(const HybridModel& model, const FingerprintDataset& test,
                Metric metric);
// Sectioned models resolve rfid_oracle sections from the true position.
double evaluate(const SectionedModel& model, const FingerprintDataset& test,
                Metric metric);

EvalReport run_experiment(const ExperimentConfig& cfg);

// Rows "method,sections,metric,value,flags" (flags ';'-joined).
std::string report_to_csv(const EvalReport& report);
// Rows "method,repetition,metric,value".
std::string repetitions_to_csv(const EvalReport& report);

// JSON shape:
// {"dataset": {"file": "fp.csv"} | {"simulate": {...corridor config...}},
//  "penalty": "p2", "sections": 3,
//  "modes": ["global", "two_level", "rfid_oracle", "rfid_midpoint",
//            "individual:WiFi"],
//  "split_fraction": 0.7, "repetitions": 1000, "metric": "mse", "seed": 7,
//  "distance_ranges": [20, 40, 60], "corridor_length": 60.0,
//  "solver": {"beta": 0, "eps_opt": 1e-10, "max_iter": 0}}
ExperimentConfig experiment_config_from_json(const std::string& text);

}  // namespace hybridloc
