#include "core/harness.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

#include "core/dataset_csv.hpp"
#include "core/errors.hpp"

namespace hybridloc {

using nlohmann::json;

Metric metric_from_name(const std::string& name) {
  if (name == "mse") return Metric::kMse;
  if (name == "mae") return Metric::kMae;
  throw InvalidInputError("unknown metric '" + name + "' (mse or mae)");
}

const char* metric_name(Metric metric) {
  return metric == Metric::kMse ? "mse" : "mae";
}

Method Method::parse(const std::string& text) {
  Method m;
  if (text == "global") {
    m.kind = Kind::kGlobal;
  } else if (text == "two_level") {
    m.kind = Kind::kTwoLevel;
  } else if (text == "rfid_oracle") {
    m.kind = Kind::kRfidOracle;
  } else if (text == "rfid_midpoint") {
    m.kind = Kind::kRfidMidpoint;
  } else if (text.rfind("individual:", 0) == 0) {
    m.kind = Kind::kIndividual;
    m.technology = text.substr(std::string("individual:").size());
    if (m.technology.empty()) {
      throw InvalidInputError("individual method needs a technology name");
    }
  } else {
    throw InvalidInputError("unknown method '" + text + "'");
  }
  return m;
}

std::string Method::to_string() const {
  switch (kind) {
    case Kind::kGlobal: return "global";
    case Kind::kTwoLevel: return "two_level";
    case Kind::kRfidOracle: return "rfid_oracle";
    case Kind::kRfidMidpoint: return "rfid_midpoint";
    default: return "individual:" + technology;
  }
}

void ExperimentConfig::validate() const {
  if (!(split_fraction > 0.0) || !(split_fraction <= 1.0)) {
    throw InvalidInputError("split fraction must lie in (0, 1]");
  }
  if (repetitions < 1) {
    throw InvalidInputError("repetitions must be >= 1");
  }
  if (sections < 1) {
    throw InvalidInputError("sections must be >= 1");
  }
  if (methods.empty()) {
    throw InvalidInputError("experiment needs at least one method");
  }
  for (double r : distance_ranges) {
    if (!(r > 0.0)) {
      throw InvalidInputError("distance ranges must be positive");
    }
  }
}

std::pair<FingerprintDataset, FingerprintDataset> split_train_test(
    const FingerprintDataset& dataset, double fraction, Rng& rng) {
  dataset.validate();
  if (!(fraction > 0.0) || !(fraction <= 1.0)) {
    throw InvalidInputError("split fraction must lie in (0, 1]");
  }
  const std::size_t total = dataset.record_count();
  const auto train_size = static_cast<std::size_t>(
      std::ceil(fraction * static_cast<double>(total)));
  if (train_size == 0) {
    throw InvalidInputError("training split would be empty");
  }
  std::vector<std::size_t> order(total);
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(order);
  std::vector<bool> in_train(total, false);
  for (std::size_t i = 0; i < train_size; ++i) in_train[order[i]] = true;

  FingerprintDataset train;
  FingerprintDataset test;
  train.technologies = dataset.technologies;
  test.technologies = dataset.technologies;
  for (std::size_t i = 0; i < total; ++i) {
    (in_train[i] ? train : test).records.push_back(dataset.records[i]);
  }
  return {std::move(train), std::move(test)};
}

double evaluate(const Predictor& predictor, const FingerprintDataset& test,
                Metric metric) {
  if (test.records.empty()) {
    throw InvalidInputError("cannot evaluate on an empty test set");
  }
  double sum = 0.0;
  for (const auto& rec : test.records) {
    const double err = predictor(rec).x - rec.true_position.x;
    sum += metric == Metric::kMse ? err * err : std::abs(err);
  }
  return sum / static_cast<double>(test.records.size());
}

double evaluate(const HybridModel& model, const FingerprintDataset& test,
                Metric metric) {
  return evaluate(
      [&](const FingerprintRecord& rec) { return predict(model, rec.estimates); },
      test, metric);
}

double evaluate(const SectionedModel& model, const FingerprintDataset& test,
                Metric metric) {
  return evaluate(
      [&](const FingerprintRecord& rec) {
        if (model.mode == SectioningMode::kRfidOracle) {
          const std::size_t s =
              observe_rfid_section(model.partition, rec.true_position);
          return predict_sectioned(model, rec.estimates, s);
        }
        return predict_sectioned(model, rec.estimates);
      },
      test, metric);
}

namespace {

struct FittedMethod {
  Method method;
  std::optional<HybridModel> hybrid;
  std::optional<SectionedModel> sectioned;
  int technology_index = -1;
};

Predictor make_predictor(const FittedMethod& fitted,
                         const SectionPartition& partition) {
  switch (fitted.method.kind) {
    case Method::Kind::kGlobal:
      return [&](const FingerprintRecord& rec) {
        return predict(*fitted.hybrid, rec.estimates);
      };
    case Method::Kind::kTwoLevel:
      return [&](const FingerprintRecord& rec) {
        return predict_sectioned(*fitted.sectioned, rec.estimates);
      };
    case Method::Kind::kRfidOracle:
      return [&](const FingerprintRecord& rec) {
        const std::size_t s =
            observe_rfid_section(fitted.sectioned->partition, rec.true_position);
        return predict_sectioned(*fitted.sectioned, rec.estimates, s);
      };
    case Method::Kind::kRfidMidpoint:
      return [&partition](const FingerprintRecord& rec) {
        return rfid_midpoint(partition,
                             observe_rfid_section(partition, rec.true_position));
      };
    default:
      return [&fitted](const FingerprintRecord& rec) {
        return rec.estimates[static_cast<std::size_t>(fitted.technology_index)];
      };
  }
}

void append_alpha_rows(std::vector<ReportRow>& rows, const std::string& method,
                       std::size_t sections,
                       const std::vector<std::string>& technologies,
                       const CoefficientVector& alpha,
                       const std::string& suffix) {
  for (std::size_t i = 0; i < technologies.size(); ++i) {
    rows.push_back({method, sections, "alpha_x_" + technologies[i] + suffix,
                    alpha.weights[i],
                    {}});
  }
}

}  // namespace

EvalReport run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  FingerprintDataset dataset;
  if (std::holds_alternative<std::string>(cfg.dataset_source)) {
    dataset = read_dataset_csv_file(std::get<std::string>(cfg.dataset_source));
  } else {
    dataset = generate_corridor_dataset(std::get<CorridorConfig>(
        cfg.dataset_source));
  }
  dataset.validate();

  double length = 0.0;
  if (cfg.corridor_length.has_value()) {
    length = *cfg.corridor_length;
  } else {
    for (const auto& rec : dataset.records) {
      length = std::max(length, rec.true_position.x);
    }
  }
  if (!(length > 0.0)) {
    throw InvalidInputError("corridor length must be positive");
  }
  const SectionPartition partition =
      SectionPartition::uniform(Axis::X, length, cfg.sections);

  for (const auto& method : cfg.methods) {
    if (method.kind == Method::Kind::kIndividual &&
        dataset.technology_index(method.technology) < 0) {
      throw InvalidInputError("unknown technology '" + method.technology + "'");
    }
  }

  EvalReport report;
  const std::size_t method_count = cfg.methods.size();
  std::vector<double> mean_full(method_count, 0.0);
  std::vector<std::vector<double>> mean_ranges(
      method_count, std::vector<double>(cfg.distance_ranges.size(), 0.0));
  std::vector<std::vector<std::size_t>> range_hits(
      method_count, std::vector<std::size_t>(cfg.distance_ranges.size(), 0));
  std::vector<FittedMethod> last_fits;

  for (std::size_t rep = 0; rep < cfg.repetitions; ++rep) {
    Rng rng(Rng::stream_seed(cfg.seed, kStreamSplit, rep, 0));
    auto [train, test] = split_train_test(dataset, cfg.split_fraction, rng);
    if (test.records.empty()) test = train;  // train == test scenario

    std::vector<FittedMethod> fits;
    fits.reserve(method_count);
    for (const auto& method : cfg.methods) {
      FittedMethod fitted;
      fitted.method = method;
      switch (method.kind) {
        case Method::Kind::kGlobal:
          fitted.hybrid = fit_hybrid(train, cfg.penalty, cfg.solver);
          break;
        case Method::Kind::kTwoLevel:
          fitted.sectioned = fit_sectioned(train, partition, cfg.penalty,
                                           cfg.solver,
                                           SectioningMode::kTwoLevel);
          break;
        case Method::Kind::kRfidOracle:
          fitted.sectioned = fit_sectioned(train, partition, cfg.penalty,
                                           cfg.solver,
                                           SectioningMode::kRfidOracle);
          break;
        case Method::Kind::kRfidMidpoint:
          break;
        case Method::Kind::kIndividual:
          fitted.technology_index = dataset.technology_index(method.technology);
          break;
      }
      fits.push_back(std::move(fitted));
    }

    for (std::size_t mi = 0; mi < method_count; ++mi) {
      const Predictor predictor = make_predictor(fits[mi], partition);
      const double value = evaluate(predictor, test, cfg.metric);
      mean_full[mi] += value;
      report.per_repetition.push_back(
          {cfg.methods[mi].to_string(), rep, metric_name(cfg.metric), value});
      for (std::size_t ri = 0; ri < cfg.distance_ranges.size(); ++ri) {
        FingerprintDataset within;
        within.technologies = test.technologies;
        for (const auto& rec : test.records) {
          if (rec.true_position.x <= cfg.distance_ranges[ri]) {
            within.records.push_back(rec);
          }
        }
        if (within.records.empty()) continue;
        mean_ranges[mi][ri] += evaluate(predictor, within, cfg.metric);
        range_hits[mi][ri] += 1;
      }
    }
    if (rep + 1 == cfg.repetitions) last_fits = std::move(fits);
  }

  const double reps = static_cast<double>(cfg.repetitions);
  for (std::size_t mi = 0; mi < method_count; ++mi) {
    const std::string name = cfg.methods[mi].to_string();
    const bool sectioned = cfg.methods[mi].kind == Method::Kind::kTwoLevel ||
                           cfg.methods[mi].kind == Method::Kind::kRfidOracle ||
                           cfg.methods[mi].kind == Method::Kind::kRfidMidpoint;
    const std::size_t sections = sectioned ? cfg.sections : 1;

    std::vector<std::string> flags;
    if (last_fits[mi].hybrid) flags = last_fits[mi].hybrid->flags;
    if (last_fits[mi].sectioned) {
      flags = last_fits[mi].sectioned->flags;
      const auto& gflags = last_fits[mi].sectioned->global_model.flags;
      flags.insert(flags.end(), gflags.begin(), gflags.end());
    }

    report.rows.push_back({name, sections, metric_name(cfg.metric),
                           mean_full[mi] / reps, flags});
    for (std::size_t ri = 0; ri < cfg.distance_ranges.size(); ++ri) {
      if (range_hits[mi][ri] == 0) {
        report.rows.push_back({name, sections,
                               std::string(metric_name(cfg.metric)) + "<=" +
                                   format_double(cfg.distance_ranges[ri]),
                               0.0,
                               {"empty_range"}});
        continue;
      }
      report.rows.push_back(
          {name, sections,
           std::string(metric_name(cfg.metric)) + "<=" +
               format_double(cfg.distance_ranges[ri]),
           mean_ranges[mi][ri] / static_cast<double>(range_hits[mi][ri]),
           {}});
    }
    if (last_fits[mi].hybrid) {
      append_alpha_rows(report.rows, name, sections, dataset.technologies,
                        last_fits[mi].hybrid->alpha_x, "");
    }
    if (last_fits[mi].sectioned) {
      append_alpha_rows(report.rows, name, sections, dataset.technologies,
                        last_fits[mi].sectioned->global_model.alpha_x, "");
      for (std::size_t s = 0; s < last_fits[mi].sectioned->sections.size();
           ++s) {
        append_alpha_rows(report.rows, name, sections, dataset.technologies,
                          last_fits[mi].sectioned->sections[s].model.alpha_x,
                          "_s" + std::to_string(s));
      }
    }
  }
  return report;
}

std::string report_to_csv(const EvalReport& report) {
  std::ostringstream out;
  out << "method,sections,metric,value,flags\n";
  for (const auto& row : report.rows) {
    out << row.method << ',' << row.sections << ',' << row.metric << ','
        << format_double(row.value) << ',';
    for (std::size_t i = 0; i < row.flags.size(); ++i) {
      if (i > 0) out << ';';
      out << row.flags[i];
    }
    out << "\n";
  }
  return out.str();
}

std::string repetitions_to_csv(const EvalReport& report) {
  std::ostringstream out;
  out << "method,repetition,metric,value\n";
  for (const auto& row : report.per_repetition) {
    out << row.method << ',' << row.repetition << ',' << row.metric << ','
        << format_double(row.value) << "\n";
  }
  return out.str();
}

ExperimentConfig experiment_config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw InvalidInputError(std::string("bad experiment config JSON: ") +
                            e.what());
  }
  ExperimentConfig cfg;
  try {
    const auto& source = j.at("dataset");
    if (source.contains("file")) {
      cfg.dataset_source = source.at("file").get<std::string>();
    } else if (source.contains("simulate")) {
      cfg.dataset_source =
          corridor_config_from_json(source.at("simulate").dump());
    } else {
      throw InvalidInputError("dataset must carry 'file' or 'simulate'");
    }
    cfg.penalty = PenaltyFunction::parse(j.value("penalty", "p2"));
    cfg.sections = j.value("sections", std::size_t{1});
    if (!j.contains("modes")) {
      throw InvalidInputError("experiment config needs 'modes'");
    }
    for (const auto& jm : j.at("modes")) {
      cfg.methods.push_back(Method::parse(jm.get<std::string>()));
    }
    cfg.split_fraction = j.value("split_fraction", 0.7);
    cfg.repetitions = j.value("repetitions", std::size_t{1000});
    cfg.metric = metric_from_name(j.value("metric", "mse"));
    cfg.seed = j.value("seed", std::uint64_t{0});
    if (j.contains("distance_ranges")) {
      cfg.distance_ranges =
          j.at("distance_ranges").get<std::vector<double>>();
    }
    if (j.contains("corridor_length")) {
      cfg.corridor_length = j.at("corridor_length").get<double>();
    }
    if (j.contains("solver")) {
      const auto& js = j.at("solver");
      cfg.solver.beta = js.value("beta", kAutoBeta);
      cfg.solver.eps_opt = js.value("eps_opt", 1e-10);
      cfg.solver.max_iter = js.value("max_iter", std::uint64_t{0});
    }
  } catch (const json::exception& e) {
    throw InvalidInputError(std::string("bad experiment config JSON: ") +
                            e.what());
  }
  cfg.validate();
  return cfg;
}

}  // namespace hybridloc
