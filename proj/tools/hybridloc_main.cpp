// Command-line front end for the hybridloc shared library.
//
// Subcommands: simulate, fit, eval, experiment. Exit codes: 0 on success,
// 2 on invalid input, 3 on numerical failure.

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "hybridloc/hybridloc.h"

namespace {

constexpr int kExitInvalid = 2;
constexpr int kExitNumerical = 3;

int exit_code_for(hl_status status) {
  return status == HL_ERR_NUMERICAL ? kExitNumerical : kExitInvalid;
}

// Prints the library error and turns the status into an exit code.
int report_failure(hl_status status) {
  std::cerr << "error (" << hl_status_name(status) << "): " << hl_last_error()
            << "\n";
  return exit_code_for(status);
}

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

bool write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) return false;
  out << text;
  return out.good();
}

// --seed overrides whatever the config file says.
std::optional<std::string> apply_seed(const std::string& config_text,
                                      const std::optional<std::uint64_t>& seed,
                                      bool nested_simulate) {
  if (!seed.has_value()) return config_text;
  nlohmann::json j = nlohmann::json::parse(config_text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) return std::nullopt;
  j["seed"] = *seed;
  if (nested_simulate && j.contains("dataset") && j["dataset"].is_object() &&
      j["dataset"].contains("simulate")) {
    j["dataset"]["simulate"]["seed"] = *seed;
  }
  return j.dump();
}

struct DatasetHandle {
  hl_dataset* ptr = nullptr;
  ~DatasetHandle() { hl_dataset_free(ptr); }
};

struct ModelHandle {
  hl_model* ptr = nullptr;
  ~ModelHandle() { hl_model_free(ptr); }
};

struct ReportHandle {
  hl_report* ptr = nullptr;
  ~ReportHandle() { hl_report_free(ptr); }
};

struct StringHandle {
  char* ptr = nullptr;
  ~StringHandle() { hl_string_free(ptr); }
};

int run_simulate(const std::string& config_path, const std::string& out_path,
                 const std::optional<std::uint64_t>& seed) {
  const auto text = read_file(config_path);
  if (!text) {
    std::cerr << "error: cannot read config " << config_path << "\n";
    return kExitInvalid;
  }
  const auto config = apply_seed(*text, seed, false);
  if (!config) {
    std::cerr << "error: config is not a JSON object: " << config_path << "\n";
    return kExitInvalid;
  }
  DatasetHandle dataset;
  if (hl_status s = hl_dataset_simulate(config->c_str(), &dataset.ptr)) {
    return report_failure(s);
  }
  if (hl_status s = hl_dataset_save_csv(dataset.ptr, out_path.c_str())) {
    return report_failure(s);
  }
  size_t records = 0;
  hl_dataset_record_count(dataset.ptr, &records);
  std::cout << "wrote " << records << " fingerprints to " << out_path << "\n";
  return 0;
}

int run_fit(const std::string& input, const std::string& out_path,
            const std::string& penalty, std::size_t sections,
            const std::string& mode, double corridor_length, double beta,
            double eps_opt, std::uint64_t max_iter) {
  DatasetHandle dataset;
  if (hl_status s = hl_dataset_load_csv(input.c_str(), &dataset.ptr)) {
    return report_failure(s);
  }
  hl_fit_options options{};
  options.penalty = penalty.c_str();
  options.sections = sections;
  options.mode = mode.c_str();
  options.corridor_length = corridor_length;
  options.beta = beta;
  options.eps_opt = eps_opt;
  options.max_iter = max_iter;
  ModelHandle model;
  if (hl_status s = hl_fit(dataset.ptr, &options, &model.ptr)) {
    return report_failure(s);
  }
  if (hl_status s = hl_model_save_json(model.ptr, out_path.c_str())) {
    return report_failure(s);
  }
  std::cout << "wrote model to " << out_path << "\n";
  return 0;
}

int run_eval(const std::string& model_path, const std::string& input,
             const std::string& metric) {
  ModelHandle model;
  if (hl_status s = hl_model_load_json(model_path.c_str(), &model.ptr)) {
    return report_failure(s);
  }
  DatasetHandle dataset;
  if (hl_status s = hl_dataset_load_csv(input.c_str(), &dataset.ptr)) {
    return report_failure(s);
  }
  double value = 0.0;
  if (hl_status s =
          hl_evaluate(model.ptr, dataset.ptr, metric.c_str(), &value)) {
    return report_failure(s);
  }
  std::cout << metric << " " << std::setprecision(17) << value << "\n";
  return 0;
}

int run_experiment(const std::string& config_path, const std::string& out_path,
                   const std::string& per_rep_path,
                   const std::optional<std::uint64_t>& seed) {
  const auto text = read_file(config_path);
  if (!text) {
    std::cerr << "error: cannot read config " << config_path << "\n";
    return kExitInvalid;
  }
  const auto config = apply_seed(*text, seed, true);
  if (!config) {
    std::cerr << "error: config is not a JSON object: " << config_path << "\n";
    return kExitInvalid;
  }
  ReportHandle report;
  if (hl_status s = hl_run_experiment(config->c_str(), &report.ptr)) {
    return report_failure(s);
  }
  StringHandle csv;
  if (hl_status s = hl_report_to_csv(report.ptr, &csv.ptr)) {
    return report_failure(s);
  }
  if (!write_file(out_path, csv.ptr)) {
    std::cerr << "error: cannot write " << out_path << "\n";
    return kExitInvalid;
  }
  if (!per_rep_path.empty()) {
    StringHandle reps;
    if (hl_status s = hl_report_repetitions_to_csv(report.ptr, &reps.ptr)) {
      return report_failure(s);
    }
    if (!write_file(per_rep_path, reps.ptr)) {
      std::cerr << "error: cannot write " << per_rep_path << "\n";
      return kExitInvalid;
    }
  }
  std::cout << "wrote report to " << out_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hybrid indoor localization: simplex-constrained fusion of "
               "per-technology position estimates"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(hl_version()));

  std::optional<std::uint64_t> seed;

  auto* simulate = app.add_subcommand(
      "simulate", "generate a synthetic fingerprint CSV");
  std::string sim_config;
  std::string sim_out;
  simulate->add_option("--config", sim_config, "corridor config JSON")
      ->required();
  simulate->add_option("--out", sim_out, "output CSV path")->required();
  simulate->add_option("--seed", seed, "override the config seed");

  auto* fit = app.add_subcommand("fit", "fit fusion weights to a CSV");
  std::string fit_input;
  std::string fit_out;
  std::string fit_penalty = "p2";
  std::size_t fit_sections = 1;
  std::string fit_mode = "global";
  double fit_corridor_length = 0.0;
  double fit_beta = 0.0;
  double fit_eps_opt = 0.0;
  std::uint64_t fit_max_iter = 0;
  fit->add_option("--input", fit_input, "fingerprint CSV")->required();
  fit->add_option("--out", fit_out, "output model JSON")->required();
  fit->add_option("--penalty", fit_penalty, "p2 or p1+eps:<eps>");
  fit->add_option("--sections", fit_sections, "number of corridor sections");
  fit->add_option("--mode", fit_mode, "global, two_level or rfid_oracle");
  fit->add_option("--corridor-length", fit_corridor_length,
                  "corridor length in meters (default: max true x)");
  fit->add_option("--beta", fit_beta, "explicit solver step size");
  fit->add_option("--eps-opt", fit_eps_opt, "solver stopping tolerance");
  fit->add_option("--max-iter", fit_max_iter, "solver iteration cap");
  fit->add_option("--seed", seed, "accepted for interface symmetry (unused)");

  auto* eval = app.add_subcommand("eval", "evaluate a model on a CSV");
  std::string eval_model;
  std::string eval_input;
  std::string eval_metric = "mse";
  eval->add_option("--model", eval_model, "model JSON")->required();
  eval->add_option("--input", eval_input, "fingerprint CSV")->required();
  eval->add_option("--metric", eval_metric, "mse or mae");
  eval->add_option("--seed", seed, "accepted for interface symmetry (unused)");

  auto* experiment = app.add_subcommand(
      "experiment", "run a split/fit/evaluate experiment");
  std::string exp_config;
  std::string exp_out;
  std::string exp_per_rep;
  experiment->add_option("--config", exp_config, "experiment config JSON")
      ->required();
  experiment->add_option("--out", exp_out, "output report CSV")->required();
  experiment->add_option("--per-rep-out", exp_per_rep,
                         "also dump per-repetition metric values");
  experiment->add_option("--seed", seed, "override the config seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalid;
  }

  if (simulate->parsed()) return run_simulate(sim_config, sim_out, seed);
  if (fit->parsed()) {
    return run_fit(fit_input, fit_out, fit_penalty, fit_sections, fit_mode,
                   fit_corridor_length, fit_beta, fit_eps_opt, fit_max_iter);
  }
  if (eval->parsed()) return run_eval(eval_model, eval_input, eval_metric);
  return run_experiment(exp_config, exp_out, exp_per_rep, seed);
}
