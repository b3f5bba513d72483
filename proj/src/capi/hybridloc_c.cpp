#include "hybridloc/hybridloc.h"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "core/errors.hpp"
#include "core/dataset_csv.hpp"
#include "core/fusion.hpp"
#include "core/harness.hpp"
#include "core/rf_sim.hpp"
#include "core/simplex.hpp"

namespace {

thread_local std::string g_last_error = "ok";

hl_status fail(hl_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

// Maps core exceptions onto status codes; wraps every API body.
template <typename Fn>
hl_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const hybridloc::InvalidInputError& e) {
    return fail(HL_ERR_INVALID_INPUT, e.what());
  } catch (const hybridloc::DegenerateInputError& e) {
    return fail(HL_ERR_DEGENERATE_INPUT, e.what());
  } catch (const hybridloc::NumericalFailureError& e) {
    return fail(HL_ERR_NUMERICAL, e.what());
  } catch (const hybridloc::UnsupportedError& e) {
    return fail(HL_ERR_UNSUPPORTED, e.what());
  } catch (const std::exception& e) {
    return fail(HL_ERR_NUMERICAL, e.what());
  }
}

hl_status require(bool ok, const char* message) {
  return ok ? HL_OK : fail(HL_ERR_INVALID_INPUT, message);
}

char* copy_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw hybridloc::InvalidInputError("cannot open: " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw hybridloc::InvalidInputError("cannot open for writing: " + path);
  }
  out << text;
  if (!out.good()) {
    throw hybridloc::InvalidInputError("write failed: " + path);
  }
}

}  // namespace

struct hl_dataset {
  hybridloc::FingerprintDataset data;
};

struct hl_model {
  hybridloc::LoadedModel data;

  const std::vector<std::string>& technologies() const {
    return data.hybrid ? data.hybrid->technologies
                       : data.sectioned->global_model.technologies;
  }
};

struct hl_report {
  hybridloc::EvalReport data;
};

extern "C" {

const char* hl_status_name(hl_status status) {
  switch (status) {
    case HL_OK: return "ok";
    case HL_ERR_INVALID_INPUT: return "invalid_input";
    case HL_ERR_DEGENERATE_INPUT: return "degenerate_input";
    case HL_ERR_NUMERICAL: return "numerical_failure";
    case HL_ERR_UNSUPPORTED: return "unsupported";
    case HL_ERR_IO: return "io_error";
    default: return "unknown";
  }
}

const char* hl_last_error(void) { return g_last_error.c_str(); }

const char* hl_version(void) { return "1.0.0"; }

void hl_string_free(char* s) { delete[] s; }

hl_status hl_dataset_load_csv(const char* path, hl_dataset** out) {
  if (hl_status s = require(path && out, "path and out must be non-NULL"))
    return s;
  return guarded([&] {
    auto dataset = std::make_unique<hl_dataset>();
    dataset->data = hybridloc::read_dataset_csv_file(path);
    *out = dataset.release();
    return HL_OK;
  });
}

hl_status hl_dataset_save_csv(const hl_dataset* dataset, const char* path) {
  if (hl_status s = require(dataset && path, "dataset and path must be non-NULL"))
    return s;
  return guarded([&] {
    hybridloc::write_dataset_csv_file(dataset->data, path);
    return HL_OK;
  });
}

hl_status hl_dataset_simulate(const char* config_json, hl_dataset** out) {
  if (hl_status s = require(config_json && out,
                            "config_json and out must be non-NULL"))
    return s;
  return guarded([&] {
    const auto cfg = hybridloc::corridor_config_from_json(config_json);
    auto dataset = std::make_unique<hl_dataset>();
    dataset->data = hybridloc::generate_corridor_dataset(cfg);
    *out = dataset.release();
    return HL_OK;
  });
}

void hl_dataset_free(hl_dataset* dataset) { delete dataset; }

hl_status hl_dataset_record_count(const hl_dataset* dataset, size_t* out) {
  if (hl_status s = require(dataset && out, "dataset and out must be non-NULL"))
    return s;
  *out = dataset->data.record_count();
  return HL_OK;
}

hl_status hl_dataset_technology_count(const hl_dataset* dataset, size_t* out) {
  if (hl_status s = require(dataset && out, "dataset and out must be non-NULL"))
    return s;
  *out = dataset->data.technology_count();
  return HL_OK;
}

hl_status hl_dataset_technology_name(const hl_dataset* dataset, size_t index,
                                     const char** out) {
  if (hl_status s = require(dataset && out, "dataset and out must be non-NULL"))
    return s;
  if (index >= dataset->data.technology_count()) {
    return fail(HL_ERR_INVALID_INPUT, "technology index out of range");
  }
  *out = dataset->data.technologies[index].c_str();
  return HL_OK;
}

hl_status hl_fit(const hl_dataset* dataset, const hl_fit_options* options,
                 hl_model** out) {
  if (hl_status s = require(dataset && out, "dataset and out must be non-NULL"))
    return s;
  return guarded([&] {
    hl_fit_options defaults{};
    const hl_fit_options& opt = options ? *options : defaults;
    const auto penalty =
        hybridloc::PenaltyFunction::parse(opt.penalty ? opt.penalty : "p2");
    hybridloc::SolverConfig solver;
    if (opt.beta > 0.0) solver.beta = opt.beta;
    if (opt.eps_opt > 0.0) solver.eps_opt = opt.eps_opt;
    solver.max_iter = opt.max_iter;

    const std::string mode = opt.mode ? opt.mode : "global";
    const size_t sections = opt.sections == 0 ? 1 : opt.sections;
    auto model = std::make_unique<hl_model>();
    if (mode == "global" || sections == 1) {
      if (mode != "global" && mode != "two_level" && mode != "rfid_oracle") {
        throw hybridloc::InvalidInputError("unknown fit mode '" + mode + "'");
      }
      model->data.hybrid =
          hybridloc::fit_hybrid(dataset->data, penalty, solver);
    } else {
      hybridloc::SectioningMode sectioning;
      if (mode == "two_level") {
        sectioning = hybridloc::SectioningMode::kTwoLevel;
      } else if (mode == "rfid_oracle") {
        sectioning = hybridloc::SectioningMode::kRfidOracle;
      } else {
        throw hybridloc::InvalidInputError("unknown fit mode '" + mode + "'");
      }
      double length = opt.corridor_length;
      if (length <= 0.0) {
        length = 0.0;
        for (const auto& rec : dataset->data.records) {
          length = std::max(length, rec.true_position.x);
        }
      }
      const auto partition = hybridloc::SectionPartition::uniform(
          hybridloc::Axis::X, length, sections);
      model->data.sectioned = hybridloc::fit_sectioned(
          dataset->data, partition, penalty, solver, sectioning);
    }
    *out = model.release();
    return HL_OK;
  });
}

hl_status hl_model_save_json(const hl_model* model, const char* path) {
  if (hl_status s = require(model && path, "model and path must be non-NULL"))
    return s;
  return guarded([&] {
    const std::string text = model->data.hybrid
                                 ? hybridloc::model_to_json(*model->data.hybrid)
                                 : hybridloc::model_to_json(
                                       *model->data.sectioned);
    write_file(path, text + "\n");
    return HL_OK;
  });
}

hl_status hl_model_load_json(const char* path, hl_model** out) {
  if (hl_status s = require(path && out, "path and out must be non-NULL"))
    return s;
  return guarded([&] {
    auto model = std::make_unique<hl_model>();
    model->data = hybridloc::model_from_json(read_file(path));
    *out = model.release();
    return HL_OK;
  });
}

hl_status hl_model_to_json(const hl_model* model, char** out_json) {
  if (hl_status s = require(model && out_json,
                            "model and out_json must be non-NULL"))
    return s;
  return guarded([&] {
    const std::string text = model->data.hybrid
                                 ? hybridloc::model_to_json(*model->data.hybrid)
                                 : hybridloc::model_to_json(
                                       *model->data.sectioned);
    *out_json = copy_string(text);
    return HL_OK;
  });
}

void hl_model_free(hl_model* model) { delete model; }

hl_status hl_predict(const hl_model* model, const double* estimates_xyz,
                     size_t n_technologies, long rfid_section,
                     double out_position[3]) {
  if (hl_status s = require(model && estimates_xyz && out_position,
                            "model, estimates and out must be non-NULL"))
    return s;
  return guarded([&] {
    std::vector<hybridloc::Position> estimates(n_technologies);
    for (size_t i = 0; i < n_technologies; ++i) {
      estimates[i] = {estimates_xyz[3 * i], estimates_xyz[3 * i + 1],
                      estimates_xyz[3 * i + 2]};
    }
    hybridloc::Position result;
    if (model->data.hybrid) {
      result = hybridloc::predict(*model->data.hybrid, estimates);
    } else {
      std::optional<std::size_t> section;
      if (rfid_section >= 0) section = static_cast<std::size_t>(rfid_section);
      result = hybridloc::predict_sectioned(*model->data.sectioned, estimates,
                                            section);
    }
    out_position[0] = result.x;
    out_position[1] = result.y;
    out_position[2] = result.z;
    return HL_OK;
  });
}

hl_status hl_evaluate(const hl_model* model, const hl_dataset* dataset,
                      const char* metric, double* out_value) {
  if (hl_status s = require(model && dataset && out_value,
                            "model, dataset and out must be non-NULL"))
    return s;
  return guarded([&] {
    const auto m = hybridloc::metric_from_name(metric ? metric : "mse");
    if (dataset->data.technologies != model->technologies()) {
      throw hybridloc::InvalidInputError(
          "dataset technologies do not match the model");
    }
    *out_value = model->data.hybrid
                     ? hybridloc::evaluate(*model->data.hybrid, dataset->data, m)
                     : hybridloc::evaluate(*model->data.sectioned,
                                           dataset->data, m);
    return HL_OK;
  });
}

hl_status hl_run_experiment(const char* config_json, hl_report** out) {
  if (hl_status s = require(config_json && out,
                            "config_json and out must be non-NULL"))
    return s;
  return guarded([&] {
    const auto cfg = hybridloc::experiment_config_from_json(config_json);
    auto report = std::make_unique<hl_report>();
    report->data = hybridloc::run_experiment(cfg);
    *out = report.release();
    return HL_OK;
  });
}

hl_status hl_report_to_csv(const hl_report* report, char** out_csv) {
  if (hl_status s = require(report && out_csv,
                            "report and out_csv must be non-NULL"))
    return s;
  return guarded([&] {
    *out_csv = copy_string(hybridloc::report_to_csv(report->data));
    return HL_OK;
  });
}

hl_status hl_report_repetitions_to_csv(const hl_report* report,
                                       char** out_csv) {
  if (hl_status s = require(report && out_csv,
                            "report and out_csv must be non-NULL"))
    return s;
  return guarded([&] {
    *out_csv = copy_string(hybridloc::repetitions_to_csv(report->data));
    return HL_OK;
  });
}

void hl_report_free(hl_report* report) { delete report; }

hl_status hl_project_simplex(const double* v, size_t n, double* out) {
  if (hl_status s = require(v && out, "v and out must be non-NULL")) return s;
  return guarded([&] {
    const std::vector<double> input(v, v + n);
    const auto result = hybridloc::project_sorted(input);
    for (size_t i = 0; i < n; ++i) out[i] = result.point.weights[i];
    return HL_OK;
  });
}

}  // extern "C"
