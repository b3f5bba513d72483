/* hybridloc - fusing per-technology indoor position estimates into a hybrid
 * estimate by convex weighting over the probability simplex.
 *
 * C interface of the shared library. All functions return hl_status; every
 * object handed out through an hl_* pointer must be released with the
 * matching *_free. On failure the thread-local message from hl_last_error()
 * describes what went wrong.
 */
#ifndef HYBRIDLOC_H
#define HYBRIDLOC_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define HL_API __declspec(dllexport)
#else
#define HL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hl_status {
  HL_OK = 0,
  HL_ERR_INVALID_INPUT = 1,
  HL_ERR_DEGENERATE_INPUT = 2,
  HL_ERR_NUMERICAL = 3,
  HL_ERR_UNSUPPORTED = 4,
  HL_ERR_IO = 5,
} hl_status;

HL_API const char* hl_status_name(hl_status status);

/* Message for the most recent failure on this thread; never NULL. */
HL_API const char* hl_last_error(void);

HL_API const char* hl_version(void);

/* Frees strings returned through char** out parameters. */
HL_API void hl_string_free(char* s);

/* ---- datasets ------------------------------------------------------- */

typedef struct hl_dataset hl_dataset;

/* Fingerprint CSV: header row
 *   point_id,true_x,true_y,true_z,est_x_<t>,est_y_<t>,est_z_<t>,...
 * one estimate triple per technology. */
HL_API hl_status hl_dataset_load_csv(const char* path, hl_dataset** out);
HL_API hl_status hl_dataset_save_csv(const hl_dataset* dataset,
                                     const char* path);

/* Synthetic corridor data from a JSON config:
 * {"length": 60.0, "grid_step": 0.915, "seed": 7,
 *  "technologies": [{"name": "BLE", "rssi_at_1m": -46.0,
 *                    "exponent_n": 2.2, "noise_sigma": 4.0}, ...]}
 * Omitted fields take defaults; omitted technologies select the built-in
 * BLE/WiFi/ZigBee presets. The same seed always yields the same bytes. */
HL_API hl_status hl_dataset_simulate(const char* config_json,
                                     hl_dataset** out);

HL_API void hl_dataset_free(hl_dataset* dataset);

HL_API hl_status hl_dataset_record_count(const hl_dataset* dataset,
                                         size_t* out);
HL_API hl_status hl_dataset_technology_count(const hl_dataset* dataset,
                                             size_t* out);
/* Pointer stays valid while the dataset lives. */
HL_API hl_status hl_dataset_technology_name(const hl_dataset* dataset,
                                            size_t index, const char** out);

/* ---- models ---------------------------------------------------------- */

typedef struct hl_model hl_model;

typedef struct hl_fit_options {
  const char* penalty; /* "p2" (MSE) or "p1+eps:<eps>" (pseudo-MAE); NULL: p2 */
  size_t sections;     /* >= 1; 1 disables sectioning */
  const char* mode;    /* "global", "two_level", "rfid_oracle"; NULL: global */
  double corridor_length; /* <= 0: max true x in the training data */
  double beta;            /* <= 0: certified default 1/(N L_max) */
  double eps_opt;         /* <= 0: 1e-10 */
  uint64_t max_iter;      /* 0: contraction-rate bound with a floor of 1e5 */
} hl_fit_options;

HL_API hl_status hl_fit(const hl_dataset* dataset,
                        const hl_fit_options* options, hl_model** out);

HL_API hl_status hl_model_save_json(const hl_model* model, const char* path);
HL_API hl_status hl_model_load_json(const char* path, hl_model** out);
HL_API hl_status hl_model_to_json(const hl_model* model, char** out_json);
HL_API void hl_model_free(hl_model* model);

/* estimates_xyz: 3 doubles (x, y, z) per technology, technology order.
 * rfid_section: the known section for rfid_oracle models, -1 otherwise. */
HL_API hl_status hl_predict(const hl_model* model, const double* estimates_xyz,
                            size_t n_technologies, long rfid_section,
                            double out_position[3]);

/* Mean x-axis error of the model on the dataset; metric "mse" or "mae". */
HL_API hl_status hl_evaluate(const hl_model* model, const hl_dataset* dataset,
                             const char* metric, double* out_value);

/* ---- experiments ------------------------------------------------------ */

typedef struct hl_report hl_report;

/* Config JSON:
 * {"dataset": {"file": "fp.csv"} | {"simulate": {...}},
 *  "penalty": "p2", "sections": 3,
 *  "modes": ["global", "two_level", "rfid_oracle", "rfid_midpoint",
 *            "individual:WiFi"],
 *  "split_fraction": 0.7, "repetitions": 1000, "metric": "mse",
 *  "seed": 7, "distance_ranges": [20, 40, 60]} */
HL_API hl_status hl_run_experiment(const char* config_json, hl_report** out);

/* Mean metric rows: "method,sections,metric,value,flags". */
HL_API hl_status hl_report_to_csv(const hl_report* report, char** out_csv);
/* Per-repetition rows: "method,repetition,metric,value". */
HL_API hl_status hl_report_repetitions_to_csv(const hl_report* report,
                                              char** out_csv);
HL_API void hl_report_free(hl_report* report);

/* ---- numerics --------------------------------------------------------- */

/* Euclidean projection onto the probability simplex (exact sort method). */
HL_API hl_status hl_project_simplex(const double* v, size_t n, double* out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* HYBRIDLOC_H */
