#ifndef FUZZY_ID3_H
#define FUZZY_ID3_H

/* Generated by cbindgen from fuzzy-id3-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Conjunction operator selector.
 */
typedef enum Fid3TNorm {
  FID3_T_NORM_MINIMUM = 0,
  FID3_T_NORM_PRODUCT = 1,
} Fid3TNorm;

/**
 * Result of every fallible call.
 */
typedef enum Fid3Status {
  FID3_STATUS_OK = 0,
  /**
   * Invalid configuration or parameter value.
   */
  FID3_STATUS_CONFIG_ERROR = 1,
  /**
   * Invalid or unusable input data.
   */
  FID3_STATUS_DATA_ERROR = 2,
  /**
   * I/O or serialization failure.
   */
  FID3_STATUS_INTERNAL_ERROR = 3,
  /**
   * A required pointer argument was null.
   */
  FID3_STATUS_NULL_ARGUMENT = 4,
  /**
   * A string argument was not valid UTF-8.
   */
  FID3_STATUS_INVALID_UTF8 = 5,
  /**
   * The library panicked; state may be inconsistent.
   */
  FID3_STATUS_PANIC = 6,
} Fid3Status;

/**
 * Opaque dataset handle: validated records plus their schema.
 */
typedef struct Fid3Dataset Fid3Dataset;

/**
 * Opaque trained-model handle.
 */
typedef struct Fid3Model Fid3Model;

/**
 * Induction parameters; get defaults from [`fid3_config_default`].
 */
typedef struct Fid3Config {
  enum Fid3TNorm tnorm;
  /**
   * Significance level β in [0, 1].
   */
  double beta;
  /**
   * Nodes lighter than this become leaves.
   */
  double min_node_weight;
  /**
   * Output effort classes (2..=7).
   */
  size_t num_output_classes;
  /**
   * Fuzzy sets per variable unless overridden by the schema (2..=7).
   */
  size_t default_num_sets;
  /**
   * Grow the crisp ID3 baseline instead of the fuzzy tree.
   */
  bool crisp;
} Fid3Config;

/**
 * Aggregate accuracy of a model on a dataset.
 */
typedef struct Fid3Accuracy {
  /**
   * Mean magnitude of relative error, percent.
   */
  double mmre;
  /**
   * Share of projects with MRE <= 25%, percent.
   */
  double pred25;
  /**
   * mmre <= 25.
   */
  bool mmre_acceptable;
  /**
   * pred25 >= 75.
   */
  bool pred25_acceptable;
} Fid3Accuracy;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the most recent failure on this thread. Returns the message
 * length in bytes; pass a null buffer to query the required size.
 */
size_t fid3_last_error_message(char *buf, size_t len);

/**
 * Library version as a static NUL-terminated string.
 */
const char *fid3_version(void);

/**
 * Default induction configuration: product t-norm, β = 0.1, 5 output
 * classes, 7 fuzzy sets per variable.
 */
struct Fid3Config fid3_config_default(void);

/**
 * Generates a reproducible synthetic dataset for a built-in schema name or
 * a schema JSON path. The handle must be freed with [`fid3_dataset_free`].
 */
enum Fid3Status fid3_dataset_generate(const char *schema,
                                      size_t count,
                                      uint64_t seed,
                                      double noise,
                                      struct Fid3Dataset **out);

/**
 * Loads and validates a CSV dataset against a schema (built-in name or
 * schema JSON path).
 */
enum Fid3Status fid3_dataset_load_csv(const char *path,
                                      const char *schema,
                                      struct Fid3Dataset **out);

/**
 * Number of records in the dataset; 0 for a null handle.
 */
size_t fid3_dataset_len(const struct Fid3Dataset *dataset);

/**
 * Writes the dataset as CSV.
 */
enum Fid3Status fid3_dataset_write_csv(const struct Fid3Dataset *dataset, const char *path);

void fid3_dataset_free(struct Fid3Dataset *dataset);

/**
 * Trains a fuzzy (or crisp, per `config.crisp`) ID3 tree on the dataset.
 * The model must be freed with [`fid3_model_free`].
 */
enum Fid3Status fid3_train(const struct Fid3Dataset *dataset,
                           const struct Fid3Config *config,
                           struct Fid3Model **out);

/**
 * Writes the model file (JSON).
 */
enum Fid3Status fid3_model_save(const struct Fid3Model *model, const char *path);

/**
 * Loads a model file written by [`fid3_model_save`] or the CLI.
 */
enum Fid3Status fid3_model_load(const char *path, struct Fid3Model **out);

void fid3_model_free(struct Fid3Model *model);

/**
 * Number of input variables the model splits on.
 */
size_t fid3_model_num_variables(const struct Fid3Model *model);

/**
 * Copies the name of variable `index` into the buffer (NUL-terminated,
 * truncating) and returns its full byte length; 0 when out of range.
 */
size_t fid3_model_variable_name(const struct Fid3Model *model, size_t index, char *buf, size_t len);

size_t fid3_model_node_count(const struct Fid3Model *model);

size_t fid3_model_leaf_count(const struct Fid3Model *model);

size_t fid3_model_depth(const struct Fid3Model *model);

/**
 * Predicts the effort of one project. `values` holds one value per model
 * variable, in model variable order ([`fid3_model_variable_name`]).
 */
enum Fid3Status fid3_predict(const struct Fid3Model *model,
                             const double *values,
                             size_t len,
                             double *out_effort);

/**
 * Batch prediction: reads an attribute CSV and writes it back with a
 * `predicted_effort` column appended.
 */
enum Fid3Status fid3_predict_csv(const struct Fid3Model *model,
                                 const char *input_path,
                                 const char *output_path);

/**
 * Evaluates the model on a dataset with actual efforts.
 */
enum Fid3Status fid3_evaluate(const struct Fid3Model *model,
                              const struct Fid3Dataset *dataset,
                              struct Fid3Accuracy *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FUZZY_ID3_H */
