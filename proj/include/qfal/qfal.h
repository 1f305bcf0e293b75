/* qfal: quantum federated adversarial learning simulator, C API.
 *
 * All functions return QFAL_OK or an error code; qfal_last_error() carries
 * a thread-local detail message for the most recent failure. Handles are
 * opaque and freed with their matching *_free function.
 */
#ifndef QFAL_H
#define QFAL_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define QFAL_API __declspec(dllexport)
#else
#define QFAL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qfal_status {
  QFAL_OK = 0,
  QFAL_ERR_INVALID_ARGUMENT = 1,
  QFAL_ERR_IO = 2,
  QFAL_ERR_FORMAT = 3,
  QFAL_ERR_CONFIG = 4,
  QFAL_ERR_INTERNAL = 5
} qfal_status;

typedef struct qfal_dataset qfal_dataset; /* preprocessed 8x8 samples */
typedef struct qfal_model qfal_model;     /* trained classifier parameters */

QFAL_API const char* qfal_version(void);
QFAL_API const char* qfal_status_name(qfal_status status);
QFAL_API const char* qfal_last_error(void);
QFAL_API void qfal_string_free(char* s);

/* --- datasets ---------------------------------------------------------- */

/* Loads an MNIST-style IDX image/label pair (gzip detected by prefix),
 * keeping digits 0-2 downsampled to 8x8. */
QFAL_API qfal_status qfal_dataset_load(const char* images_path,
                                       const char* labels_path,
                                       qfal_dataset** out);

/* Writes a synthetic digit corpus in IDX format (28x28, labels 0-2). */
QFAL_API qfal_status qfal_synth_write_idx(const char* images_path,
                                          const char* labels_path,
                                          int32_t count, uint64_t seed);

QFAL_API int32_t qfal_dataset_size(const qfal_dataset* ds);
QFAL_API qfal_status qfal_dataset_sample(const qfal_dataset* ds, int32_t index,
                                         double pixels_out[64],
                                         int32_t* label_out);
QFAL_API void qfal_dataset_free(qfal_dataset* ds);

/* --- models ------------------------------------------------------------ */

QFAL_API qfal_status qfal_model_load(const char* checkpoint_path,
                                     qfal_model** out);
QFAL_API qfal_status qfal_model_save(const qfal_model* model,
                                     const char* checkpoint_path);
QFAL_API int32_t qfal_model_angle_count(const qfal_model* model);
QFAL_API qfal_status qfal_model_get_angles(const qfal_model* model,
                                           double* out, int32_t capacity);

/* Class probabilities and argmax for one 8x8 input. */
QFAL_API qfal_status qfal_model_predict(const qfal_model* model,
                                        const double pixels[64],
                                        double probs_out[3],
                                        int32_t* class_out);

/* White-box PGD in pixel space; out_pixels may alias pixels. */
QFAL_API qfal_status qfal_model_attack(const qfal_model* model,
                                       const double pixels[64], int32_t label,
                                       double epsilon, double alpha,
                                       int32_t iterations,
                                       double out_pixels[64]);

/* Clean-and-attacked prediction table for the first n samples; *report_out
 * is heap-allocated, release with qfal_string_free. */
QFAL_API qfal_status qfal_show_samples(const qfal_model* model,
                                       const qfal_dataset* test, int32_t n,
                                       double epsilon, char** report_out);

QFAL_API void qfal_model_free(qfal_model* model);

/* --- experiment sweep --------------------------------------------------- */

typedef struct qfal_sweep_options {
  const char* train_images;
  const char* train_labels;
  const char* test_images;
  const char* test_labels;
  const char* out_dir;
  const int32_t* clients;    /* client counts, e.g. {5,10,15} */
  int32_t clients_len;
  const double* coverages;   /* fractions in [0,1] */
  int32_t coverages_len;
  const double* eps_grid;    /* must start with 0 */
  int32_t eps_grid_len;
  int32_t rounds_baseline;
  int32_t rounds_adv;
  int32_t per_client;
  int32_t test_count;
  int32_t local_epochs;
  int32_t batch_size;
  double learning_rate;
  uint64_t seed;
  int32_t resume;            /* nonzero: reuse existing checkpoints */
  int32_t threads;           /* <= 0: auto; QFAL_THREADS caps either way */
} qfal_sweep_options;

/* Fills every field with the default experiment grid (paths null). */
QFAL_API void qfal_sweep_options_init(qfal_sweep_options* opts);

/* Runs baselines and warm-started phases, writing CSVs, plots and
 * checkpoints under out_dir. */
QFAL_API qfal_status qfal_sweep_run(const qfal_sweep_options* opts);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* QFAL_H */
