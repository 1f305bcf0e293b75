#include "qfal/qfal.h"

#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "attack.hpp"
#include "dataset.hpp"
#include "errors.hpp"
#include "experiment.hpp"
#include "federation.hpp"
#include "model.hpp"
#include "synth.hpp"

struct qfal_dataset {
  std::vector<qfal::Sample> samples;
};

struct qfal_model {
  qfal::GlobalModel global;
  qfal::Qnn qnn;
};

namespace {

thread_local std::string g_last_error;

qfal_status fail(qfal_status code, const char* what) {
  g_last_error = what ? what : "";
  return code;
}

template <typename F>
qfal_status guarded(F&& f) {
  try {
    return f();
  } catch (const qfal::TruncatedError& e) {
    return fail(QFAL_ERR_FORMAT, e.what());
  } catch (const qfal::FormatError& e) {
    return fail(QFAL_ERR_FORMAT, e.what());
  } catch (const qfal::IoError& e) {
    return fail(QFAL_ERR_IO, e.what());
  } catch (const qfal::ConfigError& e) {
    return fail(QFAL_ERR_CONFIG, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(QFAL_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(QFAL_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(QFAL_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(QFAL_ERR_INTERNAL, "unknown error");
  }
}

}  // namespace

extern "C" {

const char* qfal_version(void) { return "0.1.0"; }

const char* qfal_status_name(qfal_status status) {
  switch (status) {
    case QFAL_OK: return "ok";
    case QFAL_ERR_INVALID_ARGUMENT: return "invalid argument";
    case QFAL_ERR_IO: return "io error";
    case QFAL_ERR_FORMAT: return "format error";
    case QFAL_ERR_CONFIG: return "configuration error";
    case QFAL_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* qfal_last_error(void) { return g_last_error.c_str(); }

void qfal_string_free(char* s) { delete[] s; }

qfal_status qfal_dataset_load(const char* images_path, const char* labels_path,
                              qfal_dataset** out) {
  if (!images_path || !labels_path || !out) {
    return fail(QFAL_ERR_INVALID_ARGUMENT, "null argument");
  }
  return guarded([&] {
    auto ds = std::make_unique<qfal_dataset>();
    ds->samples = qfal::load_samples(images_path, labels_path);
    *out = ds.release();
    return QFAL_OK;
  });
}

qfal_status qfal_synth_write_idx(const char* images_path,
                                 const char* labels_path, int32_t count,
                                 uint64_t seed) {
  if (!images_path || !labels_path || count < 1) {
    return fail(QFAL_ERR_INVALID_ARGUMENT, "null path or non-positive count");
  }
  return guarded([&] {
    qfal::write_synth_idx(images_path, labels_path, count, seed);
    return QFAL_OK;
  });
}

int32_t qfal_dataset_size(const qfal_dataset* ds) {
  return ds ? static_cast<int32_t>(ds->samples.size()) : 0;
}

qfal_status qfal_dataset_sample(const qfal_dataset* ds, int32_t index,
                                double pixels_out[64], int32_t* label_out) {
  if (!ds || !pixels_out || !label_out || index < 0 ||
      index >= static_cast<int32_t>(ds->samples.size())) {
    return fail(QFAL_ERR_INVALID_ARGUMENT, "bad dataset handle or index");
  }
  const qfal::Sample& s = ds->samples[index];
  std::memcpy(pixels_out, s.pixels.data(), sizeof(double) * 64);
  *label_out = s.label;
  return QFAL_OK;
}

void qfal_dataset_free(qfal_dataset* ds) { delete ds; }

qfal_status qfal_model_load(const char* checkpoint_path, qfal_model** out) {
  if (!checkpoint_path || !out) {
    return fail(QFAL_ERR_INVALID_ARGUMENT, "null argument");
  }
  return guarded([&] {
    auto loaded = qfal::load_checkpoint(checkpoint_path);
    qfal::LayerTemplate tmpl;
    tmpl.num_layers = loaded.prov.layers;
    tmpl.num_wires = loaded.prov.qubits;
    auto model = std::make_unique<qfal_model>(
        qfal_model{std::move(loaded), qfal::Qnn(tmpl)});
    *out = model.release();
    return QFAL_OK;
  });
}

qfal_status qfal_model_save(const qfal_model* model,
                            const char* checkpoint_path) {
  if (!model || !checkpoint_path) {
    return fail(QFAL_ERR_INVALID_ARGUMENT, "null argument");
  }
  return guarded([&] {
    qfal::save_checkpoint(model->global, checkpoint_path);
    return QFAL_OK;
  });
}

int32_t qfal_model_angle_count(const qfal_model* model) {
  return model ? static_cast<int32_t>(model->global.params.size()) : 0;
}

qfal_status qfal_model_get_angles(const qfal_model* model, double* out,
                                  int32_t capacity) {
  if (!model || !out ||
      capacity < static_cast<int32_t>(model->global.params.size())) {
    return fail(QFAL_ERR_INVALID_ARGUMENT, "null output or capacity too small");
  }
  std::memcpy(out, model->global.params.angles.data(),
              sizeof(double) * model->global.params.size());
  return QFAL_OK;
}

qfal_status qfal_model_predict(const qfal_model* model, const double pixels[64],
                               double probs_out[3], int32_t* class_out) {
  if (!model || !pixels || !probs_out || !class_out) {
    return fail(QFAL_ERR_INVALID_ARGUMENT, "null argument");
  }
  return guarded([&] {
    std::span<const double, qfal::kSamplePixels> view(pixels,
                                                      qfal::kSamplePixels);
    const qfal::Prediction pred = model->qnn.forward(model->global.params, view);
    for (int i = 0; i < qfal::kNumClasses; ++i) {
      probs_out[i] = pred.probabilities[i];
    }
    *class_out = pred.predicted_class;
    return QFAL_OK;
  });
}

qfal_status qfal_model_attack(const qfal_model* model, const double pixels[64],
                              int32_t label, double epsilon, double alpha,
                              int32_t iterations, double out_pixels[64]) {
  if (!model || !pixels || !out_pixels || label < 0 ||
      label >= qfal::kNumClasses) {
    return fail(QFAL_ERR_INVALID_ARGUMENT, "null argument or bad label");
  }
  return guarded([&] {
    qfal::Sample sample;
    std::memcpy(sample.pixels.data(), pixels, sizeof(double) * 64);
    sample.label = label;
    qfal::AttackConfig cfg;
    cfg.epsilon = epsilon;
    cfg.alpha = alpha;
    cfg.iterations = iterations;
    const qfal::AdvSample adv =
        qfal::pgd_attack(model->qnn, model->global.params, sample, cfg);
    std::memcpy(out_pixels, adv.perturbed.data(), sizeof(double) * 64);
    return QFAL_OK;
  });
}

qfal_status qfal_show_samples(const qfal_model* model, const qfal_dataset* test,
                              int32_t n, double epsilon, char** report_out) {
  if (!model || !test || !report_out) {
    return fail(QFAL_ERR_INVALID_ARGUMENT, "null argument");
  }
  return guarded([&] {
    const std::string report = qfal::show_samples_report(
        model->qnn, model->global.params, test->samples, n, epsilon);
    char* buf = new char[report.size() + 1];
    std::memcpy(buf, report.c_str(), report.size() + 1);
    *report_out = buf;
    return QFAL_OK;
  });
}

void qfal_model_free(qfal_model* model) { delete model; }

void qfal_sweep_options_init(qfal_sweep_options* opts) {
  if (!opts) return;
  static const int32_t kClients[] = {5, 10, 15};
  static const double kCoverages[] = {0.0, 0.2, 0.5, 1.0};
  static const double kEpsGrid[] = {0.0, 0.01, 0.05, 0.1, 0.2, 0.3, 0.5};
  std::memset(opts, 0, sizeof(*opts));
  opts->clients = kClients;
  opts->clients_len = 3;
  opts->coverages = kCoverages;
  opts->coverages_len = 4;
  opts->eps_grid = kEpsGrid;
  opts->eps_grid_len = 7;
  opts->rounds_baseline = 50;
  opts->rounds_adv = 20;
  opts->per_client = 300;
  opts->test_count = 600;
  opts->local_epochs = 4;
  opts->batch_size = 64;
  opts->learning_rate = 0.01;
  opts->seed = 42;
  opts->resume = 0;
  opts->threads = 0;
}

qfal_status qfal_sweep_run(const qfal_sweep_options* opts) {
  if (!opts || !opts->train_images || !opts->train_labels ||
      !opts->test_images || !opts->test_labels || !opts->out_dir) {
    return fail(QFAL_ERR_INVALID_ARGUMENT,
                "sweep options must carry all four dataset paths and out_dir");
  }
  return guarded([&] {
    qfal::ExperimentSpec spec;
    spec.train_images = opts->train_images;
    spec.train_labels = opts->train_labels;
    spec.test_images = opts->test_images;
    spec.test_labels = opts->test_labels;
    spec.out_dir = opts->out_dir;
    spec.clients.assign(opts->clients, opts->clients + opts->clients_len);
    spec.coverages.assign(opts->coverages,
                          opts->coverages + opts->coverages_len);
    spec.eps_grid.assign(opts->eps_grid, opts->eps_grid + opts->eps_grid_len);
    spec.rounds_baseline = opts->rounds_baseline;
    spec.rounds_adv = opts->rounds_adv;
    spec.per_client = opts->per_client;
    spec.test_count = opts->test_count;
    spec.local_epochs = opts->local_epochs;
    spec.batch_size = opts->batch_size;
    spec.lr = opts->learning_rate;
    spec.seed = opts->seed;
    spec.resume = opts->resume != 0;
    spec.threads = opts->threads;
    qfal::run_sweep(spec);
    return QFAL_OK;
  });
}

}  // extern "C"
