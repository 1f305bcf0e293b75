#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "federation.hpp"
#include "metrics.hpp"

namespace qfal {

struct ExperimentSpec {
  std::string train_images;
  std::string train_labels;
  std::string test_images;
  std::string test_labels;
  std::vector<int> clients{5, 10, 15};
  std::vector<double> coverages{0.0, 0.2, 0.5, 1.0};
  std::vector<double> eps_grid{0.0, 0.01, 0.05, 0.1, 0.2, 0.3, 0.5};
  int rounds_baseline = 50;
  int rounds_adv = 20;
  int per_client = 300;
  int test_count = 600;
  int local_epochs = 4;
  int batch_size = 64;
  double lr = 0.01;
  std::uint64_t seed = 42;
  std::string out_dir;
  bool resume = false;
  int threads = 0;  // <= 0: hardware concurrency, capped by QFAL_THREADS
};

struct SweepResult {
  std::vector<MetricsRecord> round_records;
  std::vector<MetricsRecord> eval_records;
  // per client count: (coverage, robustness rows) in run order
  std::vector<std::pair<int, std::vector<std::pair<double, std::vector<RobustnessRow>>>>>
      tables;
};

// Full experiment grid. For each client count: train (or, with resume, load)
// the coverage-0 baseline, then warm-start every positive coverage from it;
// evaluate each phase over the epsilon grid; write rounds.csv,
// robustness.csv, per-K final tables, convergence plots, checkpoints and the
// resolved configuration under spec.out_dir.
SweepResult run_sweep(const ExperimentSpec& spec);

// Text analogue of a prediction gallery: clean and attacked predictions
// with confidence for the first n test samples.
std::string show_samples_report(const Qnn& qnn, const QnnParams& params,
                                std::span<const Sample> test, int n,
                                double eps);

std::string checkpoint_path(const std::string& out_dir, int clients,
                            double coverage);

}  // namespace qfal
