// Command-line front end for the qfal shared library. Subcommands:
//   sweep        train baselines and warm-started adversarial phases,
//                evaluate robustness over an epsilon grid, emit CSVs/plots
//   show-samples print clean vs attacked predictions from a checkpoint
//   synth        write a synthetic digit corpus in IDX format
//
// Flags may also come from a key=value config file (--config); command-line
// values win. QFAL_THREADS caps worker parallelism.

#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qfal/qfal.h"

namespace {

int die(qfal_status status) {
  std::fprintf(stderr, "error (%s): %s\n", qfal_status_name(status),
               qfal_last_error());
  return 1;
}

struct SweepArgs {
  std::string train_images, train_labels, test_images, test_labels, out;
  std::vector<int> clients{5, 10, 15};
  std::vector<double> coverage{0.0, 0.2, 0.5, 1.0};
  std::vector<double> eps_grid{0.0, 0.01, 0.05, 0.1, 0.2, 0.3, 0.5};
  int rounds = 50;
  int adv_rounds = 20;
  int per_client = 300;
  int test_count = 600;
  int batch_size = 64;
  int epochs = 4;
  double lr = 0.01;
  std::uint64_t seed = 42;
  bool resume = false;
  int threads = 0;
};

void add_sweep_flags(CLI::App* cmd, SweepArgs& a) {
  cmd->add_option("--train-images", a.train_images, "training IDX image file")
      ->required();
  cmd->add_option("--train-labels", a.train_labels, "training IDX label file")
      ->required();
  cmd->add_option("--test-images", a.test_images, "test IDX image file")
      ->required();
  cmd->add_option("--test-labels", a.test_labels, "test IDX label file")
      ->required();
  cmd->add_option("--out", a.out, "output directory")->required();
  cmd->add_option("--clients", a.clients, "client counts to sweep")
      ->delimiter(',');
  cmd->add_option("--coverage", a.coverage,
                  "adversarial-training coverage fractions")
      ->delimiter(',');
  cmd->add_option("--eps-grid", a.eps_grid,
                  "evaluation perturbation strengths (first must be 0)")
      ->delimiter(',');
  cmd->add_option("--rounds", a.rounds, "baseline federated rounds");
  cmd->add_option("--adv-rounds", a.adv_rounds, "warm-started rounds per coverage");
  cmd->add_option("--per-client", a.per_client, "training samples per client");
  cmd->add_option("--test-count", a.test_count, "shared test set size");
  cmd->add_option("--batch-size", a.batch_size, "mini-batch size");
  cmd->add_option("--epochs", a.epochs, "local epochs per round");
  cmd->add_option("--lr", a.lr, "Adam learning rate");
  cmd->add_option("--seed", a.seed, "master RNG seed");
  cmd->add_flag("--resume", a.resume, "reuse existing phase checkpoints");
  cmd->add_option("--threads", a.threads,
                  "worker threads (0 = auto; QFAL_THREADS caps)");
  cmd->set_config("--config", "", "key=value config file (flags override)");
}

int run_sweep_cmd(const SweepArgs& a) {
  qfal_sweep_options opts;
  qfal_sweep_options_init(&opts);
  opts.train_images = a.train_images.c_str();
  opts.train_labels = a.train_labels.c_str();
  opts.test_images = a.test_images.c_str();
  opts.test_labels = a.test_labels.c_str();
  opts.out_dir = a.out.c_str();
  std::vector<int32_t> clients(a.clients.begin(), a.clients.end());
  opts.clients = clients.data();
  opts.clients_len = static_cast<int32_t>(clients.size());
  opts.coverages = a.coverage.data();
  opts.coverages_len = static_cast<int32_t>(a.coverage.size());
  opts.eps_grid = a.eps_grid.data();
  opts.eps_grid_len = static_cast<int32_t>(a.eps_grid.size());
  opts.rounds_baseline = a.rounds;
  opts.rounds_adv = a.adv_rounds;
  opts.per_client = a.per_client;
  opts.test_count = a.test_count;
  opts.local_epochs = a.epochs;
  opts.batch_size = a.batch_size;
  opts.learning_rate = a.lr;
  opts.seed = a.seed;
  opts.resume = a.resume ? 1 : 0;
  opts.threads = a.threads;

  const qfal_status status = qfal_sweep_run(&opts);
  if (status != QFAL_OK) return die(status);
  std::printf("sweep complete; results under %s\n", a.out.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quantum federated adversarial learning simulator"};
  app.require_subcommand(1);

  SweepArgs sweep;
  CLI::App* sweep_cmd = app.add_subcommand(
      "sweep", "run federated experiments over a clients x coverage grid");
  add_sweep_flags(sweep_cmd, sweep);

  std::string ckpt_path, show_images, show_labels;
  int show_n = 9;
  double show_eps = 0.1;
  CLI::App* show_cmd = app.add_subcommand(
      "show-samples", "clean vs PGD-attacked predictions from a checkpoint");
  show_cmd->add_option("--checkpoint", ckpt_path, "model checkpoint")
      ->required();
  show_cmd->add_option("--test-images", show_images, "test IDX image file")
      ->required();
  show_cmd->add_option("--test-labels", show_labels, "test IDX label file")
      ->required();
  show_cmd->add_option("-n,--count", show_n, "number of samples");
  show_cmd->add_option("--eps", show_eps, "attack strength");

  std::string synth_images, synth_labels;
  int synth_count = 2100;
  std::uint64_t synth_seed = 1;
  CLI::App* synth_cmd = app.add_subcommand(
      "synth", "write a synthetic digit corpus (IDX, digits 0-2)");
  synth_cmd->add_option("--images", synth_images, "output image file")
      ->required();
  synth_cmd->add_option("--labels", synth_labels, "output label file")
      ->required();
  synth_cmd->add_option("--count", synth_count, "number of images");
  synth_cmd->add_option("--seed", synth_seed, "generator seed");

  CLI11_PARSE(app, argc, argv);

  if (sweep_cmd->parsed()) {
    return run_sweep_cmd(sweep);
  }

  if (show_cmd->parsed()) {
    qfal_model* model = nullptr;
    qfal_status status = qfal_model_load(ckpt_path.c_str(), &model);
    if (status != QFAL_OK) return die(status);
    qfal_dataset* test = nullptr;
    status = qfal_dataset_load(show_images.c_str(), show_labels.c_str(), &test);
    if (status != QFAL_OK) {
      qfal_model_free(model);
      return die(status);
    }
    char* report = nullptr;
    status = qfal_show_samples(model, test, show_n, show_eps, &report);
    if (status == QFAL_OK) {
      std::fputs(report, stdout);
      qfal_string_free(report);
    }
    qfal_dataset_free(test);
    qfal_model_free(model);
    return status == QFAL_OK ? 0 : die(status);
  }

  if (synth_cmd->parsed()) {
    const qfal_status status = qfal_synth_write_idx(
        synth_images.c_str(), synth_labels.c_str(), synth_count, synth_seed);
    if (status != QFAL_OK) return die(status);
    std::printf("wrote %d synthetic digits to %s / %s\n", synth_count,
                synth_images.c_str(), synth_labels.c_str());
    return 0;
  }

  return 0;
}
