#include "experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "errors.hpp"
#include "parallel.hpp"
#include "rng.hpp"
#include "synth.hpp"

namespace qfal {

namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kTestTag = 0x7e57;
constexpr std::uint64_t kPartitionTag = 0x9a27;
constexpr std::uint64_t kInitTag = 0x1417;

std::uint64_t coverage_bits(double coverage) {
  std::uint64_t bits;
  static_assert(sizeof(bits) == sizeof(coverage));
  std::memcpy(&bits, &coverage, sizeof(bits));
  return bits;
}

std::string coverage_tag(double coverage) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", coverage * 100.0);
  return buf;
}

void echo_resolved_config(const ExperimentSpec& spec, int threads) {
  std::ofstream out(spec.out_dir + "/resolved_config.txt");
  if (!out) {
    throw IoError("cannot write resolved config under " + spec.out_dir);
  }
  auto list_int = [](const std::vector<int>& v) {
    std::ostringstream s;
    for (std::size_t i = 0; i < v.size(); ++i) s << (i ? "," : "") << v[i];
    return s.str();
  };
  auto list_dbl = [](const std::vector<double>& v) {
    std::ostringstream s;
    for (std::size_t i = 0; i < v.size(); ++i)
      s << (i ? "," : "") << format_compact(v[i]);
    return s.str();
  };
  out << "train-images=" << spec.train_images << "\n"
      << "train-labels=" << spec.train_labels << "\n"
      << "test-images=" << spec.test_images << "\n"
      << "test-labels=" << spec.test_labels << "\n"
      << "clients=" << list_int(spec.clients) << "\n"
      << "coverage=" << list_dbl(spec.coverages) << "\n"
      << "eps-grid=" << list_dbl(spec.eps_grid) << "\n"
      << "rounds=" << spec.rounds_baseline << "\n"
      << "adv-rounds=" << spec.rounds_adv << "\n"
      << "per-client=" << spec.per_client << "\n"
      << "test-count=" << spec.test_count << "\n"
      << "epochs=" << spec.local_epochs << "\n"
      << "batch-size=" << spec.batch_size << "\n"
      << "lr=" << format_compact(spec.lr) << "\n"
      << "seed=" << spec.seed << "\n"
      << "resume=" << (spec.resume ? 1 : 0) << "\n"
      << "threads=" << threads << "\n";
}

void append_eval_records(SweepResult& result, const std::string& phase,
                         int clients, double coverage, int round,
                         const std::vector<RobustnessRow>& rows) {
  for (const auto& r : rows) {
    result.eval_records.push_back({phase, clients, coverage, round,
                                   r.epsilon == 0.0 ? "clean" : "adv",
                                   r.epsilon, r.mean_loss, r.accuracy});
  }
}

}  // namespace

std::string checkpoint_path(const std::string& out_dir, int clients,
                            double coverage) {
  return out_dir + "/checkpoints/k" + std::to_string(clients) + "_cov" +
         coverage_tag(coverage) + ".ckpt";
}

SweepResult run_sweep(const ExperimentSpec& spec) {
  if (spec.clients.empty()) {
    throw ConfigError("no client counts requested");
  }
  if (spec.eps_grid.empty() || spec.eps_grid[0] != 0.0) {
    throw ConfigError("epsilon grid must start with 0");
  }
  if (spec.out_dir.empty()) {
    throw ConfigError("no output directory given");
  }
  for (const double cov : spec.coverages) {
    if (cov < 0.0 || cov > 1.0) {
      throw ConfigError("coverage " + format_compact(cov) +
                        " outside [0,1]");
    }
  }
  const int threads = effective_threads(spec.threads);

  std::error_code ec;
  fs::create_directories(spec.out_dir + "/checkpoints", ec);
  fs::create_directories(spec.out_dir + "/plots", ec);
  if (!fs::is_directory(spec.out_dir + "/checkpoints")) {
    throw IoError("cannot create output directory " + spec.out_dir);
  }
  echo_resolved_config(spec, threads);

  const auto train_pool = load_samples(spec.train_images, spec.train_labels);
  const auto test_pool = load_samples(spec.test_images, spec.test_labels);
  const auto test_set = stratified_subset(
      test_pool, spec.test_count, hash_stream(spec.seed, kTestTag));

  const Qnn qnn;
  OptimizerConfig opt;
  opt.eta = spec.lr;
  AttackConfig train_attack;  // fixed training-time attack
  train_attack.epsilon = 0.1;
  train_attack.alpha = 0.01;
  train_attack.iterations = 10;

  SweepResult result;
  for (const int clients : spec.clients) {
    const auto parts = partition_iid(
        train_pool, clients, spec.per_client,
        hash_stream(spec.seed, kPartitionTag, static_cast<std::uint64_t>(clients)));

    // coverage-0 baseline, always trained (or resumed): it seeds the warm
    // starts even when 0 is not in the requested coverage list
    const std::string base_ckpt = checkpoint_path(spec.out_dir, clients, 0.0);
    GlobalModel base;
    if (spec.resume && fs::exists(base_ckpt)) {
      base = load_checkpoint(base_ckpt);
    } else {
      GlobalModel init;
      init.params = qnn.init_params(
          hash_stream(spec.seed, kInitTag, static_cast<std::uint64_t>(clients)));
      init.prov.qubits = qnn.layout().num_wires;
      init.prov.layers = qnn.layout().num_layers;
      FederationConfig fc;
      fc.num_clients = clients;
      fc.rounds = spec.rounds_baseline;
      fc.local_epochs = spec.local_epochs;
      fc.batch_size = spec.batch_size;
      fc.coverage = 0.0;
      fc.seed = hash_stream(spec.seed, static_cast<std::uint64_t>(clients),
                            coverage_bits(0.0));
      fc.threads = threads;
      PhaseResult res = run_phase(qnn, std::move(init), fc, train_attack,
                                  parts, test_set, opt);
      base = std::move(res.model);
      save_checkpoint(base, base_ckpt);
      write_convergence_svg(
          spec.out_dir + "/plots/k" + std::to_string(clients) + "_cov0.svg",
          res.records);
      result.round_records.insert(result.round_records.end(),
                                  res.records.begin(), res.records.end());
    }

    std::vector<std::pair<double, std::vector<RobustnessRow>>> tables;
    for (const double coverage : spec.coverages) {
      GlobalModel model;
      if (coverage == 0.0) {
        model = base;
      } else {
        const std::string ckpt =
            checkpoint_path(spec.out_dir, clients, coverage);
        if (spec.resume && fs::exists(ckpt)) {
          model = load_checkpoint(ckpt);
        } else {
          FederationConfig fc;
          fc.num_clients = clients;
          fc.rounds = spec.rounds_adv;
          fc.local_epochs = spec.local_epochs;
          fc.batch_size = spec.batch_size;
          fc.coverage = coverage;
          fc.seed = hash_stream(spec.seed, static_cast<std::uint64_t>(clients),
                                coverage_bits(coverage));
          fc.threads = threads;
          PhaseResult res = run_phase(qnn, base, fc, train_attack, parts,
                                      test_set, opt);
          model = std::move(res.model);
          save_checkpoint(model, ckpt);
          write_convergence_svg(spec.out_dir + "/plots/k" +
                                    std::to_string(clients) + "_cov" +
                                    coverage_tag(coverage) + ".svg",
                                res.records);
          result.round_records.insert(result.round_records.end(),
                                      res.records.begin(), res.records.end());
        }
      }
      const auto rows = evaluate_robustness(qnn, model.params, test_set,
                                            spec.eps_grid, threads);
      append_eval_records(result,
                          coverage > 0.0 ? "adversarial" : "baseline", clients,
                          coverage, model.round, rows);
      tables.emplace_back(coverage, rows);
    }
    write_final_table_csv(
        spec.out_dir + "/final_k" + std::to_string(clients) + ".csv", tables,
        spec.eps_grid);
    result.tables.emplace_back(clients, std::move(tables));
  }

  write_records_csv(spec.out_dir + "/rounds.csv", result.round_records);
  write_records_csv(spec.out_dir + "/robustness.csv", result.eval_records);
  return result;
}

std::string show_samples_report(const Qnn& qnn, const QnnParams& params,
                                std::span<const Sample> test, int n,
                                double eps) {
  if (n < 1) {
    throw std::invalid_argument("need at least one sample to report");
  }
  n = std::min<int>(n, static_cast<int>(test.size()));
  AttackConfig cfg;
  cfg.epsilon = eps;
  cfg.alpha = eps > 0.0 ? eps / 10.0 : 0.01;
  cfg.iterations = 10;

  std::ostringstream out;
  out << "idx  label  clean pred (conf)      attacked pred (conf)  eps="
      << format_compact(eps) << "\n";
  for (int i = 0; i < n; ++i) {
    const Sample& s = test[i];
    const Prediction clean = qnn.forward(params, s.pixels);
    const AdvSample adv = pgd_attack(qnn, params, s, cfg);
    const Prediction attacked = qnn.forward(params, adv.perturbed);
    char line[160];
    std::snprintf(
        line, sizeof(line),
        "%-4d %-6d %d (%.3f) %-12s %d (%.3f) %s\n", i, s.label,
        clean.predicted_class, clean.probabilities[clean.predicted_class],
        clean.predicted_class == s.label ? "correct" : "WRONG",
        attacked.predicted_class,
        attacked.probabilities[attacked.predicted_class],
        attacked.predicted_class == s.label ? "correct" : "WRONG");
    out << line;
  }
  return out.str();
}

}  // namespace qfal
