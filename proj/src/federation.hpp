#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "attack.hpp"
#include "dataset.hpp"
#include "model.hpp"

namespace qfal {

struct FederationConfig {
  int num_clients = 5;
  int rounds = 50;
  int local_epochs = 4;
  int batch_size = 64;
  double coverage = 0.0;  // fraction of clients that train adversarially
  std::uint64_t seed = 0;
  int threads = 1;
};

struct Provenance {
  int clients = 0;
  double coverage = 0.0;
  std::uint64_t seed = 0;
  int qubits = 6;
  int layers = 2;
  int base_round = 0;  // rounds inherited from a warm-start source
};

struct GlobalModel {
  QnnParams params;
  int round = 0;  // rounds completed in the current phase
  Provenance prov;
};

struct MetricsRecord {
  std::string phase;      // "baseline" (coverage 0) or "adversarial"
  int clients = 0;
  double coverage = 0.0;
  int round = 0;
  std::string split;      // "clean" or "adv"
  double epsilon = 0.0;
  double loss = 0.0;
  double accuracy = 0.0;  // fraction in [0,1]
};

// The ceil(coverage * K) lowest-indexed clients train adversarially.
std::vector<int> select_adversarial_clients(int num_clients, double coverage);

// One round of local training from the broadcast global parameters: for
// each epoch, shuffle with the client-round stream and take one Adam step
// per mini-batch. Adam state starts fresh each round.
QnnParams local_train_clean(const Qnn& qnn, const ClientDataset& client,
                            const QnnParams& global,
                            const FederationConfig& cfg,
                            const OptimizerConfig& opt, int round);

// Same loop, but the trailing half of every mini-batch is replaced by PGD
// examples generated against the client's current local parameters.
// Batches too small to split (size < 2) stay clean.
QnnParams local_train_adv(const Qnn& qnn, const ClientDataset& client,
                          const QnnParams& global, const FederationConfig& cfg,
                          const OptimizerConfig& opt,
                          const AttackConfig& attack, int round);

// Dataset-size-weighted element-wise average.
QnnParams fedavg(const std::vector<std::pair<QnnParams, std::size_t>>& updates);

struct PhaseResult {
  GlobalModel model;
  std::vector<MetricsRecord> records;
};

// Runs cfg.rounds federated rounds: broadcast, local training (clean or
// adversarial per selection), FedAvg, then a clean-test evaluation. Emits a
// round-0 record for the incoming model so a warm start's first evaluation
// can be compared against its source. rounds = 0 returns the input
// unchanged with no records.
PhaseResult run_phase(const Qnn& qnn, GlobalModel start,
                      const FederationConfig& cfg, const AttackConfig& attack,
                      const std::vector<ClientDataset>& data,
                      std::span<const Sample> test, const OptimizerConfig& opt);

// Versioned text checkpoint: header lines, a blank line, then one angle per
// line at 17 significant digits.
void save_checkpoint(const GlobalModel& model, const std::string& path);
GlobalModel load_checkpoint(const std::string& path);

}  // namespace qfal
