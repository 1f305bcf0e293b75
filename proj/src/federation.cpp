#include "federation.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "errors.hpp"
#include "parallel.hpp"
#include "rng.hpp"

namespace qfal {

std::vector<int> select_adversarial_clients(int num_clients, double coverage) {
  if (num_clients < 1 || coverage < 0.0 || coverage > 1.0) {
    throw std::invalid_argument("invalid client count or coverage");
  }
  if (coverage <= 0.0) return {};
  // tiny slack so 0.2 * 15 = 2.9999... still rounds up to 3, not 4
  int n = static_cast<int>(std::ceil(coverage * num_clients - 1e-9));
  n = std::clamp(n, 0, num_clients);
  std::vector<int> ids(n);
  std::iota(ids.begin(), ids.end(), 0);
  return ids;
}

namespace {

std::uint64_t round_stream(const FederationConfig& cfg, int client, int round) {
  return hash_stream(cfg.seed, static_cast<std::uint64_t>(client),
                     static_cast<std::uint64_t>(round),
                     0x9d2c5680ULL + static_cast<std::uint64_t>(cfg.num_clients));
}

QnnParams local_train(const Qnn& qnn, const ClientDataset& client,
                      const QnnParams& global, const FederationConfig& cfg,
                      const OptimizerConfig& opt, const AttackConfig* attack,
                      int round) {
  if (client.samples.empty()) {
    throw std::invalid_argument("client " + std::to_string(client.client_id) +
                                " has no data");
  }
  QnnParams local = global;
  AdamState adam(local.size());
  Rng rng(round_stream(cfg, client.client_id, round));

  std::vector<std::size_t> order(client.samples.size());
  std::iota(order.begin(), order.end(), 0);

  std::vector<Sample> batch;
  batch.reserve(cfg.batch_size);
  for (int epoch = 0; epoch < cfg.local_epochs; ++epoch) {
    rng.shuffle(order);
    for (std::size_t at = 0; at < order.size(); at += cfg.batch_size) {
      const std::size_t end =
          std::min(order.size(), at + static_cast<std::size_t>(cfg.batch_size));
      batch.clear();
      for (std::size_t i = at; i < end; ++i) {
        batch.push_back(client.samples[order[i]]);
      }
      if (attack && batch.size() >= 2) {
        // keep the leading half clean, attack the trailing half against
        // the current local parameters
        const std::size_t adv_count = batch.size() / 2;
        const std::size_t adv_from = batch.size() - adv_count;
        for (std::size_t i = adv_from; i < batch.size(); ++i) {
          const AdvSample adv = pgd_attack(qnn, local, batch[i], *attack);
          batch[i].pixels = adv.perturbed;
        }
      }
      const auto grads = qnn.grad_params_adjoint(local, batch);
      adam_step(local, grads, adam, opt);
    }
  }
  return local;
}

}  // namespace

QnnParams local_train_clean(const Qnn& qnn, const ClientDataset& client,
                            const QnnParams& global,
                            const FederationConfig& cfg,
                            const OptimizerConfig& opt, int round) {
  return local_train(qnn, client, global, cfg, opt, nullptr, round);
}

QnnParams local_train_adv(const Qnn& qnn, const ClientDataset& client,
                          const QnnParams& global, const FederationConfig& cfg,
                          const OptimizerConfig& opt,
                          const AttackConfig& attack, int round) {
  return local_train(qnn, client, global, cfg, opt, &attack, round);
}

QnnParams fedavg(const std::vector<std::pair<QnnParams, std::size_t>>& updates) {
  if (updates.empty()) {
    throw std::invalid_argument("fedavg over an empty update set");
  }
  std::size_t total = 0;
  for (const auto& [params, size] : updates) {
    if (params.size() != updates.front().first.size()) {
      throw std::invalid_argument("fedavg: parameter shape mismatch");
    }
    total += size;
  }
  if (total == 0) {
    throw std::invalid_argument("fedavg: total dataset size is zero");
  }
  QnnParams out = updates.front().first;
  std::fill(out.angles.begin(), out.angles.end(), 0.0);
  for (const auto& [params, size] : updates) {
    const double w = static_cast<double>(size) / static_cast<double>(total);
    for (std::size_t i = 0; i < out.angles.size(); ++i) {
      out.angles[i] += w * params.angles[i];
    }
  }
  return out;
}

PhaseResult run_phase(const Qnn& qnn, GlobalModel start,
                      const FederationConfig& cfg, const AttackConfig& attack,
                      const std::vector<ClientDataset>& data,
                      std::span<const Sample> test, const OptimizerConfig& opt) {
  if (static_cast<int>(data.size()) != cfg.num_clients) {
    throw std::invalid_argument("expected " + std::to_string(cfg.num_clients) +
                                " client datasets, got " +
                                std::to_string(data.size()));
  }
  PhaseResult result;
  result.model = std::move(start);
  if (cfg.rounds == 0) return result;
  result.model.prov.clients = cfg.num_clients;
  result.model.prov.coverage = cfg.coverage;
  result.model.prov.seed = cfg.seed;
  result.model.prov.base_round = result.model.round;
  result.model.round = 0;

  const std::string phase = cfg.coverage > 0.0 ? "adversarial" : "baseline";
  const auto adv_ids = select_adversarial_clients(cfg.num_clients, cfg.coverage);
  std::vector<char> is_adv(cfg.num_clients, 0);
  for (const int id : adv_ids) is_adv[id] = 1;

  auto record_eval = [&](int round) {
    const EvalResult eval =
        evaluate_clean(qnn, result.model.params, test, cfg.threads);
    result.records.push_back({phase, cfg.num_clients, cfg.coverage, round,
                              "clean", 0.0, eval.loss, eval.accuracy});
  };
  record_eval(0);

  for (int round = 1; round <= cfg.rounds; ++round) {
    const QnnParams broadcast = result.model.params;
    std::vector<QnnParams> locals(cfg.num_clients);
    std::vector<std::string> failures(cfg.num_clients);
    parallel_for(static_cast<std::size_t>(cfg.num_clients), cfg.threads,
                 [&](std::size_t k) {
                   try {
                     locals[k] = is_adv[k]
                                     ? local_train_adv(qnn, data[k], broadcast,
                                                       cfg, opt, attack, round)
                                     : local_train_clean(qnn, data[k], broadcast,
                                                         cfg, opt, round);
                   } catch (const std::exception& e) {
                     failures[k] = e.what();
                   }
                 });
    for (int k = 0; k < cfg.num_clients; ++k) {
      if (!failures[k].empty()) {
        throw std::runtime_error("round " + std::to_string(round) +
                                 " aborted: client " + std::to_string(k) +
                                 " failed: " + failures[k]);
      }
    }
    std::vector<std::pair<QnnParams, std::size_t>> updates;
    updates.reserve(cfg.num_clients);
    for (int k = 0; k < cfg.num_clients; ++k) {
      updates.emplace_back(std::move(locals[k]), data[k].samples.size());
    }
    result.model.params = fedavg(updates);
    result.model.round = round;
    record_eval(round);
  }
  return result;
}

namespace {

std::string format_double(double v) {
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

std::string expect_key(std::istream& in, const std::string& key,
                       const std::string& path) {
  std::string line;
  if (!std::getline(in, line)) {
    throw FormatError(path + ": checkpoint truncated before " + key);
  }
  const std::string prefix = key + "=";
  if (line.rfind(prefix, 0) != 0) {
    throw FormatError(path + ": expected '" + prefix + "...', got '" + line +
                      "'");
  }
  return line.substr(prefix.size());
}

}  // namespace

void save_checkpoint(const GlobalModel& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw IoError("cannot open " + path + " for writing");
  }
  out << "qfal-checkpoint v1\n";
  out << "qubits=" << model.prov.qubits << "\n";
  out << "layers=" << model.prov.layers << "\n";
  out << "classes=" << kNumClasses << "\n";
  out << "round=" << model.round << "\n";
  out << "coverage=" << format_double(model.prov.coverage) << "\n";
  out << "seed=" << model.prov.seed << "\n";
  out << "\n";
  char buf[64];
  for (const double a : model.params.angles) {
    std::snprintf(buf, sizeof(buf), "%.17g", a);
    out << buf << "\n";
  }
  if (!out) {
    throw IoError("short write to " + path);
  }
}

GlobalModel load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open " + path);
  }
  std::string line;
  if (!std::getline(in, line) || line != "qfal-checkpoint v1") {
    throw FormatError(path + ": bad checkpoint magic");
  }
  GlobalModel model;
  try {
    model.prov.qubits = std::stoi(expect_key(in, "qubits", path));
    model.prov.layers = std::stoi(expect_key(in, "layers", path));
    const int classes = std::stoi(expect_key(in, "classes", path));
    if (classes != kNumClasses) {
      throw FormatError(path + ": unsupported class count " +
                        std::to_string(classes));
    }
    model.round = std::stoi(expect_key(in, "round", path));
    model.prov.coverage = std::stod(expect_key(in, "coverage", path));
    model.prov.seed = std::stoull(expect_key(in, "seed", path));
  } catch (const FormatError&) {
    throw;
  } catch (const std::exception&) {
    throw FormatError(path + ": unparsable header value");
  }
  if (!std::getline(in, line) || !line.empty()) {
    throw FormatError(path + ": missing blank line after header");
  }
  model.params.layers = model.prov.layers;
  model.params.wires = model.prov.qubits;
  const std::size_t expected = static_cast<std::size_t>(model.prov.layers) *
                               model.prov.qubits * 3;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    try {
      model.params.angles.push_back(std::stod(line));
    } catch (const std::exception&) {
      throw FormatError(path + ": unparsable angle '" + line + "'");
    }
  }
  if (model.params.angles.size() != expected) {
    throw FormatError(path + ": header declares " + std::to_string(expected) +
                      " angles, file has " +
                      std::to_string(model.params.angles.size()));
  }
  return model;
}

}  // namespace qfal
