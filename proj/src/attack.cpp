#include "attack.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "parallel.hpp"

namespace qfal {

AdvSample pgd_attack(const Qnn& qnn, const QnnParams& params,
                     const Sample& sample, const AttackConfig& cfg) {
  if (cfg.epsilon < 0.0 || cfg.iterations < 1 ||
      (cfg.epsilon > 0.0 && cfg.alpha <= 0.0)) {
    throw std::invalid_argument("invalid attack configuration");
  }
  AdvSample adv;
  adv.original = sample;
  adv.perturbed = sample.pixels;
  adv.epsilon_used = cfg.epsilon;
  if (cfg.epsilon == 0.0) return adv;

  for (int it = 0; it < cfg.iterations; ++it) {
    const auto grad = qnn.grad_input(params, adv.perturbed, sample.label);
    for (int i = 0; i < kSamplePixels; ++i) {
      const double step = grad[i] > 0.0 ? 1.0 : (grad[i] < 0.0 ? -1.0 : 0.0);
      double x = adv.perturbed[i] + cfg.alpha * step;
      x = std::clamp(x, sample.pixels[i] - cfg.epsilon,
                     sample.pixels[i] + cfg.epsilon);
      adv.perturbed[i] = std::clamp(x, cfg.clamp_lo, cfg.clamp_hi);
    }
  }
  return adv;
}

std::vector<AdvSample> attack_batch(const Qnn& qnn, const QnnParams& params,
                                    std::span<const Sample> batch,
                                    const AttackConfig& cfg, int threads) {
  std::vector<AdvSample> out(batch.size());
  parallel_for(batch.size(), threads, [&](std::size_t i) {
    out[i] = pgd_attack(qnn, params, batch[i], cfg);
  });
  return out;
}

std::vector<RobustnessRow> evaluate_robustness(const Qnn& qnn,
                                               const QnnParams& params,
                                               std::span<const Sample> test,
                                               std::span<const double> eps_grid,
                                               int threads) {
  if (eps_grid.empty() || eps_grid[0] != 0.0) {
    throw std::invalid_argument("epsilon grid must start with 0");
  }
  std::vector<RobustnessRow> rows;
  rows.reserve(eps_grid.size());
  for (const double eps : eps_grid) {
    RobustnessRow row;
    row.epsilon = eps;
    if (eps == 0.0) {
      const EvalResult clean = evaluate_clean(qnn, params, test, threads);
      row.accuracy = clean.accuracy;
      row.mean_loss = clean.loss;
    } else {
      AttackConfig cfg;
      cfg.epsilon = eps;
      cfg.alpha = eps / 10.0;
      cfg.iterations = 10;
      std::vector<double> losses(test.size());
      std::vector<char> correct(test.size());
      parallel_for(test.size(), threads, [&](std::size_t i) {
        const AdvSample adv = pgd_attack(qnn, params, test[i], cfg);
        const Prediction pred = qnn.forward(params, adv.perturbed);
        losses[i] = -std::log(std::max(pred.probabilities[test[i].label], 1e-12));
        correct[i] = pred.predicted_class == test[i].label ? 1 : 0;
      });
      double loss = 0.0, acc = 0.0;
      for (std::size_t i = 0; i < test.size(); ++i) {
        loss += losses[i];
        acc += correct[i];
      }
      row.mean_loss = loss / static_cast<double>(test.size());
      row.accuracy = acc / static_cast<double>(test.size());
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace qfal
