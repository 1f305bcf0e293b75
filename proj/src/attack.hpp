#pragma once

#include <span>
#include <vector>

#include "dataset.hpp"
#include "model.hpp"

namespace qfal {

struct AttackConfig {
  double epsilon = 0.1;    // L-inf radius in pixel units
  double alpha = 0.01;     // step size per iteration
  int iterations = 10;
  double clamp_lo = 0.0;
  double clamp_hi = 1.0;
};

struct AdvSample {
  Sample original;
  std::array<double, kSamplePixels> perturbed;
  double epsilon_used = 0.0;
};

// Signed-gradient ascent from the clean input (no random start), projected
// onto the L-inf ball around it and clamped to the pixel range after every
// step. Deterministic; epsilon = 0 returns the input unchanged.
AdvSample pgd_attack(const Qnn& qnn, const QnnParams& params,
                     const Sample& sample, const AttackConfig& cfg);

// White-box per-sample attacks against the supplied parameters; output
// order matches the input.
std::vector<AdvSample> attack_batch(const Qnn& qnn, const QnnParams& params,
                                    std::span<const Sample> batch,
                                    const AttackConfig& cfg, int threads = 1);

struct RobustnessRow {
  double epsilon = 0.0;
  double accuracy = 0.0;
  double mean_loss = 0.0;
};

// One row per grid entry: clean metrics at epsilon = 0, then PGD metrics
// with 10 iterations and step size epsilon/10. The grid must start at 0.
std::vector<RobustnessRow> evaluate_robustness(const Qnn& qnn,
                                               const QnnParams& params,
                                               std::span<const Sample> test,
                                               std::span<const double> eps_grid,
                                               int threads = 1);

}  // namespace qfal
