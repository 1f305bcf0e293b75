#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "circuit.hpp"
#include "dataset.hpp"
#include "statevector.hpp"

namespace qfal {

struct OptimizerConfig {
  double eta = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps_stability = 1e-8;
};

struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  long t = 0;

  explicit AdamState(std::size_t size) : m(size, 0.0), v(size, 0.0) {}
};

struct Prediction {
  std::array<double, kNumClasses> expectations;   // <Z> per readout wire
  std::array<double, kNumClasses> probabilities;  // softmax over expectations
  int predicted_class = 0;
  bool encode_fallback = false;
};

// The classifier: amplitude encoding, strongly entangling layers, Pauli-Z
// readout on wires {0,1,2}, softmax to class probabilities, cross-entropy
// loss. Gradients are exact; parameter-shift is the reference route, the
// adjoint sweep the fast one, and both must agree to 1e-8.
class Qnn {
 public:
  explicit Qnn(LayerTemplate tmpl = LayerTemplate{});

  const LayerTemplate& layout() const { return tmpl_; }
  std::span<const int> readout_wires() const { return readout_; }

  QnnParams init_params(std::uint64_t seed) const;

  Prediction forward(const QnnParams& params,
                     std::span<const double, kSamplePixels> pixels) const;

  // mean cross-entropy over the batch; log clamped at 1e-12
  double loss(const QnnParams& params, std::span<const Sample> batch) const;

  // d(mean loss)/d(angles), via two circuit evaluations per angle at
  // shifts of +-pi/2 and the softmax/cross-entropy chain rule.
  std::vector<double> grad_params_shift(const QnnParams& params,
                                        std::span<const Sample> batch) const;

  // Same quantity via one reverse sweep over the circuit.
  std::vector<double> grad_params_adjoint(const QnnParams& params,
                                          std::span<const Sample> batch) const;

  // d(per-sample loss)/d(raw pixels), differentiating through the L2
  // normalization inside the encoding. All-zero pixels yield a zero
  // gradient and set *fallback.
  std::array<double, kSamplePixels> grad_input(
      const QnnParams& params, std::span<const double, kSamplePixels> pixels,
      int label, bool* fallback = nullptr) const;

 private:
  LayerTemplate tmpl_;
  std::array<int, kNumClasses> readout_;
};

// One Adam update; increments state.t. Throws on non-finite gradients.
void adam_step(QnnParams& params, std::span<const double> grads,
               AdamState& state, const OptimizerConfig& cfg);

std::array<double, kNumClasses> softmax(
    const std::array<double, kNumClasses>& logits);

struct EvalResult {
  double loss = 0.0;
  double accuracy = 0.0;
};

// Clean loss/accuracy over a test set; per-sample work is parallelized and
// reduced in index order.
EvalResult evaluate_clean(const Qnn& qnn, const QnnParams& params,
                          std::span<const Sample> test, int threads = 1);

}  // namespace qfal
