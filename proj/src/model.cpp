#include "model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "parallel.hpp"
#include "rng.hpp"

namespace qfal {

namespace {

constexpr double kLogClamp = 1e-12;
constexpr double kHalfPi = 1.5707963267948966;

std::array<double, kNumClasses> loss_grad_wrt_logits(
    const std::array<double, kNumClasses>& probs, int label) {
  // d(-log p_label)/d z = p - onehot(label); the log clamp cannot bind
  // here because |<Z>| <= 1 keeps every softmax output above e^-2 / 3.
  std::array<double, kNumClasses> g = probs;
  g[label] -= 1.0;
  return g;
}

double sample_loss(const Prediction& pred, int label) {
  return -std::log(std::max(pred.probabilities[label], kLogClamp));
}

}  // namespace

std::array<double, kNumClasses> softmax(
    const std::array<double, kNumClasses>& logits) {
  const double zmax = *std::max_element(logits.begin(), logits.end());
  std::array<double, kNumClasses> p;
  double sum = 0.0;
  for (int i = 0; i < kNumClasses; ++i) {
    p[i] = std::exp(logits[i] - zmax);
    sum += p[i];
  }
  for (auto& v : p) v /= sum;
  return p;
}

Qnn::Qnn(LayerTemplate tmpl) : tmpl_(tmpl), readout_{0, 1, 2} {
  if (tmpl_.num_wires < kNumClasses) {
    throw std::invalid_argument("need at least 3 wires for 3-class readout");
  }
}

QnnParams Qnn::init_params(std::uint64_t seed) const {
  QnnParams p = QnnParams::zeros(tmpl_);
  Rng rng(seed);
  const double two_pi = 6.283185307179586476925286766559;
  for (auto& a : p.angles) a = rng.uniform(0.0, two_pi);
  return p;
}

Prediction Qnn::forward(const QnnParams& params,
                        std::span<const double, kSamplePixels> pixels) const {
  EncodeResult enc = amplitude_encode(pixels);
  apply_strongly_entangling(enc.state, params, tmpl_);
  Prediction pred;
  pred.encode_fallback = enc.zero_fallback;
  for (int i = 0; i < kNumClasses; ++i) {
    pred.expectations[i] = enc.state.pauli_z_expectation(readout_[i]);
  }
  pred.probabilities = softmax(pred.expectations);
  pred.predicted_class = static_cast<int>(
      std::max_element(pred.probabilities.begin(), pred.probabilities.end()) -
      pred.probabilities.begin());
  return pred;
}

double Qnn::loss(const QnnParams& params, std::span<const Sample> batch) const {
  if (batch.empty()) {
    throw std::invalid_argument("loss over an empty batch");
  }
  double total = 0.0;
  for (const auto& s : batch) {
    total += sample_loss(forward(params, s.pixels), s.label);
  }
  return total / static_cast<double>(batch.size());
}

std::vector<double> Qnn::grad_params_shift(const QnnParams& params,
                                           std::span<const Sample> batch) const {
  if (batch.empty()) {
    throw std::invalid_argument("gradient over an empty batch");
  }
  std::vector<double> grads(params.size(), 0.0);
  QnnParams shifted = params;
  for (const auto& s : batch) {
    const Prediction pred = forward(params, s.pixels);
    const auto dl_dz = loss_grad_wrt_logits(pred.probabilities, s.label);
    for (std::size_t j = 0; j < params.size(); ++j) {
      const double original = shifted.angles[j];
      shifted.angles[j] = original + kHalfPi;
      const Prediction plus = forward(shifted, s.pixels);
      shifted.angles[j] = original - kHalfPi;
      const Prediction minus = forward(shifted, s.pixels);
      shifted.angles[j] = original;
      double g = 0.0;
      for (int w = 0; w < kNumClasses; ++w) {
        const double dz = (plus.expectations[w] - minus.expectations[w]) / 2.0;
        g += dl_dz[w] * dz;
      }
      grads[j] += g;
    }
  }
  for (auto& g : grads) g /= static_cast<double>(batch.size());
  return grads;
}

namespace {

// <bra| Z_w |ket>
cplx z_matrix_element(const Statevector& bra, const Statevector& ket, int wire) {
  const auto b = bra.amplitudes();
  const auto k = ket.amplitudes();
  const std::size_t mask = ket.wire_mask(wire);
  cplx acc{0.0, 0.0};
  for (std::size_t i = 0; i < k.size(); ++i) {
    const cplx term = std::conj(b[i]) * k[i];
    acc += (i & mask) ? -term : term;
  }
  return acc;
}

// <bra| Y_w |ket>, with Y|0> = i|1>, Y|1> = -i|0>
cplx y_matrix_element(const Statevector& bra, const Statevector& ket, int wire) {
  const auto b = bra.amplitudes();
  const auto k = ket.amplitudes();
  const std::size_t mask = ket.wire_mask(wire);
  const cplx i_unit{0.0, 1.0};
  cplx acc{0.0, 0.0};
  for (std::size_t i0 = 0; i0 < k.size(); ++i0) {
    if (i0 & mask) continue;
    const std::size_t i1 = i0 | mask;
    acc += std::conj(b[i0]) * (-i_unit * k[i1]);
    acc += std::conj(b[i1]) * (i_unit * k[i0]);
  }
  return acc;
}

struct AdjointResult {
  std::vector<double> angle_grads;       // dL/d(angles)
  std::vector<double> amplitude_grads;   // dL/d(encoded real amplitudes)
};

// One reverse sweep computing dL/dtheta for every rotation and dL/d(input
// amplitudes). For E = <psi|Lam|psi> with gate k = exp(-i theta G/2):
// dE/dtheta_k = Im(<b_k| G |psi_k>), where psi_k is the state after gate k
// and b_k is Lam psi back-propagated through the later gates. After the
// sweep the bra vector equals U^dag Lam psi, whose real part (doubled) is
// the gradient with respect to the real input amplitudes.
AdjointResult adjoint_sweep(const Circuit& circuit, Statevector state,
                            std::span<const double> obs_weights,
                            std::span<const int> obs_wires,
                            std::size_t num_angles) {
  for (const auto& g : circuit.gates) state.apply(g);

  Statevector bra = state;
  {
    auto b = bra.amplitudes();
    for (std::size_t i = 0; i < b.size(); ++i) {
      double weight = 0.0;
      for (std::size_t w = 0; w < obs_wires.size(); ++w) {
        const std::size_t mask = state.wire_mask(obs_wires[w]);
        weight += (i & mask) ? -obs_weights[w] : obs_weights[w];
      }
      b[i] *= weight;
    }
  }

  AdjointResult result;
  result.angle_grads.assign(num_angles, 0.0);
  for (std::size_t k = circuit.gates.size(); k-- > 0;) {
    const GateSpec& g = circuit.gates[k];
    const int pidx = circuit.param_index[k];
    if (pidx >= 0) {
      const cplx elem = (g.kind == GateKind::RZ)
                            ? z_matrix_element(bra, state, g.wire)
                            : y_matrix_element(bra, state, g.wire);
      result.angle_grads[pidx] += elem.imag();
    }
    state.apply_inverse(g);
    bra.apply_inverse(g);
  }

  const auto b = bra.amplitudes();
  result.amplitude_grads.resize(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) {
    result.amplitude_grads[i] = 2.0 * b[i].real();
  }
  return result;
}

}  // namespace

std::vector<double> Qnn::grad_params_adjoint(const QnnParams& params,
                                             std::span<const Sample> batch) const {
  if (batch.empty()) {
    throw std::invalid_argument("gradient over an empty batch");
  }
  const Circuit circuit = entangling_circuit(params, tmpl_);
  std::vector<double> grads(params.size(), 0.0);
  for (const auto& s : batch) {
    const Prediction pred = forward(params, s.pixels);
    const auto dl_dz = loss_grad_wrt_logits(pred.probabilities, s.label);
    EncodeResult enc = amplitude_encode(s.pixels);
    const auto sweep =
        adjoint_sweep(circuit, std::move(enc.state),
                      std::span<const double>(dl_dz.data(), dl_dz.size()),
                      readout_wires(), params.size());
    for (std::size_t j = 0; j < grads.size(); ++j) {
      grads[j] += sweep.angle_grads[j];
    }
  }
  for (auto& g : grads) g /= static_cast<double>(batch.size());
  return grads;
}

std::array<double, kSamplePixels> Qnn::grad_input(
    const QnnParams& params, std::span<const double, kSamplePixels> pixels,
    int label, bool* fallback) const {
  std::array<double, kSamplePixels> grad{};
  double norm_sq = 0.0;
  for (const double v : pixels) norm_sq += v * v;
  if (norm_sq == 0.0) {
    if (fallback) *fallback = true;
    return grad;  // uniform-state fallback: gradient defined as zero
  }
  if (fallback) *fallback = false;

  const Prediction pred = forward(params, pixels);
  const auto dl_dz = loss_grad_wrt_logits(pred.probabilities, label);
  const Circuit circuit = entangling_circuit(params, tmpl_);
  EncodeResult enc = amplitude_encode(pixels);
  const auto sweep =
      adjoint_sweep(circuit, std::move(enc.state),
                    std::span<const double>(dl_dz.data(), dl_dz.size()),
                    readout_wires(), params.size());

  // chain rule through x_hat = x/|x|: dL/dx = (u - (u . x_hat) x_hat)/|x|
  const double norm = std::sqrt(norm_sq);
  double inner = 0.0;
  for (int i = 0; i < kSamplePixels; ++i) {
    inner += sweep.amplitude_grads[i] * pixels[i] / norm;
  }
  for (int i = 0; i < kSamplePixels; ++i) {
    grad[i] = (sweep.amplitude_grads[i] - inner * pixels[i] / norm) / norm;
  }
  return grad;
}

void adam_step(QnnParams& params, std::span<const double> grads,
               AdamState& state, const OptimizerConfig& cfg) {
  if (grads.size() != params.size() || state.m.size() != params.size()) {
    throw std::invalid_argument("adam: gradient/state shape mismatch");
  }
  for (const double g : grads) {
    if (!std::isfinite(g)) {
      throw std::runtime_error("adam: non-finite gradient encountered");
    }
  }
  state.t += 1;
  const double bias1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(state.t));
  const double bias2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(state.t));
  for (std::size_t i = 0; i < params.size(); ++i) {
    state.m[i] = cfg.beta1 * state.m[i] + (1.0 - cfg.beta1) * grads[i];
    state.v[i] = cfg.beta2 * state.v[i] + (1.0 - cfg.beta2) * grads[i] * grads[i];
    const double m_hat = state.m[i] / bias1;
    const double v_hat = state.v[i] / bias2;
    params.angles[i] -= cfg.eta * m_hat / (std::sqrt(v_hat) + cfg.eps_stability);
  }
}

EvalResult evaluate_clean(const Qnn& qnn, const QnnParams& params,
                          std::span<const Sample> test, int threads) {
  if (test.empty()) {
    throw std::invalid_argument("evaluation over an empty test set");
  }
  std::vector<double> losses(test.size());
  std::vector<char> correct(test.size());
  parallel_for(test.size(), threads, [&](std::size_t i) {
    const Prediction pred = qnn.forward(params, test[i].pixels);
    losses[i] = sample_loss(pred, test[i].label);
    correct[i] = pred.predicted_class == test[i].label ? 1 : 0;
  });
  EvalResult r;
  for (std::size_t i = 0; i < test.size(); ++i) {
    r.loss += losses[i];
    r.accuracy += correct[i];
  }
  r.loss /= static_cast<double>(test.size());
  r.accuracy /= static_cast<double>(test.size());
  return r;
}

}  // namespace qfal
