#include "statevector.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qfal {

Statevector::Statevector(int num_qubits) : n_(num_qubits) {
  if (num_qubits < 1 || num_qubits > 24) {
    throw std::invalid_argument("qubit count out of range: " +
                                std::to_string(num_qubits));
  }
  amp_.assign(std::size_t{1} << n_, cplx{0.0, 0.0});
  amp_[0] = cplx{1.0, 0.0};
}

double Statevector::norm_sq() const {
  double s = 0.0;
  for (const auto& a : amp_) s += std::norm(a);
  return s;
}

std::size_t Statevector::wire_mask(int wire) const {
  return std::size_t{1} << (n_ - 1 - wire);
}

void Statevector::check_wire(int wire) const {
  if (wire < 0 || wire >= n_) {
    throw std::invalid_argument("wire index " + std::to_string(wire) +
                                " out of range for " + std::to_string(n_) +
                                " qubits");
  }
}

void Statevector::apply_rz(int wire, double angle) {
  check_wire(wire);
  const cplx lo = std::polar(1.0, -angle / 2.0);
  const cplx hi = std::polar(1.0, angle / 2.0);
  const std::size_t mask = wire_mask(wire);
  for (std::size_t i = 0; i < amp_.size(); ++i) {
    amp_[i] *= (i & mask) ? hi : lo;
  }
}

void Statevector::apply_ry(int wire, double angle) {
  check_wire(wire);
  const double c = std::cos(angle / 2.0);
  const double s = std::sin(angle / 2.0);
  const std::size_t mask = wire_mask(wire);
  for (std::size_t i = 0; i < amp_.size(); ++i) {
    if (i & mask) continue;
    const cplx a0 = amp_[i];
    const cplx a1 = amp_[i | mask];
    amp_[i] = c * a0 - s * a1;
    amp_[i | mask] = s * a0 + c * a1;
  }
}

void Statevector::apply_cnot(int control, int target) {
  check_wire(control);
  check_wire(target);
  if (control == target) {
    throw std::invalid_argument("cnot control and target must differ");
  }
  const std::size_t cmask = wire_mask(control);
  const std::size_t tmask = wire_mask(target);
  for (std::size_t i = 0; i < amp_.size(); ++i) {
    if ((i & cmask) && !(i & tmask)) {
      std::swap(amp_[i], amp_[i | tmask]);
    }
  }
}

void Statevector::apply(const GateSpec& gate) {
  switch (gate.kind) {
    case GateKind::RZ: apply_rz(gate.wire, gate.angle); break;
    case GateKind::RY: apply_ry(gate.wire, gate.angle); break;
    case GateKind::CNOT: apply_cnot(gate.control, gate.wire); break;
  }
}

void Statevector::apply_inverse(const GateSpec& gate) {
  switch (gate.kind) {
    case GateKind::RZ: apply_rz(gate.wire, -gate.angle); break;
    case GateKind::RY: apply_ry(gate.wire, -gate.angle); break;
    case GateKind::CNOT: apply_cnot(gate.control, gate.wire); break;
  }
}

double Statevector::pauli_z_expectation(int wire) const {
  check_wire(wire);
  const std::size_t mask = wire_mask(wire);
  double z = 0.0;
  for (std::size_t i = 0; i < amp_.size(); ++i) {
    const double p = std::norm(amp_[i]);
    z += (i & mask) ? -p : p;
  }
  return z;
}

std::vector<double> Statevector::pauli_z_expectations(
    std::span<const int> wires) const {
  std::vector<double> out;
  out.reserve(wires.size());
  for (const int w : wires) out.push_back(pauli_z_expectation(w));
  return out;
}

EncodeResult amplitude_encode(std::span<const double> values) {
  const std::size_t d = values.size();
  if (d < 2 || (d & (d - 1)) != 0) {
    throw std::invalid_argument("amplitude encoding needs a power-of-two length, got " +
                                std::to_string(d));
  }
  int n = 0;
  while ((std::size_t{1} << n) < d) ++n;

  double norm_sq = 0.0;
  for (const double v : values) norm_sq += v * v;

  EncodeResult result{Statevector(n), false};
  auto amps = result.state.amplitudes();
  if (norm_sq == 0.0) {
    const double u = 1.0 / std::sqrt(static_cast<double>(d));
    for (std::size_t i = 0; i < d; ++i) amps[i] = cplx{u, 0.0};
    result.zero_fallback = true;
    return result;
  }
  const double inv = 1.0 / std::sqrt(norm_sq);
  for (std::size_t i = 0; i < d; ++i) amps[i] = cplx{values[i] * inv, 0.0};
  return result;
}

}  // namespace qfal
