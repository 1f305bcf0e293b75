#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace qfal {

using cplx = std::complex<double>;

enum class GateKind { RZ, RY, CNOT };

// Rotations follow the half-angle convention RY(t) = exp(-i t Y / 2),
// RZ(t) = exp(-i t Z / 2), so the parameter-shift rule holds with +-pi/2.
struct GateSpec {
  GateKind kind;
  double angle = 0.0;   // rotations only
  int wire = 0;         // rotation target / CNOT target
  int control = -1;     // CNOT only
};

// Dense n-qubit state. Basis convention: wire 0 is the MOST significant bit
// of the amplitude index, so |q0 q1 ... q_{n-1}> maps to the integer whose
// binary expansion reads q0 first.
class Statevector {
 public:
  explicit Statevector(int num_qubits);

  int num_qubits() const { return n_; }
  std::size_t size() const { return amp_.size(); }
  std::span<const cplx> amplitudes() const { return amp_; }
  std::span<cplx> amplitudes() { return amp_; }
  double norm_sq() const;

  void apply_rz(int wire, double angle);
  void apply_ry(int wire, double angle);
  void apply_cnot(int control, int target);
  void apply(const GateSpec& gate);
  void apply_inverse(const GateSpec& gate);

  double pauli_z_expectation(int wire) const;
  std::vector<double> pauli_z_expectations(std::span<const int> wires) const;

  // index mask selecting the given wire's bit
  std::size_t wire_mask(int wire) const;

 private:
  void check_wire(int wire) const;

  int n_;
  std::vector<cplx> amp_;
};

struct EncodeResult {
  Statevector state;
  bool zero_fallback = false;  // all-zero input replaced by the uniform state
};

// Embeds a real vector (length a power of two) as normalized amplitudes.
// An all-zero input falls back to the uniform superposition and is flagged.
EncodeResult amplitude_encode(std::span<const double> values);

}  // namespace qfal
