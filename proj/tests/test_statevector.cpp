#include "doctest.h"

#include <cmath>

#include "circuit.hpp"
#include "oracles.hpp"
#include "rng.hpp"
#include "statevector.hpp"

using namespace qfal;

namespace {

constexpr double kPi = 3.14159265358979323846;

std::vector<GateSpec> random_gates(Rng& rng, int num_qubits, int count) {
  std::vector<GateSpec> gates;
  gates.reserve(count);
  for (int i = 0; i < count; ++i) {
    const int kind = static_cast<int>(rng.bounded(num_qubits > 1 ? 3 : 2));
    const int wire = static_cast<int>(rng.bounded(num_qubits));
    if (kind == 0) {
      gates.push_back({GateKind::RZ, rng.uniform(-kPi, kPi), wire, -1});
    } else if (kind == 1) {
      gates.push_back({GateKind::RY, rng.uniform(-kPi, kPi), wire, -1});
    } else {
      int control = static_cast<int>(rng.bounded(num_qubits));
      while (control == wire) control = static_cast<int>(rng.bounded(num_qubits));
      gates.push_back({GateKind::CNOT, 0.0, wire, control});
    }
  }
  return gates;
}

Statevector random_state(Rng& rng, int num_qubits, int depth = 12) {
  Statevector state(num_qubits);
  for (const auto& g : random_gates(rng, num_qubits, depth)) state.apply(g);
  return state;
}

}  // namespace

TEST_CASE("basis ordering: wire 0 is the most significant bit") {
  Statevector state(3);
  state.apply_ry(0, kPi);  // |000> -> |100>
  CHECK(state.amplitudes()[0b100].real() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(state.amplitudes()[0b001]) < 1e-15);
}

TEST_CASE("RY(pi) maps |0> to |1> with amplitude +1") {
  Statevector state(1);
  state.apply_ry(0, kPi);
  CHECK(std::abs(state.amplitudes()[1] - cplx{1.0, 0.0}) < 1e-15);
}

TEST_CASE("CNOT truth table: control 0 flips target 1 on |10>") {
  Statevector state(2);
  state.apply_ry(0, kPi);  // |10>
  state.apply_cnot(0, 1);
  CHECK(std::abs(state.amplitudes()[0b11]) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("RZ leaves a Z eigenstate's probability untouched") {
  Statevector state(1);
  state.apply_rz(0, 1.2345);
  CHECK(std::norm(state.amplitudes()[0]) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("wire bounds are enforced") {
  Statevector state(2);
  CHECK_THROWS_AS(state.apply_ry(2, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(state.apply_cnot(0, 5), std::invalid_argument);
  CHECK_THROWS_AS(state.apply_cnot(1, 1), std::invalid_argument);
  CHECK_THROWS_AS(state.pauli_z_expectation(-1), std::invalid_argument);
}

TEST_CASE("amplitude encoding") {
  SUBCASE("one-hot input is the first basis state") {
    std::vector<double> pixels(64, 0.0);
    pixels[0] = 1.0;
    const auto enc = amplitude_encode(pixels);
    CHECK(!enc.zero_fallback);
    CHECK(std::abs(enc.state.amplitudes()[0] - cplx{1.0, 0.0}) < 1e-15);
  }
  SUBCASE("constant input gives uniform amplitudes 1/8") {
    const std::vector<double> pixels(64, 1.0);
    const auto enc = amplitude_encode(pixels);
    for (const auto& a : enc.state.amplitudes()) {
      CHECK(a.real() == doctest::Approx(0.125).epsilon(1e-12));
    }
  }
  SUBCASE("3-4-5 normalization") {
    std::vector<double> pixels(64, 0.0);
    pixels[0] = 3.0;
    pixels[1] = 4.0;
    const auto enc = amplitude_encode(pixels);
    CHECK(enc.state.amplitudes()[0].real() == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(enc.state.amplitudes()[1].real() == doctest::Approx(0.8).epsilon(1e-15));
  }
  SUBCASE("all-zero input falls back to the uniform state, flagged") {
    const std::vector<double> pixels(64, 0.0);
    const auto enc = amplitude_encode(pixels);
    CHECK(enc.zero_fallback);
    for (const auto& a : enc.state.amplitudes()) {
      CHECK(a.real() == doctest::Approx(0.125).epsilon(1e-12));
    }
    CHECK(enc.state.norm_sq() == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("non-power-of-two length is rejected") {
    const std::vector<double> pixels(63, 1.0);
    CHECK_THROWS_AS(amplitude_encode(pixels), std::invalid_argument);
  }
}

TEST_CASE("pauli z expectations") {
  SUBCASE("|000000> reads +1 on every wire") {
    Statevector state(6);
    const int wires[] = {0, 1, 2};
    const auto z = state.pauli_z_expectations(wires);
    for (const double v : z) CHECK(v == doctest::Approx(1.0).epsilon(1e-15));
  }
  SUBCASE("the uniform state reads 0") {
    const std::vector<double> pixels(64, 1.0);
    auto enc = amplitude_encode(pixels);
    const int wires[] = {0, 1, 2};
    for (const double v : enc.state.pauli_z_expectations(wires)) {
      CHECK(std::abs(v) < 1e-14);
    }
  }
  SUBCASE("RY(pi/2) gives <Z> = cos(pi/2) = 0") {
    Statevector state(1);
    state.apply_ry(0, kPi / 2.0);
    CHECK(std::abs(state.pauli_z_expectation(0)) < 1e-15);
  }
  SUBCASE("expectations stay in [-1, 1] on random states") {
    Rng rng(7);
    for (int trial = 0; trial < 20; ++trial) {
      const Statevector state = random_state(rng, 4, 20);
      for (int w = 0; w < 4; ++w) {
        const double z = state.pauli_z_expectation(w);
        CHECK(z >= -1.0 - 1e-12);
        CHECK(z <= 1.0 + 1e-12);
      }
    }
  }
}

TEST_CASE("norm is preserved through random gate sequences") {
  Rng rng(11);
  Statevector state(5);
  for (const auto& g : random_gates(rng, 5, 300)) {
    state.apply(g);
  }
  CHECK(std::abs(state.norm_sq() - 1.0) < 1e-10);
}

TEST_CASE("gate application matches the dense-matrix oracle on <=3 qubits") {
  Rng rng(23);
  for (int num_qubits = 1; num_qubits <= 3; ++num_qubits) {
    for (int trial = 0; trial < 10; ++trial) {
      const auto gates = random_gates(rng, num_qubits, 15);
      Statevector state(num_qubits);
      for (const auto& g : gates) state.apply(g);

      const auto u = oracle::circuit_matrix(gates, num_qubits);
      std::vector<cplx> expected(std::size_t{1} << num_qubits, cplx{0, 0});
      expected[0] = 1.0;
      expected = oracle::apply(u, expected);

      for (std::size_t i = 0; i < expected.size(); ++i) {
        CHECK(std::abs(state.amplitudes()[i] - expected[i]) < 1e-12);
      }
    }
  }
}

TEST_CASE("RZ(a) RZ(b) composes to RZ(a+b)") {
  Rng rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    const double a = rng.uniform(-kPi, kPi);
    const double b = rng.uniform(-kPi, kPi);
    Statevector lhs = random_state(rng, 3);
    Statevector rhs = lhs;
    lhs.apply_rz(1, a);
    lhs.apply_rz(1, b);
    rhs.apply_rz(1, a + b);
    for (std::size_t i = 0; i < lhs.size(); ++i) {
      CHECK(std::abs(lhs.amplitudes()[i] - rhs.amplitudes()[i]) < 1e-12);
    }
  }
}

TEST_CASE("strongly entangling block") {
  const LayerTemplate tmpl{2, 6};

  SUBCASE("ring offsets follow (layer mod (wires-1)) + 1") {
    CHECK(tmpl.range(0) == 1);
    CHECK(tmpl.range(1) == 2);
    CHECK(LayerTemplate{6, 6}.range(5) == 1);
  }

  SUBCASE("zero angles fix |000000>") {
    Statevector state(6);
    apply_strongly_entangling(state, QnnParams::zeros(tmpl), tmpl);
    CHECK(std::abs(state.amplitudes()[0] - cplx{1.0, 0.0}) < 1e-12);
  }

  SUBCASE("one zero-angle layer on |100000> matches the dense oracle") {
    const LayerTemplate one{1, 6};
    Statevector state(6);
    state.apply_ry(0, kPi);  // |100000>
    std::vector<cplx> input(state.amplitudes().begin(),
                            state.amplitudes().end());
    const auto circuit = entangling_circuit(QnnParams::zeros(one), one);
    apply_strongly_entangling(state, QnnParams::zeros(one), one);

    const auto u = oracle::circuit_matrix(circuit.gates, 6);
    const auto expected = oracle::apply(u, input);
    for (std::size_t i = 0; i < expected.size(); ++i) {
      CHECK(std::abs(state.amplitudes()[i] - expected[i]) < 1e-12);
    }
  }

  SUBCASE("random angles preserve the norm") {
    Rng rng(5);
    QnnParams params = QnnParams::zeros(tmpl);
    for (auto& a : params.angles) a = rng.uniform(0.0, 2.0 * kPi);
    std::vector<double> pixels(64);
    for (auto& p : pixels) p = rng.uniform();
    auto enc = amplitude_encode(pixels);
    apply_strongly_entangling(enc.state, params, tmpl);
    CHECK(std::abs(enc.state.norm_sq() - 1.0) < 1e-10);
  }

  SUBCASE("shape mismatch is rejected") {
    Statevector state(6);
    QnnParams wrong = QnnParams::zeros(LayerTemplate{1, 6});
    CHECK_THROWS_AS(apply_strongly_entangling(state, wrong, tmpl),
                    std::invalid_argument);
  }
}
