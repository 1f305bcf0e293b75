#include "circuit.hpp"

#include <stdexcept>
#include <string>

namespace qfal {

QnnParams QnnParams::zeros(const LayerTemplate& tmpl) {
  QnnParams p;
  p.layers = tmpl.num_layers;
  p.wires = tmpl.num_wires;
  p.angles.assign(tmpl.angle_count(), 0.0);
  return p;
}

Circuit entangling_circuit(const QnnParams& params, const LayerTemplate& tmpl) {
  if (!params.shape_matches(tmpl)) {
    throw std::invalid_argument(
        "params shape " + std::to_string(params.layers) + "x" +
        std::to_string(params.wires) + "x3 does not match template " +
        std::to_string(tmpl.num_layers) + "x" + std::to_string(tmpl.num_wires) +
        "x3");
  }
  Circuit c;
  const int n = tmpl.num_wires;
  for (int l = 0; l < tmpl.num_layers; ++l) {
    for (int w = 0; w < n; ++w) {
      const int base = ((l * n) + w) * 3;
      // Rot(a,b,c) = RZ(a) RY(b) RZ(c): rightmost factor acts first.
      c.gates.push_back({GateKind::RZ, params.at(l, w, 2), w, -1});
      c.param_index.push_back(base + 2);
      c.gates.push_back({GateKind::RY, params.at(l, w, 1), w, -1});
      c.param_index.push_back(base + 1);
      c.gates.push_back({GateKind::RZ, params.at(l, w, 0), w, -1});
      c.param_index.push_back(base + 0);
    }
    if (n < 2) continue;  // no ring on a single wire
    const int r = tmpl.range(l);
    for (int w = 0; w < n; ++w) {
      c.gates.push_back({GateKind::CNOT, 0.0, (w + r) % n, w});
      c.param_index.push_back(-1);
    }
  }
  return c;
}

void apply_strongly_entangling(Statevector& state, const QnnParams& params,
                               const LayerTemplate& tmpl) {
  const Circuit c = entangling_circuit(params, tmpl);
  for (const auto& g : c.gates) state.apply(g);
}

}  // namespace qfal
