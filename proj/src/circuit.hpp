#pragma once

#include <cstdint>
#include <vector>

#include "statevector.hpp"

namespace qfal {

// Strongly entangling block layout: per layer, every wire gets a 3-angle
// rotation Rot(a,b,c) = RZ(a) RY(b) RZ(c), then a CNOT ring at a
// layer-dependent offset r = (layer mod (wires-1)) + 1.
struct LayerTemplate {
  int num_layers = 2;
  int num_wires = 6;

  int range(int layer) const { return (layer % (num_wires - 1)) + 1; }
  int angle_count() const { return num_layers * num_wires * 3; }
};

// Trainable rotation angles, shape layers x wires x 3 (radians).
struct QnnParams {
  int layers = 0;
  int wires = 0;
  std::vector<double> angles;

  static QnnParams zeros(const LayerTemplate& tmpl);

  double& at(int layer, int wire, int k) {
    return angles[(static_cast<std::size_t>(layer) * wires + wire) * 3 + k];
  }
  double at(int layer, int wire, int k) const {
    return angles[(static_cast<std::size_t>(layer) * wires + wire) * 3 + k];
  }
  std::size_t size() const { return angles.size(); }
  bool shape_matches(const LayerTemplate& tmpl) const {
    return layers == tmpl.num_layers && wires == tmpl.num_wires &&
           angles.size() == static_cast<std::size_t>(tmpl.angle_count());
  }
};

// Flattens (params, template) into the gate sequence. Gate i's angle, when
// parameterized, reads angles[param_index(i)]; CNOTs map to -1.
struct Circuit {
  std::vector<GateSpec> gates;
  std::vector<int> param_index;
};

Circuit entangling_circuit(const QnnParams& params, const LayerTemplate& tmpl);

// Applies the full block in place. Throws std::invalid_argument on a
// params/template shape mismatch.
void apply_strongly_entangling(Statevector& state, const QnnParams& params,
                               const LayerTemplate& tmpl);

}  // namespace qfal
