#include "oracles.hpp"

#include <cmath>

namespace oracle {

Mat Mat::identity(std::size_t size) {
  Mat m(size);
  for (std::size_t i = 0; i < size; ++i) m.at(i, i) = 1.0;
  return m;
}

Mat kron(const Mat& x, const Mat& y) {
  Mat out(x.n * y.n);
  for (std::size_t xr = 0; xr < x.n; ++xr) {
    for (std::size_t xc = 0; xc < x.n; ++xc) {
      for (std::size_t yr = 0; yr < y.n; ++yr) {
        for (std::size_t yc = 0; yc < y.n; ++yc) {
          out.at(xr * y.n + yr, xc * y.n + yc) = x.at(xr, xc) * y.at(yr, yc);
        }
      }
    }
  }
  return out;
}

Mat matmul(const Mat& x, const Mat& y) {
  Mat out(x.n);
  for (std::size_t r = 0; r < x.n; ++r) {
    for (std::size_t c = 0; c < x.n; ++c) {
      cplx acc{0, 0};
      for (std::size_t k = 0; k < x.n; ++k) acc += x.at(r, k) * y.at(k, c);
      out.at(r, c) = acc;
    }
  }
  return out;
}

std::vector<cplx> apply(const Mat& m, const std::vector<cplx>& v) {
  std::vector<cplx> out(m.n, cplx{0, 0});
  for (std::size_t r = 0; r < m.n; ++r) {
    for (std::size_t c = 0; c < m.n; ++c) out[r] += m.at(r, c) * v[c];
  }
  return out;
}

Mat rz2(double angle) {
  Mat m(2);
  m.at(0, 0) = std::polar(1.0, -angle / 2.0);
  m.at(1, 1) = std::polar(1.0, angle / 2.0);
  return m;
}

Mat ry2(double angle) {
  Mat m(2);
  const double c = std::cos(angle / 2.0);
  const double s = std::sin(angle / 2.0);
  m.at(0, 0) = c;
  m.at(0, 1) = -s;
  m.at(1, 0) = s;
  m.at(1, 1) = c;
  return m;
}

Mat single_qubit_on(const Mat& gate, int wire, int num_qubits) {
  Mat out = Mat::identity(1);
  for (int w = 0; w < num_qubits; ++w) {
    out = kron(out, w == wire ? gate : Mat::identity(2));
  }
  return out;
}

Mat cnot_on(int control, int target, int num_qubits) {
  const std::size_t dim = std::size_t{1} << num_qubits;
  const std::size_t cmask = std::size_t{1} << (num_qubits - 1 - control);
  const std::size_t tmask = std::size_t{1} << (num_qubits - 1 - target);
  Mat m(dim);
  for (std::size_t j = 0; j < dim; ++j) {
    const std::size_t i = (j & cmask) ? (j ^ tmask) : j;
    m.at(i, j) = 1.0;
  }
  return m;
}

Mat circuit_matrix(const std::vector<qfal::GateSpec>& gates, int num_qubits) {
  Mat total = Mat::identity(std::size_t{1} << num_qubits);
  for (const auto& g : gates) {
    Mat u(1);
    switch (g.kind) {
      case qfal::GateKind::RZ:
        u = single_qubit_on(rz2(g.angle), g.wire, num_qubits);
        break;
      case qfal::GateKind::RY:
        u = single_qubit_on(ry2(g.angle), g.wire, num_qubits);
        break;
      case qfal::GateKind::CNOT:
        u = cnot_on(g.control, g.wire, num_qubits);
        break;
    }
    total = matmul(u, total);
  }
  return total;
}

std::vector<double> central_diff(
    const std::function<double(const std::vector<double>&)>& f,
    std::vector<double> x, double h) {
  std::vector<double> grad(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double orig = x[i];
    x[i] = orig + h;
    const double fp = f(x);
    x[i] = orig - h;
    const double fm = f(x);
    x[i] = orig;
    grad[i] = (fp - fm) / (2.0 * h);
  }
  return grad;
}

}  // namespace oracle
