#pragma once

// Test-only oracles, kept independent of the library's gate kernels: dense
// unitaries assembled from Kronecker products and explicit basis
// permutations, plus central finite differences. Wire 0 is the most
// significant bit of the basis index, matching the library convention.

#include <complex>
#include <functional>
#include <vector>

#include "circuit.hpp"

namespace oracle {

using cplx = std::complex<double>;

struct Mat {
  std::size_t n = 0;
  std::vector<cplx> a;  // row-major n x n

  explicit Mat(std::size_t size) : n(size), a(size * size, cplx{0, 0}) {}
  cplx& at(std::size_t r, std::size_t c) { return a[r * n + c]; }
  const cplx& at(std::size_t r, std::size_t c) const { return a[r * n + c]; }

  static Mat identity(std::size_t size);
};

Mat kron(const Mat& x, const Mat& y);
Mat matmul(const Mat& x, const Mat& y);
std::vector<cplx> apply(const Mat& m, const std::vector<cplx>& v);

Mat rz2(double angle);  // exp(-i angle Z / 2)
Mat ry2(double angle);  // exp(-i angle Y / 2)

// Embeds a single-qubit gate at `wire` of an n-qubit register.
Mat single_qubit_on(const Mat& gate, int wire, int num_qubits);

// CNOT as an explicit basis permutation.
Mat cnot_on(int control, int target, int num_qubits);

// Dense unitary of an interpreted gate list (applied left to right).
Mat circuit_matrix(const std::vector<qfal::GateSpec>& gates, int num_qubits);

// Central finite differences of f at x.
std::vector<double> central_diff(
    const std::function<double(const std::vector<double>&)>& f,
    std::vector<double> x, double h);

}  // namespace oracle
