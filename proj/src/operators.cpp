#include "fluxkit/operators.hpp"

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <stdexcept>

namespace fluxkit {

Operator::Operator(Mat m, std::vector<int> d) : mat(std::move(m)), dims(std::move(d)) {
  if (mat.rows() != mat.cols()) throw std::invalid_argument("Operator: matrix must be square");
  long prod = 1;
  for (int d_i : dims) {
    if (d_i < 1) throw std::invalid_argument("Operator: dims entries must be >= 1");
    prod *= d_i;
  }
  if (prod != mat.rows())
    throw std::invalid_argument("Operator: product of dims must equal matrix side length");
}

bool Operator::is_hermitian(double tol) const { return max_abs_diff(mat, mat.adjoint()) <= tol; }

double max_abs(const Mat& a) {
  if (a.size() == 0) return 0.0;
  return a.cwiseAbs().maxCoeff();
}

double max_abs_diff(const Mat& a, const Mat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("max_abs_diff: shape mismatch");
  return max_abs(a - b);
}

Mat pauli_i() { return Mat::Identity(2, 2); }

Mat pauli_x() {
  Mat m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

Mat pauli_y() {
  Mat m(2, 2);
  m << 0, cplx(0, -1), cplx(0, 1), 0;
  return m;
}

Mat pauli_z() {
  Mat m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

Mat sigma_plus() {
  Mat m = Mat::Zero(2, 2);
  m(1, 0) = 1;
  return m;
}

Mat sigma_minus() {
  Mat m = Mat::Zero(2, 2);
  m(0, 1) = 1;
  return m;
}

Mat kron(const Mat& a, const Mat& b) { return Eigen::kroneckerProduct(a, b); }

Operator kron(const Operator& a, const Operator& b) {
  std::vector<int> dims = a.dims;
  dims.insert(dims.end(), b.dims.begin(), b.dims.end());
  return Operator(kron(a.mat, b.mat), std::move(dims));
}

Operator embed(const Mat& op, int slot, const std::vector<int>& dims) {
  if (slot < 0 || slot >= static_cast<int>(dims.size()))
    throw std::invalid_argument("embed: slot out of range");
  if (op.rows() != op.cols() || op.rows() != dims[static_cast<size_t>(slot)])
    throw std::invalid_argument("embed: operator dimension does not match dims[slot]");
  Mat acc = Mat::Identity(1, 1);
  for (int i = 0; i < static_cast<int>(dims.size()); ++i) {
    if (i == slot)
      acc = kron(acc, op);
    else
      acc = kron(acc, Mat::Identity(dims[static_cast<size_t>(i)], dims[static_cast<size_t>(i)]));
  }
  return Operator(std::move(acc), dims);
}

BosonOps boson_ops(int dim) {
  if (dim < 2) throw std::invalid_argument("boson_ops: dim must be >= 2");
  BosonOps ops;
  ops.a = Mat::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) ops.a(n - 1, n) = std::sqrt(static_cast<double>(n));
  ops.adag = ops.a.adjoint();
  ops.n = ops.adag * ops.a;
  return ops;
}

Mat matrix_exp(const Mat& a, cplx scale) {
  if (!a.allFinite()) throw std::invalid_argument("matrix_exp: non-finite entries");
  Mat scaled = scale * a;
  return scaled.exp();
}

const Mat& pauli_basis(int idx) {
  static const Mat basis[4] = {pauli_i(), pauli_x(), pauli_y(), pauli_z()};
  if (idx < 0 || idx > 3) throw std::invalid_argument("pauli_basis: index must be 0..3");
  return basis[idx];
}

Mat PauliTable::reconstruct() const {
  Mat h = Mat::Zero(4, 4);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      if (c(a, b) == 0.0) continue;
      h += c(a, b) * kron(pauli_basis(a), pauli_basis(b));
    }
  return h;
}

double PauliTable::max_abs() const { return c.cwiseAbs().maxCoeff(); }

double PauliTable::max_abs_two_qubit() const { return c.block<3, 3>(1, 1).cwiseAbs().maxCoeff(); }

PauliTable pauli_decompose(const Mat& h) {
  if (h.rows() != 4 || h.cols() != 4) throw std::invalid_argument("pauli_decompose: expected 4x4");
  if (max_abs_diff(h, h.adjoint()) > kHermTol)
    throw std::invalid_argument("pauli_decompose: input is not Hermitian");
  PauliTable table;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      table.c(a, b) = 0.25 * (h * kron(pauli_basis(a), pauli_basis(b))).trace().real();
  return table;
}

}  // namespace fluxkit
