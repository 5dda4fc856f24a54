#pragma once
// Dense complex linear-algebra layer: tensor products, embeddings,
// Pauli/bosonic operators, matrix exponential, Pauli decomposition.
//
// Conventions used throughout the library:
//   * basis index 0 is the ground state of every subsystem;
//   * sigma_z = diag(1, -1), so the ground state has sigma_z = +1;
//   * sigma_plus = |1><0| raises the excitation number (sigma_plus = (x - i y)/2);
//   * number operator n = sigma_plus * sigma_minus = (I - sigma_z)/2.

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <vector>

namespace fluxkit {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline constexpr double kHermTol = 1e-12;  // construction-bug detector, absolute max-norm

// Dense operator over a composite Hilbert space with explicit subsystem dims.
struct Operator {
  Mat mat;
  std::vector<int> dims;

  Operator() = default;
  Operator(Mat m, std::vector<int> d);

  int dim() const { return static_cast<int>(mat.rows()); }
  bool is_hermitian(double tol = kHermTol) const;
};

// Time-dependent Hermitian operator H(t) on a composite space. eval_into
// writes into a caller-owned matrix so propagation loops do not allocate.
// max_freq is an advisory bound on the fastest angular frequency present,
// used to seed integration step counts.
struct TimeDependentOperator {
  std::vector<int> dims;
  int dim = 0;
  double max_freq = 0.0;
  std::function<void(double, Mat&)> eval_into;

  Mat at(double t) const {
    Mat m(dim, dim);
    eval_into(t, m);
    return m;
  }
};

// Max-norm of A (largest absolute entry); zero-size matrices give 0.
double max_abs(const Mat& a);
double max_abs_diff(const Mat& a, const Mat& b);

// Two-level operators in the convention above.
Mat pauli_i();
Mat pauli_x();
Mat pauli_y();
Mat pauli_z();
Mat sigma_plus();   // |1><0|
Mat sigma_minus();  // |0><1|

// Tensor product; dims concatenate left-to-right.
Mat kron(const Mat& a, const Mat& b);
Operator kron(const Operator& a, const Operator& b);

// op acting on subsystem `slot` of a space with the given dims, identity elsewhere.
Operator embed(const Mat& op, int slot, const std::vector<int>& dims);

// Truncated harmonic-ladder operators: a|n> = sqrt(n)|n-1>, n = adag*a exactly.
struct BosonOps {
  Mat a, adag, n;
};
BosonOps boson_ops(int dim);

// exp(scale * A) to <= 1e-12 relative accuracy (Pade scaling-and-squaring).
Mat matrix_exp(const Mat& a, cplx scale = cplx(1.0, 0.0));

// Real coefficient table over {I,x,y,z} x {I,x,y,z}; index 0=I,1=x,2=y,3=z.
struct PauliTable {
  Eigen::Matrix4d c = Eigen::Matrix4d::Zero();

  Mat reconstruct() const;   // sum c_ab sigma_a (x) sigma_b, Hermitian by construction
  double max_abs() const;
  // Largest |c_ab| over the nine two-qubit entries (a,b >= 1).
  double max_abs_two_qubit() const;
};

// c_ab = Tr(H sigma_a (x) sigma_b)/4 for Hermitian 4x4 H; round-trips to 1e-12.
PauliTable pauli_decompose(const Mat& h);

// The single-qubit basis matrix for index 0..3 (I, x, y, z).
const Mat& pauli_basis(int idx);

}  // namespace fluxkit
