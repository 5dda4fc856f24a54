#include "fluxkit/device.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace fluxkit {

std::pair<Mat, Mat> phase_operators(const QubitSpec& q) {
  const PhaseCoeffs& p = q.phase;
  if (q.levels == 2) {
    Mat sin_phi = p.s * pauli_x();
    Mat cos_phi = p.c0 * pauli_i() + p.c * pauli_z();
    return {sin_phi, cos_phi};
  }
  if (q.levels == 3) {
    Mat sin_phi = Mat::Zero(3, 3);
    sin_phi(0, 1) = sin_phi(1, 0) = p.s1;
    sin_phi(1, 2) = sin_phi(2, 1) = p.s2;
    Mat cos_phi = Mat::Zero(3, 3);
    cos_phi(0, 0) = p.c0 + p.c;
    cos_phi(1, 1) = p.c0 - p.c;
    cos_phi(2, 2) = p.c0 - 3.0 * p.c;  // diagonal slope -2c per level
    cos_phi(0, 2) = cos_phi(2, 0) = p.c2;
    return {sin_phi, cos_phi};
  }
  throw std::invalid_argument("phase_operators: only 2- and 3-level truncations are defined");
}

Mat number_operator(int levels) {
  Mat n = Mat::Zero(levels, levels);
  for (int k = 0; k < levels; ++k) n(k, k) = k;
  return n;
}

TimeDependentOperator junction_drive_operator(Mat h_static, const Mat& sin1, const Mat& cos1,
                                              const Mat& sin2, const Mat& cos2, double alpha_ej,
                                              DriveSignal signal, std::vector<int> dims) {
  if (dims.size() != 2) throw std::invalid_argument("junction_drive_operator: expected two subsystems");
  const Mat s1 = embed(sin1, 0, dims).mat;
  const Mat c1 = embed(cos1, 0, dims).mat;
  const Mat s2 = embed(sin2, 1, dims).mat;
  const Mat c2 = embed(cos2, 1, dims).mat;
  // cos(phi1 - phi2) and sin(phi1 - phi2) in the product eigenbasis.
  const Mat a = c1 * c2 + s1 * s2;
  const Mat b = s1 * c2 - c1 * s2;
  const int dim = static_cast<int>(a.rows());
  if (h_static.rows() != dim || h_static.cols() != dim)
    throw std::invalid_argument("junction_drive_operator: static part has wrong dimension");
  TimeDependentOperator op;
  op.dims = std::move(dims);
  op.dim = dim;
  op.max_freq = signal.max_freq();
  op.eval_into = [h_static = std::move(h_static), a, b, alpha_ej,
                  signal = std::move(signal)](double t, Mat& out) {
    const double f = signal.evaluate(t);
    out = h_static;
    out.noalias() -= (alpha_ej * std::cos(f)) * a;
    out.noalias() -= (alpha_ej * std::sin(f)) * b;
  };
  return op;
}

TimeDependentOperator junction_hamiltonian(const QubitSpec& q1, const QubitSpec& q2,
                                           const JunctionCouplerSpec& c, const DriveSignal& signal) {
  if (!(q1.omega > 0.0) || !(q2.omega > 0.0))
    throw std::invalid_argument("junction_hamiltonian: qubit frequencies must be positive");
  if (!(c.alpha_ej > 0.0)) throw std::invalid_argument("junction_hamiltonian: coupler energy must be positive");
  auto [sin1, cos1] = phase_operators(q1);
  auto [sin2, cos2] = phase_operators(q2);
  const std::vector<int> dims = {q1.levels, q2.levels};
  Mat h_static = q1.omega * embed(number_operator(q1.levels), 0, dims).mat +
                 q2.omega * embed(number_operator(q2.levels), 1, dims).mat;
  return junction_drive_operator(std::move(h_static), sin1, cos1, sin2, cos2, c.alpha_ej, signal, dims);
}

Operator dispersive_hamiltonian(const QubitSpec& q, const ResonatorSpec& r,
                                const DispersiveCouplerSpec& c) {
  if (q.levels < 2 || r.dim < 2) throw std::invalid_argument("dispersive_hamiltonian: need >= 2 levels per subsystem");
  const std::vector<int> dims = {q.levels, r.dim};
  BosonOps bt = boson_ops(q.levels);
  BosonOps br = boson_ops(r.dim);
  if (q.levels >= 3) {
    // the transmon 1->2 exchange element is the device's q2 (sqrt(2) default)
    bt.a(1, 2) = q.phase.q2;
    bt.adag = bt.a.adjoint();
  }
  Mat h = q.omega * kron(bt.n, Mat::Identity(r.dim, r.dim)) +
          r.omega * kron(Mat::Identity(q.levels, q.levels), br.n) -
          0.5 * q.alpha2 * kron(bt.n * (bt.n - Mat::Identity(q.levels, q.levels)), Mat::Identity(r.dim, r.dim)) +
          c.g * (kron(bt.adag, br.a) + kron(bt.a, br.adag));
  return Operator(std::move(h), dims);
}

namespace {

struct CpbResult {
  PhaseCoeffs phase;
  double e01 = 0.0;
  double anharmonicity = 0.0;
};

CpbResult cpb_solve(double ej, double ec, int n_max) {
  const int dim = 2 * n_max + 1;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  Eigen::MatrixXd shift = Eigen::MatrixXd::Zero(dim, dim);  // |n+1><n|
  Eigen::VectorXd charge(dim);
  for (int i = 0; i < dim; ++i) {
    const double n = i - n_max;
    charge(i) = n;
    h(i, i) = 4.0 * ec * n * n;
    if (i + 1 < dim) {
      h(i + 1, i) = h(i, i + 1) = -ej / 2.0;
      shift(i + 1, i) = 1.0;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  const Eigen::VectorXd& ev = es.eigenvalues();
  Eigen::VectorXd v0 = es.eigenvectors().col(0);
  Eigen::VectorXd v1 = es.eigenvectors().col(1);
  Eigen::VectorXd v2 = es.eigenvectors().col(2);
  Eigen::MatrixXd cos_m = 0.5 * (shift + shift.transpose());
  // sin(phi) = (e^{i phi} - e^{-i phi})/(2i) has purely imaginary charge-basis
  // entries; for real eigenvectors u, v the element <u|sin|v> = -i/2 (u'Sv - v'Su).
  auto sin_imag = [&](const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
    return -0.5 * (u.dot(shift * v) - v.dot(shift * u));
  };
  const double y1 = sin_imag(v1, v0);  // Im <1|sin|0>
  const double y2 = sin_imag(v2, v1);  // Im <2|sin|1>
  const double r2 = v2.dot(cos_m * v0);
  const double c00 = v0.dot(cos_m * v0);
  const double c11 = v1.dot(cos_m * v1);
  const double q10 = v1.dot(charge.asDiagonal() * v0);
  const double q21 = v2.dot(charge.asDiagonal() * v1);
  CpbResult out;
  out.phase.s1 = std::abs(y1);
  out.phase.s2 = std::abs(y2);
  out.phase.s = out.phase.s1;
  out.phase.c0 = 0.5 * (c00 + c11);
  out.phase.c = 0.5 * (c00 - c11);
  // Gauge with s1, s2 > 0 maps <2|cos|0> to -sign(y1 y2) * r2 (invariant
  // under eigenvector sign flips).
  out.phase.c2 = -(y1 * y2 > 0 ? 1.0 : -1.0) * r2;
  out.phase.q2 = std::abs(q21 / q10);
  out.e01 = ev(1) - ev(0);
  out.anharmonicity = 2.0 * ev(1) - ev(0) - ev(2);
  return out;
}

}  // namespace

DerivedQubit derive_phase_coefficients(double ej, double ec) {
  if (!(ej > 0.0) || !(ec > 0.0))
    throw std::invalid_argument("derive_phase_coefficients: junction energies must be positive");
  CpbResult a = cpb_solve(ej, ec, 30);
  CpbResult b = cpb_solve(ej, ec, 60);
  const double drift = std::max({std::abs(a.phase.s1 - b.phase.s1), std::abs(a.phase.s2 - b.phase.s2),
                                 std::abs(a.phase.c0 - b.phase.c0), std::abs(a.phase.c - b.phase.c),
                                 std::abs(a.phase.c2 - b.phase.c2), std::abs(a.phase.q2 - b.phase.q2),
                                 std::abs(a.e01 - b.e01), std::abs(a.anharmonicity - b.anharmonicity)});
  if (drift > 1e-8)
    throw std::runtime_error("derive_phase_coefficients: charge-basis truncation not converged");
  DerivedQubit out;
  out.phase = b.phase;
  out.e01 = b.e01;
  out.anharmonicity = b.anharmonicity;
  return out;
}

std::vector<std::string> validate_scales(const UniversalDriveParams& p, const PhaseCoeffs& q1,
                                         const PhaseCoeffs& q2, double alpha_ej, double omega1,
                                         double omega2) {
  struct Gap {
    const char* name;
    double value;
  };
  const Gap gaps[] = {{"omega1/2", omega1 / 2.0},
                      {"omega2/2", omega2 / 2.0},
                      {"|omega1-omega2|", std::abs(omega1 - omega2)},
                      {"omega1+omega2", omega1 + omega2}};
  const Gap* min_gap = &gaps[0];
  for (const Gap& g : gaps)
    if (g.value < min_gap->value) min_gap = &g;
  struct Element {
    const char* name;
    double value;
  };
  const double e = alpha_ej;
  const double cos1_norm = std::abs(q1.c0) + std::abs(q1.c);
  const double cos2_norm = std::abs(q2.c0) + std::abs(q2.c);
  const Element elements[] = {
      {"zz", e * std::abs(p.f_zz) * std::abs(q1.c * q2.c)},
      {"hopping", e * q1.s * q2.s * p.f_xy0 / 2.0},
      {"pump", e * q1.s * q2.s * p.f_xy2 / 2.0},
      {"qubit-1 transverse", e * q1.s * p.f_xz * p.f_xz * cos2_norm},
      {"qubit-2 transverse", e * q2.s * p.f_zx * p.f_zx * cos1_norm},
  };
  std::vector<std::string> warnings;
  for (const Element& el : elements) {
    if (el.value > 0.1 * min_gap->value) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "effective %s element %.3g exceeds 0.1 x smallest gap %s = %.3g",
                    el.name, el.value, min_gap->name, min_gap->value);
      warnings.emplace_back(buf);
    }
  }
  return warnings;
}

}  // namespace fluxkit
