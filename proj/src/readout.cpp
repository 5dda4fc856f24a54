#include "fluxkit/readout.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "fluxkit/dynamics.hpp"
#include "fluxkit/rwa.hpp"

namespace fluxkit {

namespace {

void check_dispersive_regime(double g, double delta, double qubit_delta) {
  if (delta == 0.0) throw std::invalid_argument("dressed_states: zero detuning");
  if (delta + qubit_delta == 0.0)
    throw std::invalid_argument("dressed_states: zero shifted detuning (delta + qubit_delta)");
  if (std::abs(g / delta) > 0.3 || std::abs(g / (delta + qubit_delta)) > 0.3)
    throw std::invalid_argument("dressed_states: |g/delta| beyond the perturbative regime (0.3)");
}

struct ReadoutVectors {
  Eigen::Vector3d vx = Eigen::Vector3d::Zero();
  Eigen::Vector3d vp = Eigen::Vector3d::Zero();
  double spin_independent = 0.0;
  double hop = 0.0;
  double pump = 0.0;
  double scale = 0.0;  // magnitude of the largest retained coupling, for zero-axis tests

  bool has_axis() const { return vx.norm() > 1e-12 * scale && scale > 0.0; }
};

// Static (frame-matched) part of the three-tone drive between dressed states.
ReadoutVectors readout_vectors(double f1, double f2, double f3, double chi, const PhaseCoeffs& q,
                               double g, double delta, double qubit_delta) {
  check_dispersive_regime(g, delta, qubit_delta);
  const double dd = delta + qubit_delta;
  const double cos_hop = -2.0 * q.c * g / delta;         // cos-phi ladder slope element
  const double cos_pump = q.q2 * q.c2 * g / dd;          // cos-phi two-photon element
  const double sin_ground = q.s1 * g / delta;            // sin-phi displacement, qubit in 0
  const double sin_excited = q.q2 * q.s2 * g / dd - q.s1 * g / delta;

  ReadoutVectors v;
  v.hop = 0.5 * f2 * cos_hop;
  v.pump = 0.5 * f1 * cos_pump;
  // -2 f3 sin(phi) cos(wr t) -> -f3 [sin_ground P0 + sin_excited P1] (a^dag + a)
  v.spin_independent = -0.5 * f3 * (sin_ground + sin_excited);
  const double vz = -0.5 * f3 * (sin_ground - sin_excited);
  const double sum = 0.5 * (v.hop + v.pump);
  const double diff = 0.5 * (v.hop - v.pump);
  v.vx = Eigen::Vector3d(sum * std::cos(chi), -sum * std::sin(chi), vz);
  v.vp = Eigen::Vector3d(diff * std::sin(chi), diff * std::cos(chi), 0.0);
  v.scale = std::abs(v.hop) + std::abs(v.pump) +
            0.5 * std::abs(f3) * (std::abs(sin_ground) + std::abs(sin_excited));
  return v;
}

}  // namespace

DressedAmplitudes dressed_states(double g, double delta, double qubit_delta, double q2, int n) {
  if (n < 0) throw std::invalid_argument("dressed_states: negative photon number");
  check_dispersive_regime(g, delta, qubit_delta);
  DressedAmplitudes d;
  d.n = n;
  const double rn = std::sqrt(static_cast<double>(n));
  d.ground_1nm1 = g * rn / delta;
  d.excited_2nm1 = q2 * g * rn / (delta + qubit_delta);
  d.excited_0np1 = -g * std::sqrt(n + 1.0) / delta;
  return d;
}

DressedElements dressed_matrix_elements(const PhaseCoeffs& q, double g, double delta,
                                        double qubit_delta, int n) {
  if (n < 0) throw std::invalid_argument("dressed_matrix_elements: negative photon number");
  check_dispersive_regime(g, delta, qubit_delta);
  const double dd = delta + qubit_delta;
  const double rn = std::sqrt(static_cast<double>(n));
  const double rn1 = std::sqrt(n + 1.0);
  DressedElements e;
  e.cos_hop = -2.0 * q.c * g * rn / delta;
  e.cos_pump = q.q2 * q.c2 * g * rn1 / dd;
  e.sin_ground = q.s1 * g * rn1 / delta;
  e.sin_excited = q.q2 * q.s2 * g * rn1 / dd - q.s1 * g * rn1 / delta;
  return e;
}

ReadoutHamiltonian effective_readout_hamiltonian(double f1, double f2, double f3, double chi,
                                                 const PhaseCoeffs& q, double g, double delta,
                                                 double qubit_delta) {
  const ReadoutVectors v = readout_vectors(f1, f2, f3, chi, q, g, delta, qubit_delta);
  ReadoutHamiltonian h;
  h.v_position = v.vx;
  h.v_momentum = v.vp;
  h.spin_independent = v.spin_independent;
  h.hop = v.hop;
  h.pump = v.pump;
  h.lambda = v.vx.norm();
  if (!v.has_axis())
    throw std::invalid_argument("effective_readout_hamiltonian: no measurement axis (lambda = 0)");
  h.h = v.vx / h.lambda;
  return h;
}

Operator assembled_readout_hamiltonian(const ReadoutHamiltonian& h, int resonator_dim,
                                       bool include_spin_independent) {
  if (resonator_dim < 2)
    throw std::invalid_argument("assembled_readout_hamiltonian: resonator dim must be >= 2");
  const BosonOps b = boson_ops(resonator_dim);
  const Mat x = b.adag + b.a;
  const Mat p = cplx(0.0, 1.0) * (b.adag - b.a);
  Mat qx = h.v_position(0) * pauli_x() + h.v_position(1) * pauli_y() + h.v_position(2) * pauli_z();
  if (include_spin_independent) qx += h.spin_independent * pauli_i();
  const Mat qp =
      h.v_momentum(0) * pauli_x() + h.v_momentum(1) * pauli_y() + h.v_momentum(2) * pauli_z();
  return Operator(kron(qx, x) + kron(qp, p), {2, resonator_dim});
}

namespace {

// Exact eigenvector of h whose overlap with the bare basis state `bare_idx`
// is largest, with the phase fixed so that <bare|v> is real positive.
Vec identified_eigenvector(const Eigen::SelfAdjointEigenSolver<Mat>& es, int bare_idx,
                           double* energy = nullptr) {
  int best = 0;
  double best_ov = -1.0;
  for (int k = 0; k < es.eigenvectors().cols(); ++k) {
    const double ov = std::abs(es.eigenvectors()(bare_idx, k));
    if (ov > best_ov) {
      best_ov = ov;
      best = k;
    }
  }
  if (best_ov * best_ov < 0.5)
    throw std::runtime_error("readout: dressed-state identification failed (mixing > 50%)");
  Vec v = es.eigenvectors().col(best);
  const cplx amp = v(bare_idx);
  v *= std::abs(amp) / amp;
  if (energy) *energy = es.eigenvalues()(best);
  return v;
}

cplx expectation(const Vec& psi, const Mat& op) { return psi.dot(op * psi); }

// Least-squares slope of y against t over indices where t is inside the window.
cplx fitted_slope(const std::vector<double>& t, const std::vector<cplx>& y, double lo, double hi) {
  double tbar = 0.0;
  cplx ybar(0.0, 0.0);
  int count = 0;
  for (size_t i = 0; i < t.size(); ++i) {
    if (t[i] < lo || t[i] > hi) continue;
    tbar += t[i];
    ybar += y[i];
    ++count;
  }
  if (count < 2) throw std::invalid_argument("simulate_readout: fit window holds < 2 samples");
  tbar /= count;
  ybar /= static_cast<double>(count);
  double tt = 0.0;
  cplx ty(0.0, 0.0);
  for (size_t i = 0; i < t.size(); ++i) {
    if (t[i] < lo || t[i] > hi) continue;
    tt += (t[i] - tbar) * (t[i] - tbar);
    ty += (t[i] - tbar) * (y[i] - ybar);
  }
  return ty / tt;
}

}  // namespace

ReadoutResult simulate_readout(const ReadoutSimSpec& spec) {
  if (spec.qubit.levels != 3)
    throw std::invalid_argument("simulate_readout: the readout qubit is modeled with 3 levels");
  if (spec.resonator.dim < 8)
    throw std::invalid_argument("simulate_readout: resonator truncation dim must be >= 8");
  if (spec.qubit.omega <= 0.0 || spec.resonator.omega <= 0.0)
    throw std::invalid_argument("simulate_readout: frequencies must be positive");
  if (std::abs(spec.f1) > 0.3 || std::abs(spec.f2) > 0.3 || std::abs(spec.f3) > 0.3)
    throw std::invalid_argument("simulate_readout: drive coefficients beyond validity (0.3)");
  if (spec.duration <= 0.0 || spec.samples < 8)
    throw std::invalid_argument("simulate_readout: need positive duration and >= 8 samples");
  const double delta = spec.resonator.omega - spec.qubit.omega;

  const ReadoutVectors vecs = readout_vectors(spec.f1, spec.f2, spec.f3, spec.chi,
                                              spec.qubit.phase, spec.g, delta, spec.qubit.alpha2);
  ReadoutResult result;
  result.effective.v_position = vecs.vx;
  result.effective.v_momentum = vecs.vp;
  result.effective.spin_independent = vecs.spin_independent;
  result.effective.hop = vecs.hop;
  result.effective.pump = vecs.pump;
  result.effective.lambda = vecs.vx.norm();
  result.effective.h = vecs.has_axis() ? Eigen::Vector3d(vecs.vx / result.effective.lambda)
                                       : Eigen::Vector3d(0.0, 0.0, 1.0);
  result.cancellation_voltage =
      spec.cancel_spin_independent ? 2.0 * vecs.spin_independent : 0.0;

  const std::vector<int> dims = {spec.qubit.levels, spec.resonator.dim};
  const int dim_r = spec.resonator.dim;
  const Operator h0 = dispersive_hamiltonian(spec.qubit, spec.resonator, {spec.g});
  const auto [sin_phi, cos_phi] = phase_operators(spec.qubit);
  const Mat cop = embed(cos_phi, 0, dims).mat;
  const Mat sop = embed(sin_phi, 0, dims).mat;
  const BosonOps br = boson_ops(dim_r);
  const Mat qr = embed(cplx(0.0, 1.0) * (br.adag - br.a), 1, dims).mat;
  const Mat ar = embed(br.a, 1, dims).mat;
  const Mat nr = embed(br.n, 1, dims).mat;

  const double wt = spec.qubit.omega;
  const double wr = spec.resonator.omega;
  const double wsum = wr + wt;
  const double f1 = spec.f1, f2 = spec.f2, f3 = spec.f3, chi = spec.chi;
  const double voltage = result.cancellation_voltage;

  TimeDependentOperator lab;
  lab.dims = dims;
  lab.dim = h0.dim();
  lab.max_freq = wsum;
  lab.eval_into = [=, h0m = h0.mat](double t, Mat& out) {
    const double a_cos = f1 * std::cos(wsum * t + chi) + f2 * std::cos(delta * t - chi);
    const double a_sin = -2.0 * f3 * std::cos(wr * t);
    out = h0m + a_cos * cop + a_sin * sop + (voltage * std::sin(wr * t)) * qr;
  };
  const RotatingFrame frame = qubit_frame({wt, wr}, dims);
  const TimeDependentOperator h_rot = to_rotating_frame(lab, frame);

  // Exact dressed basis, one state per bare index, plus full qubit-class
  // projectors for the dressed-z monitor.
  const Eigen::SelfAdjointEigenSolver<Mat> es(h0.mat);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("simulate_readout: diagonalization failed");
  std::vector<Vec> dressed(h0.dim());
  std::vector<double> denergy(h0.dim());
  for (int b = 0; b < h0.dim(); ++b) dressed[b] = identified_eigenvector(es, b, &denergy[b]);
  Mat proj_z = Mat::Zero(h0.dim(), h0.dim());  // dressed P(qubit 0) - P(qubit 1)
  for (int k = 0; k < h0.dim(); ++k) {
    const Vec v = es.eigenvectors().col(k);
    Eigen::Vector3d w = Eigen::Vector3d::Zero();
    for (int j = 0; j < spec.qubit.levels; ++j)
      w(j) = v.segment(j * dim_r, dim_r).squaredNorm();
    int cls = 0;
    w.maxCoeff(&cls);
    if (cls == 0) proj_z += v * v.adjoint();
    if (cls == 1) proj_z -= v * v.adjoint();
  }

  const double theta = std::acos(std::clamp(result.effective.h(2), -1.0, 1.0));
  const double phi_h = std::atan2(result.effective.h(1), result.effective.h(0));
  const cplx up = std::polar(1.0, phi_h);
  const double ct = std::cos(theta / 2.0);
  const double st = std::sin(theta / 2.0);
  const Vec plus0 = ct * dressed[0] + st * up * dressed[dim_r];
  const Vec minus0 = st * dressed[0] - ct * up * dressed[dim_r];

  auto run = [&](const Vec& initial, bool plus_axis) {
    ReadoutTrajectory traj;
    traj.times.reserve(spec.samples + 1);
    Vec psi_rot = initial;
    Vec psi_lab(h0.dim());
    const double dt = spec.duration / spec.samples;
    for (int k = 0; k <= spec.samples; ++k) {
      const double t = k * dt;
      if (k > 0) psi_rot = (propagate(h_rot, (k - 1) * dt, t, spec.tolerance) * psi_rot).eval();
      for (int i = 0; i < h0.dim(); ++i)
        psi_lab(i) = psi_rot(i) * std::polar(1.0, -frame.diag(i) * t);
      traj.times.push_back(t);
      traj.alpha.push_back(std::polar(1.0, wr * t) * expectation(psi_lab, ar));
      // Co-rotating dressed amplitudes (constant under free evolution).
      std::vector<cplx> amp(h0.dim());
      for (int b = 0; b < h0.dim(); ++b)
        amp[b] = dressed[b].dot(psi_lab) * std::polar(1.0, denergy[b] * t);
      // Axis population: overlap with the prepared spin direction, summed over
      // photon levels.
      double pop = 0.0;
      for (int n = 0; n < dim_r; ++n) {
        const cplx ov = plus_axis ? ct * amp[n] + std::conj(up) * st * amp[dim_r + n]
                                  : st * amp[n] - std::conj(up) * ct * amp[dim_r + n];
        pop += std::norm(ov);
      }
      traj.axis_population.push_back(pop);
      // Displacement within each qubit class; no spin cross terms, so the
      // conditional growth is visible without the ~g/delta dressed offset.
      cplx beta(0.0, 0.0);
      for (int j = 0; j < 2; ++j)
        for (int n = 0; n + 1 < dim_r; ++n)
          beta += std::conj(amp[j * dim_r + n]) * amp[j * dim_r + n + 1] * std::sqrt(n + 1.0);
      traj.dressed_alpha.push_back(beta);
      traj.dressed_z.push_back(expectation(psi_lab, proj_z).real());
      const double n_res = expectation(psi_lab, nr).real();
      traj.resonator_population.push_back(n_res);
      // Truncated evolution self-limits near <n> ~ dim-1-sqrt(dim), so the
      // mean alone cannot flag every breach; weight in the top photon level
      // is the operative detector.
      double top = 0.0;
      for (int j = 0; j * dim_r < h0.dim(); ++j) top += std::norm(psi_lab(j * dim_r + dim_r - 1));
      if (n_res > dim_r - 2.0 || top > 0.02)
        throw std::runtime_error("simulate_readout: resonator truncation breached");
    }
    const double lo = std::min(spec.fit_start, spec.duration);
    const double hi = std::min(spec.fit_stop, spec.duration);
    traj.slope = fitted_slope(traj.times, traj.dressed_alpha, lo, hi);
    return traj;
  };

  result.plus = run(plus0, true);
  result.minus = run(minus0, false);
  result.discrimination = result.plus.slope - result.minus.slope;
  return result;
}

}  // namespace fluxkit
