#include "fluxkit/rwa.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "fluxkit/dynamics.hpp"

namespace fluxkit {

RotatingFrame qubit_frame(const std::vector<double>& omegas, const std::vector<int>& dims) {
  if (omegas.size() != dims.size()) throw std::invalid_argument("qubit_frame: one frequency per subsystem");
  int total = 1;
  for (int d : dims) total *= d;
  Eigen::VectorXd g = Eigen::VectorXd::Zero(total);
  for (std::size_t j = 0; j < dims.size(); ++j) {
    const Mat n = embed(number_operator(dims[j]), static_cast<int>(j), dims).mat;
    for (int k = 0; k < total; ++k) g(k) += omegas[j] * n(k, k).real();
  }
  return RotatingFrame{std::move(g), dims};
}

RotatingFrame make_frame(const Mat& g, std::vector<int> dims) {
  if (!Operator(g, dims).is_hermitian())
    throw std::invalid_argument("make_frame: generator must be Hermitian");
  Mat off = g;
  off.diagonal().setZero();
  if (max_abs(off) > kHermTol)
    throw std::invalid_argument("make_frame: generator must be diagonal in the computational basis");
  return RotatingFrame{g.diagonal().real(), std::move(dims)};
}

Mat frame_unitary(const RotatingFrame& f, double t) {
  const int d = static_cast<int>(f.diag.size());
  Mat u = Mat::Zero(d, d);
  for (int k = 0; k < d; ++k) u(k, k) = std::exp(cplx(0.0, f.diag(k) * t));
  return u;
}

double frame_max_freq(const RotatingFrame& f) {
  return f.diag.size() ? f.diag.maxCoeff() - f.diag.minCoeff() : 0.0;
}

TimeDependentOperator to_rotating_frame(const TimeDependentOperator& h, const RotatingFrame& f) {
  if (static_cast<int>(f.diag.size()) != h.dim)
    throw std::invalid_argument("to_rotating_frame: frame dimension mismatch");
  TimeDependentOperator out;
  out.dims = h.dims;
  out.dim = h.dim;
  out.max_freq = h.max_freq + frame_max_freq(f);
  out.eval_into = [h, g = f.diag](double t, Mat& m) {
    h.eval_into(t, m);
    const int d = static_cast<int>(g.size());
    Vec phase(d);
    for (int k = 0; k < d; ++k) phase(k) = std::exp(cplx(0.0, g(k) * t));
    m = phase.asDiagonal() * m * phase.conjugate().asDiagonal();
    m.diagonal() -= g.cast<cplx>();
  };
  return out;
}

double commensurate_period(double base_freq, const std::vector<double>& freqs) {
  std::int64_t den_lcm = 1;
  std::vector<std::pair<std::int64_t, std::int64_t>> ratios;
  for (double f : freqs) {
    if (std::abs(f) < 1e-12) continue;
    ratios.push_back(snap_ratio(std::abs(f), base_freq));
  }
  if (ratios.empty()) return 0.0;
  for (auto& [num, den] : ratios) {
    const std::int64_t g = std::gcd(den_lcm, den);
    const std::int64_t q = den_lcm / g;
    if (q > (std::int64_t{1} << 60) / den)
      throw std::overflow_error("commensurate_period: no representable common period");
    den_lcm = q * den;
  }
  std::int64_t num_gcd = 0;
  for (auto& [num, den] : ratios) num_gcd = std::gcd(num_gcd, num * (den_lcm / den));
  return 2.0 * M_PI * static_cast<double>(den_lcm) / (base_freq * static_cast<double>(num_gcd));
}

namespace {

// Trapezoid sum over [0, period] with n intervals, as the integral estimate.
Mat trapezoid(const TimeDependentOperator& h, double period, long long n) {
  const double dt = period / static_cast<double>(n);
  Mat buf(h.dim, h.dim);
  h.eval_into(0.0, buf);
  Mat acc = 0.5 * buf;
  h.eval_into(period, buf);
  acc += 0.5 * buf;
  for (long long k = 1; k < n; ++k) {
    h.eval_into(static_cast<double>(k) * dt, buf);
    acc += buf;
  }
  return dt * acc;
}

// Refine a trapezoid estimate with n intervals to 2n by adding midpoints.
Mat refine_trapezoid(const TimeDependentOperator& h, double period, long long n, const Mat& t_n) {
  const double dt = period / static_cast<double>(n);
  Mat buf(h.dim, h.dim);
  Mat acc = Mat::Zero(h.dim, h.dim);
  for (long long k = 0; k < n; ++k) {
    h.eval_into((static_cast<double>(k) + 0.5) * dt, buf);
    acc += buf;
  }
  return 0.5 * t_n + (0.5 * dt) * acc;
}

}  // namespace

Mat time_average(const TimeDependentOperator& h, double period, long long n_samples,
                 double tol) {
  if (!(period > 0.0)) throw std::invalid_argument("time_average: period must be positive");
  long long n = std::max<long long>(64, n_samples);
  if (h.max_freq > 0.0) {
    const double cycles = period * h.max_freq / (2.0 * M_PI);
    n = std::max<long long>(n, 64 * static_cast<long long>(std::ceil(cycles)));
  }
  Mat t_prev = trapezoid(h, period, n);
  Mat t_cur = refine_trapezoid(h, period, n, t_prev);
  // Composite Simpson with 2n intervals via Richardson extrapolation.
  Mat s_prev = (4.0 * t_cur - t_prev) / (3.0 * period);
  n *= 2;
  while (true) {
    if (n > (1LL << 20)) throw std::runtime_error("time_average: quadrature did not converge");
    Mat t_next = refine_trapezoid(h, period, n, t_cur);
    Mat s_cur = (4.0 * t_next - t_cur) / (3.0 * period);
    if (max_abs_diff(s_cur, s_prev) < tol) return s_cur;
    t_cur = std::move(t_next);
    s_prev = std::move(s_cur);
    n *= 2;
  }
}

Mat floquet_effective(const TimeDependentOperator& h, double period, double prop_tol) {
  if (!(period > 0.0)) throw std::invalid_argument("floquet_effective: period must be positive");
  const Mat u = propagate(h, 0.0, period, prop_tol);
  Eigen::ComplexEigenSolver<Mat> ces(u);
  if (ces.info() != Eigen::Success) throw std::runtime_error("floquet_effective: eigendecomposition failed");
  const int d = h.dim;
  Vec eps(d);
  for (int k = 0; k < d; ++k) {
    const cplx lambda = ces.eigenvalues()(k);
    if (std::abs(std::abs(lambda) - 1.0) > 1e-6)
      throw std::runtime_error("floquet_effective: monodromy eigenvalue off the unit circle");
    const double theta = std::arg(lambda);
    if (M_PI - std::abs(theta) < 1e-6)
      throw std::runtime_error("floquet_effective: eigenphase at the branch cut; shorten the period or weaken the drive");
    eps(k) = -theta / period;
  }
  Mat h_eff = ces.eigenvectors() * eps.asDiagonal() * ces.eigenvectors().inverse();
  return 0.5 * (h_eff + h_eff.adjoint()).eval();
}

PauliTable analytic_cab(const UniversalDriveParams& p, const PhaseCoeffs& q1,
                        const PhaseCoeffs& q2, double alpha_ej) {
  p.validate();
  constexpr int I = 0, X = 1, Y = 2, Z = 3;
  const double e = alpha_ej;
  const double sa = q1.s, sb = q2.s;
  const double ca = q1.c, cb = q2.c, c0a = q1.c0, c0b = q2.c0;
  PauliTable t;
  // Static flux component: -E f_zz cos(phi1) cos(phi2).
  t.c(Z, Z) += -e * p.f_zz * ca * cb;
  t.c(Z, I) += -e * p.f_zz * ca * c0b;
  t.c(I, Z) += -e * p.f_zz * c0a * cb;
  t.c(I, I) += -e * p.f_zz * c0a * c0b;
  // Difference-frequency tone: photon hopping with phase chi1 - chi2.
  const double k0 = -e * sa * sb * p.f_xy0 / 2.0;
  const double dchi = p.chi1 - p.chi2;
  t.c(X, X) += k0 * std::cos(dchi);
  t.c(Y, Y) += k0 * std::cos(dchi);
  t.c(X, Y) += k0 * std::sin(dchi);
  t.c(Y, X) -= k0 * std::sin(dchi);
  // Sum-frequency tone: two-photon pump with phase chi1 + chi2.
  const double k2 = -e * sa * sb * p.f_xy2 / 2.0;
  const double schi = p.chi1 + p.chi2;
  t.c(X, X) += k2 * std::cos(schi);
  t.c(Y, Y) -= k2 * std::cos(schi);
  t.c(X, Y) -= k2 * std::sin(schi);
  t.c(Y, X) -= k2 * std::sin(schi);
  // Half-frequency tones enter squared and dress one qubit's transverse
  // operators with the other qubit's cosine.
  const double g1 = e * sa * p.f_xz * p.f_xz;
  t.c(X, Z) += g1 * std::cos(p.psi1) * cb;
  t.c(X, I) += g1 * std::cos(p.psi1) * c0b;
  t.c(Y, Z) -= g1 * std::sin(p.psi1) * cb;
  t.c(Y, I) -= g1 * std::sin(p.psi1) * c0b;
  const double g2 = e * sb * p.f_zx * p.f_zx;
  t.c(Z, X) -= g2 * std::cos(p.psi2) * ca;
  t.c(I, X) -= g2 * std::cos(p.psi2) * c0a;
  t.c(Z, Y) += g2 * std::sin(p.psi2) * ca;
  t.c(I, Y) += g2 * std::sin(p.psi2) * c0a;
  return t;
}

RotatingSystem universal_rotating_system(const QubitSpec& q1, const QubitSpec& q2,
                                         const JunctionCouplerSpec& c,
                                         const UniversalDriveParams& p) {
  const DriveSignal sig = universal_signal(p, q1.omega, q2.omega);
  const TimeDependentOperator h_lab = junction_hamiltonian(q1, q2, c, sig);
  RotatingSystem sys;
  sys.frame = qubit_frame({q1.omega, q2.omega}, {q1.levels, q2.levels});
  sys.h_rot = to_rotating_frame(h_lab, sys.frame);
  std::vector<double> freqs;
  const double base = sig.base_freq;
  for (const Tone& tone : sig.tones)
    freqs.push_back(base * static_cast<double>(tone.freq_num) / static_cast<double>(tone.freq_den));
  const auto& g = sys.frame.diag;
  for (int j = 0; j < g.size(); ++j)
    for (int k = j + 1; k < g.size(); ++k) freqs.push_back(g(j) - g(k));
  sys.period = commensurate_period(base, freqs);
  if (sys.period == 0.0)  // fully static problem; any window works
    sys.period = 2.0 * M_PI / base;
  return sys;
}

PauliTable extract_cab(const Operator& h_eff) {
  if (h_eff.mat.rows() != 4 || h_eff.mat.cols() != 4 || h_eff.dims != std::vector<int>{2, 2})
    throw std::invalid_argument("extract_cab: expected a two-qubit (4x4) operator");
  if (!h_eff.is_hermitian())
    throw std::invalid_argument("extract_cab: effective Hamiltonian must be Hermitian");
  return pauli_decompose(h_eff.mat);
}

PauliTable measured_cab(const QubitSpec& q1, const QubitSpec& q2, const JunctionCouplerSpec& c,
                        const UniversalDriveParams& p, ExtractionMethod method) {
  if (q1.levels != 2 || q2.levels != 2)
    throw std::invalid_argument("measured_cab: coefficient table is defined for two-level qubits");
  RotatingSystem sys = universal_rotating_system(q1, q2, c, p);
  const Mat h_eff = method == ExtractionMethod::average ? time_average(sys.h_rot, sys.period)
                                                        : floquet_effective(sys.h_rot, sys.period);
  return pauli_decompose(h_eff);
}

}  // namespace fluxkit
