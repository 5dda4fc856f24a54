#include "fluxkit/dynamics.hpp"

#include <cmath>
#include <stdexcept>

namespace fluxkit {

namespace {

// One whole-interval pass with n midpoint-exponential steps.
Mat propagate_fixed(const TimeDependentOperator& h, double t0, double t1, long long n, bool hermitian) {
  const int d = h.dim;
  const double dt = (t1 - t0) / static_cast<double>(n);
  Mat u = Mat::Identity(d, d);
  Mat hbuf(d, d);
  Eigen::SelfAdjointEigenSolver<Mat> es;
  for (long long k = 0; k < n; ++k) {
    const double tm = t0 + (static_cast<double>(k) + 0.5) * dt;
    h.eval_into(tm, hbuf);
    if (hermitian) {
      es.compute(hbuf);
      const auto& v = es.eigenvectors();
      Vec phases = (cplx(0.0, -dt) * es.eigenvalues().array().cast<cplx>()).exp();
      u = v * phases.asDiagonal() * v.adjoint() * u;
    } else {
      u = matrix_exp(hbuf, cplx(0.0, -dt)) * u;
    }
  }
  return u;
}

}  // namespace

Mat propagate(const TimeDependentOperator& h, double t0, double t1, double tol) {
  if (!(t1 >= t0)) throw std::invalid_argument("propagate: reversed time interval");
  const int d = h.dim;
  if (t1 == t0) return Mat::Identity(d, d);
  const double span = t1 - t0;
  const bool hermitian = Operator(h.at(t0 + 0.382 * span), h.dims).is_hermitian(1e-10 * std::max(1.0, max_abs(h.at(t0))));
  // Seed from the advisory frequency bound: a few steps per fastest cycle.
  long long n = 16;
  if (h.max_freq > 0.0) {
    const double cycles = span * h.max_freq / (2.0 * M_PI);
    n = std::max<long long>(n, static_cast<long long>(std::ceil(8.0 * cycles)));
  }
  Mat u_prev = propagate_fixed(h, t0, t1, n, hermitian);
  while (true) {
    n *= 2;
    if (n > (1LL << 22)) throw std::runtime_error("propagate: step halving did not converge");
    Mat u_next = propagate_fixed(h, t0, t1, n, hermitian);
    if (max_abs_diff(u_prev, u_next) < tol) return u_next;
    u_prev = std::move(u_next);
  }
}

Mat matrix_power(const Mat& u, long long n) {
  if (n < 0) throw std::invalid_argument("matrix_power: negative exponent");
  Mat result = Mat::Identity(u.rows(), u.cols());
  Mat base = u;
  while (n > 0) {
    if (n & 1) result = result * base;
    base = base * base;
    n >>= 1;
  }
  return result;
}

double process_fidelity(const Mat& u, const Mat& v) {
  return std::abs((u.adjoint() * v).trace()) / static_cast<double>(u.rows());
}

Mat lindblad_rhs(const Mat& h, const std::vector<Jump>& jumps, const Mat& rho) {
  Mat out = cplx(0.0, -1.0) * (h * rho - rho * h);
  for (const Jump& j : jumps) {
    const Mat ldl = j.op.adjoint() * j.op;
    out += j.rate * (j.op * rho * j.op.adjoint() - 0.5 * (ldl * rho + rho * ldl));
  }
  return out;
}

Mat lindblad_evolve(const Mat& h, const std::vector<Jump>& jumps, Mat rho0, double t_final,
                    double dt, const std::function<void(double, const Mat&)>& observer,
                    int sample_stride) {
  if (!(t_final >= 0.0) || !(dt > 0.0)) throw std::invalid_argument("lindblad_evolve: bad time parameters");
  const long long steps = std::max<long long>(1, static_cast<long long>(std::ceil(t_final / dt)));
  const double step = t_final / static_cast<double>(steps);
  // Precompute the dissipator pieces so the RK4 stages stay allocation-light.
  std::vector<Mat> l_ops, ldl_ops;
  std::vector<double> rates;
  for (const Jump& j : jumps) {
    if (j.rate == 0.0) continue;
    l_ops.push_back(j.op);
    ldl_ops.push_back(j.op.adjoint() * j.op);
    rates.push_back(j.rate);
  }
  auto rhs = [&](const Mat& rho) {
    Mat out = cplx(0.0, -1.0) * (h * rho - rho * h);
    for (std::size_t i = 0; i < l_ops.size(); ++i)
      out += rates[i] * (l_ops[i] * rho * l_ops[i].adjoint() - 0.5 * (ldl_ops[i] * rho + rho * ldl_ops[i]));
    return out;
  };
  if (observer) observer(0.0, rho0);
  for (long long k = 0; k < steps; ++k) {
    const Mat k1 = rhs(rho0);
    const Mat k2 = rhs(rho0 + (0.5 * step) * k1);
    const Mat k3 = rhs(rho0 + (0.5 * step) * k2);
    const Mat k4 = rhs(rho0 + step * k3);
    rho0 += (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (observer && (((k + 1) % sample_stride == 0) || k + 1 == steps))
      observer(static_cast<double>(k + 1) * step, rho0);
  }
  return rho0;
}

Mat steady_state(const Mat& h, const std::vector<Jump>& jumps) {
  const int d = static_cast<int>(h.rows());
  const int n = d * d;
  const Mat id = Mat::Identity(d, d);
  Mat liou = cplx(0.0, -1.0) * (kron(id, h) - kron(h.transpose(), id));
  for (const Jump& j : jumps) {
    if (j.rate == 0.0) continue;
    const Mat ldl = j.op.adjoint() * j.op;
    liou += j.rate * (kron(j.op.conjugate(), j.op) -
                      0.5 * (kron(id, ldl) + kron(ldl.transpose(), id)));
  }
  Eigen::JacobiSVD<Mat> svd(liou, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  if (sv(n - 2) < 1e-8)
    throw std::runtime_error("steady_state: Lindbladian null space is degenerate");
  Vec null_vec = svd.matrixV().col(n - 1);
  Mat rho = Eigen::Map<const Mat>(null_vec.data(), d, d);
  rho = 0.5 * (rho + rho.adjoint()).eval();
  const double tr = rho.trace().real();
  if (std::abs(tr) < 1e-10) throw std::runtime_error("steady_state: null vector is traceless");
  rho /= tr;
  Eigen::SelfAdjointEigenSolver<Mat> es(rho);
  if (es.eigenvalues().minCoeff() < -1e-8)
    throw std::runtime_error("steady_state: steady state has a negative population");
  return rho;
}

}  // namespace fluxkit
