#include "fluxkit/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fluxkit/rwa.hpp"

namespace fluxkit {

namespace {

constexpr double kAmpBound = 0.3;  // mirrors UniversalDriveParams::validate
constexpr int kResidualEntries = 15;
constexpr int kNumParams = 9;

double sgn(double x) { return x < 0.0 ? -1.0 : 1.0; }

// Invert one transverse channel (c_a, c_b) = w (cos phase, -sin phase) with
// w = coeff * f^2 and coeff of fixed sign: the amplitude is sqrt(|w|/|coeff|)
// and the sign of coeff folds into the phase.
void invert_quadratic_channel(double ca_target, double cb_target, double coeff, const char* name,
                              double& f, double& phase) {
  const double rho = std::hypot(ca_target, cb_target);
  if (rho == 0.0) return;  // leave f = 0, phase = 0
  if (coeff == 0.0)
    throw std::invalid_argument(std::string("synthesize_seed: ") + name +
                                " target needs a nonzero sin*cos coefficient product");
  f = std::sqrt(rho / std::abs(coeff));
  const double u = sgn(coeff);
  phase = std::atan2(-u * cb_target, u * ca_target);
  if (f > kAmpBound)
    throw std::invalid_argument(std::string("synthesize_seed: ") + name +
                                " target needs amplitude > 0.3 (infeasible)");
}

// The optimizer works in a Cartesian chart of the nine parameters: each
// transverse channel becomes a signed quadrature pair (amplitude and phase in
// polar form are degenerate at zero amplitude, which stalls Gauss-Newton
// whenever a channel has to cross or leave the origin). Layout:
// [f_zz, hop_c, hop_s, pump_c, pump_s, xz_c, xz_s, zx_c, zx_s], where the
// hop/pump pairs are f * (cos, sin) of chi1 -+ chi2 and the half-frequency
// pairs are f^2 * (cos, sin) of psi.
Eigen::VectorXd chart_from_params(const UniversalDriveParams& p) {
  Eigen::VectorXd v(kNumParams);
  const double dchi = p.chi1 - p.chi2, schi = p.chi1 + p.chi2;
  v << p.f_zz, p.f_xy0 * std::cos(dchi), p.f_xy0 * std::sin(dchi), p.f_xy2 * std::cos(schi),
      p.f_xy2 * std::sin(schi), p.f_xz * p.f_xz * std::cos(p.psi1),
      p.f_xz * p.f_xz * std::sin(p.psi1), p.f_zx * p.f_zx * std::cos(p.psi2),
      p.f_zx * p.f_zx * std::sin(p.psi2);
  return v;
}

UniversalDriveParams params_from_chart(const Eigen::VectorXd& v) {
  UniversalDriveParams p;
  p.f_zz = v(0);
  p.f_xy0 = std::hypot(v(1), v(2));
  p.f_xy2 = std::hypot(v(3), v(4));
  const double dchi = p.f_xy0 > 0.0 ? std::atan2(v(2), v(1)) : 0.0;
  const double schi = p.f_xy2 > 0.0 ? std::atan2(v(4), v(3)) : 0.0;
  p.chi1 = (schi + dchi) / 2.0;
  p.chi2 = (schi - dchi) / 2.0;
  p.f_xz = std::pow(v(5) * v(5) + v(6) * v(6), 0.25);
  p.psi1 = p.f_xz > 0.0 ? std::atan2(v(6), v(5)) : 0.0;
  p.f_zx = std::pow(v(7) * v(7) + v(8) * v(8), 0.25);
  p.psi2 = p.f_zx > 0.0 ? std::atan2(v(8), v(7)) : 0.0;
  return p;
}

// Channel radii implied by the drive range: |f_zz| <= 0.3, tone amplitudes
// <= 0.3, so the quadratic pairs are bounded by 0.3^2.
double pair_radius(int j) { return j <= 4 ? kAmpBound : kAmpBound * kAmpBound; }

bool in_bounds(const Eigen::VectorXd& v) {
  if (std::abs(v(0)) > kAmpBound) return false;
  for (int j = 1; j < kNumParams; j += 2)
    if (std::hypot(v(j), v(j + 1)) > pair_radius(j)) return false;
  return true;
}

// Radial projection of each channel pair back into the drive range.
Eigen::VectorXd clamp_chart(Eigen::VectorXd v) {
  v(0) = std::clamp(v(0), -kAmpBound, kAmpBound);
  for (int j = 1; j < kNumParams; j += 2) {
    const double radius = std::hypot(v(j), v(j + 1));
    if (radius > pair_radius(j)) {
      const double scale = pair_radius(j) / radius;
      v(j) *= scale;
      v(j + 1) *= scale;
    }
  }
  return v;
}

// The fifteen targeted coefficients in fixed row-major order.
Eigen::VectorXd residual_vector(const PauliTable& got, const PauliTable& want) {
  Eigen::VectorXd r(kResidualEntries);
  int k = 0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      if (a != 0 || b != 0) r(k++) = got.c(a, b) - want.c(a, b);
  return r;
}

}  // namespace

double coefficient_residual(const PauliTable& a, const PauliTable& b) {
  return residual_vector(a, b).cwiseAbs().maxCoeff();
}

UniversalDriveParams synthesize_seed(const PauliTable& target, const PhaseCoeffs& q1,
                                     const PhaseCoeffs& q2, double alpha_ej) {
  if (alpha_ej <= 0.0)
    throw std::invalid_argument("synthesize_seed: alpha_ej must be positive");
  constexpr int X = 1, Y = 2, Z = 3;
  const double e = alpha_ej;
  const double sa = q1.s, sb = q2.s, ca = q1.c, cb = q2.c;
  UniversalDriveParams p;

  // Static flux: c_zz = -E f_zz cA cB. The sign rides on f_zz itself.
  const double czz = target.c(Z, Z);
  if (czz != 0.0) {
    if (ca * cb == 0.0)
      throw std::invalid_argument(
          "synthesize_seed: zz target needs nonzero cos coefficients on both qubits");
    p.f_zz = -czz / (e * ca * cb);
    if (std::abs(p.f_zz) > kAmpBound)
      throw std::invalid_argument("synthesize_seed: zz target needs |f_zz| > 0.3 (infeasible)");
  }

  // The (x,y)x(x,y) block splits into the two transverse channels: the
  // hopping tone contributes k0 [cos(dchi) (xx+yy) + sin(dchi) (xy-yx)] and
  // the pump tone k2 [cos(schi) (xx-yy) - sin(schi) (xy+yx)], both with
  // k = -E sA sB f / 2 of fixed sign.
  const double hp = (target.c(X, X) + target.c(Y, Y)) / 2.0;
  const double hq = (target.c(X, Y) - target.c(Y, X)) / 2.0;
  const double pr = (target.c(X, X) - target.c(Y, Y)) / 2.0;
  const double ps = (target.c(X, Y) + target.c(Y, X)) / 2.0;
  double dchi = 0.0, schi = 0.0;
  if (hp != 0.0 || hq != 0.0 || pr != 0.0 || ps != 0.0) {
    if (sa * sb == 0.0)
      throw std::invalid_argument(
          "synthesize_seed: transverse block needs nonzero sin coefficients on both qubits");
    const double u = sgn(sa * sb);
    p.f_xy0 = 2.0 * std::hypot(hp, hq) / (e * std::abs(sa * sb));
    if (p.f_xy0 > 0.0) dchi = std::atan2(-u * hq, -u * hp);
    p.f_xy2 = 2.0 * std::hypot(pr, ps) / (e * std::abs(sa * sb));
    if (p.f_xy2 > 0.0) schi = std::atan2(u * ps, -u * pr);
    if (p.f_xy0 > kAmpBound || p.f_xy2 > kAmpBound)
      throw std::invalid_argument(
          "synthesize_seed: transverse target needs amplitude > 0.3 (infeasible)");
    p.chi1 = (schi + dchi) / 2.0;
    p.chi2 = (schi - dchi) / 2.0;
  }

  // Half-frequency tones enter squared: xz column (c_xz, c_yz) with
  // coefficient E sA cB, zx row (c_zx, c_zy) with coefficient -E sB cA.
  invert_quadratic_channel(target.c(X, Z), target.c(Y, Z), e * sa * cb, "xz", p.f_xz, p.psi1);
  invert_quadratic_channel(target.c(Z, X), target.c(Z, Y), -e * sb * ca, "zx", p.f_zx, p.psi2);
  return p;
}

CalibrationResult refine(const UniversalDriveParams& seed, const PauliTable& target,
                         const CabOracle& oracle, double alpha_ej) {
  if (!oracle) throw std::invalid_argument("refine: oracle must be callable");
  if (alpha_ej <= 0.0) throw std::invalid_argument("refine: alpha_ej must be positive");
  const double tol = 1e-4 * alpha_ej;
  const double h = 1e-4;  // finite-difference step
  constexpr int kMaxIters = 50;

  CalibrationResult res;
  res.seed = seed;

  Eigen::VectorXd x = clamp_chart(chart_from_params(seed));
  PauliTable table = oracle(params_from_chart(x));
  Eigen::VectorXd r = residual_vector(table, target);
  double best = r.cwiseAbs().maxCoeff();
  res.residual_history.push_back(best);

  for (int iter = 0; iter < kMaxIters && best >= tol; ++iter) {
    // Central differences, one-sided where a step would leave the drive
    // range. The column evaluations are independent of each other (safe to
    // parallelize).
    Eigen::MatrixXd jac(kResidualEntries, kNumParams);
    for (int j = 0; j < kNumParams; ++j) {
      auto shifted = [&](double delta) {
        Eigen::VectorXd y = x;
        y(j) += delta;
        if (delta == 0.0 || !in_bounds(y)) return std::make_pair(r, x(j));
        return std::make_pair(residual_vector(oracle(params_from_chart(y)), target), y(j));
      };
      const auto [r_hi, hi] = shifted(h);
      const auto [r_lo, lo] = shifted(-h);
      jac.col(j) = (r_hi - r_lo) / (hi - lo);
    }

    const Eigen::VectorXd step = jac.colPivHouseholderQr().solve(-r);
    bool accepted = false;
    for (double damp : {1.0, 0.5, 0.25, 0.125, 0.0625}) {
      const Eigen::VectorXd cand = clamp_chart(x + damp * step);
      PauliTable cand_table = oracle(params_from_chart(cand));
      Eigen::VectorXd cand_r = residual_vector(cand_table, target);
      const double cand_best = cand_r.cwiseAbs().maxCoeff();
      if (cand_best < best) {
        x = cand;
        table = std::move(cand_table);
        r = std::move(cand_r);
        best = cand_best;
        res.residual_history.push_back(best);
        ++res.iterations;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;  // stalled: no damped step improves the oracle residual
  }

  res.params = params_from_chart(x);
  res.achieved = table;
  res.residual = best;
  res.converged = best < tol;
  return res;
}

CalibrationResult calibrate(const PauliTable& target, const QubitSpec& q1, const QubitSpec& q2,
                            const JunctionCouplerSpec& c) {
  const UniversalDriveParams seed = synthesize_seed(target, q1.phase, q2.phase, c.alpha_ej);
  const CabOracle oracle = [&](const UniversalDriveParams& p) {
    return measured_cab(q1, q2, c, p);
  };
  return refine(seed, target, oracle, c.alpha_ej);
}

}  // namespace fluxkit
