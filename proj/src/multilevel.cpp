#include "fluxkit/multilevel.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "fluxkit/device.hpp"
#include "fluxkit/drive.hpp"

namespace fluxkit {

namespace {

// |lvl><lvl| at the given truncation; zero when the level is cut off.
Mat level_projector(int lvl, int levels) {
  Mat p = Mat::Zero(levels, levels);
  if (lvl < levels) p(lvl, lvl) = 1.0;
  return p;
}

void validate_sites(const MultilevelSpec& spec) {
  if (spec.levels < 3) throw std::invalid_argument("multilevel: levels must be at least 3");
  if (!(spec.omega1 > 0.0) || !(spec.omega2 > 0.0))
    throw std::invalid_argument("multilevel: site frequencies must be positive");
  if (!(spec.alpha_ej >= 0.0))
    throw std::invalid_argument("multilevel: coupler energy must be nonnegative");
}

// The drive addresses alpha_i - detune_i; frame and tones follow it together.
double drive_alpha1(const MultilevelSpec& spec) { return spec.alpha1 - spec.detune1; }
double drive_alpha2(const MultilevelSpec& spec) { return spec.alpha2 - spec.detune2; }

struct MultilevelSystem {
  std::vector<int> dims;
  Mat n_total;              // n1 + n2 embedded on the pair space
  RotatingFrame frame;      // multilevel_frame(spec)
  RotatingFrame frame_ext;  // frame plus omega1 (n1 + n2)
  double period = 0.0;
  double tone_max = 0.0;    // fastest drive tone, for harmonic-tail bounds
  TimeDependentOperator lab;
};

MultilevelSystem build_system(const MultilevelSpec& spec) {
  validate_sites(spec);
  const double delta = spec.omega2 - spec.omega1;
  if (!(delta > 0.0))
    throw std::invalid_argument("multilevel: omega2 must exceed omega1 (positive detuning)");
  const int levels = spec.levels;
  const std::vector<int> dims{levels, levels};
  const BosonOps bt = boson_ops(levels);

  MultilevelSystem sys;
  sys.dims = dims;
  const Mat site1 = spec.omega1 * bt.n - spec.alpha1 * level_projector(2, levels) -
                    spec.beta1 * level_projector(3, levels);
  const Mat site2 = spec.omega2 * bt.n - spec.alpha2 * level_projector(2, levels) -
                    spec.beta2 * level_projector(3, levels);
  const Mat h_static = embed(site1, 0, dims).mat + embed(site2, 1, dims).mat;
  sys.n_total = embed(bt.n, 0, dims).mat + embed(bt.n, 1, dims).mat;

  DriveSignal signal = multilevel_signal(spec.k0, spec.k1, spec.k2, spec.k3, delta,
                                         drive_alpha1(spec), drive_alpha2(spec));
  sys.frame = multilevel_frame(spec);
  sys.frame_ext = RotatingFrame{sys.frame.diag + spec.omega1 * sys.n_total.diagonal().real(), dims};

  // Every in-frame element rotation is an integer combination of the site,
  // drive-target, and tone frequencies, so their common period is exact for
  // the average.
  std::vector<double> freqs{spec.omega1, spec.omega2, drive_alpha1(spec), drive_alpha2(spec)};
  for (const Tone& tone : signal.tones)
    freqs.push_back(signal.base_freq * static_cast<double>(tone.freq_num) /
                    static_cast<double>(tone.freq_den));
  double base = 0.0;
  for (double f : freqs)
    if (std::abs(f) > 1e-12 && (base == 0.0 || std::abs(f) < base)) base = std::abs(f);
  sys.period = commensurate_period(base, freqs);
  sys.tone_max = signal.max_freq();

  const Mat sin_op = spec.s * (bt.adag + bt.a);
  const Mat cos_op = spec.c0 * Mat::Identity(levels, levels) + spec.c * bt.n;
  sys.lab = junction_drive_operator(h_static, sin_op, cos_op, sin_op, cos_op, spec.alpha_ej,
                                    std::move(signal), dims);
  return sys;
}

}  // namespace

RotatingFrame multilevel_frame(const MultilevelSpec& spec) {
  validate_sites(spec);
  const int levels = spec.levels;
  const std::vector<int> dims{levels, levels};
  const double delta = spec.omega2 - spec.omega1;
  const Mat g = -drive_alpha1(spec) * embed(level_projector(2, levels), 0, dims).mat +
                delta * embed(boson_ops(levels).n, 1, dims).mat -
                drive_alpha2(spec) * embed(level_projector(2, levels), 1, dims).mat;
  return make_frame(g, dims);
}

TimeDependentOperator multilevel_lab_hamiltonian(const MultilevelSpec& spec) {
  return build_system(spec).lab;
}

double multilevel_period(const MultilevelSpec& spec) { return build_system(spec).period; }

Operator effective_multilevel_hamiltonian(const MultilevelSpec& spec) {
  MultilevelSystem sys = build_system(spec);
  // Tight quadrature: the diagonal identity is an exactness claim, so the
  // averaging error must sit well below every retained coupling.
  const Mat avg = time_average(to_rotating_frame(sys.lab, sys.frame_ext), sys.period, 0, 1e-12);
  return Operator(avg + spec.omega1 * sys.n_total, sys.dims);
}

namespace {

// Second-difference curvature of the corrected diagonal, per site.
NonlinearitySuppression residuals_from(const Mat& d, const MultilevelSpec& spec) {
  const int levels = spec.levels;
  auto diag_at = [&](int n1, int n2) { return d(n1 * levels + n2, n1 * levels + n2).real(); };
  NonlinearitySuppression out;
  out.residual_alpha1 = -(diag_at(2, 0) - 2.0 * diag_at(1, 0) + diag_at(0, 0));
  out.residual_alpha2 = -(diag_at(0, 2) - 2.0 * diag_at(0, 1) + diag_at(0, 0));
  double ratio = 0.0;
  bool any = false;
  if (spec.alpha1 != 0.0) {
    ratio = std::max(ratio, std::abs(out.residual_alpha1) / std::abs(spec.alpha1));
    any = true;
  }
  if (spec.alpha2 != 0.0) {
    ratio = std::max(ratio, std::abs(out.residual_alpha2) / std::abs(spec.alpha2));
    any = true;
  }
  if (!any)
    ratio = (out.residual_alpha1 == 0.0 && out.residual_alpha2 == 0.0)
                ? 0.0
                : std::numeric_limits<double>::infinity();
  out.ratio_to_bare = ratio;
  return out;
}

}  // namespace

NonlinearitySuppression nonlinearity_suppression(const MultilevelSpec& spec) {
  MultilevelSystem sys = build_system(spec);
  const TimeDependentOperator rot = to_rotating_frame(sys.lab, sys.frame_ext);
  const int dim = rot.dim;
  const double wb = 2.0 * M_PI / sys.period;

  // A zero coupler leaves the in-frame Hamiltonian static and diagonal: the
  // curvature then comes from the frame cancellation alone. (Zero tone
  // amplitudes are *not* enough for this shortcut: the pi/2 flux offset keeps
  // the single-photon junction term on at full strength.)
  if (spec.alpha_ej == 0.0) return residuals_from(rot.at(0.0), spec);

  // Exact tone decomposition H(t) = sum_m A_m e^{i m wb t} on a uniform grid
  // over the commensurate period, one FFT per matrix element. The harmonic
  // content is the frame span plus multi-tone products of the flux signal,
  // whose amplitudes fall off factorially with the order; eight extra tone
  // orders bound the tail below rounding. rot.max_freq already covers the
  // frame span plus one tone.
  const int m_top = static_cast<int>(std::ceil((rot.max_freq + 8.0 * sys.tone_max) / wb));
  int nfft = 1;
  while (nfft < 4 * (m_top + 1)) nfft *= 2;
  if (nfft < 2048) nfft = 2048;

  Eigen::MatrixXcd samples(nfft, dim * dim);
  Mat buf(dim, dim);
  for (int j = 0; j < nfft; ++j) {
    rot.eval_into(sys.period * static_cast<double>(j) / static_cast<double>(nfft), buf);
    samples.row(j) = Eigen::Map<const Vec>(buf.data(), dim * dim).transpose();
  }
  std::vector<Mat> coef(static_cast<std::size_t>(m_top) + 1, Mat(dim, dim));
  Eigen::FFT<double> fft;
  Eigen::VectorXcd in(nfft), bins(nfft);
  for (int e = 0; e < dim * dim; ++e) {
    in = samples.col(e);
    fft.fwd(bins, in);
    for (int m = 0; m <= m_top; ++m)
      coef[static_cast<std::size_t>(m)](e % dim, e / dim) = bins(m) / static_cast<double>(nfft);
  }

  // Static second-order correction: positive harmonics contribute the
  // commutator level-repulsion term.
  Mat d = coef[0];
  for (int m = 1; m <= m_top; ++m) {
    const Mat& a = coef[static_cast<std::size_t>(m)];
    d += (a * a.adjoint() - a.adjoint() * a) / (static_cast<double>(m) * wb);
  }
  return residuals_from(d, spec);
}

}  // namespace fluxkit
