#include <cmath>
#include <complex>
#include <stdexcept>

#include "doctest.h"
#include "fluxkit/device.hpp"
#include "fluxkit/drive.hpp"
#include "fluxkit/dynamics.hpp"
#include "fluxkit/operators.hpp"
#include "fluxkit/readout.hpp"
#include "fluxkit/rwa.hpp"

using namespace fluxkit;

namespace {

constexpr double kOmegaT = 1.0;
constexpr double kOmegaR = 1.25;
constexpr double kDelta = kOmegaR - kOmegaT;  // 0.25
constexpr double kAlpha2 = 0.05;
constexpr double kG = 0.025;

PhaseCoeffs reference_phase() {
  PhaseCoeffs p;
  p.c0 = 0.9;
  p.c = 0.05;
  p.c2 = -0.04;
  p.s1 = 0.3;
  p.s2 = 0.3 * std::sqrt(2.0);
  p.q2 = std::sqrt(2.0);
  return p;
}

QubitSpec reference_qubit(const PhaseCoeffs& phase) {
  QubitSpec q;
  q.omega = kOmegaT;
  q.levels = 3;
  q.alpha2 = kAlpha2;
  q.phase = phase;
  return q;
}

// Exact eigenvector of es whose overlap with bare index `bare` dominates,
// phase-fixed so the bare component is real positive.
Vec exact_dressed(const Eigen::SelfAdjointEigenSolver<Mat>& es, int bare, double* energy = nullptr) {
  int best = 0;
  double best_ov = -1.0;
  for (int k = 0; k < es.eigenvectors().cols(); ++k) {
    const double ov = std::abs(es.eigenvectors()(bare, k));
    if (ov > best_ov) {
      best_ov = ov;
      best = k;
    }
  }
  REQUIRE(best_ov * best_ov > 0.5);
  Vec v = es.eigenvectors().col(best);
  v *= std::abs(v(bare)) / v(bare);
  if (energy) *energy = es.eigenvalues()(best);
  return v;
}

// Columns = exact dressed states ordered by their bare index.
Mat dressed_basis(const Eigen::SelfAdjointEigenSolver<Mat>& es) {
  const int dim = static_cast<int>(es.eigenvectors().cols());
  Mat w(dim, dim);
  for (int j = 0; j < dim; ++j) w.col(j) = exact_dressed(es, j);
  return w;
}

}  // namespace

TEST_SUITE("readout") {

TEST_CASE("dressed amplitude formulas and validity guards") {
  const double q2 = std::sqrt(2.0);
  const DressedAmplitudes d = dressed_states(kG, kDelta, kAlpha2, q2, 2);
  CHECK(d.n == 2);
  CHECK(d.ground_1nm1 == doctest::Approx(kG * std::sqrt(2.0) / kDelta));
  CHECK(d.excited_2nm1 == doctest::Approx(q2 * kG * std::sqrt(2.0) / (kDelta + kAlpha2)));
  CHECK(d.excited_0np1 == doctest::Approx(-kG * std::sqrt(3.0) / kDelta));

  // g = 0 leaves the bare states untouched.
  const DressedAmplitudes bare = dressed_states(0.0, kDelta, kAlpha2, q2, 3);
  CHECK(bare.ground_1nm1 == 0.0);
  CHECK(bare.excited_2nm1 == 0.0);
  CHECK(bare.excited_0np1 == 0.0);
  const DressedElements none = dressed_matrix_elements(reference_phase(), 0.0, kDelta, kAlpha2, 2);
  CHECK(none.cos_hop == 0.0);
  CHECK(none.cos_pump == 0.0);
  CHECK(none.sin_ground == 0.0);
  CHECK(none.sin_excited == 0.0);

  CHECK_THROWS_AS(dressed_states(kG, 0.0, kAlpha2, q2, 1), std::invalid_argument);
  CHECK_THROWS_AS(dressed_states(kG, kDelta, -kDelta, q2, 1), std::invalid_argument);
  CHECK_THROWS_AS(dressed_states(0.1, 0.25, kAlpha2, q2, 1), std::invalid_argument);
  CHECK_THROWS_AS(dressed_states(kG, kDelta, kAlpha2, q2, -1), std::invalid_argument);
}

TEST_CASE("perturbative dressed states overlap the exact eigenvectors") {
  const PhaseCoeffs phase = reference_phase();
  const QubitSpec qubit = reference_qubit(phase);
  const int dim_r = 12;
  const Operator h0 = dispersive_hamiltonian(qubit, {kOmegaR, dim_r}, {kG});
  const Eigen::SelfAdjointEigenSolver<Mat> es(h0.mat);
  REQUIRE(es.info() == Eigen::Success);

  const int n = 2;
  const DressedAmplitudes amp = dressed_states(kG, kDelta, kAlpha2, phase.q2, n);

  // Qubit ground, n photons: admixture of |1, n-1>.
  Vec pt0 = Vec::Zero(h0.dim());
  pt0(n) = 1.0;
  pt0(dim_r + n - 1) = amp.ground_1nm1;
  pt0.normalize();
  const Vec ex0 = exact_dressed(es, n);
  CHECK(std::norm(ex0.dot(pt0)) >= 1.0 - 1e-3);
  CHECK(std::norm(ex0.dot(pt0)) >= 1.0 - 2.0 * (kG / kDelta) * (kG / kDelta));

  // Qubit excited, n photons: admixtures of |2, n-1> and |0, n+1>.
  Vec pt1 = Vec::Zero(h0.dim());
  pt1(dim_r + n) = 1.0;
  pt1(2 * dim_r + n - 1) = amp.excited_2nm1;
  pt1(n + 1) = amp.excited_0np1;
  pt1.normalize();
  const Vec ex1 = exact_dressed(es, dim_r + n);
  CHECK(std::norm(ex1.dot(pt1)) >= 1.0 - 1e-3);
  CHECK(std::norm(ex1.dot(pt1)) >= 1.0 - 2.0 * (kG / kDelta) * (kG / kDelta));

  // Signed component ratios of the exact vectors pin each admixture sign.
  CHECK((ex0(dim_r + n - 1) / ex0(n)).real() ==
        doctest::Approx(amp.ground_1nm1).epsilon(0.10));
  CHECK((ex1(2 * dim_r + n - 1) / ex1(dim_r + n)).real() ==
        doctest::Approx(amp.excited_2nm1).epsilon(0.10));
  CHECK((ex1(n + 1) / ex1(dim_r + n)).real() ==
        doctest::Approx(amp.excited_0np1).epsilon(0.10));
}

TEST_CASE("dressed drive elements match exact sandwiches within three percent") {
  const PhaseCoeffs phase = reference_phase();
  const int dim_r = 12;

  // Relative deviations of the four first-order elements from the exact
  // sandwiches at coupling g, each taken at its lowest photon occupation
  // (the first-order error grows with n through the normalization deficit).
  struct Errs { double max, hop; };
  auto rel_errs = [&](double g) {
    QubitSpec qubit = reference_qubit(phase);
    const Operator h0 = dispersive_hamiltonian(qubit, {kOmegaR, dim_r}, {g});
    const Eigen::SelfAdjointEigenSolver<Mat> es(h0.mat);
    const auto [sin_phi, cos_phi] = phase_operators(qubit);
    const std::vector<int> dims = {3, dim_r};
    const Mat cop = embed(cos_phi, 0, dims).mat;
    const Mat sop = embed(sin_phi, 0, dims).mat;

    const Vec d00 = exact_dressed(es, 0);           // (0, 0)
    const Vec d01 = exact_dressed(es, 1);           // (0, 1)
    const Vec d10 = exact_dressed(es, dim_r);       // (1, 0)
    const Vec d11 = exact_dressed(es, dim_r + 1);   // (1, 1)

    const DressedElements e0 = dressed_matrix_elements(phase, g, kDelta, kAlpha2, 0);
    const DressedElements e1 = dressed_matrix_elements(phase, g, kDelta, kAlpha2, 1);
    const double hop = d10.dot(cop * d01).real();    // (1,0) <- (0,1)
    const double pump = d11.dot(cop * d00).real();   // (1,1) <- (0,0)
    const double disp0 = d01.dot(sop * d00).real();  // (0,1) <- (0,0)
    const double disp1 = d11.dot(sop * d10).real();  // (1,1) <- (1,0)

    Errs err{0.0, std::abs(hop / e1.cos_hop - 1.0)};
    err.max = err.hop;
    err.max = std::max(err.max, std::abs(pump / e0.cos_pump - 1.0));
    err.max = std::max(err.max, std::abs(disp0 / e0.sin_ground - 1.0));
    err.max = std::max(err.max, std::abs(disp1 / e0.sin_excited - 1.0));
    return err;
  };

  const Errs err_full = rel_errs(kG);
  const Errs err_half = rel_errs(kG / 2.0);
  CHECK(err_full.max <= 0.03);
  // First-order formulas: the relative error is quadratic in g. The hop
  // element carries the cleanest signal of that scaling.
  const double ratio = err_full.hop / err_half.hop;
  CHECK(ratio >= 3.0);
  CHECK(ratio <= 6.0);
}

TEST_CASE("matched detunings merge the two displacement elements") {
  PhaseCoeffs phase = reference_phase();
  phase.s2 = 2.0 * phase.s1 / phase.q2;  // q2 s2 = 2 s1
  const DressedElements e = dressed_matrix_elements(phase, kG, kDelta, 0.0, 3);
  CHECK(e.sin_excited == doctest::Approx(e.sin_ground).epsilon(1e-12));
}

TEST_CASE("measurement axis assembly from the three drive tones") {
  const PhaseCoeffs phase = reference_phase();
  const double chi = 0.6;

  SUBCASE("sin-phi tone alone sets a pure z axis") {
    const ReadoutHamiltonian h =
        effective_readout_hamiltonian(0.0, 0.0, 0.15, chi, phase, kG, kDelta, kAlpha2);
    // lambda_z = -(f3 g / 2)(2 s1/Delta - q2 s2/(Delta+alpha2)) < 0 here.
    CHECK(h.h(0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(h.h(1) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(h.h(2) == doctest::Approx(-1.0));
    CHECK(h.v_momentum.norm() == doctest::Approx(0.0).epsilon(1e-15));
    const double lz = -0.5 * 0.15 * kG *
                      (2.0 * phase.s1 / kDelta - phase.q2 * phase.s2 / (kDelta + kAlpha2));
    CHECK(h.lambda == doctest::Approx(std::abs(lz)));
  }

  SUBCASE("cos-phi tones alone set an equatorial axis") {
    const ReadoutHamiltonian h =
        effective_readout_hamiltonian(0.12, 0.1, 0.0, chi, phase, kG, kDelta, kAlpha2);
    CHECK(h.h(2) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(h.spin_independent == doctest::Approx(0.0).epsilon(1e-15));
    // hop + pump < 0, so the axis points along -(cos chi, -sin chi).
    CHECK(h.h(0) == doctest::Approx(-std::cos(chi)));
    CHECK(h.h(1) == doctest::Approx(std::sin(chi)));
    CHECK(h.hop == doctest::Approx(-0.1 * phase.c * kG / kDelta));
    CHECK(h.pump ==
          doctest::Approx(0.12 * phase.q2 * phase.c2 * kG / (2.0 * (kDelta + kAlpha2))));

    // chi = 0 pins the equatorial axis to the x direction.
    const ReadoutHamiltonian hx =
        effective_readout_hamiltonian(0.12, 0.1, 0.0, 0.0, phase, kG, kDelta, kAlpha2);
    CHECK(hx.h(0) == doctest::Approx(-1.0));
    CHECK(std::abs(hx.h(1)) <= 1e-15);
    CHECK(std::abs(hx.h(2)) <= 1e-15);
  }

  SUBCASE("matched sin-phi elements cancel the z component") {
    PhaseCoeffs tuned = phase;
    tuned.s2 = 2.0 * tuned.s1 * (kDelta + kAlpha2) / (tuned.q2 * kDelta);
    const ReadoutHamiltonian h =
        effective_readout_hamiltonian(0.12, 0.1, 0.15, chi, tuned, kG, kDelta, kAlpha2);
    CHECK(std::abs(h.h(2)) <= 1e-9);
    CHECK(h.spin_independent ==
          doctest::Approx(-0.5 * 0.15 * tuned.q2 * tuned.s2 * kG / (kDelta + kAlpha2)));
  }

  SUBCASE("position and momentum vectors are orthogonal") {
    const ReadoutHamiltonian h =
        effective_readout_hamiltonian(0.12, 0.1, 0.15, chi, phase, kG, kDelta, kAlpha2);
    CHECK(std::abs(h.v_position.dot(h.v_momentum)) <= 1e-18);
    CHECK(h.spin_independent ==
          doctest::Approx(-0.5 * 0.15 * phase.q2 * phase.s2 * kG / (kDelta + kAlpha2)));
  }

  SUBCASE("no drive or a fully cancelled axis throws") {
    CHECK_THROWS_AS(effective_readout_hamiltonian(0.0, 0.0, 0.0, chi, phase, kG, kDelta, kAlpha2),
                    std::invalid_argument);
    PhaseCoeffs tuned = phase;
    tuned.s2 = 2.0 * tuned.s1 * (kDelta + kAlpha2) / (tuned.q2 * kDelta);
    CHECK_THROWS_AS(effective_readout_hamiltonian(0.0, 0.0, 0.15, chi, tuned, kG, kDelta, kAlpha2),
                    std::invalid_argument);
  }
}

TEST_CASE("axis operator commutes with the effective hamiltonian at the matched point") {
  const PhaseCoeffs phase = reference_phase();
  const double chi = 0.6;
  // hop = pump when f2 = f1 q2 |c2| Delta / (2 c (Delta+alpha2)).
  const double f1 = 0.12;
  const double f2 = -f1 * phase.q2 * phase.c2 * kDelta / (2.0 * phase.c * (kDelta + kAlpha2));
  const ReadoutHamiltonian h =
      effective_readout_hamiltonian(f1, f2, 0.0, chi, phase, kG, kDelta, kAlpha2);
  CHECK(h.hop == doctest::Approx(h.pump));
  CHECK(h.v_momentum.norm() <= 1e-18);

  const int dim_r = 5;
  const Operator full = assembled_readout_hamiltonian(h, dim_r);
  CHECK(full.is_hermitian());
  const Mat axis = kron(h.h(0) * pauli_x() + h.h(1) * pauli_y() + h.h(2) * pauli_z(),
                        Mat::Identity(dim_r, dim_r));
  CHECK(max_abs(full.mat * axis - axis * full.mat) <= 1e-15);

  // Away from the matched point the momentum quadrature spoils the symmetry.
  const ReadoutHamiltonian h2 =
      effective_readout_hamiltonian(f1, 2.0 * f2, 0.0, chi, phase, kG, kDelta, kAlpha2);
  const Operator full2 = assembled_readout_hamiltonian(h2, dim_r);
  const Mat axis2 = kron(h2.h(0) * pauli_x() + h2.h(1) * pauli_y() + h2.h(2) * pauli_z(),
                         Mat::Identity(dim_r, dim_r));
  CHECK(max_abs(full2.mat * axis2 - axis2 * full2.mat) > 1e-5);
}

TEST_CASE("floquet effective hamiltonian ratifies the four drive-induced couplings") {
  const PhaseCoeffs phase = reference_phase();
  const QubitSpec qubit = reference_qubit(phase);
  const int dim_r = 6;
  const double chi = 0.6;

  // Spot-check the closed forms at a combined drive (they are linear per tone).
  const ReadoutHamiltonian eff =
      effective_readout_hamiltonian(0.12, 0.1, 0.15, chi, phase, kG, kDelta, kAlpha2);
  CHECK(eff.hop == doctest::Approx(-5.0e-4));
  CHECK(eff.pump == doctest::Approx(-2.8284271e-4));
  CHECK(eff.spin_independent == doctest::Approx(-3.75e-3));

  const Operator h0 = dispersive_hamiltonian(qubit, {kOmegaR, dim_r}, {kG});
  const auto [sin_phi, cos_phi] = phase_operators(qubit);
  const std::vector<int> dims = {3, dim_r};
  const Mat cop = embed(cos_phi, 0, dims).mat;
  const Mat sop = embed(sin_phi, 0, dims).mat;
  const RotatingFrame frame = qubit_frame({kOmegaT, kOmegaR}, dims);
  const Eigen::SelfAdjointEigenSolver<Mat> es(h0.mat);
  const Mat w = dressed_basis(es);

  // Each tone is ratified in isolation: with several tones on at once their
  // second-order cross terms pollute every coupling at the same order as the
  // couplings themselves.
  auto dressed_floquet = [&](double f1, double f2, double f3) {
    TimeDependentOperator lab;
    lab.dims = dims;
    lab.dim = h0.dim();
    lab.max_freq = kOmegaR + kOmegaT;
    lab.eval_into = [&, f1, f2, f3, h0m = h0.mat](double t, Mat& out) {
      const double a_cos =
          f1 * std::cos((kOmegaR + kOmegaT) * t + chi) + f2 * std::cos(kDelta * t - chi);
      out = h0m + a_cos * cop - 2.0 * f3 * std::cos(kOmegaR * t) * sop;
    };
    // All tones and frame residuals are multiples of 0.25.
    const double period = 2.0 * M_PI / kDelta;
    const Mat h_eff = floquet_effective(to_rotating_frame(lab, frame), period, 1e-9);
    return Mat(w.adjoint() * h_eff * w);
  };
  const cplx phase_chi = std::polar(1.0, -chi);

  // Difference-frequency tone: the excitation-preserving hop, quiet pump.
  {
    const ReadoutHamiltonian e =
        effective_readout_hamiltonian(0.0, 0.1, 0.0, chi, phase, kG, kDelta, kAlpha2);
    const Mat d = dressed_floquet(0.0, 0.1, 0.0);
    const cplx hop_el = d(dim_r + 0, 1);    // (1,0) <- (0,1)
    const cplx pump_el = d(dim_r + 1, 0);   // (1,1) <- (0,0)
    CHECK(std::abs(hop_el - e.hop * phase_chi) <= 0.06 * std::abs(e.hop));
    CHECK(std::abs(pump_el) <= 0.02 * std::abs(e.hop));
  }
  // Sum-frequency tone: the pair pump.
  {
    const ReadoutHamiltonian e =
        effective_readout_hamiltonian(0.12, 0.0, 0.0, chi, phase, kG, kDelta, kAlpha2);
    const Mat d = dressed_floquet(0.12, 0.0, 0.0);
    const cplx pump_el = d(dim_r + 1, 0);
    CHECK(std::abs(pump_el - e.pump * phase_chi) <= 0.06 * std::abs(e.pump));
  }
  // Resonator-frequency tone: the two conditional displacements.
  {
    const ReadoutHamiltonian e =
        effective_readout_hamiltonian(0.0, 0.0, 0.06, chi, phase, kG, kDelta, kAlpha2);
    const Mat d = dressed_floquet(0.0, 0.0, 0.06);
    const cplx disp0_el = d(1, 0);              // (0,1) <- (0,0)
    const cplx disp1_el = d(dim_r + 1, dim_r);  // (1,1) <- (1,0)
    const cplx disp0_expect(e.spin_independent + e.v_position(2), 0.0);
    const cplx disp1_expect(e.spin_independent - e.v_position(2), 0.0);
    CHECK(std::abs(disp0_el - disp0_expect) <= 0.06 * std::abs(disp0_expect));
    CHECK(std::abs(disp1_el - disp1_expect) <= 0.06 * std::abs(disp1_expect));
  }
}

TEST_CASE("slope discrimination matches the axis strength") {
  const PhaseCoeffs phase = reference_phase();
  ReadoutSimSpec spec;
  spec.qubit = reference_qubit(phase);
  spec.resonator = {kOmegaR, 8};
  spec.g = kG;
  spec.f1 = 0.05;
  spec.f2 = 0.05;
  spec.f3 = 0.05;
  spec.chi = 0.6;
  // Two full difference-frequency periods; fitting from t = 0 keeps the
  // residual dispersive phase drift of the displacement small.
  spec.duration = 16.0 * M_PI;
  spec.samples = 200;
  spec.fit_start = 0.0;
  spec.fit_stop = spec.duration;

  const ReadoutResult r = simulate_readout(spec);
  const double lambda = r.effective.lambda;
  CHECK(lambda == doctest::Approx(3.103685e-4).epsilon(1e-3));

  // Prepared on +h the fitted phase-space slope is -i lambda up to a slow
  // phase rotation at the residual dispersive shift; on -h it flips. The
  // magnitudes carry the 10% comparison, the imaginary parts the sign.
  CHECK(std::abs(r.plus.slope) == doctest::Approx(lambda).epsilon(0.10));
  CHECK(std::abs(r.minus.slope) == doctest::Approx(lambda).epsilon(0.10));
  CHECK(std::abs(r.discrimination) == doctest::Approx(2.0 * lambda).epsilon(0.10));
  CHECK(r.plus.slope.imag() < 0.0);
  CHECK(r.minus.slope.imag() > 0.0);
}

TEST_CASE("axis populations stay pinned during readout") {
  PhaseCoeffs phase;
  phase.c0 = 0.5;
  phase.c = 0.3;
  phase.c2 = -0.1;
  phase.s1 = 0.4;
  phase.s2 = 0.1;
  phase.q2 = std::sqrt(2.0);

  // Pure z-axis readout: the conditional displacement tone alone measures
  // without transverse back-action, the cleanest non-demolition regime.
  ReadoutSimSpec spec;
  spec.qubit = reference_qubit(phase);
  spec.resonator = {kOmegaR, 8};
  spec.g = kG;
  spec.f1 = 0.0;
  spec.f2 = 0.0;
  spec.f3 = 0.04;
  spec.chi = 0.7;
  spec.duration = 380.0;
  spec.samples = 250;
  spec.fit_stop = spec.duration;

  const ReadoutResult r = simulate_readout(spec);
  CHECK(r.effective.lambda == doctest::Approx(1.364e-3).epsilon(1e-2));
  // The run covers one discrimination time 1/(2 lambda), over which the
  // eigenstate populations must hold to 1 - 5 (g/Delta)^2 = 0.95.
  CHECK(spec.duration >= 0.5 / r.effective.lambda);
  for (double p : r.plus.axis_population) CHECK(p >= 0.95);
  for (double p : r.minus.axis_population) CHECK(p >= 0.95);
  CHECK(r.plus.axis_population.front() == doctest::Approx(1.0));
  CHECK(r.minus.axis_population.front() == doctest::Approx(1.0));
  // The two prepared states separate in phase space all the while.
  CHECK(std::abs(r.discrimination) >= 1.5 * r.effective.lambda);
}

TEST_CASE("flux-biased drive and its three-tone reduction agree") {
  const PhaseCoeffs phase = reference_phase();
  const QubitSpec qubit = reference_qubit(phase);
  const int dim_r = 6;

  SplitTransmonDriveParams p;
  p.ej1 = 1.3;
  p.ej2 = 0.7;
  p.k1 = 0.1;
  p.k2 = 0.1;
  p.k3 = 0.08;
  p.chi = 0.7;
  const auto [sig, coeffs] = readout_flux_signal(p, kOmegaR, kOmegaT);
  CHECK(coeffs.f1 == doctest::Approx(2.0 * 0.01 / 4.0));
  CHECK(coeffs.f3 == doctest::Approx(0.6 * 0.08 / 2.0));

  const Operator h0 = dispersive_hamiltonian(qubit, {kOmegaR, dim_r}, {kG});
  const auto [sin_phi, cos_phi] = phase_operators(qubit);
  const std::vector<int> dims = {3, dim_r};
  const Mat cop = embed(cos_phi, 0, dims).mat;
  const Mat sop = embed(sin_phi, 0, dims).mat;
  const RotatingFrame frame = qubit_frame({kOmegaT, kOmegaR}, dims);
  // Tones at (1.125, 0.125, 1.25) and frame frequencies share base 0.125.
  const double period = 2.0 * M_PI / 0.125;

  // Exact junction drive, with the exact DC component subtracted so both
  // Hamiltonians share the same static part.
  const double ej_sum = p.ej1 + p.ej2;
  const double ej_diff = p.ej1 - p.ej2;
  const double dc = std::cyl_bessel_j(0, p.k1) * std::cyl_bessel_j(0, p.k2) *
                    std::cyl_bessel_j(0, p.k3);
  TimeDependentOperator flux;
  flux.dims = dims;
  flux.dim = h0.dim();
  flux.max_freq = 2.0 * kOmegaR;
  flux.eval_into = [&, h0m = h0.mat](double t, Mat& out) {
    const double half = 0.5 * sig.evaluate(t);
    out = h0m - ej_sum * (std::cos(half) - dc) * cop - ej_diff * std::sin(half) * sop;
  };

  TimeDependentOperator tones;
  tones.dims = dims;
  tones.dim = h0.dim();
  tones.max_freq = kOmegaR + kOmegaT;
  tones.eval_into = [&, h0m = h0.mat](double t, Mat& out) {
    const double a_cos = coeffs.f1 * std::cos((kOmegaR + kOmegaT) * t + p.chi) +
                         coeffs.f2 * std::cos(kDelta * t - p.chi);
    out = h0m + a_cos * cop - 2.0 * coeffs.f3 * std::cos(kOmegaR * t) * sop;
  };

  const Mat eff_flux = floquet_effective(to_rotating_frame(flux, frame), period, 1e-9);
  const Mat eff_tones = floquet_effective(to_rotating_frame(tones, frame), period, 1e-9);
  const Eigen::SelfAdjointEigenSolver<Mat> es(h0.mat);
  const Mat w = dressed_basis(es);
  const Mat da = w.adjoint() * eff_flux * w;
  const Mat db = w.adjoint() * eff_tones * w;

  // Only the displacement elements are first order in the modulation depths;
  // the hop and pump couplings are second order, where the tones the
  // reduction drops (the half-frequency component of the antisymmetric
  // channel, pairwise Bessel products) contribute at the same order.
  const std::pair<int, int> elems[] = {{1, 0}, {dim_r + 1, dim_r}};
  for (const auto& [row, col] : elems) {
    CAPTURE(row);
    CAPTURE(col);
    CHECK(std::abs(da(row, col) - db(row, col)) <= 0.08 * std::abs(db(row, col)));
  }
}

TEST_CASE("zero drive yields zero discrimination") {
  ReadoutSimSpec spec;
  spec.qubit = reference_qubit(reference_phase());
  spec.resonator = {kOmegaR, 8};
  spec.g = kG;
  spec.f1 = 0.0;
  spec.f2 = 0.0;
  spec.f3 = 0.0;
  spec.chi = 0.0;
  spec.duration = 40.0;
  spec.samples = 50;
  spec.fit_start = 5.0;
  spec.fit_stop = 40.0;

  const ReadoutResult r = simulate_readout(spec);
  CHECK(r.effective.lambda == 0.0);
  CHECK(std::abs(r.discrimination) <= 1e-6);
  // Free evolution holds the dressed-state populations (up to propagator tolerance).
  for (double p : r.plus.axis_population) CHECK(p == doctest::Approx(1.0).epsilon(1e-4));
  for (double p : r.minus.axis_population) CHECK(p == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("runaway displacement trips the truncation guard") {
  ReadoutSimSpec spec;
  spec.qubit = reference_qubit(reference_phase());
  spec.resonator = {kOmegaR, 8};
  spec.g = 0.045;
  spec.f1 = 0.0;
  spec.f2 = 0.0;
  spec.f3 = 0.3;
  spec.chi = 0.0;
  spec.duration = 300.0;
  spec.samples = 150;
  spec.cancel_spin_independent = false;

  // With the spin-independent displacement uncompensated, the strongest
  // in-validity drive piles weight into the top photon levels of an 8-level
  // resonator and must be reported rather than silently continued.
  CHECK_THROWS_AS(simulate_readout(spec), std::runtime_error);

  // A gentle drive in the same geometry stays comfortably truncated.
  spec.f3 = 0.05;
  const ReadoutResult r = simulate_readout(spec);
  double n_max = 0.0;
  for (double n : r.plus.resonator_population) n_max = std::max(n_max, n);
  for (double n : r.minus.resonator_population) n_max = std::max(n_max, n);
  CHECK(n_max <= 1.0);
}

}  // TEST_SUITE readout
