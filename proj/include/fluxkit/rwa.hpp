#pragma once
// Rotating-frame machinery and effective-Hamiltonian extraction: frame
// transformation, periodic time averaging, Floquet logarithm, the closed-form
// coefficient table for the universal two-qubit drive, and the numerical
// extraction pipeline that the calibration loop treats as its oracle.

#include <vector>

#include "fluxkit/device.hpp"
#include "fluxkit/drive.hpp"
#include "fluxkit/operators.hpp"

namespace fluxkit {

// Rotating frame generated by a Hermitian operator diagonal in the
// computational basis: U(t) = exp(+i G t), H'(t) = U H U^dag - G.
struct RotatingFrame {
  Eigen::VectorXd diag;
  std::vector<int> dims;
};

// G = sum_j omega_j n_j over the subsystems (number operators).
RotatingFrame qubit_frame(const std::vector<double>& omegas, const std::vector<int>& dims);

// Validates that g is Hermitian and diagonal (off-diagonal max < 1e-12).
RotatingFrame make_frame(const Mat& g, std::vector<int> dims);

Mat frame_unitary(const RotatingFrame& f, double t);  // exp(+i G t)

// Largest |g_j - g_k|: bound on the frame-induced oscillation frequencies.
double frame_max_freq(const RotatingFrame& f);

// H'(t) = U(t) H(t) U(t)^dag - G via elementwise phase factors.
TimeDependentOperator to_rotating_frame(const TimeDependentOperator& h, const RotatingFrame& f);

// Exact common period of a set of angular frequencies snapped to rationals
// over base_freq. Frequencies below 1e-12 are skipped; returns 0 when none
// remain.
double commensurate_period(double base_freq, const std::vector<double>& freqs);

// (1/T) integral_0^T H(t) dt by composite Simpson with interval doubling
// until successive averages agree to tol in max-norm. The initial grid is
// max(n_samples, 64 points per fastest cycle of h.max_freq, 64).
Mat time_average(const TimeDependentOperator& h, double period, long long n_samples = 0,
                 double tol = 1e-10);

// H_eff = (i/T) log U(T, 0) with eigenphases on (-pi, pi]; throws when an
// eigenphase sits within 1e-6 of the branch cut. Result is Hermitized.
Mat floquet_effective(const TimeDependentOperator& h, double period, double prop_tol = 1e-9);

// First-order coefficient table of the rotating-frame effective Hamiltonian
// of the flux-driven coupler: sum_ab c_ab sigma_a (x) sigma_b.
PauliTable analytic_cab(const UniversalDriveParams& p, const PhaseCoeffs& q1,
                        const PhaseCoeffs& q2, double alpha_ej);

// Coefficient table of a two-qubit effective Hamiltonian. Requires a
// Hermitian 4x4 operator over dims {2, 2}.
PauliTable extract_cab(const Operator& h_eff);

enum class ExtractionMethod { average, floquet };

// Numerical coefficient table: assemble the lab-frame Hamiltonian, move to
// the frame rotating at both qubit frequencies, extract the effective
// Hamiltonian over one commensurate period, and Pauli-decompose it.
PauliTable measured_cab(const QubitSpec& q1, const QubitSpec& q2, const JunctionCouplerSpec& c,
                        const UniversalDriveParams& p,
                        ExtractionMethod method = ExtractionMethod::average);

// The rotating-frame Hamiltonian and its averaging period for the universal
// drive (shared by measured_cab and the long-gate comparisons).
struct RotatingSystem {
  TimeDependentOperator h_rot;
  RotatingFrame frame;
  double period = 0.0;
};
RotatingSystem universal_rotating_system(const QubitSpec& q1, const QubitSpec& q2,
                                         const JunctionCouplerSpec& c,
                                         const UniversalDriveParams& p);

}  // namespace fluxkit
