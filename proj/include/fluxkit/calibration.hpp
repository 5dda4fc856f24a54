#pragma once
// Inverse drive design: a closed-form seed inverts the first-order coefficient
// table channel by channel, then a damped Gauss-Newton loop closes the gap to
// a numerical extraction oracle.

#include <functional>
#include <vector>

#include "fluxkit/device.hpp"
#include "fluxkit/drive.hpp"
#include "fluxkit/operators.hpp"

namespace fluxkit {

// Largest |a_cd - b_cd| over the fifteen non-identity coefficients; the
// identity-identity entry is a global energy offset and never targeted.
double coefficient_residual(const PauliTable& a, const PauliTable& b);

// Closed-form drive parameters whose first-order table reproduces the
// target's two-qubit block: f_zz from the zz entry (signed, no phase can
// absorb its sign), the (x,y)x(x,y) block split into its hopping
// (f_xy0, chi1-chi2) and pump (f_xy2, chi1+chi2) channels, and the quadratic
// half-frequency tones (f_xz, psi1) / (f_zx, psi2) from the xz column and zx
// row. Tone amplitudes come out nonnegative; signs live in the phases.
// Single-qubit target entries are not inverted: they follow from the same
// channels and are reported by the oracle. Throws std::invalid_argument when
// a required amplitude exceeds the drive range (0.3) or a channel's phase
// coefficient product vanishes while its target does not.
UniversalDriveParams synthesize_seed(const PauliTable& target, const PhaseCoeffs& q1,
                                     const PhaseCoeffs& q2, double alpha_ej);

// Drive parameters -> extracted coefficient table (typically
// measured_cab over one averaging period).
using CabOracle = std::function<PauliTable(const UniversalDriveParams&)>;

struct CalibrationResult {
  UniversalDriveParams params;           // best accepted parameters
  UniversalDriveParams seed;             // where the refinement started
  PauliTable achieved;                   // oracle table at params, all entries
  double residual = 0.0;                 // coefficient_residual(achieved, target)
  int iterations = 0;                    // accepted Gauss-Newton steps
  bool converged = false;                // residual < 1e-4 * alpha_ej reached
  std::vector<double> residual_history;  // seed residual, then each accepted step
};

// Damped Gauss-Newton on the nine drive parameters minimizing the oracle's
// fifteen-entry coefficient residual. Internally each transverse channel is
// optimized as a signed quadrature pair (polar amplitude/phase is degenerate
// at zero amplitude and stalls when a channel must cross the origin); the
// result is converted back to nonnegative amplitudes and phases. Jacobian by
// central finite differences (step 1e-4, one-sided at the drive-range
// boundary); candidate steps damped by {1, 1/2, 1/4, 1/8, 1/16} and accepted
// only when the oracle max-norm residual improves, so the recorded history is
// strictly decreasing. Stops at residual < 1e-4 * alpha_ej, after 50
// iterations, or when no damped step improves; the last two return
// best-so-far with converged = false.
CalibrationResult refine(const UniversalDriveParams& seed, const PauliTable& target,
                         const CabOracle& oracle, double alpha_ej);

// End-to-end calibration: closed-form seed, then refinement against the
// numerical time-average extraction of the given coupler.
CalibrationResult calibrate(const PauliTable& target, const QubitSpec& q1, const QubitSpec& q2,
                            const JunctionCouplerSpec& c);

}  // namespace fluxkit
