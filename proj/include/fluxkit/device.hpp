#pragma once
// Device descriptions and Hamiltonian assembly: qubit/resonator specs, phase
// operators in the truncated eigenbasis, the flux-driven junction coupler,
// the transmon-resonator dispersive pair, and Cooper-pair-box derivation of
// phase-operator coefficients from junction parameters.

#include <string>
#include <utility>
#include <vector>

#include "fluxkit/drive.hpp"
#include "fluxkit/operators.hpp"

namespace fluxkit {

// Coefficients of sin(phi) and cos(phi) in the lowest qubit eigenstates.
// Two-level convention: sin_phi = s*sigma_x, cos_phi = c0*I + c*sigma_z
// (ground diagonal entry c0 + c). Three-level blocks reuse the same c0, c:
// diag(c0 + c, c0 - c, c0 - 3c) with off-diagonal c2 on 0<->2, and s1, s2 on
// the sin ladder. q2 is the 1->2 charge matrix element ratio.
struct PhaseCoeffs {
  double s = 1.0;
  double c0 = 0.0;
  double c = 1.0;
  double s1 = 1.0;
  double s2 = 1.41421356237309515;  // sqrt(2), harmonic ladder
  double c2 = 0.0;
  double q2 = 1.41421356237309515;
};

struct QubitSpec {
  double omega = 0.0;   // 0 -> 1 transition angular frequency, > 0
  int levels = 2;       // 2 or 3 for phase_operators
  double alpha2 = 0.0;  // anharmonicity: E2 = 2*omega - alpha2
  PhaseCoeffs phase;
};

struct ResonatorSpec {
  double omega = 0.0;
  int dim = 0;  // Fock-space truncation, >= 2
};

struct JunctionCouplerSpec {
  double alpha_ej = 0.0;  // coupler junction energy scale, > 0
};

struct DispersiveCouplerSpec {
  double g = 0.0;  // transmon-resonator exchange coupling
};

// (sin_phi, cos_phi) truncated to q.levels (2 or 3). Index 0 is the ground
// state; the three-level 0-1 block coincides with the two-level operators.
std::pair<Mat, Mat> phase_operators(const QubitSpec& q);

// Number operator in the fixed convention n = (I - sigma_z)/2, extended to
// diag(0, 1, ..., levels-1).
Mat number_operator(int levels);

// H(t) = h_static - alpha_ej * [(C1 C2 + S1 S2) cos F(t) + (S1 C2 - C1 S2) sin F(t)]
// with the single-site operators embedded on the given dims. The trig of the
// drive is evaluated exactly (no small-angle expansion).
TimeDependentOperator junction_drive_operator(Mat h_static, const Mat& sin1, const Mat& cos1,
                                              const Mat& sin2, const Mat& cos2, double alpha_ej,
                                              DriveSignal signal, std::vector<int> dims);

// Two-qubit junction coupler: H(t) = w1 n1 + w2 n2 + junction drive term.
TimeDependentOperator junction_hamiltonian(const QubitSpec& q1, const QubitSpec& q2,
                                           const JunctionCouplerSpec& c, const DriveSignal& signal);

// Static transmon-resonator pair on dims [q.levels, r.dim]:
// H0 = wt*nt - (alpha2/2) nt(nt-1) + wr*nr + g(at^dag ar + ar^dag at).
// The transmon ladder uses the device's 1->2 element q2 (harmonic sqrt(2)
// by default); higher elements stay harmonic.
Operator dispersive_hamiltonian(const QubitSpec& q, const ResonatorSpec& r,
                                const DispersiveCouplerSpec& c);

// Diagonalize the Cooper-pair box H = 4 ec n^2 - ej cos(phi) in the charge
// basis |n| <= 30 and extract PhaseCoeffs for the lowest three eigenstates,
// with eigenstate phases fixed so s1, s2 > 0. Also reports the anharmonicity.
// Doubling the charge cutoff must change no coefficient by more than 1e-8.
struct DerivedQubit {
  PhaseCoeffs phase;
  double e01 = 0.0;           // first transition energy
  double anharmonicity = 0.0; // E01 - E12
};
DerivedQubit derive_phase_coefficients(double ej, double ec);

// Warn for every effective coupling element exceeding 0.1x the smallest
// protecting frequency gap {w1/2, w2/2, |w1-w2|, w1+w2}. Never fatal.
std::vector<std::string> validate_scales(const UniversalDriveParams& p, const PhaseCoeffs& q1,
                                         const PhaseCoeffs& q2, double alpha_ej, double omega1,
                                         double omega2);

}  // namespace fluxkit
