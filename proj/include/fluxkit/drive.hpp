#pragma once
// Drive-signal construction and evaluation: the universal two-qubit flux
// signal, the split-transmon readout flux signal, the cooling modulation,
// and the multilevel nonlinearity-cancellation signal.
//
// Tone frequencies are exact rationals over a declared base angular frequency
// so commensurate averaging periods are exact. Floating-point frequencies are
// snapped to rationals with denominator <= 64; snapping that moves the
// frequency ratio by more than 1e-9 is an error.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace fluxkit {

struct Tone {
  double amplitude = 0.0;
  std::int64_t freq_num = 0;  // frequency = base_freq * freq_num / freq_den
  std::int64_t freq_den = 1;  // >= 1, gcd-reduced
  double phase = 0.0;         // rad
};

struct DriveSignal {
  double offset = 0.0;
  double base_freq = 0.0;  // angular frequency, rad/time
  std::vector<Tone> tones;

  double evaluate(double t) const;  // offset + sum amp*cos(freq*t + phase)
  // Exact commensurate period of the tone set; 0 when there are no tones.
  double period() const;
  // Largest tone angular frequency (rad/time); 0 when there are no tones.
  double max_freq() const;
};

// Snap freq/base_freq to a rational with denominator <= 64 and canonicalize
// (negative frequencies folded into the phase). Errors: zero frequency,
// zero/negative base, snap error > 1e-9.
Tone make_tone(double amplitude, double freq, double base_freq, double phase);

// The rational |freq|/base_freq underlying make_tone, as (num, den).
std::pair<std::int64_t, std::int64_t> snap_ratio(double freq, double base_freq);

// The nine independently adjustable parameters of the universal two-qubit
// coupler drive: five tone amplitudes plus four phases.
struct UniversalDriveParams {
  double f_zz = 0.0;   // static flux offset component (sign allowed: no phase to absorb)
  double f_xy0 = 0.0;  // difference-frequency (photon-hopping) tone
  double f_xy2 = 0.0;  // sum-frequency (two-photon pump) tone
  double f_xz = 0.0;   // half-frequency tone on qubit 1 (enters squared)
  double f_zx = 0.0;   // half-frequency tone on qubit 2 (enters squared)
  double chi1 = 0.0, chi2 = 0.0, psi1 = 0.0, psi2 = 0.0;

  // |f_zz| <= 0.3 and the four tone amplitudes in [0, 0.3]; throws otherwise.
  void validate() const;
};

// F(t) = pi/2 - f_zz - 2 f_xy2 cos[(w1+w2)t + chi1+chi2]
//               - 2 f_xy0 cos[(w1-w2)t + chi1-chi2]
//      + 2 sqrt(2) (f_xz cos[(w1 t + psi1)/2] + f_zx cos[(w2 t + psi2)/2]).
// Zero-amplitude tones are omitted. base_freq = 0 selects w1.
DriveSignal universal_signal(const UniversalDriveParams& p, double omega1, double omega2,
                             double base_freq = 0.0);

struct SplitTransmonDriveParams {
  double ej1 = 0.0, ej2 = 0.0;        // parallel junction energies
  double k1 = 0.0, k2 = 0.0, k3 = 0.0;  // dimensionless flux amplitudes, [0, 0.3]
  double chi = 0.0;

  void validate() const;
};

struct ReadoutDriveCoeffs {
  double f1 = 0.0;  // (ej1+ej2) k1^2 / 4, sum-frequency cos-phi drive
  double f2 = 0.0;  // (ej1+ej2) k2^2 / 4, difference-frequency cos-phi drive
  double f3 = 0.0;  // (ej1-ej2) k3 / 2, resonator-frequency sin-phi drive
};

// Flux signal Phi(t) = 2[k1 cos(((wr+wt)t + chi)/2) + k2 cos(((wr-wt)t - chi)/2)
//                        + k3 cos(wr t)] and the derived drive coefficients.
// `warnings` (if non-null) collects the higher-order tone components that the
// effective model drops (k3^2 at 2wr, k1k2/k1k3/k2k3 cross terms).
std::pair<DriveSignal, ReadoutDriveCoeffs> readout_flux_signal(const SplitTransmonDriveParams& p,
                                                               double omega_r, double omega_t,
                                                               double base_freq = 0.0,
                                                               std::vector<std::string>* warnings = nullptr);

// Single tone 2g cos(delta t): multiplies the primary-shadow exchange operator.
DriveSignal cooling_coupling_signal(double g, double delta);

// F(t) = pi/2 + k0 cos(Dt) + k1 cos((D+a1)t) + k2 cos((D-a2)t)
//             + k3[cos((D+a12)t) + cos((D-a12)t)], a12 = a1 - a2.
// Zero-amplitude tones are omitted, but the five frequencies must always be
// distinct and nonzero (aliasing error otherwise). base_freq = 0 selects delta.
DriveSignal multilevel_signal(double k0, double k1, double k2, double k3, double delta,
                              double alpha1, double alpha2, double base_freq = 0.0);

// Structured-text record {offset, base_freq, tones:[{amp, num, den, phase}]}
// with amplitudes/phases as exact (round-trippable) decimal strings.
std::string drive_signal_record(const DriveSignal& sig);

}  // namespace fluxkit
