#pragma once
// Two driven anharmonic sites mapped onto a linear n-level pair: a multi-tone
// junction drive converts each number-conserving tunneling family into a
// static hop, while a rotating frame absorbs the two-photon nonlinearities.
// The effective diagonal keeps only the number term and the three-photon
// projectors; residual two-photon curvature is reported as a diagnostic.

#include <vector>

#include "fluxkit/operators.hpp"
#include "fluxkit/rwa.hpp"

namespace fluxkit {

// Two anharmonic sites with level energies {0, w, 2w - alpha, 3w - beta}
// joined by a flux-driven junction. Tone amplitudes k0..k3 address, in order:
// |01>~|10>, |11>~|20>, |11>~|02>, and the |12>~|21| pair. detune1/detune2
// shift the drive-addressed two-photon targets away from the bare alpha_i,
// which leaves a static detune_i * |2><2| residual per site (magnitude and
// sign tunable); zero detune cancels the two-photon terms exactly. The
// junction phase operators are sin(phi_i) = s (a_i^dag + a_i) with harmonic
// matrix elements and cos(phi_i) = c0 + c * n_i; anharmonic ladder
// corrections are out of model.
struct MultilevelSpec {
  double omega1 = 0.0, omega2 = 0.0;  // site frequencies; omega2 > omega1
  double alpha1 = 0.0, alpha2 = 0.0;  // two-photon (|2><2|) nonlinearities
  double beta1 = 0.0, beta2 = 0.0;    // three-photon (|3><3|) nonlinearities
  int levels = 4;                     // per-site truncation, >= 3
  double alpha_ej = 0.0;              // junction energy scale, >= 0
  double k0 = 0.0, k1 = 0.0, k2 = 0.0, k3 = 0.0;  // drive tone amplitudes
  double s = 1.0;                     // sin(phi) ladder coefficient
  double c0 = 1.0, c = 0.0;           // cos(phi) = c0 + c * n
  double detune1 = 0.0, detune2 = 0.0;  // drive-target shifts off alpha_i
};

// Frame generator -a1' P1(2) + Delta n2 - a2' P2(2), where P_i(2) = |2><2| on
// site i, Delta = omega2 - omega1, and a_i' = alpha_i - detune_i follows the
// drive target so a detuned drive shows up as a static diagonal residual
// instead of a hidden rotating hop. Diagonal and commuting by construction.
// Delta = 0 and zero alphas give the trivial frame. Throws std::invalid_argument
// when levels < 3 or a site frequency is not positive.
RotatingFrame multilevel_frame(const MultilevelSpec& spec);

// Lab-frame driven pair: static site terms plus the junction under the
// multi-tone flux signal (exact trigonometric evaluation, offset pi/2).
// Exposed so dynamics checks can propagate the same model the averaging
// consumes. Throws std::invalid_argument on invalid specs, including
// omega2 <= omega1 and aliasing tone frequencies.
TimeDependentOperator multilevel_lab_hamiltonian(const MultilevelSpec& spec);

// Exact common period of the drive tones and every frame rotation frequency
// (all in-frame element rotations are integer combinations of the site,
// nonlinearity, and tone frequencies).
double multilevel_period(const MultilevelSpec& spec);

// First-order effective Hamiltonian: time average of the driven junction in
// the multilevel frame extended by omega1 (n1 + n2), taken over the exact
// commensurate period, with the number term restored afterwards. In the
// extended frame every number-nonconserving junction element carries an
// explicit fast phase, so the average drops it exactly instead of aliasing
// it onto a static term. The result lives in multilevel_frame coordinates:
// the diagonal equals omega1 (n1 + n2) - beta1 P1(3) - beta2 P2(3)
// - detune1 P1(2) - detune2 P2(2) exactly, and each tone contributes one
// static hop family. Throws std::invalid_argument on invalid specs and
// std::runtime_error when the averaging quadrature does not converge.
Operator effective_multilevel_hamiltonian(const MultilevelSpec& spec);

// Residual per-site two-photon curvature of the effective diagonal,
// residual_i = -(E_i(2) - 2 E_i(1) + E_i(0)) with E_i(n) the diagonal entry
// at n photons on site i and none on the other. The first-order average has
// an exactly clean diagonal by frame construction, so the curvature is read
// from the diagonal corrected by the static second-order tone sum
// sum_{m>=1} [A_m, A_m^dag] / nu_m (exact tone decomposition over the
// commensurate period); that is where the leading drive-induced level
// repulsion lives. A detuned drive contributes its first-order detune_i
// residual on top.
struct NonlinearitySuppression {
  double residual_alpha1 = 0.0;
  double residual_alpha2 = 0.0;
  // max_i |residual_i| / |alpha_i| over sites with alpha_i != 0; zero when
  // both alphas vanish and the residuals do too, infinity otherwise.
  double ratio_to_bare = 0.0;
};
NonlinearitySuppression nonlinearity_suppression(const MultilevelSpec& spec);

}  // namespace fluxkit
