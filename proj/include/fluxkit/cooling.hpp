#pragma once

#include <string>
#include <vector>

#include "fluxkit/dynamics.hpp"
#include "fluxkit/operators.hpp"

namespace fluxkit {

enum class CouplingKind { exchange, xx };

// One primary-shadow pair of a shadow-lattice cooler. The lattice is a
// product of identical uncoupled pairs, so pair results are lattice results.
struct CoolingSpec {
  double omega = 1.0;        // primary qubit frequency
  double omega_s = 5.0;      // shadow frequency, above omega
  double g = 0.01;           // primary-shadow coupling
  double gamma_s = 0.02;     // shadow relaxation rate
  double kappa = 1e-4;       // primary-bath coupling
  double temperature = 0.3;  // bath temperature, k_B = 1
  CouplingKind coupling_kind = CouplingKind::exchange;

  // Throws on hard violations (ordering, positivity); returns warnings when
  // g exceeds a tenth of omega or of the shadow detuning.
  std::vector<std::string> validate() const;
};

struct ThermalRates {
  double gamma_plus = 0.0;   // excitation rate N_th * kappa
  double gamma_minus = 0.0;  // relaxation rate (1 + N_th) * kappa
  double n_th = 0.0;         // Boltzmann factor e^{-omega/T}
};
ThermalRates thermal_rates(double kappa, double omega, double temperature);

// Shadow-induced primary decay 4 g^2 Gamma_S / (4 g^2 + Gamma_S^2); maximal
// (= g) at Gamma_S = 2 g.
double induced_decay_rate(double g, double gamma_s);

struct CoolingSteadyState {
  double rho_plus = 0.0;    // excited/ground population ratio e^{-omega/T_eff}
  double excitation = 0.0;  // primary excited-state probability
  double t_eff = 0.0;       // omega / (-ln rho_plus); 0 when rho_plus = 0
};

// Closed-form steady state: exchange ratio kappa N_th / (kappa + induced);
// xx adds the double-excitation heating term g^2 Gamma_S / (4 omega^2) to the
// numerator. Throws when the ratio reaches 1 (unphysical combination).
CoolingSteadyState effective_excitation(const CoolingSpec& spec);

// Rotating-frame pair Hamiltonian on dims {2, 2} (primary first):
// -(omega/2)(sigma_z + sigma_z) plus the exchange or xx coupling.
Operator cooling_pair_hamiltonian(const CoolingSpec& spec);

// Thermal jumps on the primary plus shadow decay; shadow thermal excitation
// uses the lab-frame energy omega_s and is dropped when omega_s/T > 20.
std::vector<Jump> cooling_pair_jumps(const CoolingSpec& spec);

// Lindblad steady state of the pair; reports the primary excitation and the
// effective temperature implied by the population ratio.
CoolingSteadyState simulate_cooling(const CoolingSpec& spec);

}  // namespace fluxkit
