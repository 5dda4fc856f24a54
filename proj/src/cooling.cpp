#include "fluxkit/cooling.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace fluxkit {

namespace {

double ratio_to_teff(double omega, double rho_plus) {
  if (rho_plus <= 0.0) return 0.0;
  return omega / (-std::log(rho_plus));
}

void append_ratio_warning(std::vector<std::string>& out, const char* what, double num,
                          double den) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "coupling g = %.6g exceeds a tenth of %s = %.6g", num, what,
                den);
  out.emplace_back(buf);
}

}  // namespace

std::vector<std::string> CoolingSpec::validate() const {
  if (!(omega > 0.0)) throw std::invalid_argument("cooling: omega must be positive");
  if (!(omega_s > omega))
    throw std::invalid_argument("cooling: shadow frequency must exceed the primary frequency");
  if (!(gamma_s > 0.0)) throw std::invalid_argument("cooling: gamma_s must be positive");
  if (!(kappa > 0.0)) throw std::invalid_argument("cooling: kappa must be positive");
  if (!(temperature > 0.0)) throw std::invalid_argument("cooling: temperature must be positive");
  if (g < 0.0) throw std::invalid_argument("cooling: coupling must be non-negative");

  std::vector<std::string> warnings;
  if (g > 0.1 * omega) append_ratio_warning(warnings, "omega", g, omega);
  const double delta = omega_s - omega;
  if (g > 0.1 * delta) append_ratio_warning(warnings, "the shadow detuning", g, delta);
  return warnings;
}

ThermalRates thermal_rates(double kappa, double omega, double temperature) {
  if (!(temperature > 0.0))
    throw std::invalid_argument("thermal_rates: temperature must be positive");
  ThermalRates r;
  r.n_th = std::exp(-omega / temperature);
  r.gamma_plus = r.n_th * kappa;
  r.gamma_minus = (1.0 + r.n_th) * kappa;
  return r;
}

double induced_decay_rate(double g, double gamma_s) {
  if (g < 0.0 || gamma_s < 0.0)
    throw std::invalid_argument("induced_decay_rate: rates must be non-negative");
  const double num = 4.0 * g * g * gamma_s;
  if (num == 0.0) return 0.0;
  return num / (4.0 * g * g + gamma_s * gamma_s);
}

CoolingSteadyState effective_excitation(const CoolingSpec& spec) {
  spec.validate();
  const ThermalRates tr = thermal_rates(spec.kappa, spec.omega, spec.temperature);
  const double induced = induced_decay_rate(spec.g, spec.gamma_s);
  double numerator = spec.kappa * tr.n_th;
  if (spec.coupling_kind == CouplingKind::xx)
    numerator += spec.g * spec.g * spec.gamma_s / (4.0 * spec.omega * spec.omega);
  CoolingSteadyState out;
  out.rho_plus = numerator / (spec.kappa + induced);
  if (out.rho_plus >= 1.0)
    throw std::domain_error("effective_excitation: population ratio reached 1; parameters are outside the cooling regime");
  out.excitation = out.rho_plus / (1.0 + out.rho_plus);
  out.t_eff = ratio_to_teff(spec.omega, out.rho_plus);
  return out;
}

Operator cooling_pair_hamiltonian(const CoolingSpec& spec) {
  spec.validate();
  const std::vector<int> dims{2, 2};
  Mat h = -(spec.omega / 2.0) *
          (embed(pauli_z(), 0, dims).mat + embed(pauli_z(), 1, dims).mat);
  if (spec.coupling_kind == CouplingKind::exchange) {
    Mat ex = kron(sigma_plus(), sigma_minus()) + kron(sigma_minus(), sigma_plus());
    h += spec.g * ex;
  } else {
    h += spec.g * kron(pauli_x(), pauli_x());
  }
  return Operator(h, dims);
}

std::vector<Jump> cooling_pair_jumps(const CoolingSpec& spec) {
  spec.validate();
  const std::vector<int> dims{2, 2};
  const ThermalRates tr = thermal_rates(spec.kappa, spec.omega, spec.temperature);
  // Bath operators transform with the frame, so the shadow excitation rate
  // keeps the lab-frame energy omega_s; beyond omega_s/T = 20 it underflows
  // any steady-state quantity of interest and is dropped.
  const double n_th_s =
      spec.omega_s / spec.temperature > 20.0 ? 0.0 : std::exp(-spec.omega_s / spec.temperature);
  std::vector<Jump> jumps;
  jumps.push_back({embed(sigma_minus(), 0, dims).mat, tr.gamma_minus});
  if (tr.gamma_plus > 0.0) jumps.push_back({embed(sigma_plus(), 0, dims).mat, tr.gamma_plus});
  jumps.push_back({embed(sigma_minus(), 1, dims).mat, spec.gamma_s * (1.0 + n_th_s)});
  if (n_th_s > 0.0) jumps.push_back({embed(sigma_plus(), 1, dims).mat, spec.gamma_s * n_th_s});
  return jumps;
}

CoolingSteadyState simulate_cooling(const CoolingSpec& spec) {
  const Operator h = cooling_pair_hamiltonian(spec);
  const std::vector<Jump> jumps = cooling_pair_jumps(spec);
  const Mat rho = steady_state(h.mat, jumps);
  const Mat n_p = embed(0.5 * (pauli_i() - pauli_z()), 0, {2, 2}).mat;
  CoolingSteadyState out;
  out.excitation = (n_p * rho).trace().real();
  out.rho_plus = out.excitation / (1.0 - out.excitation);
  out.t_eff = ratio_to_teff(spec.omega, out.rho_plus);
  return out;
}

}  // namespace fluxkit
