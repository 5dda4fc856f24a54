#include "fluxkit/drive.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>

#include "json.hpp"

namespace fluxkit {

namespace {

constexpr std::int64_t kMaxDen = 64;
constexpr double kSnapTol = 1e-9;

std::int64_t checked_lcm(std::int64_t a, std::int64_t b) {
  const std::int64_t g = std::gcd(a, b);
  const std::int64_t q = a / g;
  if (b != 0 && q > (std::int64_t{1} << 60) / b)
    throw std::overflow_error("drive signal: tone denominators have no representable common period");
  return q * b;
}

}  // namespace

std::pair<std::int64_t, std::int64_t> snap_ratio(double freq, double base_freq) {
  if (!(base_freq > 0.0)) throw std::invalid_argument("snap_ratio: base frequency must be positive");
  const double ratio = freq / base_freq;
  if (ratio == 0.0) throw std::invalid_argument("snap_ratio: zero tone frequency (fold constants into the offset)");
  const double mag = std::abs(ratio);
  std::int64_t best_num = 0, best_den = 1;
  double best_err = std::numeric_limits<double>::infinity();
  for (std::int64_t den = 1; den <= kMaxDen; ++den) {
    const std::int64_t num = std::llround(mag * static_cast<double>(den));
    if (num == 0) continue;
    const double err = std::abs(mag - static_cast<double>(num) / static_cast<double>(den));
    if (err < best_err) {
      best_err = err;
      best_num = num;
      best_den = den;
      if (err == 0.0) break;
    }
  }
  if (best_num == 0 || best_err > kSnapTol)
    throw std::invalid_argument("snap_ratio: frequency ratio " + std::to_string(ratio) +
                                " is not a rational with denominator <= 64");
  const std::int64_t g = std::gcd(best_num, best_den);
  return {best_num / g, best_den / g};
}

Tone make_tone(double amplitude, double freq, double base_freq, double phase) {
  auto [num, den] = snap_ratio(freq, base_freq);
  Tone tone;
  tone.amplitude = amplitude;
  tone.freq_num = num;
  tone.freq_den = den;
  tone.phase = freq < 0.0 ? -phase : phase;  // cos(-wt + p) = cos(wt - p)
  return tone;
}

double DriveSignal::evaluate(double t) const {
  double value = offset;
  for (const Tone& tone : tones) {
    const double freq = base_freq * static_cast<double>(tone.freq_num) / static_cast<double>(tone.freq_den);
    value += tone.amplitude * std::cos(freq * t + tone.phase);
  }
  return value;
}

double DriveSignal::period() const {
  if (tones.empty()) return 0.0;
  std::int64_t den_lcm = 1;
  for (const Tone& tone : tones) den_lcm = checked_lcm(den_lcm, tone.freq_den);
  std::int64_t num_gcd = 0;
  for (const Tone& tone : tones) num_gcd = std::gcd(num_gcd, tone.freq_num * (den_lcm / tone.freq_den));
  return 2.0 * M_PI * static_cast<double>(den_lcm) / (base_freq * static_cast<double>(num_gcd));
}

double DriveSignal::max_freq() const {
  double max_f = 0.0;
  for (const Tone& tone : tones)
    max_f = std::max(max_f, base_freq * static_cast<double>(tone.freq_num) / static_cast<double>(tone.freq_den));
  return max_f;
}

void UniversalDriveParams::validate() const {
  if (std::abs(f_zz) > 0.3) throw std::invalid_argument("drive params: |f_zz| exceeds perturbative bound 0.3");
  for (auto [value, name] : {std::pair{f_xy0, "f_xy0"}, {f_xy2, "f_xy2"}, {f_xz, "f_xz"}, {f_zx, "f_zx"}}) {
    if (value < 0.0 || value > 0.3)
      throw std::invalid_argument(std::string("drive params: ") + name + " outside [0, 0.3]");
  }
}

DriveSignal universal_signal(const UniversalDriveParams& p, double omega1, double omega2, double base_freq) {
  p.validate();
  if (!(omega1 > 0.0) || !(omega2 > 0.0))
    throw std::invalid_argument("universal_signal: qubit frequencies must be positive");
  if (omega1 == omega2)
    throw std::invalid_argument("universal_signal: degenerate qubit frequencies put the hopping tone at zero frequency");
  DriveSignal sig;
  sig.offset = M_PI / 2.0 - p.f_zz;
  sig.base_freq = base_freq > 0.0 ? base_freq : omega1;
  if (p.f_xy2 != 0.0)
    sig.tones.push_back(make_tone(-2.0 * p.f_xy2, omega1 + omega2, sig.base_freq, p.chi1 + p.chi2));
  if (p.f_xy0 != 0.0)
    sig.tones.push_back(make_tone(-2.0 * p.f_xy0, omega1 - omega2, sig.base_freq, p.chi1 - p.chi2));
  if (p.f_xz != 0.0)
    sig.tones.push_back(make_tone(2.0 * std::sqrt(2.0) * p.f_xz, omega1 / 2.0, sig.base_freq, p.psi1 / 2.0));
  if (p.f_zx != 0.0)
    sig.tones.push_back(make_tone(2.0 * std::sqrt(2.0) * p.f_zx, omega2 / 2.0, sig.base_freq, p.psi2 / 2.0));
  return sig;
}

void SplitTransmonDriveParams::validate() const {
  if (ej1 < 0.0 || ej2 < 0.0 || ej1 + ej2 <= 0.0)
    throw std::invalid_argument("split transmon: junction energies must be nonnegative with a positive sum");
  for (auto [value, name] : {std::pair{k1, "k1"}, {k2, "k2"}, {k3, "k3"}}) {
    if (value < 0.0 || value > 0.3)
      throw std::invalid_argument(std::string("split transmon: ") + name + " outside [0, 0.3]");
  }
}

std::pair<DriveSignal, ReadoutDriveCoeffs> readout_flux_signal(const SplitTransmonDriveParams& p,
                                                               double omega_r, double omega_t,
                                                               double base_freq,
                                                               std::vector<std::string>* warnings) {
  p.validate();
  if (!(omega_r > omega_t) || !(omega_t > 0.0))
    throw std::invalid_argument("readout_flux_signal: need omega_r > omega_t > 0");
  DriveSignal sig;
  sig.base_freq = base_freq > 0.0 ? base_freq : omega_r - omega_t;
  if (p.k1 != 0.0) sig.tones.push_back(make_tone(2.0 * p.k1, (omega_r + omega_t) / 2.0, sig.base_freq, p.chi / 2.0));
  if (p.k2 != 0.0) sig.tones.push_back(make_tone(2.0 * p.k2, (omega_r - omega_t) / 2.0, sig.base_freq, -p.chi / 2.0));
  if (p.k3 != 0.0) sig.tones.push_back(make_tone(2.0 * p.k3, omega_r, sig.base_freq, 0.0));
  ReadoutDriveCoeffs coeffs;
  const double ej_sum = p.ej1 + p.ej2;
  const double ej_diff = p.ej1 - p.ej2;
  coeffs.f1 = ej_sum * p.k1 * p.k1 / 4.0;
  coeffs.f2 = ej_sum * p.k2 * p.k2 / 4.0;
  coeffs.f3 = ej_diff * p.k3 / 2.0;
  if (warnings) {
    char buf[160];
    if (p.k3 != 0.0) {
      std::snprintf(buf, sizeof buf, "dropped cos-phi component %.3g at frequency %.6g (k3^2 self-mix)",
                    ej_sum * p.k3 * p.k3 / 4.0, 2.0 * omega_r);
      warnings->push_back(buf);
    }
    if (p.k1 * p.k2 != 0.0) {
      std::snprintf(buf, sizeof buf, "dropped cos-phi cross terms %.3g at frequencies %.6g and %.6g (k1*k2 mix)",
                    ej_sum * p.k1 * p.k2 / 2.0, omega_t, omega_r);
      warnings->push_back(buf);
    }
    if (p.k3 != 0.0 && p.k1 + p.k2 != 0.0) {
      std::snprintf(buf, sizeof buf, "dropped cos-phi cross terms of order %.3g (k3 mixing with k1/k2 half-tones)",
                    ej_sum * p.k3 * std::max(p.k1, p.k2) / 2.0);
      warnings->push_back(buf);
    }
    if (ej_diff != 0.0 && p.k1 + p.k2 != 0.0) {
      std::snprintf(buf, sizeof buf, "dropped half-frequency sin-phi terms of order %.3g (junction asymmetry times k1/k2)",
                    std::abs(ej_diff) * std::max(p.k1, p.k2));
      warnings->push_back(buf);
    }
  }
  return {sig, coeffs};
}

DriveSignal cooling_coupling_signal(double g, double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("cooling_coupling_signal: modulation frequency must be positive");
  DriveSignal sig;
  sig.base_freq = delta;
  sig.tones.push_back(make_tone(2.0 * g, delta, delta, 0.0));
  return sig;
}

DriveSignal multilevel_signal(double k0, double k1, double k2, double k3, double delta,
                              double alpha1, double alpha2, double base_freq) {
  if (!(delta > 0.0)) throw std::invalid_argument("multilevel_signal: detuning must be positive");
  const double alpha12 = alpha1 - alpha2;
  const double freqs[5] = {delta, delta + alpha1, delta - alpha2, delta + alpha12, delta - alpha12};
  const double amps[5] = {k0, k1, k2, k3, k3};
  const double base = base_freq > 0.0 ? base_freq : delta;
  Tone snapped[5];
  for (int i = 0; i < 5; ++i) {
    if (!(freqs[i] > 0.0))
      throw std::invalid_argument("multilevel_signal: tone frequencies must stay positive");
    snapped[i] = make_tone(amps[i], freqs[i], base, 0.0);
  }
  for (int i = 0; i < 5; ++i)
    for (int j = i + 1; j < 5; ++j)
      if (snapped[i].freq_num == snapped[j].freq_num && snapped[i].freq_den == snapped[j].freq_den)
        throw std::invalid_argument("multilevel_signal: tone frequencies alias; transitions are not independently addressed");
  DriveSignal sig;
  sig.offset = M_PI / 2.0;
  sig.base_freq = base;
  for (const Tone& tone : snapped)
    if (tone.amplitude != 0.0) sig.tones.push_back(tone);
  return sig;
}

std::string drive_signal_record(const DriveSignal& sig) {
  nlohmann::ordered_json rec;
  rec["offset"] = sig.offset;
  rec["base_freq"] = sig.base_freq;
  rec["tones"] = nlohmann::ordered_json::array();
  for (const Tone& tone : sig.tones) {
    rec["tones"].push_back({{"amplitude", tone.amplitude},
                            {"freq_num", tone.freq_num},
                            {"freq_den", tone.freq_den},
                            {"phase", tone.phase}});
  }
  return rec.dump();
}

}  // namespace fluxkit
