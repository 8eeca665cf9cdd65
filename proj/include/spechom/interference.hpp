#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "spechom/spectrum.hpp"

namespace spechom {

/// Whether ExperimentConfig enforces the detector-resolution condition
/// delta_omega <= 0.05 * min(1/|dt|, sigma). Relaxed mode exists for
/// exploratory runs and for Fisher-information evaluations, which do not
/// depend on delta_omega.
enum class ResolutionPolicy { Enforce, Relax };

/// Parameters of one two-photon beam-splitter experiment: time delay,
/// indistinguishability in non-temporal degrees of freedom, detector
/// efficiency, detector frequency resolution, and the shared photon spectrum.
class ExperimentConfig {
 public:
  ExperimentConfig(double delta_t, double eta, double gamma, double delta_omega,
                   Spectrum spectrum,
                   ResolutionPolicy policy = ResolutionPolicy::Enforce);

  double delta_t() const { return delta_t_; }
  double eta() const { return eta_; }
  double gamma() const { return gamma_; }
  double delta_omega() const { return delta_omega_; }
  const Spectrum& spectrum() const { return spectrum_; }
  bool resolution_enforced() const { return policy_ == ResolutionPolicy::Enforce; }

  /// Copy with a different time delay (resolution check per `policy`).
  ExperimentConfig with_delta_t(double delta_t,
                                ResolutionPolicy policy = ResolutionPolicy::Relax) const;

  /// Factor in the resolution condition standing in for "much smaller than".
  static constexpr double kResolutionFactor = 0.05;

 private:
  double delta_t_;
  double eta_;
  double gamma_;
  double delta_omega_;
  Spectrum spectrum_;
  ResolutionPolicy policy_;
};

enum class EventKind { NoDetection, Single, Bunch, Coincidence };

/// One experimental outcome. Bunch and Coincidence carry two bin-center
/// frequencies; Single carries one; NoDetection carries none. `channel` is
/// the output channel for Single and the shared channel for Bunch.
struct DetectionEvent {
  EventKind kind = EventKind::NoDetection;
  std::uint8_t channel = 0;  // 1 or 2; 0 when not applicable
  std::optional<double> omega_a;
  std::optional<double> omega_b;

  static DetectionEvent none() { return {}; }
  static DetectionEvent single(std::uint8_t ch, double w) {
    return {EventKind::Single, ch, w, std::nullopt};
  }
  static DetectionEvent bunch(std::uint8_t ch, double wa, double wb) {
    return {EventKind::Bunch, ch, wa, wb};
  }
  static DetectionEvent coincidence(double wa, double wb) {
    return {EventKind::Coincidence, 0, wa, wb};
  }

  bool operator==(const DetectionEvent&) const = default;
};

/// Checks the structural invariants of an event against a frequency grid
/// anchored at `grid_center` with spacing `grid_step`; throws on violation.
void validate_event(const DetectionEvent& e, double grid_center, double grid_step);

/// Probability density that both photons land in the same output channel
/// with frequencies (omega, omega_p):
///   gamma^2 xi^2(omega) xi^2(omega') (1 + eta^2 cos((omega-omega') dt)).
/// Event probabilities carry an extra factor delta_omega^2; total-mass
/// integrals take the ordered region omega < omega' (half of the symmetric
/// full-plane integral).
double prob_bunch_density(const ExperimentConfig& cfg, double omega, double omega_p);

/// Same-channel counterpart with the interference term negated.
double prob_coinc_density(const ExperimentConfig& cfg, double omega, double omega_p);

/// Probabilities of outcomes that carry no delay information: no photon
/// detected, or a single photon detected at a given frequency.
struct LossEventModel {
  double p_none;  // (1 - gamma)^2
  std::function<double(double)> p_single_density;  // 2 gamma (1-gamma) xi^2(omega)
};

LossEventModel prob_loss_events(const ExperimentConfig& cfg);

/// Total bunching and coincidence probabilities when frequencies are not
/// resolved. Closed form for Gaussian spectra, 2-D quadrature otherwise.
struct NonResolvedProbabilities {
  double p_bunch;
  double p_coinc;
};

NonResolvedProbabilities prob_nonresolved(const ExperimentConfig& cfg);

/// Bunch/coincidence densities marginalized over omega + omega', as
/// functions of the difference delta = omega - omega'; the quantum-beat
/// profile. For Gaussian spectra
///   (gamma^2 / (2 sqrt(pi) sigma)) e^{-delta^2/(4 sigma^2)} (1 +- eta^2 cos(delta dt)).
struct BeatMarginals {
  double bunch;
  double coinc;
};

BeatMarginals beat_marginals(const ExperimentConfig& cfg, double delta);

struct BeatPoint {
  double delta;
  double bunch_density;
  double coincidence_density;
};

/// Tabulates beat_marginals on an even grid of n_points values of delta
/// spanning +-8 sigma sqrt(2).
std::vector<BeatPoint> beat_profile(const ExperimentConfig& cfg, int n_points);

}  // namespace spechom
