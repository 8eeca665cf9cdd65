#include "spechom/interference.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "spechom/quadrature.hpp"

namespace spechom {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

ExperimentConfig::ExperimentConfig(double delta_t, double eta, double gamma,
                                   double delta_omega, Spectrum spectrum,
                                   ResolutionPolicy policy)
    : delta_t_(delta_t),
      eta_(eta),
      gamma_(gamma),
      delta_omega_(delta_omega),
      spectrum_(std::move(spectrum)),
      policy_(policy) {
  if (!std::isfinite(delta_t_))
    throw std::invalid_argument("ExperimentConfig: delta_t must be finite");
  if (!(eta_ >= 0.0 && eta_ <= 1.0))
    throw std::invalid_argument("ExperimentConfig: eta must lie in [0, 1]");
  if (!(gamma_ > 0.0 && gamma_ <= 1.0))
    throw std::invalid_argument("ExperimentConfig: gamma must lie in (0, 1]");
  if (!(delta_omega_ > 0.0) || !std::isfinite(delta_omega_))
    throw std::invalid_argument("ExperimentConfig: delta_omega must be positive");

  if (policy_ == ResolutionPolicy::Enforce) {
    double scale = spectrum_.sigma();
    if (delta_t_ != 0.0) scale = std::min(scale, 1.0 / std::abs(delta_t_));
    const double limit = kResolutionFactor * scale;
    if (delta_omega_ > limit)
      throw std::invalid_argument(
          "ExperimentConfig: resolution condition violated: delta_omega = " +
          std::to_string(delta_omega_) + " exceeds " +
          std::to_string(kResolutionFactor) + " * min(1/|delta_t|, sigma) = " +
          std::to_string(limit));
  }
}

ExperimentConfig ExperimentConfig::with_delta_t(double delta_t,
                                                ResolutionPolicy policy) const {
  return ExperimentConfig(delta_t, eta_, gamma_, delta_omega_, spectrum_, policy);
}

void validate_event(const DetectionEvent& e, double grid_center, double grid_step) {
  auto check_grid = [&](double w) {
    const double k = (w - grid_center) / grid_step;
    if (std::abs(k - std::round(k)) > 1e-9)
      throw std::invalid_argument("DetectionEvent: frequency off the resolution grid");
  };
  switch (e.kind) {
    case EventKind::NoDetection:
      if (e.channel != 0 || e.omega_a || e.omega_b)
        throw std::invalid_argument("DetectionEvent: NoDetection carries no data");
      break;
    case EventKind::Single:
      if (e.channel != 1 && e.channel != 2)
        throw std::invalid_argument("DetectionEvent: Single needs channel 1 or 2");
      if (!e.omega_a || e.omega_b)
        throw std::invalid_argument("DetectionEvent: Single carries exactly one frequency");
      check_grid(*e.omega_a);
      break;
    case EventKind::Bunch:
      if (e.channel != 1 && e.channel != 2)
        throw std::invalid_argument("DetectionEvent: Bunch needs channel 1 or 2");
      if (!e.omega_a || !e.omega_b)
        throw std::invalid_argument("DetectionEvent: Bunch carries two frequencies");
      check_grid(*e.omega_a);
      check_grid(*e.omega_b);
      break;
    case EventKind::Coincidence:
      if (e.channel != 0)
        throw std::invalid_argument("DetectionEvent: Coincidence uses both channels");
      if (!e.omega_a || !e.omega_b)
        throw std::invalid_argument("DetectionEvent: Coincidence carries two frequencies");
      check_grid(*e.omega_a);
      check_grid(*e.omega_b);
      break;
  }
}

double prob_bunch_density(const ExperimentConfig& cfg, double omega, double omega_p) {
  const double g2 = cfg.gamma() * cfg.gamma();
  const double e2 = cfg.eta() * cfg.eta();
  const double xi2 = cfg.spectrum().density(omega) * cfg.spectrum().density(omega_p);
  return g2 * xi2 * (1.0 + e2 * std::cos((omega - omega_p) * cfg.delta_t()));
}

double prob_coinc_density(const ExperimentConfig& cfg, double omega, double omega_p) {
  const double g2 = cfg.gamma() * cfg.gamma();
  const double e2 = cfg.eta() * cfg.eta();
  const double xi2 = cfg.spectrum().density(omega) * cfg.spectrum().density(omega_p);
  return g2 * xi2 * (1.0 - e2 * std::cos((omega - omega_p) * cfg.delta_t()));
}

LossEventModel prob_loss_events(const ExperimentConfig& cfg) {
  const double gamma = cfg.gamma();
  const Spectrum spec = cfg.spectrum();
  return LossEventModel{
      (1.0 - gamma) * (1.0 - gamma),
      [gamma, spec](double omega) { return 2.0 * gamma * (1.0 - gamma) * spec.density(omega); }};
}

namespace {

// Overlap factor |chi(dt)|^2 with chi the characteristic function of the
// density; equals exp(-dt^2 sigma^2) for a Gaussian spectrum.
double coherence_factor_tabulated(const Spectrum& spec, double dt) {
  const double a = spec.support_min(), b = spec.support_max();
  const double panel =
      dt != 0.0 ? (2.0 * kPi / std::abs(dt)) / 8.0 : std::numeric_limits<double>::infinity();
  const double re = integrate_adaptive(
      [&](double w) { return spec.density(w) * std::cos(w * dt); }, a, b, 1e-10, 1e-12, panel);
  const double im = integrate_adaptive(
      [&](double w) { return spec.density(w) * std::sin(w * dt); }, a, b, 1e-10, 1e-12, panel);
  return re * re + im * im;
}

}  // namespace

NonResolvedProbabilities prob_nonresolved(const ExperimentConfig& cfg) {
  const double g2 = cfg.gamma() * cfg.gamma();
  const double e2 = cfg.eta() * cfg.eta();
  double k;
  if (cfg.spectrum().kind() == SpectrumKind::Gaussian) {
    const double x = cfg.delta_t() * cfg.spectrum().sigma();
    k = std::exp(-x * x);
  } else {
    k = coherence_factor_tabulated(cfg.spectrum(), cfg.delta_t());
  }
  return {0.5 * g2 * (1.0 + e2 * k), 0.5 * g2 * (1.0 - e2 * k)};
}

namespace {

// Autocorrelation of the density at lag delta: int xi^2(u + d/2) xi^2(u - d/2) du.
double density_autocorrelation(const Spectrum& spec, double delta) {
  const double lo = spec.support_min() + std::abs(delta) / 2.0;
  const double hi = spec.support_max() - std::abs(delta) / 2.0;
  if (hi <= lo) return 0.0;
  return integrate_adaptive(
      [&](double u) { return spec.density(u + delta / 2.0) * spec.density(u - delta / 2.0); },
      lo, hi, 1e-9, 1e-14);
}

}  // namespace

BeatMarginals beat_marginals(const ExperimentConfig& cfg, double delta) {
  const double g2 = cfg.gamma() * cfg.gamma();
  const double e2 = cfg.eta() * cfg.eta();
  double envelope;
  if (cfg.spectrum().kind() == SpectrumKind::Gaussian) {
    const double s = cfg.spectrum().sigma();
    envelope = std::exp(-delta * delta / (4.0 * s * s)) / (2.0 * std::sqrt(kPi) * s);
  } else {
    envelope = density_autocorrelation(cfg.spectrum(), delta);
  }
  const double beat = e2 * std::cos(delta * cfg.delta_t());
  return {g2 * envelope * (1.0 + beat), g2 * envelope * (1.0 - beat)};
}

std::vector<BeatPoint> beat_profile(const ExperimentConfig& cfg, int n_points) {
  if (n_points < 2) throw std::invalid_argument("beat_profile: n_points must be >= 2");
  const double span = 8.0 * std::sqrt(2.0) * cfg.spectrum().sigma();
  std::vector<BeatPoint> table;
  table.reserve(static_cast<std::size_t>(n_points));
  for (int i = 0; i < n_points; ++i) {
    const double delta = -span + 2.0 * span * static_cast<double>(i) / (n_points - 1);
    const BeatMarginals m = beat_marginals(cfg, delta);
    table.push_back({delta, m.bunch, m.coinc});
  }
  return table;
}

}  // namespace spechom
