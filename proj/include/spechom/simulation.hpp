#pragma once

#include <cstdint>
#include <vector>

#include "spechom/interference.hpp"

namespace spechom {

/// Ordered detection events together with the configuration and seed that
/// produced them; the same (config, seed, count) regenerates the identical
/// list.
struct EventDataset {
  ExperimentConfig config;
  std::uint64_t seed = 0;
  std::vector<DetectionEvent> events;
};

/// Draws n detection events. Per trial: (w, w') iid from the spectral
/// density, Bunch vs Coincidence with conditional probability
/// (1 +- eta^2 cos((w - w') dt)) / 2, bunch channel uniform, independent
/// per-photon loss with probability 1 - gamma (demoting to Single or
/// NoDetection), frequencies binned to the delta_omega grid.
EventDataset sample_events(const ExperimentConfig& cfg, std::size_t n, std::uint64_t seed);

/// Delay log-likelihood of a dataset, up to delay-independent terms:
/// bunch events add log(1 + eta^2 cos((wa - wb) dt)), coincidences the
/// mirrored term; loss events add nothing. Log arguments <= 0 (possible only
/// at eta = 1) are clamped to log(1e-300); if n_clamped is non-null the count
/// of clamped terms is stored there.
double log_likelihood(const EventDataset& data, double delta_t, long* n_clamped = nullptr);

/// Maximum-likelihood estimate of |delta_t|.
struct EstimateResult {
  double delta_t_hat = 0.0;
  double log_likelihood = 0.0;
  long n_informative = 0;  // bunch + coincidence events
  double stderr_crb = 0.0;  // 1 / sqrt(n_informative * fi_resolved at the estimate)
  long n_clamped = 0;
};

/// Global grid search over [0, search_max] with step pi / (10 W), where
/// W = 16 sigma is the spanned frequency-difference width, followed by
/// golden-section refinement to 1e-10 * search_max. The likelihood is even
/// in the delay, so the estimator targets |delta_t|. Throws when the dataset
/// has no informative events.
EstimateResult mle(const EventDataset& data, double search_max);

/// Empirical Cramer-Rao-saturation check: n_trials independent
/// sample-then-estimate rounds on workers with per-trial seeds derived from
/// (seed, trial index).
struct CrbValidationReport {
  double empirical_variance = 0.0;
  double crb = 0.0;    // 1 / (mean detected pairs * fi_resolved at truth)
  double ratio = 0.0;  // empirical_variance / crb
  double bias = 0.0;   // mean estimate - |true delta_t|
  int n_trials = 0;
  double mean_estimate = 0.0;
  double mean_informative = 0.0;
};

CrbValidationReport crb_validation(const ExperimentConfig& cfg, std::size_t n_events,
                                   int n_trials, std::uint64_t seed);

}  // namespace spechom
