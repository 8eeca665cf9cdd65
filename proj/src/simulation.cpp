#include "spechom/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "spechom/fisher.hpp"
#include "spechom/parallel.hpp"
#include "spechom/rng.hpp"

namespace spechom {

namespace {

constexpr double kPi = 3.14159265358979323846;

double bin_to_grid(double omega, const ExperimentConfig& cfg) {
  const double center = cfg.spectrum().center();
  const double step = cfg.delta_omega();
  double binned = center + std::round((omega - center) / step) * step;
  // Rounding at the support edge may step one bin outside; pull it back.
  binned = std::clamp(binned, cfg.spectrum().support_min(), cfg.spectrum().support_max());
  return binned;
}

}  // namespace

EventDataset sample_events(const ExperimentConfig& cfg, std::size_t n, std::uint64_t seed) {
  EventDataset data{cfg, seed, {}};
  data.events.reserve(n);
  Rng rng(seed);

  const double eta2 = cfg.eta() * cfg.eta();
  const double dt = cfg.delta_t();
  const double gamma = cfg.gamma();

  for (std::size_t i = 0; i < n; ++i) {
    const double wa = cfg.spectrum().sample(rng);
    const double wb = cfg.spectrum().sample(rng);
    const double u_kind = rng.uniform();
    const double u_chan = rng.uniform();
    const bool detected_a = rng.uniform() < gamma;
    const bool detected_b = rng.uniform() < gamma;

    const bool is_bunch = u_kind < 0.5 * (1.0 + eta2 * std::cos((wa - wb) * dt));
    const std::uint8_t first = u_chan < 0.5 ? 1 : 2;
    const std::uint8_t second = is_bunch ? first : (first == 1 ? std::uint8_t{2} : std::uint8_t{1});

    if (detected_a && detected_b) {
      if (is_bunch)
        data.events.push_back(
            DetectionEvent::bunch(first, bin_to_grid(wa, cfg), bin_to_grid(wb, cfg)));
      else if (first == 1)
        data.events.push_back(
            DetectionEvent::coincidence(bin_to_grid(wa, cfg), bin_to_grid(wb, cfg)));
      else
        data.events.push_back(
            DetectionEvent::coincidence(bin_to_grid(wb, cfg), bin_to_grid(wa, cfg)));
    } else if (detected_a) {
      data.events.push_back(DetectionEvent::single(first, bin_to_grid(wa, cfg)));
    } else if (detected_b) {
      data.events.push_back(DetectionEvent::single(second, bin_to_grid(wb, cfg)));
    } else {
      data.events.push_back(DetectionEvent::none());
    }
  }
  return data;
}

double log_likelihood(const EventDataset& data, double delta_t, long* n_clamped) {
  if (data.events.empty()) throw std::invalid_argument("log_likelihood: empty dataset");
  const double eta2 = data.config.eta() * data.config.eta();
  long clamped = 0;
  double ll = 0.0;
  for (const DetectionEvent& e : data.events) {
    if (e.kind != EventKind::Bunch && e.kind != EventKind::Coincidence) continue;
    const double beat = eta2 * std::cos((*e.omega_a - *e.omega_b) * delta_t);
    const double arg = e.kind == EventKind::Bunch ? beat : -beat;
    if (arg <= -1.0) {
      ++clamped;
      ll += std::log(1e-300);
    } else {
      ll += std::log1p(arg);
    }
  }
  if (n_clamped) *n_clamped = clamped;
  return ll;
}

namespace {

struct InformativeEvent {
  double delta;  // wa - wb
  double sign;   // +1 bunch, -1 coincidence
};

double informative_log_likelihood(const std::vector<InformativeEvent>& events, double eta2,
                                  double dt) {
  double ll = 0.0;
  for (const InformativeEvent& e : events) {
    const double arg = e.sign * eta2 * std::cos(e.delta * dt);
    ll += arg <= -1.0 ? std::log(1e-300) : std::log1p(arg);
  }
  return ll;
}

}  // namespace

EstimateResult mle(const EventDataset& data, double search_max) {
  if (!(search_max > 0.0)) throw std::invalid_argument("mle: search_max must be positive");

  std::vector<InformativeEvent> info;
  info.reserve(data.events.size());
  for (const DetectionEvent& e : data.events) {
    if (e.kind == EventKind::Bunch)
      info.push_back({*e.omega_a - *e.omega_b, 1.0});
    else if (e.kind == EventKind::Coincidence)
      info.push_back({*e.omega_a - *e.omega_b, -1.0});
  }
  if (info.empty())
    throw std::invalid_argument("mle: unidentifiable: dataset has no informative events");

  const double eta2 = data.config.eta() * data.config.eta();
  const double sigma = data.config.spectrum().sigma();
  const double width = 16.0 * sigma;  // spanned frequency-difference width
  const double step = kPi / (10.0 * width);

  // Global grid pass: the beat structure spaces local maxima about pi / W
  // apart, so ten samples per beat pin the global basin.
  const std::size_t n_steps = static_cast<std::size_t>(std::ceil(search_max / step));
  double best_t = 0.0;
  double best_ll = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k <= n_steps; ++k) {
    const double t = std::min(static_cast<double>(k) * step, search_max);
    const double ll = informative_log_likelihood(info, eta2, t);
    if (ll > best_ll) {
      best_ll = ll;
      best_t = t;
    }
  }

  // Golden-section refinement inside the winning bracket.
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = std::max(0.0, best_t - step);
  double hi = std::min(search_max, best_t + step);
  double x1 = hi - gr * (hi - lo);
  double x2 = lo + gr * (hi - lo);
  double f1 = informative_log_likelihood(info, eta2, x1);
  double f2 = informative_log_likelihood(info, eta2, x2);
  const double tol = 1e-10 * search_max;
  while (hi - lo > tol) {
    if (f1 > f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - gr * (hi - lo);
      f1 = informative_log_likelihood(info, eta2, x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + gr * (hi - lo);
      f2 = informative_log_likelihood(info, eta2, x2);
    }
  }
  const double t_hat = 0.5 * (lo + hi);

  EstimateResult r;
  r.delta_t_hat = t_hat;
  r.log_likelihood = log_likelihood(data, t_hat, &r.n_clamped);
  r.n_informative = static_cast<long>(info.size());
  const double fi = fi_resolved(data.config.with_delta_t(t_hat, ResolutionPolicy::Relax));
  r.stderr_crb = fi > 0.0 ? 1.0 / std::sqrt(static_cast<double>(info.size()) * fi)
                          : std::numeric_limits<double>::infinity();
  return r;
}

CrbValidationReport crb_validation(const ExperimentConfig& cfg, std::size_t n_events,
                                   int n_trials, std::uint64_t seed) {
  if (n_trials < 50)
    throw std::invalid_argument("crb_validation: need at least 50 trials");

  const double abs_dt = std::abs(cfg.delta_t());
  const double search_max = 2.0 * abs_dt + 2.0 * cfg.spectrum().coherence_time();

  std::vector<double> estimates(static_cast<std::size_t>(n_trials));
  std::vector<double> informative(static_cast<std::size_t>(n_trials));
  std::vector<std::string> errors(static_cast<std::size_t>(n_trials));
  parallel_for(static_cast<std::size_t>(n_trials), [&](std::size_t t) {
    try {
      const EventDataset data = sample_events(cfg, n_events, derive_stream_seed(seed, t));
      const EstimateResult est = mle(data, search_max);
      estimates[t] = est.delta_t_hat;
      informative[t] = static_cast<double>(est.n_informative);
    } catch (const std::exception& e) {
      errors[t] = e.what();
    }
  });
  for (const std::string& e : errors)
    if (!e.empty()) throw std::runtime_error("crb_validation: trial failed: " + e);

  double mean = 0.0, mean_info = 0.0;
  for (int t = 0; t < n_trials; ++t) {
    mean += estimates[static_cast<std::size_t>(t)];
    mean_info += informative[static_cast<std::size_t>(t)];
  }
  mean /= n_trials;
  mean_info /= n_trials;

  double var = 0.0;
  for (int t = 0; t < n_trials; ++t) {
    const double d = estimates[static_cast<std::size_t>(t)] - mean;
    var += d * d;
  }
  var /= (n_trials - 1);

  CrbValidationReport report;
  report.empirical_variance = var;
  report.crb = 1.0 / (mean_info * fi_resolved(cfg));
  report.ratio = var / report.crb;
  report.bias = mean - abs_dt;
  report.n_trials = n_trials;
  report.mean_estimate = mean;
  report.mean_informative = mean_info;
  return report;
}

}  // namespace spechom
