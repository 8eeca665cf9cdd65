#include "spechom/oracle.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace spechom::oracle {

namespace {
constexpr double kPi = 3.14159265358979323846;
using cplx = std::complex<double>;
}  // namespace

double DiscreteState::norm_squared(const std::vector<cplx>& v) {
  double n = 0.0;
  for (const cplx& a : v) n += std::norm(a);
  return n;
}

DiscreteState build_state(const ExperimentConfig& cfg, std::size_t m) {
  if (m < 8) throw std::invalid_argument("build_state: need at least 8 bins");
  const Spectrum& spec = cfg.spectrum();
  const double a = spec.support_min(), b = spec.support_max();
  const double h = (b - a) / static_cast<double>(m);
  const double dt = cfg.delta_t();
  if (dt != 0.0 && h > kPi / (8.0 * std::abs(dt)))
    throw std::invalid_argument(
        "build_state: grid spacing " + std::to_string(h) +
        " cannot resolve the beat oscillation; need <= " +
        std::to_string(kPi / (8.0 * std::abs(dt))) + " (increase M)");

  DiscreteState st;
  st.grid.resize(m);
  st.bin_width = h;
  for (std::size_t k = 0; k < m; ++k)
    st.grid[k] = a + h * (static_cast<double>(k) + 0.5);

  // Bin amplitudes c_k = xi(w_k) sqrt(h), renormalized on the grid.
  std::vector<double> c(m);
  double norm = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    c[k] = std::sqrt(spec.density(st.grid[k]) * h);
    norm += c[k] * c[k];
  }
  norm = std::sqrt(norm);
  for (double& v : c) v /= norm;

  // Emission times with t_tot = 0: only the difference is observable.
  const double t1 = -0.5 * dt;
  const double t2 = 0.5 * dt;
  const double eta = cfg.eta();
  const double eta_b = std::sqrt(std::max(0.0, 1.0 - eta * eta));

  st.photon1.assign(4 * m, cplx(0.0));
  st.photon2.assign(4 * m, cplx(0.0));
  for (std::size_t k = 0; k < m; ++k) {
    const cplx phase1 = std::polar(c[k], -st.grid[k] * t1);
    const cplx phase2 = std::polar(c[k], -st.grid[k] * t2);
    st.photon1[st.index(0, 0, k)] = eta * phase1;    // channel 1, mode a
    st.photon1[st.index(0, 1, k)] = eta_b * phase1;  // channel 1, mode b
    st.photon2[st.index(1, 0, k)] = phase2;          // channel 2, mode a
  }
  return st;
}

DiscreteState apply_beamsplitter(const DiscreteState& state) {
  DiscreteState out = state;
  const std::size_t m = state.bins();
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (std::vector<cplx>* photon : {&out.photon1, &out.photon2}) {
    for (int mode = 0; mode < 2; ++mode) {
      for (std::size_t k = 0; k < m; ++k) {
        const cplx v1 = (*photon)[state.index(0, mode, k)];
        const cplx v2 = (*photon)[state.index(1, mode, k)];
        (*photon)[state.index(0, mode, k)] = inv_sqrt2 * (v1 + v2);
        (*photon)[state.index(1, mode, k)] = inv_sqrt2 * (v2 - v1);
      }
    }
  }
  return out;
}

std::vector<WeightedOutcome> outcome_table(const DiscreteState& state, double gamma) {
  if (!(gamma > 0.0 && gamma <= 1.0))
    throw std::invalid_argument("outcome_table: gamma must lie in (0, 1]");
  const std::size_t m = state.bins();
  const double g2 = gamma * gamma;
  const auto& v1 = state.photon1;
  const auto& v2 = state.photon2;

  std::vector<WeightedOutcome> table;
  table.reserve(3 * m * m / 2 + 2 * m + 1);

  // Symmetrized pair amplitude for coordinates x != y:
  //   <vac| a_x a_y |psi> = v1[x] v2[y] + v1[y] v2[x];
  // for x == y the two-boson outcome has probability 2 |v1[x] v2[x]|^2.
  auto pair_prob = [&](std::size_t x, std::size_t y) {
    if (x == y) return 2.0 * std::norm(v1[x] * v2[x]);
    return std::norm(v1[x] * v2[y] + v1[y] * v2[x]);
  };

  // Bunching: both photons in channel ch, unordered bin pair {i, j},
  // summed over unordered inner-mode coordinate pairs.
  for (int ch = 0; ch < 2; ++ch) {
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = i; j < m; ++j) {
        double p = 0.0;
        if (i == j) {
          p += pair_prob(state.index(ch, 0, i), state.index(ch, 0, i));
          p += pair_prob(state.index(ch, 1, i), state.index(ch, 1, i));
          p += pair_prob(state.index(ch, 0, i), state.index(ch, 1, i));
        } else {
          for (int ma = 0; ma < 2; ++ma)
            for (int mb = 0; mb < 2; ++mb)
              p += pair_prob(state.index(ch, ma, i), state.index(ch, mb, j));
        }
        table.push_back({DetectionEvent::bunch(static_cast<std::uint8_t>(ch + 1),
                                               state.grid[i], state.grid[j]),
                         g2 * p});
      }
    }
  }

  // Coincidence: detector-1 bin i, detector-2 bin j (ordered outcome).
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      double p = 0.0;
      for (int ma = 0; ma < 2; ++ma)
        for (int mb = 0; mb < 2; ++mb)
          p += pair_prob(state.index(0, ma, i), state.index(1, mb, j));
      table.push_back({DetectionEvent::coincidence(state.grid[i], state.grid[j]), g2 * p});
    }
  }

  // Loss events: single detections and no detection.
  if (gamma < 1.0) {
    const double g1 = gamma * (1.0 - gamma);
    for (int ch = 0; ch < 2; ++ch) {
      for (std::size_t i = 0; i < m; ++i) {
        const double marginal = std::norm(v1[state.index(ch, 0, i)]) +
                                std::norm(v1[state.index(ch, 1, i)]) +
                                std::norm(v2[state.index(ch, 0, i)]) +
                                std::norm(v2[state.index(ch, 1, i)]);
        table.push_back({DetectionEvent::single(static_cast<std::uint8_t>(ch + 1),
                                                state.grid[i]),
                         g1 * marginal});
      }
    }
    table.push_back({DetectionEvent::none(), (1.0 - gamma) * (1.0 - gamma)});
  }
  return table;
}

double max_density_error(const ExperimentConfig& cfg, const DiscreteState& state) {
  const double cell = state.bin_width * state.bin_width;
  double worst = 0.0;
  for (const WeightedOutcome& o : outcome_table(state, cfg.gamma())) {
    double expected;
    switch (o.event.kind) {
      case EventKind::Bunch: {
        const bool diagonal = *o.event.omega_a == *o.event.omega_b;
        // Per channel: half the full-plane density cell; a quarter on the
        // diagonal, where the ordered region covers half a cell.
        expected = prob_bunch_density(cfg, *o.event.omega_a, *o.event.omega_b) * cell *
                   (diagonal ? 0.25 : 0.5);
        break;
      }
      case EventKind::Coincidence:
        expected =
            prob_coinc_density(cfg, *o.event.omega_a, *o.event.omega_b) * cell * 0.5;
        break;
      default:
        continue;  // loss events have no density counterpart here
    }
    worst = std::max(worst, std::abs(o.probability - expected));
  }
  return worst;
}

FiniteDifferenceResult fi_finite_difference(const ExperimentConfig& cfg, std::size_t m,
                                            double h) {
  const double sigma = cfg.spectrum().sigma();
  if (!(h > 0.0) || h > 1e-3 / sigma)
    throw std::invalid_argument(
        "fi_finite_difference: step must satisfy 0 < h <= 1e-3 / sigma");

  auto tables = [&](double dt) {
    const ExperimentConfig shifted = cfg.with_delta_t(dt, ResolutionPolicy::Relax);
    return outcome_table(apply_beamsplitter(build_state(shifted, m)), cfg.gamma());
  };
  const auto center = tables(cfg.delta_t());
  const auto plus = tables(cfg.delta_t() + h);
  const auto minus = tables(cfg.delta_t() - h);

  FiniteDifferenceResult result;
  for (std::size_t k = 0; k < center.size(); ++k) {
    const double p = center[k].probability;
    if (p < 1e-14) {
      result.excluded_probability += p;
      continue;
    }
    const double dp = (plus[k].probability - minus[k].probability) / (2.0 * h);
    result.fi += dp * dp / p;
  }
  return result;
}

}  // namespace spechom::oracle
