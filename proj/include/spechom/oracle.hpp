#pragma once

#include <complex>
#include <vector>

#include "spechom/interference.hpp"

namespace spechom::oracle {

/// Two-photon state on a finite frequency grid. Each photon is a
/// single-photon amplitude vector over coordinates
/// (channel in {1,2}) x (inner mode in {a,b}) x (frequency bin); the physical
/// two-photon state is the symmetrized product of the two vectors. The input
/// photons occupy orthogonal channels, so the symmetrized norm stays 1 under
/// any channel unitary.
struct DiscreteState {
  std::vector<double> grid;                     // bin-center frequencies, length M
  double bin_width = 0.0;
  std::vector<std::complex<double>> photon1;    // length 4 M, [ch][mode][bin]
  std::vector<std::complex<double>> photon2;    // photon 2 has no b-mode support

  std::size_t bins() const { return grid.size(); }
  std::size_t index(int channel, int mode, std::size_t bin) const {
    return (static_cast<std::size_t>(channel) * 2 + static_cast<std::size_t>(mode)) * bins() +
           bin;
  }
  /// Sum of |amplitude|^2 of one photon vector.
  static double norm_squared(const std::vector<std::complex<double>>& v);
};

/// Builds the pre-beam-splitter state for cfg on M midpoint bins over the
/// truncated support. Photon 1 carries the eta / sqrt(1 - eta^2) split over
/// inner modes and phase e^{-i w t1}; photon 2 is in channel 2, mode a, with
/// phase e^{-i w t2}; t2 - t1 = delta_t. Throws if M < 8 or the grid cannot
/// resolve the beat oscillation (spacing > pi / (8 |delta_t|)).
DiscreteState build_state(const ExperimentConfig& cfg, std::size_t m);

/// Applies the balanced beam-splitter unitary
///   a1+ -> (a1+ - a2+)/sqrt(2),  a2+ -> (a1+ + a2+)/sqrt(2)
/// to the channel index of both photons (same map for the b modes).
DiscreteState apply_beamsplitter(const DiscreteState& state);

struct WeightedOutcome {
  DetectionEvent event;
  double probability;
};

/// Enumerates every detector outcome of the post-beam-splitter state with
/// detection efficiency gamma: bunching events per channel and unordered bin
/// pair, coincidence events per ordered (detector-1 bin, detector-2 bin),
/// single detections, and the no-detection outcome. Inner modes are traced
/// out. Probabilities sum to 1.
std::vector<WeightedOutcome> outcome_table(const DiscreteState& state, double gamma);

/// Largest absolute deviation between the enumerated pair-outcome
/// probabilities of a post-beam-splitter state and the closed-form densities
/// times the bin area (diagonal bins carry half a cell of the ordered
/// region, so their expectation is halved).
double max_density_error(const ExperimentConfig& cfg, const DiscreteState& state);

struct FiniteDifferenceResult {
  double fi = 0.0;                  // sum over outcomes of (dP/d dt)^2 / P
  double excluded_probability = 0.0;  // mass of outcomes dropped by the P cutoff
};

/// Fisher information by central finite differences of the full outcome
/// distribution at delta_t +- h. Outcomes with P < 1e-14 are dropped and
/// their mass reported. Requires h <= 1e-3 / sigma so that the step stays
/// far below the fastest beat period on the grid.
FiniteDifferenceResult fi_finite_difference(const ExperimentConfig& cfg, std::size_t m,
                                            double h);

}  // namespace spechom::oracle
