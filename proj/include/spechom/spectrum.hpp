#pragma once

#include <utility>
#include <vector>

#include "spechom/rng.hpp"

namespace spechom {

enum class SpectrumKind { Gaussian, Tabulated };

/// A knot of a tabulated density: (angular frequency, density value).
struct SpectrumKnot {
  double omega;
  double density;
};

/// Single-photon frequency probability density with mean `center` and
/// standard deviation `sigma` (all in reciprocal arbitrary units).
///
/// Gaussian spectra are parametric; tabulated spectra are piecewise-linear
/// between knots, normalized at construction, with moments computed from the
/// table. Values are immutable after construction and safe to share across
/// threads.
class Spectrum {
 public:
  static Spectrum gaussian(double center, double sigma);

  /// Builds a tabulated spectrum from (omega, density) knots with strictly
  /// increasing omega. The density is normalized to unit mass; throws
  /// std::invalid_argument for negative/non-finite values or a
  /// non-normalizable table.
  static Spectrum tabulated(std::vector<SpectrumKnot> knots);

  SpectrumKind kind() const { return kind_; }
  double center() const { return center_; }
  double sigma() const { return sigma_; }
  double variance() const { return sigma_ * sigma_; }
  /// Coherence time tau = 1/sigma.
  double coherence_time() const { return 1.0 / sigma_; }

  /// Density value at omega; zero outside a tabulated knot range.
  double density(double omega) const;

  /// (mean, variance) of the density. Exact parameters for Gaussian kind,
  /// computed from the piecewise-linear table otherwise.
  std::pair<double, double> moments() const { return {center_, sigma_ * sigma_}; }

  /// Draws a frequency distributed as the density. Gaussian kind uses an
  /// exact normal sampler; tabulated kind inverts the piecewise CDF.
  double sample(Rng& rng) const;

  /// Truncated support used for quadrature and sampling:
  /// [center - 8 sigma, center + 8 sigma] for Gaussian, the knot range for
  /// tabulated spectra.
  double support_min() const { return support_min_; }
  double support_max() const { return support_max_; }

  const std::vector<SpectrumKnot>& knots() const { return knots_; }

 private:
  Spectrum() = default;

  double sample_tabulated(double u) const;

  SpectrumKind kind_ = SpectrumKind::Gaussian;
  double center_ = 0.0;
  double sigma_ = 1.0;
  double support_min_ = 0.0;
  double support_max_ = 0.0;
  std::vector<SpectrumKnot> knots_;  // normalized, Tabulated only
  std::vector<double> cdf_;          // cumulative mass at each knot
};

}  // namespace spechom
