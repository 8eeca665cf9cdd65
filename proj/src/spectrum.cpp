#include "spechom/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace spechom {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kSupportSigmas = 8.0;

// Exact integrals of the linear interpolant over one segment:
// returns (mass, first moment, second moment).
struct SegmentMoments {
  double m0, m1, m2;
};

SegmentMoments segment_moments(const SpectrumKnot& l, const SpectrumKnot& r) {
  const double w = r.omega - l.omega;
  const double a = l.omega, b = r.omega;
  const double da = l.density, db = r.density;
  // density(x) = da + (db-da)*(x-a)/w on [a, b]
  SegmentMoments s;
  s.m0 = 0.5 * (da + db) * w;
  // int x * d(x): da * (b^2-a^2)/2 + (db-da)/w * int x(x-a)
  // int_a^b x(x-a) dx = (b-a)^2 (2b + a) / 6
  s.m1 = 0.5 * da * (b * b - a * a) + (db - da) / w * (w * w * (2.0 * b + a) / 6.0);
  // int_a^b x^2 (x-a) dx = (b-a)^2 (3b^2 + 2ab + a^2) / 12
  s.m2 = da * (b * b * b - a * a * a) / 3.0 +
         (db - da) / w * (w * w * (3.0 * b * b + 2.0 * a * b + a * a) / 12.0);
  return s;
}

}  // namespace

Spectrum Spectrum::gaussian(double center, double sigma) {
  if (!std::isfinite(center) || !std::isfinite(sigma) || sigma <= 0.0)
    throw std::invalid_argument("Spectrum::gaussian: requires finite center and sigma > 0");
  Spectrum s;
  s.kind_ = SpectrumKind::Gaussian;
  s.center_ = center;
  s.sigma_ = sigma;
  s.support_min_ = center - kSupportSigmas * sigma;
  s.support_max_ = center + kSupportSigmas * sigma;
  return s;
}

Spectrum Spectrum::tabulated(std::vector<SpectrumKnot> knots) {
  if (knots.size() < 2)
    throw std::invalid_argument("Spectrum::tabulated: need at least two knots");
  for (std::size_t i = 0; i < knots.size(); ++i) {
    if (!std::isfinite(knots[i].omega) || !std::isfinite(knots[i].density))
      throw std::invalid_argument("Spectrum::tabulated: non-finite knot");
    if (knots[i].density < 0.0)
      throw std::invalid_argument("Spectrum::tabulated: negative density");
    if (i > 0 && !(knots[i].omega > knots[i - 1].omega))
      throw std::invalid_argument("Spectrum::tabulated: omegas must strictly increase");
  }

  double mass = 0.0;
  for (std::size_t i = 0; i + 1 < knots.size(); ++i)
    mass += segment_moments(knots[i], knots[i + 1]).m0;
  if (!(mass > 0.0) || !std::isfinite(mass))
    throw std::invalid_argument("Spectrum::tabulated: table is not normalizable");

  for (SpectrumKnot& k : knots) k.density /= mass;

  double m1 = 0.0, m2 = 0.0;
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    const SegmentMoments sm = segment_moments(knots[i], knots[i + 1]);
    m1 += sm.m1;
    m2 += sm.m2;
  }
  const double var = m2 - m1 * m1;
  if (!(var > 0.0))
    throw std::invalid_argument("Spectrum::tabulated: density has no spectral width");

  Spectrum s;
  s.kind_ = SpectrumKind::Tabulated;
  s.center_ = m1;
  s.sigma_ = std::sqrt(var);
  s.support_min_ = knots.front().omega;
  s.support_max_ = knots.back().omega;

  s.cdf_.resize(knots.size());
  s.cdf_[0] = 0.0;
  for (std::size_t i = 0; i + 1 < knots.size(); ++i)
    s.cdf_[i + 1] = s.cdf_[i] + segment_moments(knots[i], knots[i + 1]).m0;
  s.cdf_.back() = 1.0;  // absorb rounding in the last segment
  s.knots_ = std::move(knots);
  return s;
}

double Spectrum::density(double omega) const {
  if (kind_ == SpectrumKind::Gaussian) {
    const double z = (omega - center_) / sigma_;
    return std::exp(-0.5 * z * z) / (sigma_ * std::sqrt(2.0 * kPi));
  }
  if (omega < knots_.front().omega || omega > knots_.back().omega) return 0.0;
  const auto it = std::upper_bound(
      knots_.begin(), knots_.end(), omega,
      [](double w, const SpectrumKnot& k) { return w < k.omega; });
  const std::size_t hi = std::min<std::size_t>(it - knots_.begin(), knots_.size() - 1);
  const std::size_t lo = hi - 1;
  const SpectrumKnot& l = knots_[lo];
  const SpectrumKnot& r = knots_[hi];
  const double t = (omega - l.omega) / (r.omega - l.omega);
  return l.density + t * (r.density - l.density);
}

double Spectrum::sample(Rng& rng) const {
  if (kind_ == SpectrumKind::Gaussian) {
    // Reject the < 1e-15 mass outside the truncated support so that sampled
    // frequencies always lie where quadrature integrates.
    for (;;) {
      const double w = center_ + sigma_ * rng.normal();
      if (w >= support_min_ && w <= support_max_) return w;
    }
  }
  return sample_tabulated(rng.uniform());
}

double Spectrum::sample_tabulated(double u) const {
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  std::size_t hi = std::min<std::size_t>(it - cdf_.begin(), cdf_.size() - 1);
  hi = std::max<std::size_t>(hi, 1);
  const std::size_t lo = hi - 1;
  const SpectrumKnot& l = knots_[lo];
  const SpectrumKnot& r = knots_[hi];
  const double w = r.omega - l.omega;
  const double slope = (r.density - l.density) / w;
  const double rmass = u - cdf_[lo];

  // Solve 0.5*slope*t^2 + d_l*t = rmass for t in [0, w].
  double t;
  if (std::abs(slope) * w < 1e-12 * std::max(l.density, 1e-300)) {
    t = l.density > 0.0 ? rmass / l.density : 0.5 * w;
  } else {
    const double disc = l.density * l.density + 2.0 * slope * rmass;
    t = (-l.density + std::sqrt(std::max(disc, 0.0))) / slope;
  }
  return l.omega + std::clamp(t, 0.0, w);
}

}  // namespace spechom
