#include "spechom/fisher.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "spechom/parallel.hpp"
#include "spechom/quadrature.hpp"

namespace spechom {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kInf = std::numeric_limits<double>::infinity();
}  // namespace

double zeta(double eta, double x) {
  if (!(eta >= 0.0 && eta <= 1.0))
    throw std::invalid_argument("zeta: eta must lie in [0, 1]");
  const double e2 = eta * eta;
  const double e4 = e2 * e2;
  const double s = std::sin(x);
  const double s2 = s * s;
  // 1 - eta^4 cos^2 x rewritten as (1 - eta^4) + eta^4 sin^2 x: no
  // cancellation, and exactly sin^2 x at eta = 1.
  const double denom = (1.0 - e4) + e4 * s2;
  if (denom < 1e-12) return 1.0;  // removable 0/0 at eta = 1, x = k pi
  return s2 / denom;
}

double zeta_period_average(double eta) {
  if (!(eta >= 0.0 && eta <= 1.0))
    throw std::invalid_argument("zeta_period_average: eta must lie in [0, 1]");
  const double e4 = eta * eta * eta * eta;
  return 1.0 / (1.0 + std::sqrt(1.0 - e4));
}

namespace {

// 1-D reduction for Gaussian spectra: the difference delta = w - w' is
// normal with variance 2 sigma^2, and
//   I(dt) = int n(delta; 0, 2 sigma^2) delta^2 zeta(eta, delta dt) d delta.
double resolved_integral_gaussian(double eta, double sigma, double dt) {
  const double s2 = 2.0 * sigma * sigma;  // variance of delta
  const double span = 8.0 * std::sqrt(s2);
  const double norm = 1.0 / std::sqrt(2.0 * kPi * s2);
  const double panel_beat =
      dt != 0.0 ? kPi / (4.0 * std::abs(dt)) : kInf;
  const double panel = std::min(panel_beat, span / 8.0);
  return integrate_adaptive(
      [&](double d) {
        return norm * std::exp(-d * d / (2.0 * s2)) * d * d * zeta(eta, d * dt);
      },
      -span, span, 1e-7, 1e-300, panel, 200000);
}

// Full 2-D integral for tabulated spectra on a uniform composite-Simpson
// grid fine enough for both the knot structure and the beat oscillation.
double resolved_integral_tabulated(const Spectrum& spec, double eta, double dt) {
  const double a = spec.support_min(), b = spec.support_max();
  const double beat_step = dt != 0.0 ? kPi / (8.0 * std::abs(dt)) : kInf;
  const double target = std::min({spec.sigma() / 24.0, beat_step, (b - a) / 64.0});
  std::size_t n = static_cast<std::size_t>(std::ceil((b - a) / target));
  n = std::min<std::size_t>(std::max<std::size_t>(n, 64), 4096);
  if (n % 2 == 1) ++n;  // Simpson needs an even panel count

  const double h = (b - a) / static_cast<double>(n);
  std::vector<double> w(n + 1), dens(n + 1), node(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    node[i] = a + h * static_cast<double>(i);
    dens[i] = spec.density(node[i]);
    w[i] = (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
  }
  double sum = 0.0;
  for (std::size_t i = 0; i <= n; ++i) {
    if (dens[i] == 0.0) continue;
    double inner = 0.0;
    for (std::size_t j = 0; j <= n; ++j) {
      const double d = node[i] - node[j];
      inner += w[j] * dens[j] * d * d * zeta(eta, d * dt);
    }
    sum += w[i] * dens[i] * inner;
  }
  return sum * h * h / 9.0;
}

}  // namespace

double fi_resolved(const ExperimentConfig& cfg) {
  const double eta = cfg.eta();
  const double g2 = cfg.gamma() * cfg.gamma();
  const double e4 = eta * eta * eta * eta;
  if (e4 == 0.0) return 0.0;
  const Spectrum& spec = cfg.spectrum();
  const double integral =
      spec.kind() == SpectrumKind::Gaussian
          ? resolved_integral_gaussian(eta, spec.sigma(), cfg.delta_t())
          : resolved_integral_tabulated(spec, eta, cfg.delta_t());
  return e4 * g2 * integral;
}

double fi_eta1(const ExperimentConfig& cfg) {
  const double g2 = cfg.gamma() * cfg.gamma();
  return 2.0 * g2 * cfg.spectrum().variance();
}

double fi_nonresolved(const ExperimentConfig& cfg) {
  const double dt = cfg.delta_t();
  if (dt == 0.0) return 0.0;
  const double e2 = cfg.eta() * cfg.eta();
  const double e4 = e2 * e2;
  const double g2 = cfg.gamma() * cfg.gamma();

  if (cfg.spectrum().kind() == SpectrumKind::Gaussian) {
    const double s2 = cfg.spectrum().variance();
    const double x = dt * dt * s2;
    // denominator e^{2x} - eta^4 written via expm1 so the eta = 1, x -> 0
    // limit evaluates stably to F_eta1.
    const double denom = std::expm1(2.0 * x) + (1.0 - e4);
    if (!std::isfinite(denom)) return 0.0;
    return 2.0 * fi_eta1(cfg) * e4 * x / denom;
  }

  // Counting-only FI from the two-outcome distribution with
  // K(dt) = |chi(dt)|^2:  gamma^2 eta^4 K'^2 / (1 - eta^4 K^2).
  const Spectrum& spec = cfg.spectrum();
  const double a = spec.support_min(), b = spec.support_max();
  const double panel =
      dt != 0.0 ? (2.0 * kPi / std::abs(dt)) / 8.0 : kInf;
  const double re = integrate_adaptive(
      [&](double w) { return spec.density(w) * std::cos(w * dt); }, a, b, 1e-10, 1e-13, panel);
  const double im = integrate_adaptive(
      [&](double w) { return spec.density(w) * std::sin(w * dt); }, a, b, 1e-10, 1e-13, panel);
  const double re_p = integrate_adaptive(
      [&](double w) { return -w * spec.density(w) * std::sin(w * dt); }, a, b, 1e-10, 1e-13,
      panel);
  const double im_p = integrate_adaptive(
      [&](double w) { return w * spec.density(w) * std::cos(w * dt); }, a, b, 1e-10, 1e-13,
      panel);
  const double k = re * re + im * im;
  const double kp = 2.0 * (re * re_p + im * im_p);
  const double denom = 1.0 - e4 * k * k;
  if (denom < 1e-300) return fi_eta1(cfg);  // eta = 1, dt -> 0 corner
  return g2 * e4 * kp * kp / denom;
}

double fi_large_delay(double eta, double gamma, double sigma) {
  if (!(eta >= 0.0 && eta <= 1.0))
    throw std::invalid_argument("fi_large_delay: eta must lie in [0, 1]");
  const double e4 = eta * eta * eta * eta;
  // 2 (1 - sqrt(1 - eta^4)) gamma^2 sigma^2 in cancellation-free form.
  return 2.0 * gamma * gamma * sigma * sigma * e4 / (1.0 + std::sqrt(1.0 - e4));
}

double qfi(const Spectrum& spec) { return 2.0 * spec.variance(); }

QfimScalarProducts qfim_scalar_products(const Spectrum& spec) {
  const double a = spec.support_min(), b = spec.support_max();
  auto moment = [&](int order) {
    return integrate_adaptive(
        [&](double w) {
          double f = spec.density(w);
          for (int k = 0; k < order; ++k) f *= w;
          return f;
        },
        a, b, 1e-10, 1e-13, (b - a) / 16.0, 100000);
  };
  const double n0 = moment(0);
  const double m1 = moment(1);
  const double m2 = moment(2);

  QfimScalarProducts p{};
  // <d+- psi | d+- psi> = (1/4) E[(w1 -+ w2)^2] over the product measure.
  p.d_minus_d_minus = 0.25 * (2.0 * m2 * n0 - 2.0 * m1 * m1);
  p.d_plus_d_plus = 0.25 * (2.0 * m2 * n0 + 2.0 * m1 * m1);
  p.d_minus_d_plus = 0.25 * (m2 * n0 - n0 * m2);
  p.psi_d_minus = std::complex<double>(0.0, -0.5 * (m1 * n0 - n0 * m1));
  p.psi_d_plus = std::complex<double>(0.0, -0.5 * (m1 * n0 + n0 * m1));
  return p;
}

std::array<std::array<double, 2>, 2> qfim(const Spectrum& spec) {
  const QfimScalarProducts p = qfim_scalar_products(spec);
  auto entry = [](double overlap, std::complex<double> bi, std::complex<double> bj) {
    return 4.0 * (overlap - (std::conj(bi) * bj).real());
  };
  std::array<std::array<double, 2>, 2> h{};
  h[0][0] = entry(p.d_minus_d_minus, p.psi_d_minus, p.psi_d_minus);
  h[0][1] = entry(p.d_minus_d_plus, p.psi_d_minus, p.psi_d_plus);
  h[1][0] = h[0][1];
  h[1][1] = entry(p.d_plus_d_plus, p.psi_d_plus, p.psi_d_plus);
  return h;
}

double crb(double fi, int n) {
  if (n < 1) throw std::invalid_argument("crb: n must be >= 1");
  if (fi < 0.0) throw std::invalid_argument("crb: fi must be >= 0");
  if (fi == 0.0) return kInf;
  return 1.0 / (static_cast<double>(n) * fi);
}

FisherReport fisher_report(const ExperimentConfig& cfg, int n_repetitions) {
  FisherReport r;
  r.fi_resolved = fi_resolved(cfg);
  r.fi_eta1 = fi_eta1(cfg);
  r.fi_nonresolved = fi_nonresolved(cfg);
  r.fi_large_delay = fi_large_delay(cfg.eta(), cfg.gamma(), cfg.spectrum().sigma());
  r.qfi = qfi(cfg.spectrum());
  r.crb_resolved = crb(r.fi_resolved, n_repetitions);
  r.crb_nonresolved = crb(r.fi_nonresolved, n_repetitions);
  r.qcrb = crb(r.qfi, n_repetitions);
  r.n_repetitions = n_repetitions;
  return r;
}

std::vector<ScanPoint> fisher_scan(const ExperimentConfig& base, ScanAxis axis,
                                   const std::vector<double>& grid, int n_repetitions) {
  if (grid.empty()) throw std::invalid_argument("fisher_scan: empty grid");
  if (axis == ScanAxis::SigmaSq) {
    if (base.spectrum().kind() != SpectrumKind::Gaussian)
      throw std::invalid_argument("fisher_scan: variance axis requires a Gaussian spectrum");
    for (double v : grid)
      if (!(v > 0.0))
        throw std::invalid_argument("fisher_scan: variance grid values must be positive");
  }

  std::vector<ScanPoint> points(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) {
    points[i].axis_value = grid[i];
    try {
      // FI routes do not depend on delta_omega, so per-point configs skip
      // the resolution re-check a scanned delay would otherwise trip.
      ExperimentConfig cfg =
          axis == ScanAxis::DeltaT
              ? base.with_delta_t(grid[i], ResolutionPolicy::Relax)
              : ExperimentConfig(base.delta_t(), base.eta(), base.gamma(),
                                 base.delta_omega(),
                                 Spectrum::gaussian(base.spectrum().center(),
                                                    std::sqrt(grid[i])),
                                 ResolutionPolicy::Relax);
      points[i].report = fisher_report(cfg, n_repetitions);
    } catch (const std::exception& e) {
      points[i].error = e.what();
    }
  });
  return points;
}

}  // namespace spechom
