#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace spechom {

/// Thrown when adaptive integration cannot reach the requested tolerance
/// within its panel budget. Carries the best error estimate achieved.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double value, double error_estimate)
      : std::runtime_error(what), value_(value), error_estimate_(error_estimate) {}

  double value() const { return value_; }
  double error_estimate() const { return error_estimate_; }

 private:
  double value_;
  double error_estimate_;
};

namespace detail {

// Gauss-Kronrod 7-15 abscissae and weights on [-1, 1].
inline constexpr double kGk15Nodes[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.000000000000000};
inline constexpr double kGk15Weights[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
inline constexpr double kGauss7Weights[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469};

}  // namespace detail

struct PanelEstimate {
  double value = 0.0;
  double error = 0.0;
};

/// One Gauss-Kronrod 7-15 panel over [a, b].
template <class F>
PanelEstimate gauss_kronrod_15(F&& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);

  const double f0 = f(mid);
  double kronrod = detail::kGk15Weights[7] * f0;
  double gauss = detail::kGauss7Weights[3] * f0;

  for (int i = 0; i < 7; ++i) {
    const double dx = half * detail::kGk15Nodes[i];
    const double fsum = f(mid + dx) + f(mid - dx);
    kronrod += detail::kGk15Weights[i] * fsum;
    if (i % 2 == 1) gauss += detail::kGauss7Weights[i / 2] * fsum;
  }
  kronrod *= half;
  gauss *= half;

  // |K - G| estimates the embedded Gauss rule's error and overstates the
  // Kronrod error; kept as-is it is a conservative bound.
  const double err = std::max(std::abs(kronrod - gauss), std::abs(kronrod) * 5e-16);
  return {kronrod, err};
}

/// Adaptive composite integration of f over [a, b].
///
/// The interval is first cut into panels no wider than `max_panel_width`
/// (use +inf for no constraint); the worst panel is then bisected until the
/// summed error estimate satisfies the tolerance. Oscillatory integrands get
/// their beat scale honoured through the initial panel width.
template <class F>
double integrate_adaptive(F&& f, double a, double b, double rel_tol = 1e-9,
                          double abs_tol = 1e-300,
                          double max_panel_width = std::numeric_limits<double>::infinity(),
                          std::size_t max_panels = 20000) {
  if (!(b > a)) return 0.0;

  struct Panel {
    double a, b, value, error;
  };

  const double span = b - a;
  std::size_t n_initial = 1;
  if (std::isfinite(max_panel_width) && max_panel_width > 0.0)
    n_initial = static_cast<std::size_t>(std::ceil(span / max_panel_width));
  n_initial = std::max<std::size_t>(n_initial, 1);
  if (n_initial > max_panels)
    throw QuadratureError("integrate_adaptive: initial panel count " +
                              std::to_string(n_initial) + " exceeds budget " +
                              std::to_string(max_panels),
                          std::numeric_limits<double>::quiet_NaN(),
                          std::numeric_limits<double>::infinity());

  std::vector<Panel> panels;
  panels.reserve(n_initial + 64);
  for (std::size_t i = 0; i < n_initial; ++i) {
    const double pa = a + span * static_cast<double>(i) / static_cast<double>(n_initial);
    const double pb = a + span * static_cast<double>(i + 1) / static_cast<double>(n_initial);
    const PanelEstimate e = gauss_kronrod_15(f, pa, pb);
    panels.push_back({pa, pb, e.value, e.error});
  }

  auto totals = [&panels]() {
    double v = 0.0, e = 0.0;
    for (const Panel& p : panels) {
      v += p.value;
      e += p.error;
    }
    return std::pair<double, double>(v, e);
  };

  auto [value, error] = totals();
  while (error > std::max(abs_tol, rel_tol * std::abs(value))) {
    if (panels.size() >= max_panels)
      throw QuadratureError("integrate_adaptive: tolerance not reached with " +
                                std::to_string(panels.size()) + " panels (error estimate " +
                                std::to_string(error) + ")",
                            value, error);
    std::size_t worst = 0;
    for (std::size_t i = 1; i < panels.size(); ++i)
      if (panels[i].error > panels[worst].error) worst = i;

    const Panel p = panels[worst];
    const double mid = 0.5 * (p.a + p.b);
    if (mid <= p.a || mid >= p.b) break;  // interval at machine resolution
    const PanelEstimate left = gauss_kronrod_15(f, p.a, mid);
    const PanelEstimate right = gauss_kronrod_15(f, mid, p.b);
    panels[worst] = {p.a, mid, left.value, left.error};
    panels.push_back({mid, p.b, right.value, right.error});

    std::tie(value, error) = totals();
  }
  return value;
}

}  // namespace spechom
