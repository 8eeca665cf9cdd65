#pragma once

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "spechom/interference.hpp"

namespace spechom {

/// Fisher-information values for one experiment configuration, from every
/// route, together with the Cramer-Rao bounds for n_repetitions measurements.
/// All FI values are in time^-2 (reciprocal arbitrary units squared).
struct FisherReport {
  double fi_resolved = 0.0;     // frequency-resolved FI, by quadrature
  double fi_eta1 = 0.0;         // 2 gamma^2 sigma^2
  double fi_nonresolved = 0.0;  // counting-only FI
  double fi_large_delay = 0.0;  // delay-independent large-|dt| limit
  double qfi = 0.0;             // 2 sigma^2
  double crb_resolved = 0.0;
  double crb_nonresolved = 0.0;
  double qcrb = 0.0;
  int n_repetitions = 1;
};

/// The beat-weighting function sin^2(x) / (1 - eta^4 cos^2(x)).
/// Pi-periodic for eta < 1, oscillating between 0 at x = k pi and 1 at
/// x = (k + 1/2) pi; identically 1 at eta = 1 (the 0/0 points are removable
/// with limit 1).
double zeta(double eta, double x);

/// Average of zeta over one period: (1 - sqrt(1 - eta^4)) / eta^4, evaluated
/// in the cancellation-free form 1 / (1 + sqrt(1 - eta^4)). Tends to 1/2 as
/// eta -> 0 and equals 1 at eta = 1.
double zeta_period_average(double eta);

/// Frequency-resolved Fisher information
///   eta^4 gamma^2 int int xi^2(w) xi^2(w') (w - w')^2 zeta(eta, (w - w') dt) dw dw'.
/// Gaussian spectra use the 1-D reduction in delta = w - w' with
/// oscillation-aware adaptive quadrature (relative target 1e-7); tabulated
/// spectra use the 2-D integral on the truncated support. Throws
/// QuadratureError if the refinement budget is exhausted.
double fi_resolved(const ExperimentConfig& cfg);

/// Closed form at eta = 1: 2 gamma^2 sigma^2 (= gamma^2 * QFI).
double fi_eta1(const ExperimentConfig& cfg);

/// Fisher information of non-resolved (counting-only) measurements:
///   2 F_eta1 eta^4 dt^2 sigma^2 / (e^{2 dt^2 sigma^2} - eta^4)
/// for Gaussian spectra; for tabulated spectra computed from the analytic
/// derivative of the non-resolved probabilities. Returns 0 at dt = 0.
double fi_nonresolved(const ExperimentConfig& cfg);

/// Large-delay limit 2 (1 - sqrt(1 - eta^4)) gamma^2 sigma^2.
double fi_large_delay(double eta, double gamma, double sigma);

/// Quantum Fisher information for the delay: 2 sigma^2, independent of
/// delta_t and eta by construction.
double qfi(const Spectrum& spec);

/// Scalar products entering the quantum Fisher information matrix, computed
/// by quadrature of the spectral moments. The derivative index "-" refers to
/// the delay, "+" to the total emission time.
struct QfimScalarProducts {
  double d_minus_d_minus;               // <d- psi | d- psi>
  double d_plus_d_plus;                 // <d+ psi | d+ psi>
  double d_minus_d_plus;                // <d- psi | d+ psi> (real)
  std::complex<double> psi_d_minus;     // <psi | d- psi>
  std::complex<double> psi_d_plus;      // <psi | d+ psi> = -i omega_0
};

QfimScalarProducts qfim_scalar_products(const Spectrum& spec);

/// 2x2 quantum Fisher information matrix for (delay, total emission time),
/// assembled from the quadrature scalar products; diagonal with entries
/// 2 sigma^2.
std::array<std::array<double, 2>, 2> qfim(const Spectrum& spec);

/// Cramer-Rao bound 1 / (n * fi); +infinity when fi = 0.
double crb(double fi, int n);

/// Builds a FisherReport for cfg with all routes evaluated.
FisherReport fisher_report(const ExperimentConfig& cfg, int n_repetitions);

enum class ScanAxis { DeltaT, SigmaSq };

struct ScanPoint {
  double axis_value = 0.0;
  std::optional<FisherReport> report;  // empty when the point failed
  std::string error;                   // failure description, if any
};

/// Evaluates fisher_report over a grid of delay or variance values.
/// Quadrature failures are recorded per point without aborting the scan.
/// Points are evaluated in parallel; output order follows the grid.
std::vector<ScanPoint> fisher_scan(const ExperimentConfig& base, ScanAxis axis,
                                   const std::vector<double>& grid,
                                   int n_repetitions = 1);

}  // namespace spechom
