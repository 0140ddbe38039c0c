#ifndef MAHLERK_MEASURE_HPP
#define MAHLERK_MEASURE_HPP

#include <limits>
#include <string>
#include <vector>

#include "mahlerk/laurent.hpp"
#include "mahlerk/roots.hpp"

namespace mahlerk {

struct QuadratureConfig {
    int panel_order = 16;        // Gauss nodes per panel
    double grading_ratio = 0.5;  // geometric shrink factor toward circle roots
    int grading_depth = 60;      // graded panels per window side
    int smooth_panels = 64;      // base panel count on the complement A
    double lemma2_epsilon = 0.1; // half-width of the local-model bracket
    double circle_tolerance = 1e-9;
    double target_tolerance = 1e-10;
    // Cap on the automatically selected window half-width (CLI --delta).
    double delta_cap = std::numeric_limits<double>::infinity();

    void validate() const; // throws std::invalid_argument
};

enum class MeasureStatus { ok, diverging };

struct RegionContribution {
    std::string region;  // "A" or "window(t=...)"
    double scaled = 0.0; // signed contribution to m_k / k!
};

struct HigherMeasureResult {
    int k = 0;
    double value = 0.0;          // signed m_k (overflows to +-inf for very large k)
    double scaled = 0.0;         // |m_k| / k!, accumulated without forming k!
    double error_estimate = 0.0; // scaled units
    std::vector<RegionContribution> breakdown;
    MeasureStatus status = MeasureStatus::ok;
    std::vector<std::string> warnings;
};

/// Classical Mahler measure via Jensen's formula:
/// log|a| + sum log max{1, |r_j|} over the roots of the ordinary lift.
double jensen_measure(const LaurentPolynomial& p);

/// int_0^x log^k u du in closed form:
/// x log^k x + x sum_{j=1}^{k} (-1)^j k! log^{k-j} x / (k-j)!.
/// Terms are summed smallest-magnitude first with sign tracking.
double log_power_antiderivative(double x, int k);

/// (1/k!) | int_{t0-h}^{t0+h} log^k |c (t - t0)| dt |, requiring c*h <= 1 so
/// the integrand is sign-definite. Converges to 2/c as k grows.
double log_power_window_integral(double c, double half_width, int k);

/// m_k(P) by the window decomposition: composite Gauss panels on the
/// complement of the root windows (with adaptive bisection), geometrically
/// graded panels inside each window, and a closed-form tail on the
/// innermost sliver under the bracketed local model.
HigherMeasureResult mk_quadrature(const LaurentPolynomial& p, int k,
                                  const QuadratureConfig& cfg = {});

/// Independent check of the same integral: split [0,1] at the circle-root
/// angles and apply tanh-sinh quadrature on each arc, so the endpoint
/// log-singularities are absorbed by the substitution instead of a local
/// model. Node spacing halves with each level. If `warnings` is given, a
/// note is appended when levels `level` and `level-1` differ by more
/// than 1e-8.
double mk_bruteforce(const LaurentPolynomial& p, int k, int level,
                     std::vector<std::string>* warnings = nullptr);

struct OffWindowBounds {
    double lower = 0.0;              // b with 0 < b <= |P| on A
    double upper = 0.0;              // B with |P| <= B on A
    double complement_measure = 1.0; // mu(A)
};

/// Bounds of |P(e^{2 pi i t})| on the window complement A, from dense
/// sampling (>= 4096 points) widened by a Lipschitz term for the sampling
/// gap; the lower bound never drops below half the sampled minimum.
OffWindowBounds offwindow_bounds(const LaurentPolynomial& p, const CircleRootSet& windows);

} // namespace mahlerk

#endif
