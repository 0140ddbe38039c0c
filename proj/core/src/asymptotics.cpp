#include "mahlerk/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "detail.hpp"
#include "mahlerk/errors.hpp"

namespace mahlerk {

namespace {

// A circle root counts as repeated when clustering says so or when |P'|
// falls below this fraction of the coefficient scale; both signals guard
// the finite/infinite dichotomy of the limit.
constexpr double kMultiplicityThreshold = 1e-8;

} // namespace

LimitValue limit_formula(const LaurentPolynomial& p, double tolerance) {
    if (p.is_zero())
        throw numeric_error("limit_formula: zero polynomial");

    const CircleRootSet circle = circle_roots(p, tolerance);
    const double scale = p.coefficient_scale();

    LimitValue limit;
    for (const CircleRootEntry& entry : circle.entries) {
        if (entry.multiplicity >= 2 || entry.derivative_magnitude < kMultiplicityThreshold * scale) {
            limit.finite = false;
            limit.value = 0.0;
            limit.contributions.clear();
            limit.divergence_witness =
                DivergenceWitness{entry.angle, entry.value, entry.multiplicity};
            return limit;
        }
        LimitContribution c;
        c.angle = entry.angle;
        c.derivative_magnitude = entry.derivative_magnitude;
        c.term = 1.0 / (std::numbers::pi * entry.derivative_magnitude);
        limit.contributions.push_back(c);
    }
    limit.finite = true;
    limit.value = 0.0;
    for (const LimitContribution& c : limit.contributions)
        limit.value += c.term;
    return limit;
}

double lemma1_envelope(double b, double upper, double mu_a, int k) {
    if (!(b > 0.0))
        throw std::domain_error("lemma1_envelope: b must be positive");
    if (!(upper >= b))
        throw std::domain_error("lemma1_envelope: need b <= B");
    if (!(mu_a >= 0.0 && mu_a <= 1.0))
        throw std::domain_error("lemma1_envelope: mu_a must lie in [0, 1]");
    if (k < 1)
        throw std::domain_error("lemma1_envelope: k must be >= 1");
    if (mu_a == 0.0)
        return 0.0;
    const double log_bound = std::max(std::abs(std::log(b)), std::abs(std::log(upper)));
    if (log_bound == 0.0)
        return 0.0;
    return mu_a * std::exp(k * std::log(log_bound) - std::lgamma(static_cast<double>(k) + 1.0));
}

const char* to_string(Verdict v) {
    switch (v) {
    case Verdict::converged:
        return "converged";
    case Verdict::diverging:
        return "diverging";
    default:
        return "inconclusive";
    }
}

ConvergenceReport convergence_study(const LaurentPolynomial& p, int k_max,
                                    const QuadratureConfig& cfg) {
    cfg.validate();
    if (k_max < 3)
        throw std::invalid_argument("convergence_study: k_max must be >= 3");
    if (p.is_zero())
        throw numeric_error("convergence_study: zero polynomial");

    ConvergenceReport report;
    report.limit = limit_formula(p, cfg.circle_tolerance);

    const double cap = std::isfinite(cfg.delta_cap) ? cfg.delta_cap : 0.0;
    const CircleRootSet windows = circle_roots(p, cfg.circle_tolerance, cap);
    const OffWindowBounds bounds = offwindow_bounds(p, windows);

    bool overflowed = false;
    for (int k = 1; k <= k_max; ++k) {
        const HigherMeasureResult mk = mk_quadrature(p, k, cfg);
        ConvergenceRow row;
        row.k = k;
        row.mk = mk.value;
        row.scaled = mk.scaled;
        row.error_estimate = mk.error_estimate;
        if (report.limit.finite && report.limit.value > 0.0)
            row.ratio = mk.scaled / report.limit.value;
        row.envelope = lemma1_envelope(bounds.lower, bounds.upper, bounds.complement_measure, k);
        report.rows.push_back(row);
        if (mk.status == MeasureStatus::diverging)
            overflowed = true;
        for (const std::string& w : mk.warnings)
            if (std::find(report.warnings.begin(), report.warnings.end(), w) ==
                report.warnings.end())
                report.warnings.push_back(w);
    }

    // Verdict. Convergence asks the last three ratios (or absolute values,
    // for a zero limit) to sit within ten studies-tolerances of the limit;
    // divergence asks for sustained doubling past any finite candidate.
    const std::size_t n = report.rows.size();
    double aggregated_error = 0.0;
    for (std::size_t i = n >= 3 ? n - 3 : 0; i < n; ++i)
        aggregated_error = std::max(aggregated_error, report.rows[i].error_estimate);
    const double tol_study = std::max(1e-4, aggregated_error);

    bool diverging = overflowed;
    if (!diverging && n >= 5) {
        const double last = report.rows[n - 1].scaled;
        const double five_back = report.rows[n - 5].scaled;
        const bool growing = five_back > 0.0 && last >= 2.0 * five_back;
        const bool past_limit =
            !report.limit.finite || last > 2.0 * std::max(report.limit.value, tol_study);
        diverging = growing && past_limit;
    }

    if (diverging) {
        report.verdict = Verdict::diverging;
        return report;
    }

    bool converged = n >= 3;
    for (std::size_t i = n - 3; converged && i < n; ++i) {
        const ConvergenceRow& row = report.rows[i];
        if (report.limit.finite && report.limit.value > 0.0)
            converged = row.ratio && std::abs(*row.ratio - 1.0) <= 10.0 * tol_study;
        else if (report.limit.finite)
            converged = row.scaled <= 10.0 * tol_study;
        else
            converged = false;
    }
    report.verdict = converged ? Verdict::converged : Verdict::inconclusive;

    // The theorem makes |scaled - limit| eventually decrease for simple
    // circle roots; deviations at small k are flagged, not failed.
    if (report.limit.finite && n >= 6) {
        int increases_late = 0;
        for (std::size_t i = n - 4; i + 1 < n; ++i) {
            const double d0 = std::abs(report.rows[i].scaled - report.limit.value);
            const double d1 = std::abs(report.rows[i + 1].scaled - report.limit.value);
            if (d1 > d0 + 10.0 * tol_study)
                ++increases_late;
        }
        if (increases_late > 0)
            report.warnings.push_back("convergence_study: |scaled - limit| not decreasing near k_max");
    }
    return report;
}

} // namespace mahlerk
