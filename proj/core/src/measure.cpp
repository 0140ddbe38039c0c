#include "mahlerk/measure.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "detail.hpp"
#include "mahlerk/errors.hpp"

namespace mahlerk {

using detail::complex;

void QuadratureConfig::validate() const {
    if (panel_order < 2)
        throw std::invalid_argument("QuadratureConfig: panel_order must be >= 2");
    if (!(grading_ratio > 0.0 && grading_ratio < 1.0))
        throw std::invalid_argument("QuadratureConfig: grading_ratio must lie in (0,1)");
    if (grading_depth < 1)
        throw std::invalid_argument("QuadratureConfig: grading_depth must be positive");
    if (smooth_panels < 1)
        throw std::invalid_argument("QuadratureConfig: smooth_panels must be positive");
    if (!(lemma2_epsilon > 0.0 && lemma2_epsilon < 1.0))
        throw std::invalid_argument("QuadratureConfig: lemma2_epsilon must lie in (0,1)");
    if (!(circle_tolerance > 0.0))
        throw std::invalid_argument("QuadratureConfig: circle_tolerance must be positive");
    if (!(target_tolerance > 0.0))
        throw std::invalid_argument("QuadratureConfig: target_tolerance must be positive");
    if (!(delta_cap > 0.0))
        throw std::invalid_argument("QuadratureConfig: delta_cap must be positive");
}

// ---------------------------------------------------------------------------
// Jensen's formula.
// ---------------------------------------------------------------------------

double jensen_measure(const LaurentPolynomial& p) {
    if (p.is_zero())
        throw numeric_error("jensen_measure: zero polynomial");
    const OrdinaryLift lift = to_ordinary(p);
    double m = std::log(std::abs(lift.coefficients.back()));
    for (const Root& root : find_roots(p))
        m += root.multiplicity * std::log(std::max(1.0, std::abs(root.value)));
    return m;
}

// ---------------------------------------------------------------------------
// Closed-form log-power integrals.
// ---------------------------------------------------------------------------

double log_power_antiderivative(double x, int k) {
    if (!(x > 0.0))
        throw std::domain_error("log_power_antiderivative: x must be positive");
    if (k < 0)
        throw std::domain_error("log_power_antiderivative: k must be nonnegative");
    if (k == 0)
        return x;
    const double L = std::log(x);
    if (L == 0.0) { // only the j = k term survives
        double factorial = 1.0;
        for (int j = 2; j <= k; ++j)
            factorial *= j;
        return (k % 2 == 0) ? factorial : -factorial;
    }

    std::vector<double> terms(static_cast<std::size_t>(k) + 1);
    double falling = 1.0; // k! / (k-j)!
    for (int j = 0; j <= k; ++j) {
        if (j > 0)
            falling *= (k - j + 1);
        const double term = falling * std::pow(L, k - j);
        terms[static_cast<std::size_t>(j)] = (j % 2 == 0) ? term : -term;
    }
    std::sort(terms.begin(), terms.end(),
              [](double a, double b) { return std::abs(a) < std::abs(b); });
    double sum = 0.0, comp = 0.0;
    for (double t : terms) { // Kahan
        const double y = t - comp;
        const double s = sum + y;
        comp = (s - sum) - y;
        sum = s;
    }
    return x * sum;
}

double log_power_window_integral(double c, double half_width, int k) {
    if (!(c > 0.0))
        throw std::invalid_argument("log_power_window_integral: c must be positive");
    if (!(half_width > 0.0))
        throw std::invalid_argument("log_power_window_integral: half_width must be positive");
    if (k < 1)
        throw std::invalid_argument("log_power_window_integral: k must be >= 1");
    const double x = c * half_width;
    if (x > 1.0)
        throw std::invalid_argument(
            "log_power_window_integral: c * half_width must not exceed 1");
    // (2/(c k!)) |int_0^{x} log^k u du| = 2 h S_k(-log x).
    return 2.0 * half_width * detail::truncated_exp_series(-std::log(x), k);
}

// ---------------------------------------------------------------------------
// Window quadrature.
// ---------------------------------------------------------------------------

namespace {

constexpr int kMaxBisectionDepth = 28;
constexpr double kOverflowGuard = 1e290;

struct Accumulator {
    double value = 0.0;
    double error = 0.0;
};

/// Adaptive composite Gauss with an embedded lower-order estimate. `f` maps
/// t to the already-scaled integrand value.
template <typename F>
void adaptive_gauss(const F& f, double a, double b, const detail::GaussRule& hi,
                    const detail::GaussRule& lo, double tol, int depth, Accumulator& acc) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double sum_hi = 0.0;
    for (std::size_t i = 0; i < hi.nodes.size(); ++i)
        sum_hi += hi.weights[i] * f(mid + half * hi.nodes[i]);
    sum_hi *= half;
    double sum_lo = 0.0;
    for (std::size_t i = 0; i < lo.nodes.size(); ++i)
        sum_lo += lo.weights[i] * f(mid + half * lo.nodes[i]);
    sum_lo *= half;

    const double diff = std::abs(sum_hi - sum_lo);
    if (diff <= tol || depth >= kMaxBisectionDepth) {
        acc.value += sum_hi;
        acc.error += diff;
        return;
    }
    adaptive_gauss(f, a, mid, hi, lo, 0.5 * tol, depth + 1, acc);
    adaptive_gauss(f, mid, b, hi, lo, 0.5 * tol, depth + 1, acc);
}

std::string window_label(double angle) {
    std::ostringstream os;
    os.precision(10);
    os << "window(t=" << angle << ")";
    return os.str();
}

/// One-sided analytic tail on [0, s_tail] under the model |P| ~ C |s|^mu:
/// (mu^k / c_eff) * x * S_k(-log x) with c_eff = C^{1/mu}, x = c_eff*s_tail.
double tail_magnitude(double model_constant, int multiplicity, double s_tail, int k) {
    const double c_eff = std::pow(model_constant, 1.0 / multiplicity);
    const double x = c_eff * s_tail;
    if (!(x > 0.0) || x >= 1.0)
        throw numeric_error("mk_quadrature: tail model out of range");
    const double base = x * detail::truncated_exp_series(-std::log(x), k);
    const double mu_power = std::exp(k * std::log(static_cast<double>(multiplicity)));
    return mu_power * base / c_eff;
}

} // namespace

HigherMeasureResult mk_quadrature(const LaurentPolynomial& p, int k, const QuadratureConfig& cfg) {
    cfg.validate();
    if (p.is_zero())
        throw numeric_error("mk_quadrature: zero polynomial");
    if (k < 0)
        throw std::invalid_argument("mk_quadrature: k must be nonnegative");

    const double cap = std::isfinite(cfg.delta_cap) ? cfg.delta_cap : 0.0;
    const CircleRootSet windows = circle_roots(p, cfg.circle_tolerance, cap);
    const OrdinaryLift lift = to_ordinary(p);

    HigherMeasureResult result;
    result.k = k;

    if (k == 0) { // integrand is identically 1
        result.value = 1.0;
        result.scaled = 1.0;
        result.breakdown.push_back({"A", windows.complement_measure});
        for (const CircleRootEntry& e : windows.entries)
            result.breakdown.push_back({window_label(e.angle), 2.0 * windows.delta});
        return result;
    }

    const double lgk = std::lgamma(static_cast<double>(k) + 1.0);
    const detail::GaussRule& rule_hi = detail::gauss_rule(cfg.panel_order);
    const detail::GaussRule& rule_lo = detail::gauss_rule(std::max(2, cfg.panel_order / 2));

    bool perturbed_node = false;
    auto plain_integrand = [&](double t) {
        double log_abs = std::log(std::abs(detail::horner(lift.coefficients, detail::unit_point(t))));
        if (!std::isfinite(log_abs) && log_abs < 0.0) {
            // |P| evaluated to exactly zero off the detected windows; nudge
            // the node by one ulp and record it.
            const double t2 = std::nextafter(t, t + 1.0);
            log_abs = std::log(std::abs(detail::horner(lift.coefficients, detail::unit_point(t2))));
            perturbed_node = true;
            if (!std::isfinite(log_abs))
                throw numeric_error("mk_quadrature: undetected zero of P at a quadrature node");
        }
        return detail::scaled_log_power(log_abs, k, lgk);
    };

    // Complement A: composite panels between consecutive window edges,
    // refined adaptively (the integrand steepens with k near the edges).
    Accumulator a_acc;
    std::vector<std::pair<double, double>> arcs;
    if (windows.entries.empty()) {
        arcs.emplace_back(0.0, 1.0);
    } else {
        const std::size_t m = windows.entries.size();
        for (std::size_t j = 0; j < m; ++j) {
            const double from = windows.entries[j].angle + windows.delta;
            const double to = (j + 1 < m ? windows.entries[j + 1].angle
                                         : windows.entries[0].angle + 1.0) -
                              windows.delta;
            arcs.emplace_back(from, to);
        }
    }
    const double mu_a = windows.complement_measure;
    for (const auto& [from, to] : arcs) {
        const double len = to - from;
        const int panels = std::max(1, static_cast<int>(std::lround(cfg.smooth_panels * len / mu_a)));
        for (int i = 0; i < panels; ++i) {
            const double a = from + len * i / panels;
            const double b = from + len * (i + 1) / panels;
            adaptive_gauss(plain_integrand, a, b, rule_hi, rule_lo,
                           cfg.target_tolerance * (b - a) / mu_a, 0, a_acc);
        }
    }
    result.breakdown.push_back({"A", a_acc.value});
    result.error_estimate += a_acc.error;
    double total = a_acc.value;

    // Windows: geometrically graded panels toward the root plus the
    // closed-form tail on the innermost sliver, bracketed by the
    // (1 -+ epsilon) local models; the midpoint is the value and the
    // half-gap goes into the error estimate.
    const double sign_k = (k % 2 != 0) ? -1.0 : 1.0;
    for (const CircleRootEntry& entry : windows.entries) {
        const detail::DeflatedCircleEval eval(lift.coefficients, entry.angle, entry.multiplicity);
        Accumulator w_acc;
        for (const double side : {1.0, -1.0}) {
            auto side_integrand = [&](double s) {
                const double log_abs = eval.log_abs(side * s);
                if (!std::isfinite(log_abs))
                    throw numeric_error("mk_quadrature: zero of P inside a window panel");
                return detail::scaled_log_power(log_abs, k, lgk);
            };
            double outer = windows.delta;
            for (int i = 0; i < cfg.grading_depth; ++i) {
                const double inner = outer * cfg.grading_ratio;
                Accumulator panel;
                adaptive_gauss(side_integrand, inner, outer, rule_hi, rule_lo,
                               std::numeric_limits<double>::infinity(), kMaxBisectionDepth, panel);
                w_acc.value += panel.value;
                w_acc.error += panel.error;
                outer = inner;
            }
            const double tail_hi =
                tail_magnitude((1.0 - cfg.lemma2_epsilon) * eval.model_constant,
                               entry.multiplicity, outer, k);
            const double tail_lo =
                tail_magnitude((1.0 + cfg.lemma2_epsilon) * eval.model_constant,
                               entry.multiplicity, outer, k);
            w_acc.value += sign_k * 0.5 * (tail_hi + tail_lo);
            w_acc.error += 0.5 * (tail_hi - tail_lo);
        }
        result.breakdown.push_back({window_label(entry.angle), w_acc.value});
        result.error_estimate += w_acc.error;
        total += w_acc.value;
    }

    result.scaled = std::abs(total);
    if (!std::isfinite(result.scaled) || result.scaled > kOverflowGuard) {
        result.status = MeasureStatus::diverging;
        result.warnings.push_back("scaled value exceeded the overflow guard (diverging)");
    }
    if (perturbed_node)
        result.warnings.push_back("a quadrature node hit an exact zero of P and was moved one ulp");

    if (result.scaled == 0.0)
        result.value = 0.0;
    else {
        const double magnitude = std::exp(std::log(result.scaled) + lgk);
        result.value = total < 0.0 ? -magnitude : magnitude;
    }
    return result;
}

// ---------------------------------------------------------------------------
// Tanh-sinh oracle.
// ---------------------------------------------------------------------------

namespace {

inline double log_cosh(double y) {
    y = std::abs(y);
    return y + std::log1p(std::exp(-2.0 * y)) - std::numbers::ln2;
}

/// Integral of the scaled integrand over one arc whose endpoints are circle
/// root angles (or artificial smooth endpoints). Node positions are held as
/// offsets from the nearest endpoint, and each term is assembled in log
/// space: near the endpoints the integrand grows like |log dist|^k while
/// the weight decays double-exponentially, and neither factor alone needs
/// to be representable.
double tanh_sinh_arc(const detail::FullCircleDeflation& deflation, double a, double b, int k,
                     double lgk, double h) {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    const double log_half = std::log(half);

    auto term_from = [&](double log_weight, double log_abs_value) {
        if (log_abs_value == 0.0 || !std::isfinite(log_abs_value))
            return 0.0;
        const double magnitude =
            std::exp(log_weight + log_half + k * std::log(std::abs(log_abs_value)) - lgk);
        const bool negative = log_abs_value < 0.0 && (k % 2 != 0);
        return negative ? -magnitude : magnitude;
    };

    const double log_pi_half = std::log(std::numbers::pi / 2.0);
    double sum = term_from(log_pi_half, deflation.log_abs(mid)); // j = 0 node
    for (int j = 1;; ++j) {
        const double x = j * h;
        if (x > 7.5)
            break;
        const double y = (std::numbers::pi / 2.0) * std::sinh(x);
        const double log_weight = log_pi_half + log_cosh(x) - 2.0 * log_cosh(y);
        // distance of the mapped node from the nearer endpoint:
        // half * (1 - tanh(y)) = half * 2 / (e^{2y} + 1)
        const double dist = half * 2.0 / (std::exp(2.0 * y) + 1.0);
        if (!(dist >= 1e-300)) // beyond this the node is the endpoint itself
            break;
        sum += term_from(log_weight, deflation.log_abs_offset(b, -dist));
        sum += term_from(log_weight, deflation.log_abs_offset(a, dist));
    }
    return h * sum;
}

double bruteforce_level(const detail::FullCircleDeflation& deflation,
                        const std::vector<double>& angles, int k, double lgk, int level) {
    const double h = std::ldexp(1.0, 1 - level);
    double scaled = 0.0;
    if (angles.empty()) {
        scaled = tanh_sinh_arc(deflation, 0.0, 1.0, k, lgk, h);
    } else {
        for (std::size_t j = 0; j < angles.size(); ++j) {
            const double a = angles[j];
            const double b = (j + 1 < angles.size()) ? angles[j + 1] : angles[0] + 1.0;
            scaled += tanh_sinh_arc(deflation, a, b, k, lgk, h);
        }
    }
    return scaled;
}

} // namespace

double mk_bruteforce(const LaurentPolynomial& p, int k, int level,
                     std::vector<std::string>* warnings) {
    if (p.is_zero())
        throw numeric_error("mk_bruteforce: zero polynomial");
    if (k < 0)
        throw std::invalid_argument("mk_bruteforce: k must be nonnegative");
    if (level < 1 || level > 12)
        throw std::invalid_argument("mk_bruteforce: level must lie in 1..12");
    if (k == 0)
        return 1.0;

    const OrdinaryLift lift = to_ordinary(p);
    std::vector<double> angles;
    std::vector<int> multiplicities;
    for (const Root& root : find_roots(p))
        if (root.on_unit_circle) {
            angles.push_back(*root.angle);
            multiplicities.push_back(root.multiplicity);
        }
    const detail::FullCircleDeflation deflation(lift.coefficients, angles, multiplicities);

    const double lgk = std::lgamma(static_cast<double>(k) + 1.0);
    const double scaled = bruteforce_level(deflation, angles, k, lgk, level);

    double value = 0.0;
    if (scaled != 0.0) {
        const double magnitude = std::exp(std::log(std::abs(scaled)) + lgk);
        value = scaled < 0.0 ? -magnitude : magnitude;
    }

    if (level >= 2 && warnings != nullptr) {
        const double coarse = bruteforce_level(deflation, angles, k, lgk, level - 1);
        const double diff = std::abs(scaled - coarse) * std::exp(lgk);
        if (diff > 1e-8 * std::max(1.0, std::abs(value))) {
            std::ostringstream os;
            os << "mk_bruteforce: levels " << level - 1 << " and " << level << " differ by "
               << diff;
            warnings->push_back(os.str());
        }
    }
    return value;
}

// ---------------------------------------------------------------------------
// Off-window bounds.
// ---------------------------------------------------------------------------

OffWindowBounds offwindow_bounds(const LaurentPolynomial& p, const CircleRootSet& windows) {
    if (p.is_zero())
        throw numeric_error("offwindow_bounds: zero polynomial");
    const OrdinaryLift lift = to_ordinary(p);

    std::vector<std::pair<double, double>> arcs;
    if (windows.entries.empty()) {
        arcs.emplace_back(0.0, 1.0);
    } else {
        const std::size_t m = windows.entries.size();
        for (std::size_t j = 0; j < m; ++j) {
            const double from = windows.entries[j].angle + windows.delta;
            const double to = (j + 1 < m ? windows.entries[j + 1].angle
                                         : windows.entries[0].angle + 1.0) -
                              windows.delta;
            arcs.emplace_back(from, to);
        }
    }

    const double mu_a = windows.complement_measure;
    constexpr int kTotalSamples = 4096;
    double min_abs = std::numeric_limits<double>::infinity();
    double max_abs = 0.0;
    double max_gap = 0.0;
    for (const auto& [from, to] : arcs) {
        const double len = to - from;
        const int n = std::max(2, static_cast<int>(std::lround(kTotalSamples * len / mu_a)) + 1);
        const double gap = len / (n - 1);
        max_gap = std::max(max_gap, gap);
        for (int i = 0; i < n; ++i) {
            const double t = from + len * i / (n - 1);
            const double v = std::abs(detail::horner(lift.coefficients, detail::unit_point(t)));
            min_abs = std::min(min_abs, v);
            max_abs = std::max(max_abs, v);
        }
    }

    if (!(min_abs > 0.0))
        throw classification_error(
            "offwindow_bounds: |P| vanished on the window complement (missed circle root)");

    // Lipschitz bound for |d/dt P(e^{2 pi i t})| widens the sampled range to
    // cover the gaps; the lower bound never drops below half the minimum.
    double lipschitz = 0.0;
    for (const auto& [e, c] : p.terms())
        lipschitz += std::abs(e) * std::abs(c);
    lipschitz *= detail::two_pi;
    const double slack = 0.5 * lipschitz * max_gap;

    OffWindowBounds bounds;
    bounds.lower = std::max(min_abs - slack, 0.5 * min_abs);
    bounds.upper = max_abs + slack;
    bounds.complement_measure = mu_a;
    return bounds;
}

} // namespace mahlerk
