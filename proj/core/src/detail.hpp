#ifndef MAHLERK_DETAIL_HPP
#define MAHLERK_DETAIL_HPP

// Internal numerics shared between the root classifier and the measure
// integrators. Not installed.

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

namespace mahlerk::detail {

using complex = std::complex<double>;

inline constexpr double two_pi = 2.0 * std::numbers::pi;

inline complex unit_point(double t) {
    const double theta = two_pi * t;
    return {std::cos(theta), std::sin(theta)};
}

inline complex horner(const std::vector<complex>& ascending, complex z) {
    complex acc = 0.0;
    for (auto it = ascending.rbegin(); it != ascending.rend(); ++it)
        acc = acc * z + *it;
    return acc;
}

/// Sum |c_j| |z|^j, the running scale for relative residual tests.
inline double horner_scale(const std::vector<complex>& ascending, double r) {
    double acc = 0.0;
    for (auto it = ascending.rbegin(); it != ascending.rend(); ++it)
        acc = acc * r + std::abs(*it);
    return acc;
}

/// Quotient of `ascending` by (z - w); the remainder (the value at w) is
/// dropped. Dividing an exact root out keeps full relative accuracy when
/// the quotient is later evaluated near w.
inline std::vector<complex> synthetic_divide(const std::vector<complex>& ascending, complex w) {
    const std::size_t n = ascending.size();
    if (n <= 1)
        return {};
    std::vector<complex> q(n - 1);
    complex carry = ascending[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) {
        q[i] = carry;
        carry = ascending[i] + w * carry;
    }
    return q;
}

/// log |P(e^{2 pi i (center + s)})| with the circle root at `center`
/// divided out: the factor |z - e^{2 pi i center}| equals 2 |sin(pi s)|
/// exactly, so the logarithm stays accurate for s far below the distance
/// at which direct Horner evaluation loses all relative precision.
struct DeflatedCircleEval {
    double center = 0.0;
    int multiplicity = 1;
    complex center_point;          // e^{2 pi i center}
    std::vector<complex> quotient; // lift / (z - center_point)^multiplicity
    double model_constant = 0.0;   // C = (2 pi)^mu |Q(center_point)|

    DeflatedCircleEval() = default;

    DeflatedCircleEval(const std::vector<complex>& lift, double center_angle, int mu)
        : center(center_angle), multiplicity(mu), center_point(unit_point(center_angle)) {
        quotient = lift;
        for (int j = 0; j < mu; ++j)
            quotient = synthetic_divide(quotient, center_point);
        model_constant = std::pow(two_pi, mu) * std::abs(horner(quotient, center_point));
    }

    double log_abs(double s) const {
        const double chord = 2.0 * std::abs(std::sin(std::numbers::pi * s));
        const complex z = center_point * unit_point(s);
        return multiplicity * std::log(chord) + std::log(std::abs(horner(quotient, z)));
    }

    double abs_value(double s) const { return std::exp(log_abs(s)); }
};

/// log |P(e^{2 pi i t})| with every circle root divided out at once:
/// sum_j mu_j log(2 |sin(pi (t - t_j))|) + log |R(e^{2 pi i t})|.
struct FullCircleDeflation {
    std::vector<double> angles;
    std::vector<int> multiplicities;
    std::vector<complex> reduced; // lift with all circle factors removed

    FullCircleDeflation(const std::vector<complex>& lift, const std::vector<double>& root_angles,
                        const std::vector<int>& root_multiplicities)
        : angles(root_angles), multiplicities(root_multiplicities), reduced(lift) {
        for (std::size_t j = 0; j < angles.size(); ++j) {
            const complex w = unit_point(angles[j]);
            for (int m = 0; m < multiplicities[j]; ++m)
                reduced = synthetic_divide(reduced, w);
        }
    }

    double log_abs(double t) const {
        double acc = std::log(std::abs(horner(reduced, unit_point(t))));
        for (std::size_t j = 0; j < angles.size(); ++j) {
            const double chord = 2.0 * std::abs(std::sin(std::numbers::pi * (t - angles[j])));
            acc += multiplicities[j] * std::log(chord);
        }
        return acc;
    }

    /// log |P| at t = anchor + offset with |offset| possibly far below the
    /// resolution of anchor + offset as one double. The distance to each
    /// root is reduced mod 1 before the offset is added, so an anchor that
    /// coincides with a root (up to a whole turn) keeps the full relative
    /// accuracy of the offset.
    double log_abs_offset(double anchor, double offset) const {
        double acc = std::log(std::abs(horner(reduced, unit_point(anchor + offset))));
        for (std::size_t j = 0; j < angles.size(); ++j) {
            double d = anchor - angles[j];
            d -= std::round(d);
            const double chord = 2.0 * std::abs(std::sin(std::numbers::pi * (d + offset)));
            acc += multiplicities[j] * std::log(chord);
        }
        return acc;
    }
};

/// Gauss-Legendre rule on [-1, 1], nodes ascending. Computed by Newton
/// iteration on the Legendre recurrence and cached per order.
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

const GaussRule& gauss_rule(int order);

/// Truncated exponential series S_k(y) = sum_{n=0}^{k} y^n / n!.
/// For x in (0, 1], (1/k!) |int_0^x log^k u du| = x * S_k(-log x); this is
/// the overflow-safe form of the log-power antiderivative.
inline double truncated_exp_series(double y, int k) {
    double term = 1.0;
    double sum = 1.0;
    for (int n = 1; n <= k; ++n) {
        term *= y / n;
        sum += term;
    }
    return sum;
}

/// Signed contribution of one sample: sign(L)^k * |L|^k / k!, computed in
/// log space. L = 0 gives 0 for k >= 1; callers special-case k = 0.
inline double scaled_log_power(double log_abs_value, int k, double lgamma_k1) {
    if (log_abs_value == 0.0)
        return 0.0;
    const double mag = std::exp(k * std::log(std::abs(log_abs_value)) - lgamma_k1);
    const bool negative = log_abs_value < 0.0 && (k % 2 != 0);
    return negative ? -mag : mag;
}

/// Shortest distance between two angles mod 1.
inline double angular_gap(double a, double b) {
    double d = std::abs(a - b);
    d -= std::floor(d);
    return std::min(d, 1.0 - d);
}

} // namespace mahlerk::detail

#endif
