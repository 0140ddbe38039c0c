#ifndef MAHLERK_TEST_ORACLES_HPP
#define MAHLERK_TEST_ORACLES_HPP

// Independent reference implementations used by the tests. These stay
// deliberately naive and share no code with the library paths they check.

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <map>

namespace oracles {

using complex = std::complex<double>;
using TermMap = std::map<int, complex>;

/// Plain power-sum evaluation, no Horner.
inline complex naive_evaluate(const TermMap& terms, complex z) {
    complex acc = 0.0;
    for (const auto& [e, c] : terms) {
        complex power = 1.0;
        for (int i = 0; i < std::abs(e); ++i)
            power *= (e >= 0) ? z : complex(1.0) / z;
        acc += c * power;
    }
    return acc;
}

/// Coefficient convolution on raw maps (the parser's product oracle).
inline TermMap convolve(const TermMap& a, const TermMap& b) {
    TermMap out;
    for (const auto& [ea, ca] : a)
        for (const auto& [eb, cb] : b)
            out[ea + eb] += ca * cb;
    return out;
}

/// Central finite difference of f at z along both axes combined into the
/// complex derivative (f is assumed holomorphic).
inline complex central_difference(const std::function<complex(complex)>& f, complex z, double h) {
    return (f(z + complex(h, 0.0)) - f(z - complex(h, 0.0))) / (2.0 * h);
}

/// Adaptive Simpson, plain recursive version. `tol` is absolute over [a, b].
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol, int depth = 0) {
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    std::function<double(double, double, double, double, double, double, int)> rec =
        [&](double x0, double x2, double f0, double f1, double f2, double acc, int d) -> double {
        const double x1 = 0.5 * (x0 + x2);
        const double lm = 0.5 * (x0 + x1), rm = 0.5 * (x1 + x2);
        const double flm = f(lm), frm = f(rm);
        const double left = (x1 - x0) / 6.0 * (f0 + 4.0 * flm + f1);
        const double right = (x2 - x1) / 6.0 * (f1 + 4.0 * frm + f2);
        if (d > 24 || std::abs(left + right - acc) < 15.0 * tol * (x2 - x0) / (b - a))
            return left + right + (left + right - acc) / 15.0;
        return rec(x0, x1, f0, flm, f1, left, d + 1) + rec(x1, x2, f1, frm, f2, right, d + 1);
    };
    return rec(a, b, fa, fm, fb, whole, depth);
}

/// Integral of log^k u over [a, b], 0 < a < b <= 1, by adaptive Simpson on
/// decade panels (the integrand's mass piles up at the left endpoint, so a
/// graded panelization must come before the adaptivity).
inline double integrate_log_power(int k, double a, double b, double rel_tol = 1e-12) {
    auto f = [k](double u) { return std::pow(std::log(u), k); };
    double total = 0.0;
    double hi = b;
    while (hi > a) {
        const double lo = std::max(a, hi / 10.0);
        // The integrand is largest at the left edge of each panel.
        const double rough = std::abs(f(lo)) * (hi - lo) + 1e-300;
        total += adaptive_simpson(f, lo, hi, rel_tol * rough);
        hi = lo;
    }
    return total;
}

/// Deterministic generator for test inputs.
struct SplitMix64 {
    std::uint64_t state;
    explicit SplitMix64(std::uint64_t seed) : state(seed) {}
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
    int range(int lo, int hi) { // inclusive
        return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1));
    }
    double uniform(double lo, double hi) {
        return lo + (hi - lo) * (next() >> 11) * 0x1.0p-53;
    }
};

} // namespace oracles

#endif
