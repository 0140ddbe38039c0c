#include "mahlerk/roots.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "detail.hpp"
#include "mahlerk/errors.hpp"

namespace mahlerk {

namespace {

using detail::complex;

constexpr int kMaxIterations = 200;
constexpr double kResidualTolerance = 1e-12;
constexpr double kClusterRadius = 1e-7;
constexpr double kLemma2Epsilon = 0.1;
constexpr int kModelSamplesPerWindow = 256;

double angle_of(complex z) {
    double t = std::atan2(z.imag(), z.real()) / detail::two_pi;
    t -= std::floor(t);
    if (t >= 1.0) // guard against floor rounding at the seam
        t = 0.0;
    return t;
}

std::vector<complex> derivative_coefficients(const std::vector<complex>& ascending) {
    std::vector<complex> d;
    d.reserve(ascending.size() > 0 ? ascending.size() - 1 : 0);
    for (std::size_t i = 1; i < ascending.size(); ++i)
        d.push_back(ascending[i] * static_cast<double>(i));
    return d;
}

/// Aberth-Ehrlich on a monic coefficient list with nonzero constant term.
/// Start points sit on a perturbed circle whose radius is the geometric
/// mean of the root moduli clamped into the Cauchy annulus; the fixed
/// angular offsets break the symmetry of inputs like z^n - 1.
std::vector<complex> aberth(const std::vector<complex>& monic) {
    const int n = static_cast<int>(monic.size()) - 1;
    const std::vector<complex> dmonic = derivative_coefficients(monic);

    double max_tail = 0.0;
    for (int i = 0; i < n; ++i)
        max_tail = std::max(max_tail, std::abs(monic[i]));
    const double upper = 1.0 + max_tail;
    const double a0 = std::abs(monic[0]);
    double max_rest = 0.0;
    for (int i = 1; i <= n; ++i)
        max_rest = std::max(max_rest, std::abs(monic[i]));
    const double lower = a0 / (a0 + max_rest);
    const double r0 = std::clamp(std::pow(a0, 1.0 / n), lower, upper);

    std::vector<complex> z(n);
    for (int j = 0; j < n; ++j) {
        const double theta = detail::two_pi * j / n + 0.93 + 0.005 * j;
        const double r = r0 * (1.0 + 0.06 * std::cos(7.17 * j + 1.0));
        z[j] = r * complex(std::cos(theta), std::sin(theta));
    }

    for (int iter = 0; iter < kMaxIterations; ++iter) {
        double max_rel_step = 0.0;
        for (int i = 0; i < n; ++i) {
            complex p = detail::horner(monic, z[i]);
            complex dp = detail::horner(dmonic, z[i]);
            if (dp == complex(0.0)) {
                z[i] += complex(1e-8, 1e-8) * (1.0 + std::abs(z[i]));
                p = detail::horner(monic, z[i]);
                dp = detail::horner(dmonic, z[i]);
            }
            const complex newton = p / dp;
            complex repulsion = 0.0;
            for (int j = 0; j < n; ++j) {
                if (j == i)
                    continue;
                complex diff = z[i] - z[j];
                if (diff == complex(0.0))
                    diff = complex(1e-12, 1e-12);
                repulsion += complex(1.0) / diff;
            }
            const complex denom = complex(1.0) - newton * repulsion;
            const complex step = denom == complex(0.0) ? newton : newton / denom;
            z[i] -= step;
            max_rel_step = std::max(max_rel_step, std::abs(step) / (1.0 + std::abs(z[i])));
        }
        if (max_rel_step < 1e-14)
            break;
    }

    for (const complex& zi : z) {
        const double residual = std::abs(detail::horner(monic, zi));
        const double scale = detail::horner_scale(monic, std::abs(zi));
        if (!(residual <= kResidualTolerance * scale))
            throw numeric_error("find_roots: iteration did not reach residual tolerance");
    }
    return z;
}

} // namespace

namespace {

/// A root of exact multiplicity mu is a simple root of the (mu-1)-th
/// derivative; a few Newton steps there sharpen a cluster centroid from
/// O(cluster radius) to machine precision. Falls back to the centroid if
/// the iteration wanders off.
complex polish_multiple(const std::vector<complex>& monic, complex centroid, int multiplicity) {
    std::vector<complex> d = monic;
    for (int j = 1; j < multiplicity; ++j)
        d = derivative_coefficients(d);
    const std::vector<complex> dd = derivative_coefficients(d);
    complex z = centroid;
    for (int iter = 0; iter < 30; ++iter) {
        const complex fz = detail::horner(d, z);
        const complex dfz = detail::horner(dd, z);
        if (dfz == complex(0.0))
            break;
        const complex step = fz / dfz;
        z -= step;
        if (std::abs(step) < 1e-16 * (1.0 + std::abs(z)))
            break;
    }
    if (std::abs(z - centroid) <= 10.0 * kClusterRadius * std::max(1.0, std::abs(centroid)))
        return z;
    return centroid;
}

} // namespace

std::vector<Root> find_roots(const LaurentPolynomial& p) {
    const OrdinaryLift lift = to_ordinary(p);
    const int n = lift.degree();
    if (n < 1)
        return {};

    std::vector<complex> monic = lift.coefficients;
    const complex lead = monic.back();
    for (complex& c : monic)
        c /= lead;

    std::vector<complex> approx = aberth(monic);

    // Merge clusters of nearly equal approximations into multiple roots.
    // The cluster centroid of an order-m root is accurate to roughly the
    // m-th power of the individual approximation error, since Aberth
    // spreads the approximations symmetrically around the true root.
    const int count = static_cast<int>(approx.size());
    std::vector<int> parent(count);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int i) {
        while (parent[i] != i)
            i = parent[i] = parent[parent[i]];
        return i;
    };
    for (int i = 0; i < count; ++i)
        for (int j = i + 1; j < count; ++j) {
            const double scale = std::max(1.0, std::abs(approx[i]));
            if (std::abs(approx[i] - approx[j]) <= kClusterRadius * scale)
                parent[find(i)] = find(j);
        }

    std::vector<Root> roots;
    std::vector<bool> seen(count, false);
    for (int i = 0; i < count; ++i) {
        const int rep = find(i);
        if (seen[rep])
            continue;
        seen[rep] = true;
        complex centroid = 0.0;
        int multiplicity = 0;
        for (int j = 0; j < count; ++j)
            if (find(j) == rep) {
                centroid += approx[j];
                ++multiplicity;
            }
        centroid /= static_cast<double>(multiplicity);
        if (multiplicity >= 2)
            centroid = polish_multiple(monic, centroid, multiplicity);

        Root root;
        root.value = centroid;
        root.multiplicity = multiplicity;
        root.residual = std::abs(p.evaluate(centroid));
        const double off = std::abs(std::abs(centroid) - 1.0);
        root.on_unit_circle = off <= kDefaultCircleTolerance;
        if (root.on_unit_circle)
            root.angle = angle_of(centroid);
        roots.push_back(root);
    }

    std::sort(roots.begin(), roots.end(), [](const Root& a, const Root& b) {
        const double ta = angle_of(a.value);
        const double tb = angle_of(b.value);
        if (ta != tb)
            return ta < tb;
        return std::abs(a.value) < std::abs(b.value);
    });
    return roots;
}

namespace {

struct WindowCheck {
    detail::DeflatedCircleEval eval;
    double log_model_constant;
};

bool windows_admissible(const std::vector<WindowCheck>& windows, double delta) {
    const double lo = std::log(1.0 - kLemma2Epsilon);
    const double hi = std::log(1.0 + kLemma2Epsilon);
    for (const WindowCheck& w : windows) {
        for (int m = 0; m < kModelSamplesPerWindow / 2; ++m) {
            const double s = delta * (m + 0.5) / (kModelSamplesPerWindow / 2);
            for (const double signed_s : {s, -s}) {
                const double log_abs = w.eval.log_abs(signed_s);
                if (!(log_abs < 0.0)) // |P| < 1 on the whole window
                    return false;
                const double log_model =
                    w.log_model_constant + w.eval.multiplicity * std::log(std::abs(signed_s));
                const double log_ratio = log_abs - log_model;
                if (!(log_ratio >= lo && log_ratio <= hi))
                    return false;
            }
        }
    }
    return true;
}

} // namespace

CircleRootSet circle_roots(const LaurentPolynomial& p, double tolerance, double delta_cap) {
    if (!(tolerance > 0.0))
        throw std::invalid_argument("circle_roots: tolerance must be positive");
    const std::vector<Root> roots = find_roots(p);

    const LaurentPolynomial dp = p.derivative();
    CircleRootSet set;
    for (const Root& root : roots) {
        const double off = std::abs(std::abs(root.value) - 1.0);
        if (off > tolerance && off <= 2.0 * tolerance)
            throw classification_error(
                "circle_roots: root at distance " + std::to_string(off) +
                " from the unit circle falls in the ambiguity band [tol, 2*tol]");
        if (off <= tolerance) {
            CircleRootEntry entry;
            entry.angle = angle_of(root.value);
            entry.value = root.value;
            entry.multiplicity = root.multiplicity;
            entry.derivative_magnitude = std::abs(dp.evaluate(root.value));
            set.entries.push_back(entry);
        }
    }
    std::sort(set.entries.begin(), set.entries.end(),
              [](const CircleRootEntry& a, const CircleRootEntry& b) { return a.angle < b.angle; });

    if (set.entries.empty()) {
        set.delta = 0.0;
        set.complement_measure = 1.0;
        return set;
    }

    double min_gap = 1.0;
    const std::size_t m = set.entries.size();
    for (std::size_t j = 0; j + 1 < m; ++j)
        min_gap = std::min(min_gap, set.entries[j + 1].angle - set.entries[j].angle);
    if (m > 1)
        min_gap = std::min(min_gap, set.entries.front().angle + 1.0 - set.entries.back().angle);

    double cap = min_gap / 3.0;
    if (delta_cap > 0.0)
        cap = std::min(cap, delta_cap);

    const OrdinaryLift lift = to_ordinary(p);
    std::vector<WindowCheck> checks;
    checks.reserve(m);
    for (const CircleRootEntry& entry : set.entries) {
        WindowCheck w{detail::DeflatedCircleEval(lift.coefficients, entry.angle, entry.multiplicity),
                      0.0};
        if (!(w.eval.model_constant > 0.0))
            throw numeric_error("circle_roots: degenerate local model at t=" +
                                std::to_string(entry.angle));
        w.log_model_constant = std::log(w.eval.model_constant);
        checks.push_back(std::move(w));
    }

    double selected = 0.0;
    for (int j = 3; j <= 20; ++j) {
        const double candidate = std::ldexp(1.0, -j);
        if (windows_admissible(checks, candidate)) {
            selected = candidate;
            break;
        }
    }
    if (selected == 0.0)
        throw numeric_error("circle_roots: no admissible window radius in 2^-3 .. 2^-20");

    set.delta = std::min(cap, selected);
    set.complement_measure = 1.0 - 2.0 * set.delta * static_cast<double>(m);

    // Construction-time verification of the window invariant at the final
    // radius (the model search may have validated a larger ladder value).
    for (const WindowCheck& w : checks)
        for (int s = 0; s < 64; ++s) {
            const double offset = set.delta * (s + 0.5) / 64.0;
            if (!(w.eval.log_abs(offset) < 0.0) || !(w.eval.log_abs(-offset) < 0.0))
                throw numeric_error("circle_roots: |P| >= 1 inside a window");
        }
    return set;
}

} // namespace mahlerk
