#ifndef MAHLERK_ROOTS_HPP
#define MAHLERK_ROOTS_HPP

#include <optional>
#include <vector>

#include "mahlerk/laurent.hpp"

namespace mahlerk {

inline constexpr double kDefaultCircleTolerance = 1e-9;

/// One distinct root of the ordinary lift of P (the artificial z = 0 factor
/// of Laurent monomial content excluded).
struct Root {
    complex value;
    int multiplicity = 1;
    bool on_unit_circle = false;
    std::optional<double> angle; // t in [0,1) with value = e^{2 pi i t}; set iff on_unit_circle
    double residual = 0.0;       // |P(value)|
};

/// All distinct roots with multiplicities, via Aberth-Ehrlich simultaneous
/// iteration on the ordinary lift (cap 200 iterations, residual tolerance
/// 1e-12 relative to the coefficient scale at the root). Roots closer than
/// 1e-7 are merged into one root with their combined multiplicity. Results
/// are sorted by angle, then by modulus. Constants yield an empty list.
std::vector<Root> find_roots(const LaurentPolynomial& p);

struct CircleRootEntry {
    double angle = 0.0; // t_j in [0,1)
    complex value;      // e^{2 pi i t_j} up to root-finder accuracy
    int multiplicity = 1;
    double derivative_magnitude = 0.0; // |P'(z_j)|
};

/// The unit-circle roots of P together with a window half-width delta such
/// that the windows (t_j - delta, t_j + delta) are pairwise disjoint mod 1,
/// |P| < 1 on every window, and the local model
/// |P| ~ C_j |t - t_j|^{mu_j} holds within the configured epsilon.
struct CircleRootSet {
    std::vector<CircleRootEntry> entries; // sorted by angle
    double delta = 0.0;                   // 0 when there are no circle roots
    double complement_measure = 1.0;      // 1 - 2 * delta * entries.size()
};

/// Classifies roots against the unit circle. A root with
/// tolerance < | |z| - 1 | <= 2 * tolerance raises classification_error
/// rather than being silently assigned to either side.
/// `delta_cap` optionally caps the automatically selected window radius.
CircleRootSet circle_roots(const LaurentPolynomial& p, double tolerance = kDefaultCircleTolerance,
                           double delta_cap = 0.0);

} // namespace mahlerk

#endif
