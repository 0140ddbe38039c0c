#ifndef MAHLERK_ASYMPTOTICS_HPP
#define MAHLERK_ASYMPTOTICS_HPP

#include <optional>
#include <string>
#include <vector>

#include "mahlerk/laurent.hpp"
#include "mahlerk/measure.hpp"
#include "mahlerk/roots.hpp"

namespace mahlerk {

struct LimitContribution {
    double angle = 0.0;
    double derivative_magnitude = 0.0;
    double term = 0.0; // 1 / (pi |P'(z_j)|)
};

struct DivergenceWitness {
    double angle = 0.0;
    complex value;
    int multiplicity = 0;
};

/// The limiting value of |m_k(P)| / k!: a finite sum of per-root
/// contributions, or infinite when some circle root is repeated.
struct LimitValue {
    bool finite = true;
    double value = 0.0; // defined iff finite
    std::vector<LimitContribution> contributions;
    std::optional<DivergenceWitness> divergence_witness; // set iff !finite
};

/// (1/pi) sum over unit-circle roots of 1/|P'(z_j)|, taken as infinite when
/// a circle root has multiplicity >= 2 (equivalently |P'| below the
/// multiplicity threshold). Polynomials without circle roots give 0.
LimitValue limit_formula(const LaurentPolynomial& p, double tolerance = kDefaultCircleTolerance);

/// mu_a * max(|log b|, |log B|)^k / k!, an upper bound for the complement
/// contribution to |m_k|/k!, evaluated through lgamma so large k stays
/// finite.
double lemma1_envelope(double b, double upper, double mu_a, int k);

enum class Verdict { converged, diverging, inconclusive };
const char* to_string(Verdict v);

struct ConvergenceRow {
    int k = 0;
    double mk = 0.0;     // signed m_k
    double scaled = 0.0; // |m_k| / k!
    std::optional<double> ratio; // scaled / limit, when the limit is finite and positive
    std::optional<double> envelope;
    double error_estimate = 0.0;
};

struct ConvergenceReport {
    std::vector<ConvergenceRow> rows; // k = 1 .. k_max
    LimitValue limit;
    Verdict verdict = Verdict::inconclusive;
    std::vector<std::string> warnings;
};

/// Runs mk_quadrature for k = 1..k_max, attaches the limit, per-k ratios and
/// the Lemma 1 envelope of the off-window region, and classifies the tail
/// of the sequence.
ConvergenceReport convergence_study(const LaurentPolynomial& p, int k_max,
                                    const QuadratureConfig& cfg = {});

} // namespace mahlerk

#endif
