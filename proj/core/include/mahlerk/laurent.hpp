#ifndef MAHLERK_LAURENT_HPP
#define MAHLERK_LAURENT_HPP

#include <complex>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace mahlerk {

using complex = std::complex<double>;

/// Sparse Laurent polynomial P(z) = sum_e c_e z^e with integer exponents of
/// either sign. The term map is kept trimmed: exact-zero coefficients are
/// never stored, so min/max exponents always carry nonzero coefficients.
/// Instances are immutable after construction.
class LaurentPolynomial {
public:
    LaurentPolynomial() = default; // the zero polynomial

    explicit LaurentPolynomial(std::map<int, complex> terms);

    static LaurentPolynomial monomial(int exponent, complex coefficient);
    static LaurentPolynomial constant(complex value) { return monomial(0, value); }

    bool is_zero() const noexcept { return terms_.empty(); }
    int min_exponent() const; // throws numeric_error on the zero polynomial
    int max_exponent() const;

    /// Coefficient at `exponent`; zero when the term is absent.
    complex coefficient(int exponent) const;

    const std::map<int, complex>& terms() const noexcept { return terms_; }

    /// Sum of coefficient magnitudes; the natural scale for residual tests.
    double coefficient_scale() const;

    /// Horner on the nonnegative part plus Horner in 1/z on the negative
    /// part. Throws std::domain_error for z = 0 when negative exponents
    /// are present.
    complex evaluate(complex z) const;

    /// P(e^{2 pi i t}); t is taken mod 1.
    complex evaluate_on_circle(double t) const;

    /// Term-wise d/dz, including negative exponents.
    LaurentPolynomial derivative() const;

    LaurentPolynomial operator+(const LaurentPolynomial& other) const;
    LaurentPolynomial operator-(const LaurentPolynomial& other) const;
    LaurentPolynomial operator-() const;
    LaurentPolynomial operator*(const LaurentPolynomial& other) const;
    LaurentPolynomial operator*(complex scalar) const;
    LaurentPolynomial pow(unsigned exponent) const;

    bool operator==(const LaurentPolynomial& other) const { return terms_ == other.terms_; }

private:
    std::map<int, complex> terms_;
};

inline LaurentPolynomial operator*(complex scalar, const LaurentPolynomial& p) {
    return p * scalar;
}

/// z^shift * P(z) as an ordinary polynomial with nonzero constant term and
/// ascending coefficients. For polynomials with positive minimal exponent
/// the monomial content z^{e_min} is divided out instead (it only adds an
/// artificial z = 0 root); shift = max(0, -e_min) either way.
struct OrdinaryLift {
    std::vector<complex> coefficients;
    int shift = 0;

    int degree() const { return static_cast<int>(coefficients.size()) - 1; }
};

OrdinaryLift to_ordinary(const LaurentPolynomial& p);

/// Parses the expression grammar described in the README. Products and
/// powers are expanded into coefficients at parse time, so factored inputs
/// like "(z-1)^2*(z+2)" come back as plain coefficient maps.
LaurentPolynomial parse_polynomial(std::string_view text);

/// Deterministic descending-exponent rendering, reparsable by
/// parse_polynomial. Coefficients are printed with shortest round-trip
/// digits, so parse(format(parse(s))) == parse(s) exactly.
std::string format_polynomial(const LaurentPolynomial& p);

/// P(w z): coefficient c_e becomes c_e w^e.
LaurentPolynomial rotate_argument(const LaurentPolynomial& p, complex w);

/// P(1/z): exponents negated.
LaurentPolynomial invert_argument(const LaurentPolynomial& p);

} // namespace mahlerk

#endif
