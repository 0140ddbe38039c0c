#include "mahlerk/laurent.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <utility>

#include "mahlerk/errors.hpp"

namespace mahlerk {

namespace {

bool is_exact_zero(complex c) { return c.real() == 0.0 && c.imag() == 0.0; }

void trim(std::map<int, complex>& terms) {
    for (auto it = terms.begin(); it != terms.end();) {
        if (is_exact_zero(it->second))
            it = terms.erase(it);
        else
            ++it;
    }
}

} // namespace

LaurentPolynomial::LaurentPolynomial(std::map<int, complex> terms) : terms_(std::move(terms)) {
    trim(terms_);
}

LaurentPolynomial LaurentPolynomial::monomial(int exponent, complex coefficient) {
    LaurentPolynomial p;
    if (!is_exact_zero(coefficient))
        p.terms_.emplace(exponent, coefficient);
    return p;
}

int LaurentPolynomial::min_exponent() const {
    if (terms_.empty())
        throw numeric_error("zero polynomial has no exponent range");
    return terms_.begin()->first;
}

int LaurentPolynomial::max_exponent() const {
    if (terms_.empty())
        throw numeric_error("zero polynomial has no exponent range");
    return terms_.rbegin()->first;
}

complex LaurentPolynomial::coefficient(int exponent) const {
    auto it = terms_.find(exponent);
    return it == terms_.end() ? complex(0.0) : it->second;
}

double LaurentPolynomial::coefficient_scale() const {
    double s = 0.0;
    for (const auto& [e, c] : terms_)
        s += std::abs(c);
    return s;
}

complex LaurentPolynomial::evaluate(complex z) const {
    if (terms_.empty())
        return 0.0;
    // Split at exponent zero; each side is evaluated by Horner, the
    // negative side in 1/z.
    complex plus = 0.0;  // coefficients for e >= 0, Horner in z
    complex minus = 0.0; // coefficients for e < 0, Horner in 1/z
    int e_hi = terms_.rbegin()->first;
    int e_lo = terms_.begin()->first;
    if (e_lo < 0 && z == complex(0.0))
        throw std::domain_error("evaluate: z = 0 with negative exponents");

    if (e_hi >= 0) {
        for (int e = e_hi; e >= 0; --e)
            plus = plus * z + coefficient(e);
    }
    if (e_lo < 0) {
        complex w = complex(1.0) / z;
        for (int e = e_lo; e < 0; ++e)
            minus = minus * w + coefficient(e);
        minus *= w; // lowest term carries z^{-1} at least
    }
    return plus + minus;
}

complex LaurentPolynomial::evaluate_on_circle(double t) const {
    t -= std::floor(t);
    const double theta = 2.0 * std::numbers::pi * t;
    return evaluate(complex(std::cos(theta), std::sin(theta)));
}

LaurentPolynomial LaurentPolynomial::derivative() const {
    std::map<int, complex> d;
    for (const auto& [e, c] : terms_) {
        if (e != 0)
            d.emplace(e - 1, c * static_cast<double>(e));
    }
    return LaurentPolynomial(std::move(d));
}

LaurentPolynomial LaurentPolynomial::operator+(const LaurentPolynomial& other) const {
    std::map<int, complex> sum = terms_;
    for (const auto& [e, c] : other.terms_)
        sum[e] += c;
    return LaurentPolynomial(std::move(sum));
}

LaurentPolynomial LaurentPolynomial::operator-(const LaurentPolynomial& other) const {
    std::map<int, complex> diff = terms_;
    for (const auto& [e, c] : other.terms_)
        diff[e] -= c;
    return LaurentPolynomial(std::move(diff));
}

LaurentPolynomial LaurentPolynomial::operator-() const {
    std::map<int, complex> neg = terms_;
    for (auto& [e, c] : neg)
        c = -c;
    return LaurentPolynomial(std::move(neg));
}

LaurentPolynomial LaurentPolynomial::operator*(const LaurentPolynomial& other) const {
    std::map<int, complex> prod;
    for (const auto& [ea, ca] : terms_)
        for (const auto& [eb, cb] : other.terms_)
            prod[ea + eb] += ca * cb;
    return LaurentPolynomial(std::move(prod));
}

LaurentPolynomial LaurentPolynomial::operator*(complex scalar) const {
    std::map<int, complex> scaled = terms_;
    for (auto& [e, c] : scaled)
        c *= scalar;
    return LaurentPolynomial(std::move(scaled));
}

LaurentPolynomial LaurentPolynomial::pow(unsigned exponent) const {
    LaurentPolynomial result = constant(1.0);
    LaurentPolynomial base = *this;
    while (exponent != 0) {
        if (exponent & 1u)
            result = result * base;
        base = base * base;
        exponent >>= 1u;
    }
    return result;
}

OrdinaryLift to_ordinary(const LaurentPolynomial& p) {
    if (p.is_zero())
        throw numeric_error("to_ordinary: zero polynomial");
    const int e_lo = p.min_exponent();
    const int e_hi = p.max_exponent();
    OrdinaryLift lift;
    lift.shift = std::max(0, -e_lo);
    lift.coefficients.assign(static_cast<std::size_t>(e_hi - e_lo) + 1, complex(0.0));
    for (const auto& [e, c] : p.terms())
        lift.coefficients[static_cast<std::size_t>(e - e_lo)] = c;
    return lift;
}

namespace {

complex integer_power(complex base, int exponent) {
    if (exponent < 0) {
        base = complex(1.0) / base;
        exponent = -exponent;
    }
    complex result = 1.0;
    while (exponent != 0) {
        if (exponent & 1)
            result *= base;
        base *= base;
        exponent >>= 1;
    }
    return result;
}

} // namespace

LaurentPolynomial rotate_argument(const LaurentPolynomial& p, complex w) {
    std::map<int, complex> rotated;
    for (const auto& [e, c] : p.terms())
        rotated.emplace(e, c * integer_power(w, e));
    return LaurentPolynomial(std::move(rotated));
}

LaurentPolynomial invert_argument(const LaurentPolynomial& p) {
    std::map<int, complex> inverted;
    for (const auto& [e, c] : p.terms())
        inverted.emplace(-e, c);
    return LaurentPolynomial(std::move(inverted));
}

// ---------------------------------------------------------------------------
// Parser.
//
//   expression := ('+'|'-')? term (('+'|'-') term)*
//   term       := factor ('*' factor)*
//   factor     := base ('^' exponent)?
//   base       := 'z' | 'i' | number 'i'? | '(' expression ')'
//   exponent   := optionally signed integer; negative only on base 'z'
//
// Whitespace is insignificant. All arithmetic happens in the coefficient
// ring, so products and powers are expanded exactly.
// ---------------------------------------------------------------------------

namespace {

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    LaurentPolynomial run() {
        LaurentPolynomial p = expression();
        skip_ws();
        if (pos_ != text_.size())
            fail("unexpected trailing input");
        return p;
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& message) const { throw parse_error(message, pos_); }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }

    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    bool consume(char c) {
        if (peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    LaurentPolynomial expression() {
        bool negate = false;
        if (consume('-'))
            negate = true;
        else
            consume('+');
        LaurentPolynomial acc = term();
        if (negate)
            acc = -acc;
        for (;;) {
            if (consume('+'))
                acc = acc + term();
            else if (consume('-'))
                acc = acc - term();
            else
                break;
        }
        return acc;
    }

    LaurentPolynomial term() {
        LaurentPolynomial acc = factor();
        while (consume('*'))
            acc = acc * factor();
        return acc;
    }

    LaurentPolynomial factor() {
        const char c = peek();
        if (c == '\0')
            fail("unexpected end of input");

        if (c == 'z') {
            ++pos_;
            int e = 1;
            if (consume('^'))
                e = integer_exponent(/*allow_negative=*/true);
            return LaurentPolynomial::monomial(e, 1.0);
        }

        LaurentPolynomial base;
        if (c == 'i') {
            ++pos_;
            base = LaurentPolynomial::constant(complex(0.0, 1.0));
        } else if (c == '(') {
            ++pos_;
            base = expression();
            if (!consume(')'))
                fail("expected ')'");
        } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            double v = number();
            base = LaurentPolynomial::constant(v);
            // A number directly followed by 'i' is an imaginary literal,
            // as in "(1+2i)".
            if (peek() == 'i') {
                ++pos_;
                base = LaurentPolynomial::constant(complex(0.0, v));
            }
        } else {
            fail(std::string("unexpected character '") + c + "'");
        }

        if (consume('^')) {
            int e = integer_exponent(/*allow_negative=*/false);
            base = base.pow(static_cast<unsigned>(e));
        }
        return base;
    }

    double number() {
        skip_ws();
        double value = 0.0;
        const char* begin = text_.data() + pos_;
        const char* end = text_.data() + text_.size();
        auto [ptr, ec] = std::from_chars(begin, end, value);
        if (ec != std::errc() || ptr == begin)
            fail("expected number");
        pos_ += static_cast<std::size_t>(ptr - begin);
        return value;
    }

    int integer_exponent(bool allow_negative) {
        skip_ws();
        bool negative = false;
        if (consume('-'))
            negative = true;
        else
            consume('+');
        if (negative && !allow_negative)
            fail("negative exponents are allowed only on 'z'");
        skip_ws();
        if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
            fail("expected integer exponent");
        long value = 0;
        const char* begin = text_.data() + pos_;
        const char* end = text_.data() + text_.size();
        auto [ptr, ec] = std::from_chars(begin, end, value);
        if (ec != std::errc())
            fail("exponent out of range");
        pos_ += static_cast<std::size_t>(ptr - begin);
        if (pos_ < text_.size() && text_[pos_] == '.')
            fail("fractional exponents are not allowed");
        if (value > 1000)
            fail("exponent too large");
        return negative ? static_cast<int>(-value) : static_cast<int>(value);
    }
};

std::string format_double(double v) {
    // Shortest representation that round-trips through from_chars.
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

// Coefficient rendering: real coefficients print bare, pure-imaginary as
// "2i", mixed as "(1+2i)" so the output stays inside the grammar.
struct CoefficientPiece {
    bool negative_sign; // pulled out in front of the term
    std::string text;   // magnitude part, may be empty for +-1 * z^e
};

CoefficientPiece coefficient_piece(complex c, bool has_z_part) {
    const double re = c.real();
    const double im = c.imag();
    if (im == 0.0) {
        const bool neg = std::signbit(re) && re != 0.0;
        const double mag = std::abs(re);
        if (mag == 1.0 && has_z_part)
            return {neg, ""};
        return {neg, format_double(mag)};
    }
    if (re == 0.0) {
        const bool neg = std::signbit(im);
        const double mag = std::abs(im);
        if (mag == 1.0)
            return {neg, "i"};
        return {neg, format_double(mag) + "i"};
    }
    std::string s = "(" + format_double(re);
    s += im < 0.0 ? "-" : "+";
    const double imag = std::abs(im);
    if (imag != 1.0)
        s += format_double(imag);
    s += "i)";
    return {false, s};
}

} // namespace

LaurentPolynomial parse_polynomial(std::string_view text) {
    return Parser(text).run();
}

std::string format_polynomial(const LaurentPolynomial& p) {
    if (p.is_zero())
        return "0";
    std::string out;
    bool first = true;
    for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
        const int e = it->first;
        auto [negative, coeff] = coefficient_piece(it->second, e != 0);

        std::string z_part;
        if (e == 1)
            z_part = "z";
        else if (e != 0)
            z_part = "z^" + std::to_string(e);

        std::string body;
        if (coeff.empty())
            body = z_part;
        else if (z_part.empty())
            body = coeff;
        else
            body = coeff + "*" + z_part;

        if (first) {
            if (negative)
                out += "-";
            out += body;
            first = false;
        } else {
            out += negative ? " - " : " + ";
            out += body;
        }
    }
    return out;
}

} // namespace mahlerk
