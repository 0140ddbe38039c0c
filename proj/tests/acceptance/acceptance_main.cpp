// Acceptance suite: one line per criterion, nonzero exit when any fails.
// The criteria that are phrased as CLI invocations run through the actual
// binary (MAHLERK_BIN); the rest call the library directly.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <string>
#include <vector>

#include <json.hpp>

#include "mahlerk/asymptotics.hpp"
#include "mahlerk/errors.hpp"
#include "mahlerk/laurent.hpp"
#include "mahlerk/measure.hpp"
#include "mahlerk/roots.hpp"
#include "support/oracles.hpp"

using json = nlohmann::json;
using namespace mahlerk;

namespace {

constexpr double kOneOverPi = 0.3183098861837907;
constexpr double kPiSquaredOverTwelve = 0.8224670334241132;

int failures = 0;

struct Criterion {
    int id;
    const char* label;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    bool ok = true;
    std::string detail;

    Criterion(int criterion_id, const char* criterion_label)
        : id(criterion_id), label(criterion_label) {}

    void expect(bool condition, const std::string& note) {
        if (!condition) {
            ok = false;
            if (!detail.empty())
                detail += "; ";
            detail += note;
        }
    }

    ~Criterion() {
        const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                                 std::chrono::steady_clock::now() - start)
                                 .count();
        std::printf("[%s] criterion %d: %s (%lld ms)%s%s\n", ok ? "PASS" : "FAIL", id, label,
                    static_cast<long long>(elapsed), detail.empty() ? "" : " -- ",
                    detail.c_str());
        if (!ok)
            ++failures;
    }
};

std::string shell_quote(const std::string& s) { return "\"" + s + "\""; }

json run_cli_json(const std::string& args) {
    const char* bin = std::getenv("MAHLERK_BIN");
    if (bin == nullptr)
        throw std::runtime_error("MAHLERK_BIN is not set");
    const std::string cmd = std::string(bin) + " " + args + " --format json 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (pipe == nullptr)
        throw std::runtime_error("popen failed");
    std::string output;
    std::array<char, 4096> buf{};
    std::size_t n = 0;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0)
        output.append(buf.data(), n);
    if (pclose(pipe) != 0)
        throw std::runtime_error("cli run failed: " + cmd);
    return json::parse(output);
}

double angle_distance(double a, double b) {
    double d = std::abs(a - b);
    d -= std::floor(d);
    return std::min(d, 1.0 - d);
}

void criterion_1() {
    Criterion c{1, "z+1: |m_30|/30! within 1e-3 of 1/pi via `converge`"};
    json report = run_cli_json("converge " + shell_quote("z+1") + " --kmax 30");
    const auto& rows = report["payload"]["rows"];
    c.expect(rows.size() == 30, "expected 30 rows");
    const double scaled = rows.back()["scaled"].get<double>();
    c.expect(std::abs(scaled - kOneOverPi) <= 1e-3,
             "scaled(30) = " + std::to_string(scaled));
    c.expect(report["payload"]["verdict"] == "converged", "verdict not converged");
}

void criterion_2() {
    Criterion c{2, "z^n-1 family: limit 1/pi for n=1..8 and converging z^2-1"};
    for (int n = 1; n <= 8; ++n) {
        auto lim = limit_formula(parse_polynomial("z^" + std::to_string(n) + "-1"));
        c.expect(lim.finite, "limit not finite at n=" + std::to_string(n));
        c.expect(std::abs(lim.value - kOneOverPi) <= 1e-10,
                 "limit off at n=" + std::to_string(n));
    }
    json report = run_cli_json("converge " + shell_quote("z^2-1") + " --kmax 30");
    const double scaled = report["payload"]["rows"].back()["scaled"].get<double>();
    c.expect(std::abs(scaled - kOneOverPi) <= 1e-3, "scaled(30) = " + std::to_string(scaled));
}

void criterion_3() {
    Criterion c{3, "Lemma 3: window integral limit 2/c and closed form vs quadrature"};
    c.expect(std::abs(log_power_window_integral(3.0, 0.1, 40) - 2.0 / 3.0) <= 1e-6,
             "window integral limit");
    const double x0 = 1e-14;
    for (double x : {0.1, 0.5, 1.0})
        for (int k = 1; k <= 20; ++k) {
            const double closed =
                log_power_antiderivative(x, k) - log_power_antiderivative(x0, k);
            const double numeric = oracles::integrate_log_power(k, x0, x);
            c.expect(std::abs(closed - numeric) <= 1e-9 * std::max(1.0, std::abs(closed)),
                     "antiderivative k=" + std::to_string(k) + " x=" + std::to_string(x));
        }
}

void criterion_4() {
    Criterion c{4, "Lemma 1 decay: 2z+1 under the (1,3,1) envelope, tiny at k=30"};
    auto p = parse_polynomial("2*z+1");
    double scaled30 = 0.0;
    for (int k = 2; k <= 30; ++k) {
        const double scaled = mk_quadrature(p, k).scaled;
        c.expect(scaled <= lemma1_envelope(1.0, 3.0, 1.0, k) + 1e-10,
                 "envelope violated at k=" + std::to_string(k));
        if (k == 30)
            scaled30 = scaled;
    }
    c.expect(scaled30 < 1e-8, "scaled(30) not below 1e-8");
}

void criterion_5() {
    Criterion c{5, "(z-1)^2: diverging verdict, scaled > 10, witness t = 0"};
    json report = run_cli_json("converge " + shell_quote("(z-1)^2") + " --kmax 25");
    c.expect(report["payload"]["verdict"] == "diverging", "verdict not diverging");
    bool exceeded = false;
    for (const auto& row : report["payload"]["rows"])
        if (row["scaled"].is_number() && row["scaled"].get<double>() > 10.0)
            exceeded = true;
    c.expect(exceeded, "scaled never exceeded 10");
    auto lim = limit_formula(parse_polynomial("(z-1)^2"));
    c.expect(!lim.finite, "limit_formula not infinite");
    c.expect(lim.divergence_witness.has_value() &&
                 angle_distance(lim.divergence_witness->angle, 0.0) <= 1e-9,
             "witness angle not 0");
}

void criterion_6() {
    Criterion c{6, "Jensen consistency on 20 deterministic random polynomials"};
    oracles::SplitMix64 rng(20240817u);
    int accepted = 0;
    int attempts = 0;
    while (accepted < 20 && attempts < 500) {
        ++attempts;
        const int degree = rng.range(1, 6);
        std::map<int, complex> terms;
        for (int e = 0; e <= degree; ++e) {
            const double re = rng.range(-4, 4);
            const double im = (rng.range(0, 2) == 0) ? rng.range(-3, 3) : 0.0;
            terms[e] = complex(re, im);
        }
        LaurentPolynomial p{terms};
        if (p.is_zero() || p.max_exponent() < 1)
            continue;
        try {
            const double j = jensen_measure(p);
            const double q = mk_quadrature(p, 1).value;
            c.expect(std::abs(j - q) <= 1e-7,
                     "poly " + format_polynomial(p) + " diff " + std::to_string(std::abs(j - q)));
            ++accepted;
        } catch (const classification_error&) {
            continue;
        }
    }
    c.expect(accepted == 20, "could not build 20 unambiguous polynomials");
}

void criterion_7() {
    Criterion c{7, "oracle equivalence |quad - bruteforce| <= 1e-7, k = 1..8"};
    for (const char* s : {"z+1", "z^2-1", "2*z+1", "(z-1)*(z-i)"}) {
        auto p = parse_polynomial(s);
        for (int k = 1; k <= 8; ++k) {
            const double quad = mk_quadrature(p, k).value;
            const double brute = mk_bruteforce(p, k, 10);
            c.expect(std::abs(quad - brute) <= 1e-7,
                     std::string(s) + " k=" + std::to_string(k));
        }
    }
}

void criterion_8() {
    Criterion c{8, "m_2(z+1) = pi^2/12 by both integrators"};
    auto p = parse_polynomial("z+1");
    const double quad = mk_quadrature(p, 2).value;
    const double brute = mk_bruteforce(p, 2, 10);
    c.expect(std::abs(quad - kPiSquaredOverTwelve) <= 1e-6, "quadrature path");
    c.expect(std::abs(brute - kPiSquaredOverTwelve) <= 1e-6, "tanh-sinh path");
    c.expect(std::abs(quad - brute) <= 1e-7, "paths disagree");
}

void criterion_9() {
    Criterion c{9, "property suite: rotation, monomial, reciprocal, scaling binomial"};
    const complex w = std::polar(1.0, 2.0 * std::numbers::pi * 0.3);
    for (const char* s : {"z+1", "z^2-1", "(z-1)*(z-i)"}) {
        auto p = parse_polynomial(s);
        for (int k = 1; k <= 6; ++k) {
            const double base = mk_quadrature(p, k).value;
            c.expect(std::abs(mk_quadrature(rotate_argument(p, w), k).value - base) <= 1e-7,
                     std::string("rotation ") + s + " k=" + std::to_string(k));
            c.expect(std::abs(mk_quadrature(parse_polynomial("z^3") * p, k).value - base) <=
                         1e-9,
                     std::string("monomial ") + s + " k=" + std::to_string(k));
            c.expect(std::abs(mk_quadrature(invert_argument(p), k).value - base) <= 1e-7,
                     std::string("reciprocal ") + s + " k=" + std::to_string(k));
        }
    }
    auto base_poly = parse_polynomial("z^2-1");
    for (const complex scale : {complex(2.0), complex(0.5), complex(0.0, 3.0)}) {
        const double logc = std::log(std::abs(scale));
        for (int k = 1; k <= 6; ++k) {
            const double lhs = mk_quadrature(base_poly * scale, k).value;
            double rhs = 0.0;
            double binom = 1.0;
            for (int j = 0; j <= k; ++j) {
                const double mkj = (k - j == 0) ? 1.0 : mk_quadrature(base_poly, k - j).value;
                rhs += binom * std::pow(logc, j) * mkj;
                binom = binom * (k - j) / (j + 1);
            }
            c.expect(std::abs(lhs - rhs) <= 1e-6, "scaling k=" + std::to_string(k));
        }
    }
}

} // namespace

int main() {
    try {
        criterion_1();
        criterion_2();
        criterion_3();
        criterion_4();
        criterion_5();
        criterion_6();
        criterion_7();
        criterion_8();
        criterion_9();
    } catch (const std::exception& e) {
        std::fprintf(stderr, "acceptance suite aborted: %s\n", e.what());
        return 1;
    }
    if (failures != 0) {
        std::printf("%d criterion(s) failed\n", failures);
        return 1;
    }
    std::printf("all 9 acceptance criteria passed\n");
    return 0;
}
