// mahlerk: higher Mahler measures of Laurent polynomials and the limiting
// behaviour of |m_k(P)| / k! on the command line.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "mahlerk/asymptotics.hpp"
#include "mahlerk/errors.hpp"
#include "mahlerk/laurent.hpp"
#include "mahlerk/measure.hpp"
#include "mahlerk/roots.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace mahlerk;

constexpr const char* kSchemaVersion = "1.0";
constexpr int kExitParse = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitClassification = 4;
constexpr int kExitUsage = 5;
constexpr int kBruteforceLevel = 10;

// ---------------------------------------------------------------------------
// Serialization. JSON numbers are printed with 17 significant digits so
// binary64 values survive a round trip; non-finite values become strings.
// ---------------------------------------------------------------------------

std::string format_number(double v, int digits) {
    if (std::isnan(v))
        return "\"nan\"";
    if (std::isinf(v))
        return v > 0 ? "\"inf\"" : "\"-inf\"";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
    return buf;
}

std::string csv_number(double v) {
    if (!std::isfinite(v))
        return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_json_string(std::ostream& os, const std::string& s) {
    os << '"';
    for (char c : s) {
        switch (c) {
        case '"': os << "\\\""; break;
        case '\\': os << "\\\\"; break;
        case '\n': os << "\\n"; break;
        case '\t': os << "\\t"; break;
        case '\r': os << "\\r"; break;
        default:
            if (static_cast<unsigned char>(c) < 0x20) {
                char buf[8];
                std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                os << buf;
            } else {
                os << c;
            }
        }
    }
    os << '"';
}

void write_json(std::ostream& os, const json& j, int indent) {
    const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    const std::string pad_in(static_cast<std::size_t>(indent + 1) * 2, ' ');
    switch (j.type()) {
    case json::value_t::object: {
        if (j.empty()) {
            os << "{}";
            return;
        }
        os << "{\n";
        bool first = true;
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (!first)
                os << ",\n";
            first = false;
            os << pad_in;
            write_json_string(os, it.key());
            os << ": ";
            write_json(os, it.value(), indent + 1);
        }
        os << "\n" << pad << "}";
        return;
    }
    case json::value_t::array: {
        if (j.empty()) {
            os << "[]";
            return;
        }
        os << "[\n";
        bool first = true;
        for (const auto& item : j) {
            if (!first)
                os << ",\n";
            first = false;
            os << pad_in;
            write_json(os, item, indent + 1);
        }
        os << "\n" << pad << "]";
        return;
    }
    case json::value_t::string:
        write_json_string(os, j.get<std::string>());
        return;
    case json::value_t::boolean:
        os << (j.get<bool>() ? "true" : "false");
        return;
    case json::value_t::number_integer:
        os << j.get<long long>();
        return;
    case json::value_t::number_unsigned:
        os << j.get<unsigned long long>();
        return;
    case json::value_t::number_float:
        os << format_number(j.get<double>(), 17);
        return;
    default:
        os << "null";
        return;
    }
}

// ---------------------------------------------------------------------------
// Command plumbing.
// ---------------------------------------------------------------------------

struct Options {
    std::string polynomial;
    int k = 1;
    int k_max = 40;
    std::string method = "quad";
    std::string format = "table";
    std::string out;
    double tolerance = kDefaultCircleTolerance;
    std::optional<double> delta;
};

struct CommandOutput {
    json payload;
    std::vector<std::string> warnings;
    std::string csv;
    std::string table;
};

QuadratureConfig config_from(const Options& opt) {
    QuadratureConfig cfg;
    cfg.circle_tolerance = opt.tolerance;
    if (opt.delta)
        cfg.delta_cap = *opt.delta;
    return cfg;
}

std::string table_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

json complex_json(complex z) {
    return json{{"re", z.real()}, {"im", z.imag()}};
}

CommandOutput cmd_roots(const LaurentPolynomial& p, const Options& opt) {
    CommandOutput out;
    const double cap = opt.delta.value_or(0.0);
    const CircleRootSet circle = circle_roots(p, opt.tolerance, cap);
    const LaurentPolynomial dp = p.derivative();

    json roots = json::array();
    std::ostringstream table, csv;
    csv << "re,im,multiplicity,on_unit_circle,angle,residual,derivative_magnitude\r\n";
    table << "roots of P (ordinary lift, multiplicity-collapsed)\n";
    for (const Root& r : find_roots(p)) {
        const double dmag = std::abs(dp.evaluate(r.value));
        json entry = {{"re", r.value.real()},
                      {"im", r.value.imag()},
                      {"multiplicity", r.multiplicity},
                      {"on_unit_circle", r.on_unit_circle}};
        if (r.angle)
            entry["angle"] = *r.angle;
        entry["residual"] = r.residual;
        entry["derivative_magnitude"] = dmag;
        roots.push_back(entry);

        csv << csv_number(r.value.real()) << ',' << csv_number(r.value.imag()) << ','
            << r.multiplicity << ',' << (r.on_unit_circle ? "true" : "false") << ','
            << (r.angle ? csv_number(*r.angle) : "") << ',' << csv_number(r.residual) << ','
            << csv_number(dmag) << "\r\n";

        table << "  " << table_number(r.value.real()) << (r.value.imag() < 0 ? " - " : " + ")
              << table_number(std::abs(r.value.imag())) << "i  mult " << r.multiplicity
              << (r.on_unit_circle ? "  on S1" : "  off S1");
        if (r.angle)
            table << "  t = " << table_number(*r.angle);
        table << "  |P'| = " << table_number(dmag) << "\n";
    }
    out.payload["roots"] = roots;
    out.payload["windows"] = {{"count", circle.entries.size()},
                              {"delta", circle.delta},
                              {"complement_measure", circle.complement_measure}};
    table << "circle windows: " << circle.entries.size() << ", delta = "
          << table_number(circle.delta)
          << ", mu(A) = " << table_number(circle.complement_measure) << "\n";
    out.csv = csv.str();
    out.table = table.str();
    return out;
}

CommandOutput cmd_measure(const LaurentPolynomial& p, const Options& opt) {
    CommandOutput out;
    json payload;
    payload["k"] = opt.k;
    payload["method"] = opt.method;

    double value = 0.0;
    double scaled = 0.0;
    std::optional<double> error;
    std::ostringstream table;

    if (opt.method == "jensen") {
        value = jensen_measure(p);
        scaled = std::abs(value);
        payload["value"] = value;
        payload["scaled"] = scaled;
        table << "m_1(P) = " << table_number(value) << "  (Jensen closed form)\n";
    } else if (opt.method == "bruteforce") {
        value = mk_bruteforce(p, opt.k, kBruteforceLevel, &out.warnings);
        scaled = std::abs(value) * std::exp(-std::lgamma(opt.k + 1.0));
        payload["value"] = value;
        payload["scaled"] = scaled;
        payload["level"] = kBruteforceLevel;
        table << "m_" << opt.k << "(P) = " << table_number(value)
              << "  (tanh-sinh, level " << kBruteforceLevel << ")\n"
              << "|m_k|/k! = " << table_number(scaled) << "\n";
    } else {
        const HigherMeasureResult r = mk_quadrature(p, opt.k, config_from(opt));
        value = r.value;
        scaled = r.scaled;
        error = r.error_estimate;
        payload["value"] = r.value;
        payload["scaled"] = r.scaled;
        payload["error_estimate"] = r.error_estimate;
        payload["status"] = r.status == MeasureStatus::diverging ? "diverging" : "ok";
        json breakdown = json::array();
        for (const RegionContribution& c : r.breakdown)
            breakdown.push_back({{"region", c.region}, {"scaled", c.scaled}});
        payload["breakdown"] = breakdown;
        out.warnings = r.warnings;

        table << "m_" << opt.k << "(P) = " << table_number(value) << "\n"
              << "|m_k|/k! = " << table_number(scaled) << "  (error estimate "
              << table_number(r.error_estimate) << ")\n";
        for (const RegionContribution& c : r.breakdown)
            table << "  " << c.region << ": " << table_number(c.scaled) << "\n";
        if (r.status == MeasureStatus::diverging)
            table << "status: diverging\n";
    }

    std::ostringstream csv;
    csv << "k,method,value,scaled,error\r\n";
    csv << opt.k << ',' << opt.method << ',' << csv_number(value) << ',' << csv_number(scaled)
        << ',' << (error ? csv_number(*error) : "") << "\r\n";
    out.payload = payload;
    out.csv = csv.str();
    out.table = table.str();
    return out;
}

CommandOutput cmd_limit(const LaurentPolynomial& p, const Options& opt) {
    CommandOutput out;
    const LimitValue limit = limit_formula(p, opt.tolerance);
    json payload;
    payload["finite"] = limit.finite;
    std::ostringstream table, csv;
    csv << "finite,value,witness_angle,witness_multiplicity\r\n";
    if (limit.finite) {
        payload["value"] = limit.value;
        json contributions = json::array();
        for (const LimitContribution& c : limit.contributions)
            contributions.push_back({{"angle", c.angle},
                                     {"derivative_magnitude", c.derivative_magnitude},
                                     {"term", c.term}});
        payload["contributions"] = contributions;
        csv << "true," << csv_number(limit.value) << ",,\r\n";
        table << "lim |m_k|/k! = " << table_number(limit.value) << "\n";
        for (const LimitContribution& c : limit.contributions)
            table << "  t = " << table_number(c.angle) << "  |P'| = "
                  << table_number(c.derivative_magnitude) << "  term = " << table_number(c.term)
                  << "\n";
    } else {
        payload["value"] = "infinite";
        const DivergenceWitness& w = *limit.divergence_witness;
        payload["witness"] = {{"angle", w.angle},
                              {"multiplicity", w.multiplicity},
                              {"root", complex_json(w.value)}};
        csv << "false,," << csv_number(w.angle) << ',' << w.multiplicity << "\r\n";
        table << "lim |m_k|/k! = infinite  (repeated circle root, t = " << table_number(w.angle)
              << ", multiplicity " << w.multiplicity << ")\n";
    }
    out.payload = payload;
    out.csv = csv.str();
    out.table = table.str();
    return out;
}

CommandOutput cmd_converge(const LaurentPolynomial& p, const Options& opt) {
    CommandOutput out;
    const ConvergenceReport report = convergence_study(p, opt.k_max, config_from(opt));
    out.warnings = report.warnings;

    json payload;
    payload["k_max"] = opt.k_max;
    payload["verdict"] = to_string(report.verdict);
    if (report.limit.finite) {
        payload["limit"] = {{"finite", true}, {"value", report.limit.value}};
    } else {
        payload["limit"] = {{"finite", false},
                            {"value", "infinite"},
                            {"witness",
                             {{"angle", report.limit.divergence_witness->angle},
                              {"multiplicity", report.limit.divergence_witness->multiplicity}}}};
    }

    std::ostringstream csv, table;
    csv << "k,mk,scaled,ratio,envelope,error\r\n";
    table << "  k  m_k            |m_k|/k!       ratio          envelope       error\n";
    json rows = json::array();
    for (const ConvergenceRow& row : report.rows) {
        json jrow;
        jrow["k"] = row.k;
        jrow["mk"] = row.mk;
        jrow["scaled"] = row.scaled;
        jrow["ratio"] = row.ratio ? json(*row.ratio) : json(nullptr);
        jrow["envelope"] = row.envelope ? json(*row.envelope) : json(nullptr);
        jrow["error"] = row.error_estimate;
        rows.push_back(jrow);

        csv << row.k << ',' << csv_number(row.mk) << ',' << csv_number(row.scaled) << ','
            << (row.ratio ? csv_number(*row.ratio) : "") << ','
            << (row.envelope ? csv_number(*row.envelope) : "") << ','
            << csv_number(row.error_estimate) << "\r\n";

        char line[160];
        std::snprintf(line, sizeof(line), "%3d  %-13.6g  %-13.6g  %-13.6g  %-13.6g  %-.3g\n",
                      row.k, row.mk, row.scaled, row.ratio.value_or(std::nan("")),
                      row.envelope.value_or(std::nan("")), row.error_estimate);
        table << line;
    }
    payload["rows"] = rows;
    table << "verdict: " << to_string(report.verdict);
    if (report.limit.finite)
        table << "  (limit " << table_number(report.limit.value) << ")";
    else
        table << "  (limit infinite)";
    table << "\n";
    out.payload = payload;
    out.csv = csv.str();
    out.table = table.str();
    return out;
}

int run(const std::string& command, const Options& opt) {
    const LaurentPolynomial p = parse_polynomial(opt.polynomial);

    CommandOutput out;
    if (command == "roots")
        out = cmd_roots(p, opt);
    else if (command == "measure")
        out = cmd_measure(p, opt);
    else if (command == "limit")
        out = cmd_limit(p, opt);
    else
        out = cmd_converge(p, opt);

    std::string rendered;
    if (opt.format == "json") {
        json record;
        record["schema_version"] = kSchemaVersion;
        record["command"] = command;
        record["input_polynomial"] = format_polynomial(p);
        record["payload"] = out.payload;
        record["warnings"] = out.warnings;
        std::ostringstream os;
        write_json(os, record, 0);
        os << "\n";
        rendered = os.str();
    } else if (opt.format == "csv") {
        rendered = out.csv;
    } else {
        std::ostringstream os;
        os << command << " " << format_polynomial(p) << "\n" << out.table;
        for (const std::string& w : out.warnings)
            os << "warning: " << w << "\n";
        rendered = os.str();
    }

    if (!opt.out.empty()) {
        std::ofstream file(opt.out, std::ios::binary);
        if (!file)
            throw numeric_error("cannot open output file " + opt.out);
        file << rendered;
    } else {
        std::cout << rendered;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"higher Mahler measures m_k(P) and their k -> infinity behaviour"};
    app.require_subcommand(1);

    Options opt;
    std::string command;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("polynomial", opt.polynomial, "Laurent polynomial, e.g. \"z^-1 + 2*z\"")
            ->required();
        sub->add_option("--tol", opt.tolerance, "unit-circle classification tolerance");
        sub->add_option("--delta", opt.delta, "cap on the window half-width");
        sub->add_option("--format", opt.format, "output format")
            ->check(CLI::IsMember({"json", "csv", "table"}));
        sub->add_option("--out", opt.out, "write output to a file instead of stdout");
    };

    CLI::App* roots = app.add_subcommand("roots", "roots and unit-circle classification");
    add_common(roots);
    CLI::App* measure = app.add_subcommand("measure", "compute m_k(P)");
    add_common(measure);
    measure->add_option("--k", opt.k, "power of the logarithm")->check(CLI::NonNegativeNumber);
    measure->add_option("--method", opt.method, "integration method")
        ->check(CLI::IsMember({"quad", "jensen", "bruteforce"}));
    CLI::App* limit = app.add_subcommand("limit", "evaluate the limit of |m_k|/k!");
    add_common(limit);
    CLI::App* converge = app.add_subcommand("converge", "convergence study of |m_k|/k!");
    add_common(converge);
    converge->add_option("--kmax", opt.k_max, "largest k in the study");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0)
            return app.exit(e); // --help and friends
        app.exit(e);
        return kExitUsage;
    }

    for (CLI::App* sub : {roots, measure, limit, converge})
        if (sub->parsed())
            command = sub->get_name();

    if (command == "measure" && opt.method == "jensen" && opt.k != 1) {
        std::cerr << "error: --method jensen requires --k 1\n";
        return kExitUsage;
    }
    if (command == "converge" && opt.k_max < 3) {
        std::cerr << "error: --kmax must be at least 3\n";
        return kExitUsage;
    }

    try {
        return run(command, opt);
    } catch (const parse_error& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitParse;
    } catch (const classification_error& e) {
        std::cerr << "classification error: " << e.what() << "\n";
        return kExitClassification;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return kExitNumeric;
    }
    return 0;
}
