#pragma once

// Command-line front end.  run() is the whole program; the tools/ binary only
// forwards argv and the standard streams.
//
// Exit codes: 0 success, 2 usage or domain error, 3 I/O error.

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "illum/covering.hpp"
#include "illum/decimal.hpp"
#include "illum/hadwiger.hpp"
#include "illum/meanwidth.hpp"

namespace illum::cli {

using Json = nlohmann::ordered_json;

enum Exit : int { ok = 0, usage = 2, io = 3 };

struct Settings {
    unsigned precision = Precision::kDefaultBits;
    std::string format = "text";
    std::string out;
    int digits = 6;
    int dim = 0;
    bool symmetric = false;
    std::string method = "best";
    std::string plan = "paper";
    double cutoff = QuadratureParams::kDefaultCutoff;
    std::uint64_t subdivisions = QuadratureParams::kDefaultSubdivisions;
    unsigned grid = 1000;
};

/// Shortest decimal that reads back as the same double.
inline std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

struct OutputRecord {
    std::string quantity;  // mean_width, theta, hadwiger, rogers_r
    int n = 0;
    std::optional<BodyClass> cls;
    std::string value_lo, value_hi;
    std::optional<mpz_class> integer;
    std::string method;
    std::vector<std::string> trace;
};

namespace detail {

inline Json params_json(const Settings& s) {
    return Json{{"precision_bits", s.precision},
                {"cutoff_a", s.cutoff},
                {"subdivisions_N", s.subdivisions},
                {"grid_N", s.grid}};
}

inline Json integer_json(const mpz_class& z) { return Json::parse(z.get_str()); }

inline std::string csv_field(const std::string& v) {
    if (v.find_first_of(",\"\n") == std::string::npos) return v;
    std::string q = "\"";
    for (char c : v) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + "\"";
}

inline std::string class_name(const std::optional<BodyClass>& c) {
    return c ? std::string(to_string(*c)) : std::string();
}

inline void write_record(std::ostream& os, const OutputRecord& r, const Settings& s) {
    const std::string integer = r.integer ? r.integer->get_str() : "";
    if (s.format == "json") {
        Json j{{"quantity", r.quantity}, {"n", r.n}};
        j["class"] = r.cls ? Json(class_name(r.cls)) : Json(nullptr);
        j["value_lo"] = r.value_lo;
        j["value_hi"] = r.value_hi;
        j["integer"] = r.integer ? integer_json(*r.integer) : Json(nullptr);
        j["method"] = r.method;
        j["params"] = params_json(s);
        if (!r.trace.empty()) j["trace"] = r.trace;
        os << j.dump(2) << '\n';
    } else if (s.format == "csv") {
        os << "quantity,n,class,value_lo,value_hi,integer,method,precision_bits,cutoff_a,subdivisions_N,grid_N\n";
        os << r.quantity << ',' << r.n << ',' << class_name(r.cls) << ',' << r.value_lo << ',' << r.value_hi << ','
           << integer << ',' << csv_field(r.method) << ',' << s.precision << ',' << format_double(s.cutoff) << ','
           << s.subdivisions << ',' << s.grid << '\n';
    } else {
        if (r.integer) os << r.integer->get_str() << '\n';
        os << r.quantity << " n=" << r.n;
        if (r.cls) os << ' ' << class_name(r.cls);
        os << ": [" << r.value_lo << ", " << r.value_hi << "]  method=" << r.method << '\n';
        for (const auto& line : r.trace) os << "  " << line << '\n';
        os << "  params: precision_bits=" << s.precision << " cutoff_a=" << format_double(s.cutoff)
           << " subdivisions_N=" << s.subdivisions << " grid_N=" << s.grid << '\n';
    }
}

inline QuadratureParams quadrature(const Settings& s) {
    QuadratureParams q;
    q.cutoff = s.cutoff;
    q.subdivisions = s.subdivisions;
    q.validate();
    return q;
}

inline BoundOptions bound_options(const Settings& s) {
    BoundOptions o;
    o.precision = Precision(s.precision);
    o.quadrature = quadrature(s);
    o.plan = s.plan == "auto" ? PlanKind::automatic : PlanKind::paper;
    o.rogers_grid = s.grid;
    o.catalog = DensityCatalog::from_environment();
    o.digits = s.digits;
    return o;
}

inline OutputRecord cmd_meanwidth(const Settings& s) {
    if (s.dim < 1 || s.dim > 16) throw ContractError("meanwidth needs 1 <= n <= 16");
    const Precision p(s.precision);
    const MeanWidthResult mw = simplex_mean_width(Dimension(s.dim), quadrature(s), p);
    OutputRecord r;
    r.quantity = "mean_width";
    r.n = s.dim;
    r.value_lo = decimal_lo(mw.width, s.digits);
    r.value_hi = decimal_hi(mw.width, s.digits);
    r.method = "riemann";
    return r;
}

inline OutputRecord cmd_theta(const Settings& s) {
    if (s.dim < 2 || s.dim > Dimension::kMax) throw ContractError("theta needs 2 <= n <= 64");
    const Dimension dim(s.dim);
    const Precision p(s.precision);
    OutputRecord r;
    r.n = s.dim;
    r.quantity = "theta";
    std::optional<ThetaBound> t;
    if (s.method == "rogers") {
        if (s.dim < 3) throw NotAvailableError("rogers density bound is tabulated for n >= 3");
        const RogersResult rr = rogers_rn(dim, s.grid, p);
        r.quantity = "rogers_r";
        r.value_lo = decimal_lo(rr.r, s.digits);
        r.value_hi = decimal_hi(rr.r, s.digits);
        r.method = "rogers";
        r.trace.push_back("minimum at x = " + std::to_string(rr.best_j) + "/(" + std::to_string(rr.grid_N) + "*" +
                          std::to_string(s.dim) + ")");
        return r;
    }
    const DensityCatalog catalog = DensityCatalog::from_environment();
    if (s.method == "best")
        t = theta_best(dim, catalog, p);
    else if (s.method == "anstar")
        t = theta_anstar(dim, p);
    else if (s.method == "catalog")
        t = theta_catalog(dim, catalog, p);
    else if (s.method == "external") {
        t = theta_external(dim, p);
        if (!t) throw NotAvailableError("no external covering density for n=" + std::to_string(s.dim));
    } else
        throw ContractError("unknown theta method '" + s.method + "'");
    r.value_lo = decimal_lo(t->value, s.digits);
    r.value_hi = decimal_hi(t->value, s.digits);
    r.method = std::string(to_string(t->method));
    return r;
}

inline BoundMethod parse_bound_method(const std::string& m) {
    if (m == "best") return BoundMethod::best;
    if (m == "john") return BoundMethod::john;
    if (m == "rogers") return BoundMethod::rogers;
    if (m == "external") return BoundMethod::external;
    throw ContractError("unknown bound method '" + m + "'");
}

inline OutputRecord cmd_bound(const Settings& s) {
    if (s.dim < 3 || s.dim > Dimension::kMax) throw ContractError("bound needs 3 <= n <= 64");
    const BodyClass cls = s.symmetric ? BodyClass::symmetric : BodyClass::general;
    const HadwigerBound hb = compute_bound(Dimension(s.dim), cls, parse_bound_method(s.method), bound_options(s));
    OutputRecord r;
    r.quantity = "hadwiger";
    r.n = s.dim;
    r.cls = cls;
    r.value_lo = decimal_lo(hb.real_bound, s.digits);
    r.value_hi = decimal_hi(hb.real_bound, s.digits);
    r.integer = hb.integer_bound;
    r.method = hb.method;
    r.trace = hb.plan_trace;
    return r;
}

struct TableRow {
    int n;
    HadwigerBound bound;
};

inline void write_tables(std::ostream& os, const Settings& s) {
    const BoundOptions opt = bound_options(s);
    std::vector<TableRow> general, symmetric;
    std::vector<std::pair<int, std::string>> rogers;
    for (int n = 3; n <= 14; ++n) {
        general.push_back({n, best_bound(Dimension(n), BodyClass::general, opt)});
        symmetric.push_back({n, best_bound(Dimension(n), BodyClass::symmetric, opt)});
        rogers.emplace_back(n, decimal_hi(rogers_rn(Dimension(n), s.grid, opt.precision).r, s.digits));
    }
    auto citation = [](const TableRow& row) -> std::string {
        if (row.bound.method != "external") return "";
        return external_bound(row.n, row.bound.cls)->citation;
    };
    auto real_hi = [&](const TableRow& row) -> std::string {
        return row.bound.method == "external" ? "" : decimal_hi(row.bound.real_bound, s.digits);
    };

    if (s.format == "json") {
        auto rows = [&](const std::vector<TableRow>& t) {
            Json a = Json::array();
            for (const auto& row : t) {
                Json j{{"n", row.n}, {"bound", integer_json(row.bound.integer_bound)}, {"method", row.bound.method}};
                if (row.bound.method == "external")
                    j["citation"] = citation(row);
                else
                    j["real_hi"] = real_hi(row);
                a.push_back(std::move(j));
            }
            return a;
        };
        Json r3 = Json::array();
        for (const auto& [n, v] : rogers) r3.push_back(Json{{"n", n}, {"r_hi", v}});
        Json j{{"params", params_json(s)}};
        j["params"]["plan"] = s.plan;
        j["general"] = rows(general);
        j["symmetric"] = rows(symmetric);
        j["rogers_r"] = std::move(r3);
        os << j.dump() << '\n';
    } else if (s.format == "csv") {
        auto block = [&](const char* header, const std::vector<TableRow>& t) {
            os << header << '\n';
            for (const auto& row : t)
                os << row.n << ',' << row.bound.integer_bound.get_str() << ',' << row.bound.method << ','
                   << real_hi(row) << ',' << csv_field(citation(row)) << '\n';
        };
        block("n,general_bound,method,real_hi,citation", general);
        os << '\n';
        block("n,symmetric_bound,method,real_hi,citation", symmetric);
        os << "\nn,r_hi\n";
        for (const auto& [n, v] : rogers) os << n << ',' << v << '\n';
    } else {
        auto block = [&](const char* title, const std::vector<TableRow>& t) {
            os << title << '\n';
            for (const auto& row : t) {
                os << std::setw(4) << row.n << std::setw(14) << row.bound.integer_bound.get_str() << "  "
                   << std::left << std::setw(10) << row.bound.method << std::right;
                const std::string c = citation(row);
                os << (c.empty() ? real_hi(row) : c) << '\n';
            }
        };
        block("Upper bounds on H_n (general convex bodies)", general);
        os << '\n';
        block("Upper bounds on H_n^s (centrally symmetric convex bodies)", symmetric);
        os << "\nRogers density bound r_n (grid N=" << s.grid << ", ceiled)\n";
        for (const auto& [n, v] : rogers) os << std::setw(4) << n << "  " << v << '\n';
    }
}

/// Writes to --out when given, else to `out`.  Output is buffered so that a
/// failed computation leaves no partial file.
template <typename Fn>
int emit(const Settings& s, std::ostream& out, std::ostream& err, Fn&& body) {
    std::ostringstream buf;
    body(buf);
    if (s.out.empty()) {
        out << buf.str();
        return Exit::ok;
    }
    std::ofstream f(s.out, std::ios::binary);
    if (!f || !(f << buf.str()) || !f.flush()) {
        err << "error: cannot write '" << s.out << "'\n";
        return Exit::io;
    }
    return Exit::ok;
}

}  // namespace detail

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    Settings s;
    CLI::App app{"Certified upper bounds on Hadwiger covering numbers, covering densities and simplex mean widths",
                 "illum"};
    app.fallthrough();
    app.require_subcommand(1);
    app.add_option("--precision", s.precision, "Working precision in bits")
        ->capture_default_str()
        ->check(CLI::Range(53u, 4096u));
    app.add_option("--format", s.format, "Output format")
        ->capture_default_str()
        ->check(CLI::IsMember({"text", "csv", "json"}));
    app.add_option("--out", s.out, "Write output to this file instead of stdout");
    app.add_option("--digits", s.digits, "Decimal digits printed (lo rounded down, hi rounded up)")
        ->capture_default_str()
        ->check(CLI::Range(0, 50));

    auto add_quadrature = [&](CLI::App* sub) {
        sub->add_option("--cutoff", s.cutoff, "Quadrature cutoff a (> 2)")->capture_default_str();
        sub->add_option("--subdivisions", s.subdivisions, "Riemann subdivisions N (initial N for bounds)")
            ->capture_default_str()
            ->check(CLI::Range(std::uint64_t{1}, std::uint64_t{100'000'000}));
    };
    auto add_grid = [&](CLI::App* sub) {
        sub->add_option("--grid", s.grid, "Rogers grid size N")->capture_default_str()->check(CLI::Range(2u, 1'000'000u));
    };

    CLI::App* mw = app.add_subcommand("meanwidth", "Enclosure of the mean width of the unit-edge regular simplex");
    mw->add_option("--dim", s.dim, "Dimension n (1..16)")->required();
    add_quadrature(mw);

    CLI::App* th = app.add_subcommand("theta", "Upper bound on a covering density");
    th->add_option("--dim", s.dim, "Dimension n")->required();
    th->add_option("--method", s.method, "best | anstar | catalog | rogers | external")
        ->capture_default_str()
        ->check(CLI::IsMember({"best", "anstar", "catalog", "rogers", "external"}));
    add_grid(th);

    CLI::App* bd = app.add_subcommand("bound", "Integer upper bound on H_n or H_n^s");
    bd->add_option("--dim", s.dim, "Dimension n (>= 3)")->required();
    bd->add_flag("--symmetric", s.symmetric, "Centrally symmetric bodies");
    bd->add_option("--method", s.method, "best | john | rogers | external")
        ->capture_default_str()
        ->check(CLI::IsMember({"best", "john", "rogers", "external"}));
    bd->add_option("--plan", s.plan, "paper | auto")->capture_default_str()->check(CLI::IsMember({"paper", "auto"}));
    add_quadrature(bd);
    add_grid(bd);

    CLI::App* tb = app.add_subcommand("tables", "Bounds on H_n, H_n^s and r_n for 3 <= n <= 14");
    tb->add_option("--plan", s.plan, "paper | auto")->capture_default_str()->check(CLI::IsMember({"paper", "auto"}));
    add_quadrature(tb);
    add_grid(tb);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return Exit::ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return Exit::ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return Exit::usage;
    }

    try {
        if (*tb) return detail::emit(s, out, err, [&](std::ostream& os) { detail::write_tables(os, s); });
        OutputRecord r;
        if (*mw)
            r = detail::cmd_meanwidth(s);
        else if (*th)
            r = detail::cmd_theta(s);
        else
            r = detail::cmd_bound(s);
        return detail::emit(s, out, err, [&](std::ostream& os) { detail::write_record(os, r, s); });
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return Exit::io;
    } catch (const std::invalid_argument& e) {  // ContractError
        err << "error: " << e.what() << '\n';
        return Exit::usage;
    } catch (const std::out_of_range& e) {  // NotAvailableError
        err << "error: " << e.what() << '\n';
        return Exit::usage;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << '\n';
        return Exit::usage;
    }
}

}  // namespace illum::cli
