// opspace: symbolic derivations and numerical verification suites.
//
// Exit codes: 0 all records pass, 1 a record failed, 2 invalid input,
// 3 budget refusal.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "opspace/cli/commands.hpp"

namespace {

using namespace opspace;
using opspace::cli::Json;
using opspace::cli::Report;

int exit_code(ErrorCode c) {
    switch (c) {
    case ErrorCode::budget_exceeded:
    case ErrorCode::infeasible_budget: return 3;
    default: return 2;
    }
}

// Exact exponent for symbolic commands: "a/b", integers or "inf".
Exponent symbolic_exponent(const std::string& s) {
    if (s.find('.') != std::string::npos)
        throw Error(ErrorCode::invalid_parameter, "decimal '" + s + "' rejected; write exponents as a/b or inf");
    return Exponent::parse(s);
}

// Numerical suites also take decimals, read as the exact rational they denote.
Rational numeric_rational(const std::string& s, std::vector<std::string>& warnings) {
    auto dot = s.find('.');
    if (dot == std::string::npos) return parse_rational(s);
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    std::size_t scale = s.size() - dot - 1;
    if (digits.empty() || digits == "-" || digits == "+" || s.find('/') != std::string::npos)
        throw Error(ErrorCode::invalid_parameter, "not a number: '" + s + "'");
    Rational r = parse_rational(digits) / Rational(boost::multiprecision::pow(boost::multiprecision::cpp_int(10), static_cast<unsigned>(scale)));
    warnings.push_back("decimal '" + s + "' read as " + to_string(r));
    return r;
}

Exponent numeric_exponent(const std::string& s, std::vector<std::string>& warnings) {
    if (s == "inf" || s == "infinity") return Exponent::infinity();
    return Exponent::from_value(numeric_rational(s, warnings));
}

// Seed precedence: --seed on the command line, then OPSPACE_SEED, then the config file.
std::optional<std::string> seed_from_argv(int argc, char** argv) {
    for (int i = 1; i < argc; ++i) {
        std::string a = argv[i];
        if (a == "--seed" && i + 1 < argc) return std::string(argv[i + 1]);
        if (a.rfind("--seed=", 0) == 0) return a.substr(7);
    }
    return std::nullopt;
}

std::uint64_t parse_seed(const std::string& s) {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
        throw Error(ErrorCode::invalid_parameter, "seed must be an unsigned 64-bit integer, got '" + s + "'");
    try {
        return std::stoull(s);
    } catch (const std::exception&) {
        throw Error(ErrorCode::invalid_parameter, "seed out of range: '" + s + "'");
    }
}

void print_summary(const Report& rep) {
    std::cout << rep.command() << ": " << rep.passed() << "/" << rep.records().size() << " records pass\n";
    for (const auto& r : rep.records()) {
        std::cout << "  " << (r.pass ? "PASS " : "FAIL ") << r.key << "  " << r.kind << "=" << r.value;
        if (r.oracle) std::cout << "  oracle=" << *r.oracle;
        if (r.relative_gap) std::cout << "  gap=" << *r.relative_gap;
        std::cout << "\n";
    }
}

void write_report(const Report& rep, const std::string& out) {
    if (out.empty()) return;
    std::string text = rep.full().dump(2) + "\n";
    if (out == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(out);
    if (!f) throw Error(ErrorCode::invalid_parameter, "cannot write report to '" + out + "'");
    f << text;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Operator space calculus and verification suites"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config", "", "Key-value config file mirroring the flags");

    std::string seed_text = "20240601";
    int restarts = 32;
    std::optional<double> tol;
    std::string out;
    app.add_option("--seed", seed_text, "Master seed (env OPSPACE_SEED)");
    app.add_option("--restarts", restarts, "Random restarts per estimate")->check(CLI::PositiveNumber);
    app.add_option("--tol", tol, "Override the suite tolerance");
    app.add_option("--out", out, "Write the JSON report here ('-' for stdout)");

    // normalize
    auto* norm = app.add_subcommand("normalize", "Rewrite an expression to canonical form");
    std::string expr_text, level_text = "completely-isometric";
    norm->add_option("expression", expr_text, "Expression, e.g. \"Sp[3/2]{C[inf]}\"")->required();
    norm->add_option("--level", level_text, "completely-isometric | isometric");

    // embed
    auto* embed = app.add_subcommand("embed", "Derive S_p[C] into S_u[S_v]");
    std::string embed_p;
    embed->add_option("--p", embed_p, "Exponent 1 < p < inf")->required();

    // verify
    auto* verify = app.add_subcommand("verify", "Run a verification suite");
    std::string suite;
    std::vector<int> sizes, ns;
    std::optional<int> samples;
    std::vector<std::string> pairs, ps, thetas;
    std::string q_text, set = "L";
    double delta = 0.05;
    int size = 5, degree = 4, width = 2, depth = 6, nesting = 3;
    verify->add_option("suite", suite, "Suite name")->required()->check(CLI::IsMember(opspace::cli::suite_names()));
    verify->add_option("--sizes", sizes, "pair-identity: matrix sizes");
    verify->add_option("--samples", samples, "Random samples per case");
    verify->add_option("--pairs", pairs, "pair-identity: pairs u,v");
    verify->add_option("--n", ns, "Matrix sizes N");
    verify->add_option("--p", ps, "Exponents p");
    verify->add_option("--q", q_text, "Exponent q");
    verify->add_option("--delta", delta, "constants: slack");
    verify->add_option("--theta", thetas, "interp: parameters theta");
    verify->add_option("--size", size, "interp: matrix size");
    verify->add_option("--degree", degree, "riesz: frequency window");
    verify->add_option("--width", width, "umd-growth: inner width");
    verify->add_option("--depth", depth, "umd-growth: martingale depth");
    verify->add_option("--nesting", nesting, "umd-growth: largest nesting level");
    verify->add_option("--set", set, "region: S, L or T");

    // region
    auto* region = app.add_subcommand("region", "Membership of (1/p, 1/q) in S, L or T");
    std::string region_set = "L", region_p, region_q;
    region->add_option("--set", region_set, "S, L or T");
    region->add_option("--p", region_p, "Exponent p")->required();
    region->add_option("--q", region_q, "Exponent q")->required();

    // estimate
    auto* estimate = app.add_subcommand("estimate", "Lower bound on an operator norm on S_p^N");
    opspace::cli::EstimateRequest req;
    std::string est_p = "4";
    bool sample_patterns = false;
    estimate->add_option("--op", req.op, "triangular-upper | triangular-lower | schur | riesz | kp");
    estimate->add_option("--p", est_p, "Exponent 1 < p < inf");
    estimate->add_option("--size", req.size, "Matrix size N");
    estimate->add_option("--signs", req.signs, "schur: sign pattern over {+,-}");
    estimate->add_option("--degree", req.degree, "riesz: frequency window");
    estimate->add_flag("--sample-patterns", sample_patterns, "kp: sample sign patterns instead of enumerating");
    estimate->add_option("--patterns", req.samples, "kp: number of sampled patterns");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        std::uint64_t seed;
        if (auto s = seed_from_argv(argc, argv)) seed = parse_seed(*s);
        else if (const char* env = std::getenv("OPSPACE_SEED")) seed = parse_seed(env);
        else seed = parse_seed(seed_text);

        std::vector<std::string> warnings;
        std::optional<Report> rep;
        if (*norm) {
            auto level = calculus::parse_level(level_text);
            rep = opspace::cli::normalize_command(expr_text, level);
            const auto& d = rep->records().front().details;
            std::cout << d["canonical"].get<std::string>() << "  [" << d["level"].get<std::string>() << "]\n";
            for (const auto& s : d["trace"])
                std::cout << "  " << s["rule"].get<std::string>() << ": " << s["before"].get<std::string>() << "  ->  "
                          << s["after"].get<std::string>() << "    (" << s["citation"].get<std::string>() << ")\n";
        } else if (*embed) {
            rep = opspace::cli::embed_command(symbolic_exponent(embed_p));
            for (const auto& r : rep->records()) {
                std::cout << r.key << ": u = " << r.details["u"].get<std::string>()
                          << ", v = " << r.details["v"].get<std::string>() << "\n";
                for (const auto& s : r.details["trace"])
                    std::cout << "  " << s["rule"].get<std::string>() << ": " << s["after"].get<std::string>()
                              << (s.contains("note") ? "  [" + s["note"].get<std::string>() + "]" : "") << "\n";
            }
        } else if (*region) {
            opspace::cli::SuiteConfig c;
            c.set = region_set;
            c.p = {symbolic_exponent(region_p)};
            c.q = symbolic_exponent(region_q);
            rep = opspace::cli::run_suite("region", c);
            const auto& r = rep->records().front();
            std::cout << "(1/p, 1/q) = (" << r.inputs["point"][0].get<std::string>() << ", "
                      << r.inputs["point"][1].get<std::string>() << ") in " << region_set << ": "
                      << r.details["verdict"].get<std::string>() << "\n";
            if (!r.details["certificate"].is_null()) std::cout << "  certificate " << r.details["certificate"].dump() << "\n";
        } else if (*estimate) {
            req.p = numeric_exponent(est_p, warnings);
            req.enumerate = !sample_patterns;
            rep = opspace::cli::estimate_command(req, seed, restarts);
            print_summary(*rep);
        } else {
            opspace::cli::SuiteConfig c;
            c.seed = seed;
            c.restarts = restarts;
            c.tol = tol;
            c.sizes = sizes;
            c.samples = samples;
            c.n = ns;
            bool exact = suite == "region";
            for (const auto& p : ps) c.p.push_back(exact ? symbolic_exponent(p) : numeric_exponent(p, warnings));
            if (!q_text.empty()) c.q = exact ? symbolic_exponent(q_text) : numeric_exponent(q_text, warnings);
            for (const auto& pr : pairs) {
                auto comma = pr.find(',');
                if (comma == std::string::npos) throw Error(ErrorCode::invalid_parameter, "pair '" + pr + "' is not u,v");
                c.pairs.emplace_back(numeric_exponent(pr.substr(0, comma), warnings),
                                     numeric_exponent(pr.substr(comma + 1), warnings));
            }
            for (const auto& t : thetas) c.thetas.push_back(numeric_rational(t, warnings));
            c.delta = delta;
            c.size = size;
            c.degree = degree;
            c.width = width;
            c.depth = depth;
            c.nesting = nesting;
            c.set = set;
            rep = opspace::cli::run_suite(suite, c);
            print_summary(*rep);
        }
        for (const auto& w : warnings) {
            std::cerr << "warning: " << w << "\n";
            rep->note(w);
        }
        write_report(*rep, out);
        return rep->all_pass() ? 0 : 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code(e.code());
    }
}
