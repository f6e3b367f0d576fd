#ifndef MGF_CLI_HPP
#define MGF_CLI_HPP

// Command-line front end.  cli_dispatch() parses argv, runs one operation and
// writes a Report document; tools/mgf.cpp is a thin main() around it.  Exit
// codes: 0 success, 1 computation error, 2 usage error.

#include "report.hpp"
#include "sv_maps.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <fstream>
#include <iostream>

namespace mgf {

inline const char* library_version() { return "1.0.0"; }

// ---------------------------------------------------------------------------
// Input grammars

// "3", "-1/2", "0.25", "1.5/2"
inline rational parse_rational(const std::string& src) {
    auto dec = [&](const std::string& s) {
        if (s.empty()) throw error(error_kind::ParseError, "empty number in '" + src + "'");
        size_t i = 0;
        bool neg = false;
        if (s[i] == '+' || s[i] == '-') neg = s[i++] == '-';
        bigint num = 0, den = 1;
        bool any = false, dot = false;
        for (; i < s.size(); ++i) {
            char c = s[i];
            if (c == '.' && !dot) {
                dot = true;
                continue;
            }
            if (!std::isdigit(static_cast<unsigned char>(c)))
                throw error(error_kind::ParseError, "bad number '" + src + "'");
            num = num * 10 + (c - '0');
            if (dot) den *= 10;
            any = true;
        }
        if (!any) throw error(error_kind::ParseError, "bad number '" + src + "'");
        rational r(num, den);
        return neg ? rational(-r) : r;
    };
    auto slash = src.find('/');
    if (slash == std::string::npos) return dec(src);
    rational d = dec(src.substr(slash + 1));
    if (d == 0) throw error(error_kind::ParseError, "zero denominator in '" + src + "'");
    return dec(src.substr(0, slash)) / d;
}

// tau grammar: a+bi with rational or decimal parts, plus "i", "2i", "1/3+i",
// "1+i*3/2", "-0.5+2i".  Returns exact real and imaginary parts.
inline std::pair<rational, rational> parse_tau_parts(const std::string& src) {
    std::string s;
    for (char c : src)
        if (!std::isspace(static_cast<unsigned char>(c)) && c != '*') s += c;
    if (s.empty()) throw error(error_kind::ParseError, "empty tau");
    size_t ipos = s.find('i');
    if (ipos == std::string::npos || s.find('i', ipos + 1) != std::string::npos)
        throw error(error_kind::ParseError, "tau '" + src + "' must contain exactly one 'i'");
    // the imaginary term starts at the last sign before the 'i' (not at 0)
    size_t start = 0;
    for (size_t k = ipos; k-- > 0;)
        if (s[k] == '+' || s[k] == '-') {
            start = k;
            break;
        }
    std::string re = s.substr(0, start);
    std::string im = s.substr(start);
    if (!re.empty() && re.back() == '/')
        throw error(error_kind::ParseError, "bad tau '" + src + "'");
    std::string coef = im;
    coef.erase(coef.find('i'), 1);
    rational b;
    if (coef.empty() || coef == "+")
        b = 1;
    else if (coef == "-")
        b = -1;
    else
        b = parse_rational(coef);
    rational a = re.empty() ? rational(0) : parse_rational(re);
    return {a, b};
}

inline complex parse_tau(const std::string& s) {
    auto [a, b] = parse_tau_parts(s);
    complex t(from_rational<real>(a), from_rational<real>(b));
    if (!(t.imag() > 0)) throw error(error_kind::NotUpperHalfPlane, "tau '" + s + "' is not in the upper half plane");
    return t;
}

// Right-hand sides for laplace-check: zeta products times products of
// non-holomorphic Eisenstein series, e.g. "86/5*E5 - 4*E2*E3 + 1/10*z5".
struct RhsTerm {
    rational coef = 1;
    ZetaExpr zetas = ZetaExpr(1);
    std::vector<int> eis;
};

inline std::vector<RhsTerm> parse_rhs(const std::string& src) {
    std::string s;
    for (char c : src)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    std::vector<RhsTerm> out;
    if (s.empty() || s == "0") return out;
    size_t i = 0;
    while (i < s.size()) {
        size_t j = i + 1;
        int depth = 0;
        while (j < s.size()) {
            if (s[j] == '(') ++depth;
            if (s[j] == ')') --depth;
            if (depth == 0 && (s[j] == '+' || s[j] == '-') && s[j - 1] != '*') break;
            ++j;
        }
        std::string term = s.substr(i, j - i);
        i = j;
        RhsTerm t;
        if (term[0] == '+' || term[0] == '-') {
            if (term[0] == '-') t.coef = -1;
            term.erase(0, 1);
        }
        std::vector<std::string> factors;
        // split on '*' outside parentheses
        std::string cur;
        depth = 0;
        for (char c : term) {
            if (c == '(') ++depth;
            if (c == ')') --depth;
            if (c == '*' && depth == 0) {
                factors.push_back(cur);
                cur.clear();
            } else {
                cur += c;
            }
        }
        factors.push_back(cur);
        for (const std::string& fac : factors) {
            if (fac.empty()) throw error(error_kind::ParseError, "empty factor in '" + src + "'");
            if (fac[0] == 'E') {
                int n = std::stoi(fac.substr(1));
                if (n < 2) throw error(error_kind::BadOrder, "E" + std::to_string(n));
                t.eis.push_back(n);
            } else if (fac[0] == 'z') {
                t.zetas = t.zetas * SvTable::parse_combo(fac);
            } else {
                t.coef *= parse_rational(fac);
            }
        }
        out.push_back(t);
    }
    return out;
}

inline real eval_rhs(const std::vector<RhsTerm>& rhs, const complex& tau, const PrecisionContext& ctx) {
    real acc = 0;
    for (const RhsTerm& t : rhs) {
        real v = from_rational<real>(t.coef) * expr_eval(t.zetas, ctx);
        for (int n : t.eis) v *= e_nonholo<real>(n, tau, ctx);
        acc += v;
    }
    return acc;
}

// "k : combo" lines, as in the reference data files.
inline std::map<int, ZetaExpr> load_laurent_table(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw error(error_kind::ParseError, "cannot open " + path);
    std::map<int, ZetaExpr> out;
    std::string line;
    int lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        auto colon = line.find(':');
        if (colon == std::string::npos)
            throw error(error_kind::ParseError, path + ":" + std::to_string(lineno) + ": missing ':'");
        out[std::stoi(line.substr(0, colon))] = SvTable::parse_combo(line.substr(colon + 1), lineno);
    }
    return out;
}

inline std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> v;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.find_first_not_of(" \t") == std::string::npos) continue;
        try {
            v.push_back(std::stoi(tok));
        } catch (const std::exception&) {
            throw error(error_kind::ParseError, "bad integer '" + tok + "'");
        }
    }
    return v;
}

// ---------------------------------------------------------------------------
// Dispatch

namespace detail {

struct CliArgs {
    std::string graph, tau = "i", method = "torus", kind = "closed", point = "1/3,1/4", word, rhs = "0";
    std::string identity, exponents, candidates, sv_table, manifest, replay;
    std::string x1 = "0.3", x2 = "0", s1 = "-0.05", s2 = "-0.07";
    int digits = 0, cutoff = 0, qorder = 0, samples = 0, threads = 1, order = 10, k = 4;
    double ymin = 0, ymax = 0, tol = 1e-6;
    std::string lambda = "0", h = "0.001";
};

inline std::string matched_str(const real& v, int weight, const PrecisionContext& ctx) {
    BasisMatch bm = basis_match(v, weight_basis(weight), ctx, pow(real(10), -(ctx.digits / 2)));
    return bm.matched ? bm.expr.str() : "-";
}

inline Report run_command(const std::string& cmd, const CliArgs& a, PrecisionContext ctx) {
    Report r;
    r.set("command", cmd);
    r.set("version", library_version());
    r.set("digits", ctx.digits);
    const int pd = std::min(ctx.digits, 40);
    auto need_graph = [&]() {
        if (a.graph.empty()) throw CLI::RequiredError("--graph");
        MultiGraph g = MultiGraph::parse(a.graph);
        r.set("graph", g.str());
        r.set("weight", g.weight());
        return g;
    };
    auto need_tau = [&]() {
        complex t = parse_tau(a.tau);
        r.set("tau", a.tau);
        return t;
    };

    if (cmd == "eval-d") {
        MultiGraph g = need_graph();
        complex tau = need_tau();
        r.set("method", a.method);
        if (a.method == "lattice") {
            LatticeSumResult lr = d_lattice_sum_report(g, {to_double(tau.real()), to_double(tau.imag())}, ctx);
            r.set("cutoff", ctx.cutoff);
            r.set("value", fmt(real(lr.value), 15));
            r.set("error", fmt(real(lr.error), 3));
        } else if (a.method == "torus") {
            r.set("value", fmt(d_graph<real>(g, tau, ctx), pd));
        } else if (a.method == "fourier") {
            // closed form, available for cycle graphs (including the 2-banana)
            MultiGraph c = cycle_graph(g.n());
            if (!(c == g)) throw error(error_kind::Unsupported, "fourier method needs an n-cycle graph");
            r.set("value", fmt(e_nonholo<real>(g.n() == 2 ? 2 : g.n(), tau, ctx), pd));
        } else {
            throw CLI::ValidationError("--method", "expected torus, lattice or fourier");
        }
    } else if (cmd == "eval-a" || cmd == "eval-b") {
        MultiGraph g = need_graph();
        complex tau = need_tau();
        complex v = cmd == "eval-a" ? a_graph<real>(g, tau, ctx) : b_graph<real>(g, tau, ctx);
        r.set("value", fmt(v, pd));
    } else if (cmd == "laurent-d" || cmd == "laurent-b") {
        MultiGraph g = need_graph();
        LaurentFitReport f = cmd == "laurent-d" ? laurent_fit_d(g, ctx) : laurent_fit_b(g, ctx);
        add_fit(r, f, std::min(pd, 25));
        auto& t = r.table("matched", {"k", "constant"});
        for (auto it = f.coefficients.terms().rbegin(); it != f.coefficients.terms().rend(); ++it)
            t.rows.push_back({std::to_string(it->first), matched_str(it->second, g.weight() - it->first, ctx)});
    } else if (cmd == "esv-check") {
        MultiGraph g = need_graph();
        EsvOptions opt;
        opt.tol = a.tol;
        if (!a.exponents.empty()) opt.exponents = parse_int_list(a.exponents);
        if (!a.candidates.empty()) opt.candidates = load_laurent_table(a.candidates);
        SvTable table = a.sv_table.empty() ? SvTable{} : SvTable::load(a.sv_table);
        EsvReport e = esv_check(g, ctx, table, opt);
        r.set("tolerance", fmt(real(e.tol), 2));
        r.set("conjecture_consistent", e.all_agree);
        r.set("leading_coefficient", e.leading_ok);
        r.set("trailing_coefficient", e.trailing_ok);
        std::string sk;
        for (int k : e.skipped) sk += (sk.empty() ? "" : ",") + std::to_string(k);
        r.set("skipped", sk.empty() ? "none" : sk);
        auto& t = r.table("esv", {"k", "sv(b_k)", "(-2)^-k d_k", "diff", "status", "note"});
        for (const EsvRow& row : e.rows) {
            std::string st = row.skipped ? "skip" : (row.agree ? "agree" : "DIFFER");
            t.rows.push_back({std::to_string(row.k), row.skipped ? "-" : fmt(row.sv_b, 15), fmt(row.d_scaled, 15),
                              row.skipped ? "-" : fmt(row.diff, 3), st,
                              row.note + (row.b_matched.is_zero() ? "" : ": " + row.b_matched.str())});
        }
    } else if (cmd == "eisenstein") {
        complex tau = need_tau();
        r.set("k", a.k);
        r.set("value", fmt(eisenstein_G<real>(a.k, tau, ctx), pd));
    } else if (cmd == "iterated-eis") {
        complex tau = need_tau();
        EisWord w{parse_int_list(a.word)};
        r.set("word", w.str());
        r.set("value", fmt(iterated_eisenstein<real>(w, tau, ctx), pd));
    } else if (cmd == "propagator") {
        complex tau = need_tau();
        r.set("kind", a.kind);
        if (a.kind == "closed" || a.kind == "closed-fourier") {
            auto parts = a.point;
            auto comma = parts.find(',');
            if (comma == std::string::npos) throw CLI::ValidationError("--point", "expected s,r");
            real s = from_rational<real>(parse_rational(parts.substr(0, comma)));
            real rr = from_rational<real>(parse_rational(parts.substr(comma + 1)));
            TorusPoint<real> z(s, rr), o(real(0), real(0));
            r.set("point", a.point);
            real v = a.kind == "closed" ? closed_green_theta(z, o, tau, ctx) : closed_green_fourier(z, tau, ctx);
            r.set("value", fmt(v, pd));
        } else if (a.kind == "open") {
            real x1 = from_rational<real>(parse_rational(a.x1)), x2 = from_rational<real>(parse_rational(a.x2));
            r.set("x1", a.x1);
            r.set("x2", a.x2);
            r.set("value", fmt(open_green(x1, x2, tau, ctx), pd));
        } else {
            throw CLI::ValidationError("--kind", "expected closed, closed-fourier or open");
        }
    } else if (cmd == "laplace-check") {
        MultiGraph g = need_graph();
        complex tau = need_tau();
        real lam = from_rational<real>(parse_rational(a.lambda));
        real h = from_rational<real>(parse_rational(a.h));
        auto rhs = parse_rhs(a.rhs);
        r.set("lambda", a.lambda);
        r.set("h", a.h);
        r.set("rhs", a.rhs);
        std::function<real(const complex&)> f = [&](const complex& t) { return eval_rhs(rhs, t, ctx); };
        r.set("residual", fmt(laplace_check<real>(g, tau, h, lam, f, ctx), 6));
    } else if (cmd == "genus0-check") {
        real s1 = from_rational<real>(parse_rational(a.s1)), s2 = from_rational<real>(parse_rational(a.s2));
        Genus0Report gr = genus0_sv_check(a.order, ctx, s1, s2);
        r.set("order", gr.order);
        r.set("exact_equal", gr.exact_equal);
        r.set("mismatched", gr.mismatched);
        r.set("s1", a.s1);
        r.set("s2", a.s2);
        r.set("series_value", fmt(gr.series_value, pd));
        r.set("beta_value", fmt(gr.beta_value, pd));
        r.set("beta_diff", fmt(gr.beta_diff, 3));
    } else {
        throw CLI::ValidationError("command", "unknown subcommand " + cmd);
    }
    return r;
}

inline const std::vector<std::string>& subcommands() {
    static const std::vector<std::string> v{"eval-d",     "eval-a",       "eval-b",     "laurent-d",
                                            "laurent-b",  "esv-check",    "eisenstein", "iterated-eis",
                                            "propagator", "laplace-check", "genus0-check"};
    return v;
}

} // namespace detail

// Runs one command.  Returns the exit code; the report goes to `out`, error
// messages to `err`.
inline int cli_dispatch(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
    using detail::CliArgs;
    CliArgs a;
    CLI::App app{"modular and holomorphic graph functions"};
    app.set_help_all_flag("--help-all");
    app.require_subcommand(0, 1);
    app.add_option("--replay", a.replay, "re-run a manifest and compare outputs");

    std::map<std::string, CLI::App*> subs;
    for (const std::string& name : detail::subcommands()) {
        CLI::App* s = app.add_subcommand(name);
        s->add_option("--graph", a.graph, "edge list, e.g. \"1-2:5, 2-3:1, 1-3:1\"");
        s->add_option("--tau", a.tau, "a+bi, e.g. i, 2i, 1/3+i");
        s->add_option("--digits", a.digits, "decimal digits (default: MGF_DIGITS or 30)");
        s->add_option("--cutoff", a.cutoff, "lattice box half-width");
        s->add_option("--qorder", a.qorder, "q-series truncation order");
        s->add_option("--ymin", a.ymin, "lower end of the fit window");
        s->add_option("--ymax", a.ymax, "upper end of the fit window");
        s->add_option("--samples", a.samples, "number of fit samples");
        s->add_option("--threads", a.threads, "worker threads (evaluation is sequential)");
        s->add_option("--manifest", a.manifest, "write a run manifest (JSON)");
        subs[name] = s;
    }
    subs["eval-d"]->add_option("--method", a.method, "torus, lattice or fourier");
    subs["esv-check"]->add_option("--tol", a.tol, "relative agreement per exponent");
    subs["esv-check"]->add_option("--exponents", a.exponents, "comma-separated exponents to check");
    subs["esv-check"]->add_option("--candidates", a.candidates, "file of candidate b_k values");
    subs["esv-check"]->add_option("--sv-table", a.sv_table, "depth >= 2 sv rule file");
    subs["eisenstein"]->add_option("--k", a.k, "weight");
    subs["iterated-eis"]->add_option("--word", a.word, "e.g. 4,0")->required();
    subs["propagator"]->add_option("--kind", a.kind, "closed, closed-fourier or open");
    subs["propagator"]->add_option("--point", a.point, "s,r with z = s + r tau");
    subs["propagator"]->add_option("--x1", a.x1);
    subs["propagator"]->add_option("--x2", a.x2);
    subs["laplace-check"]->add_option("--lambda", a.lambda);
    subs["laplace-check"]->add_option("--step", a.h, "finite-difference step h");
    subs["laplace-check"]->add_option("--rhs", a.rhs, "e.g. \"86/5*E5 - 4*E2*E3 + 1/10*z5\"");
    subs["genus0-check"]->add_option("--order", a.order);
    subs["genus0-check"]->add_option("--s1", a.s1);
    subs["genus0-check"]->add_option("--s2", a.s2);

    std::vector<std::string> args(argv.rbegin(), argv.rend());
    if (!args.empty()) args.pop_back();  // program name
    try {
        app.parse(args);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    }

    if (!a.replay.empty()) {
        std::ifstream f(a.replay);
        if (!f) {
            err << "usage error: cannot open manifest " << a.replay << "\n";
            return 2;
        }
        nlohmann::json m;
        try {
            f >> m;
        } catch (const std::exception& e) {
            err << "usage error: bad manifest: " << e.what() << "\n";
            return 2;
        }
        std::vector<std::string> again{"mgf"};
        for (const auto& s : m.at("argv")) again.push_back(s.get<std::string>());
        std::ostringstream o2, e2;
        int code = cli_dispatch(again, o2, e2);
        bool same = code == m.at("exit_code").get<int>() && o2.str() == m.at("output").get<std::string>();
        out << "replay: " << (same ? "identical" : "differs") << "\n";
        if (!same) out << o2.str() << e2.str();
        return same ? 0 : 1;
    }

    std::string cmd;
    for (const auto& [name, s] : subs)
        if (s->parsed()) cmd = name;
    if (cmd.empty()) {
        err << "usage error: a subcommand is required\n" << app.help();
        return 2;
    }

    PrecisionContext ctx = PrecisionContext::from_env();
    if (a.digits) ctx.digits = a.digits;
    if (a.cutoff) ctx.cutoff = a.cutoff;
    ctx.qorder = a.qorder;
    ctx.ymin = a.ymin;
    ctx.ymax = a.ymax;
    ctx.samples = a.samples;
    ctx.threads = a.threads;
    if (ctx.digits < 5 || ctx.digits > 2000) {
        err << "usage error: --digits must be in [5, 2000]\n";
        return 2;
    }

    // malformed --graph / --tau text is a usage problem, not a computation failure
    try {
        if (!a.graph.empty()) MultiGraph::parse(a.graph);
        parse_tau(a.tau);
    } catch (const error& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    }

    auto t0 = std::chrono::steady_clock::now();
    int code = 0;
    std::string text;
    try {
        precision_guard pg(ctx.digits + ctx.guard + 5);
        Report r = detail::run_command(cmd, a, ctx);
        text = r.str();
        out << text;
    } catch (const CLI::Error& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const error& e) {
        err << "error: " << e.what() << "\n";
        code = 1;
    }
    double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    if (!a.manifest.empty()) {
        nlohmann::json m;
        m["command"] = cmd;
        std::vector<std::string> kept;
        for (size_t i = 1; i < argv.size(); ++i) {
            if (argv[i] == "--manifest") {
                ++i;
                continue;
            }
            if (argv[i].rfind("--manifest=", 0) == 0) continue;
            kept.push_back(argv[i]);
        }
        m["argv"] = kept;
        m["graph"] = a.graph;
        m["tau"] = a.tau;
        m["context"] = {{"digits", ctx.digits}, {"cutoff", ctx.cutoff}, {"qorder", ctx.qorder},
                        {"guard", ctx.guard},   {"samples", ctx.samples}, {"threads", ctx.threads}};
        m["window"] = {{"ymin", ctx.ymin}, {"ymax", ctx.ymax}};
        m["version"] = library_version();
        m["wall_clock_seconds"] = wall;
        m["exit_code"] = code;
        m["output"] = text;
        std::ofstream mf(a.manifest);
        if (!mf) {
            err << "error: cannot write manifest " << a.manifest << "\n";
            return 1;
        }
        mf << m.dump(2) << "\n";
    }
    return code;
}

inline int cli_dispatch(int argc, char** argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    return cli_dispatch(std::vector<std::string>(argv, argv + argc), out, err);
}

} // namespace mgf

#endif // MGF_CLI_HPP
