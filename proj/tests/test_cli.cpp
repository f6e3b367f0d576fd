#include "test_util.hpp"

#include <mgf/cli.hpp>

#include <cstdio>
#include <filesystem>

using namespace mgf;
using mgf::test::Fixture;

namespace {

struct CliRun {
    int code;
    std::string out, err;
};

CliRun run(std::vector<std::string> args) {
    args.insert(args.begin(), "mgf");
    std::ostringstream o, e;
    int c = cli_dispatch(args, o, e);
    return {c, o.str(), e.str()};
}

std::string tmp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("mgf_test_" + name)).string();
}

} // namespace

TEST(Grammar, Tau) {
    EXPECT_EQ(parse_tau_parts("i"), std::make_pair(rational(0), rational(1)));
    EXPECT_EQ(parse_tau_parts("2i"), std::make_pair(rational(0), rational(2)));
    EXPECT_EQ(parse_tau_parts("1/3+i"), std::make_pair(rational(1, 3), rational(1)));
    EXPECT_EQ(parse_tau_parts("1+i*3/2"), std::make_pair(rational(1), rational(3, 2)));
    EXPECT_EQ(parse_tau_parts("-0.5 + 2i"), std::make_pair(rational(-1, 2), rational(2)));
    EXPECT_EQ(parse_tau_parts("0.25-0.5i"), std::make_pair(rational(1, 4), rational(-1, 2)));
    EXPECT_THROW(parse_tau_parts("1+2"), error);
    EXPECT_THROW(parse_tau_parts("ii"), error);
    EXPECT_THROW(parse_tau_parts(""), error);
    try {
        parse_tau("1-i");
        FAIL();
    } catch (const error& e) {
        EXPECT_EQ(e.kind(), error_kind::NotUpperHalfPlane);
    }
}

TEST(Grammar, RationalsAndLists) {
    EXPECT_EQ(parse_rational("-1/2"), rational(-1, 2));
    EXPECT_EQ(parse_rational("0.125"), rational(1, 8));
    EXPECT_EQ(parse_rational("1.5/2"), rational(3, 4));
    EXPECT_THROW(parse_rational("1/0"), error);
    EXPECT_THROW(parse_rational("x"), error);
    EXPECT_EQ(parse_int_list("7, 4,2,1,0"), (std::vector<int>{7, 4, 2, 1, 0}));
    EXPECT_EQ(parse_int_list("-3,,5"), (std::vector<int>{-3, 5}));
    EXPECT_THROW(parse_int_list("1,a"), error);
}

TEST(Grammar, RightHandSides) {
    Fixture f(25);
    auto rhs = parse_rhs("86/5*E5 - 4*E2*E3 + 1/10*z5");
    ASSERT_EQ(rhs.size(), 3u);
    EXPECT_EQ(rhs[1].coef, rational(-4));
    EXPECT_EQ(rhs[1].eis, (std::vector<int>{2, 3}));
    complex tau(0, real("1.5"));
    real expect = real(86) / 5 * e_nonholo(5, tau, f.ctx) -
                  4 * e_nonholo(2, tau, f.ctx) * e_nonholo(3, tau, f.ctx) + zeta_value(5, f.ctx) / 10;
    EXPECT_LT(to_double(abs(eval_rhs(rhs, tau, f.ctx) - expect)), 1e-22);
    EXPECT_TRUE(parse_rhs("0").empty());
    EXPECT_EQ(parse_rhs("-6*z3").size(), 1u);
    EXPECT_THROW(parse_rhs("E1"), error);
}

TEST(Grammar, LaurentTables) {
    auto b = load_laurent_table(std::string(MGF_DATA_DIR) + "/g511_b.txt");
    auto d = load_laurent_table(std::string(MGF_DATA_DIR) + "/g511_d.txt");
    EXPECT_EQ(d.at(7), ZetaExpr(rational(62, 10945935)));
    EXPECT_EQ(d.at(2), ZetaExpr::zeta(5) * rational(119, 324));
    EXPECT_EQ(b.size(), 14u);
    EXPECT_EQ(d.size(), 11u);
    EXPECT_THROW(load_laurent_table("/nonexistent/table.txt"), error);
}

TEST(Dispatch, EvaluatesAndFormats) {
    CliRun r = run({"eisenstein", "--k", "4", "--tau", "i", "--digits", "20"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("command: eisenstein"), std::string::npos);
    EXPECT_NE(r.out.find("value: 3.151212002153897538"), std::string::npos) << r.out;
    CliRun d = run({"eval-d", "--graph", "1-2:2", "--tau", "i", "--digits", "15", "--method", "fourier"});
    ASSERT_EQ(d.code, 0) << d.err;
    EXPECT_NE(d.out.find("value: 6.10643729451479"), std::string::npos) << d.out;
    CliRun g = run({"genus0-check", "--order", "6", "--digits", "20"});
    ASSERT_EQ(g.code, 0) << g.err;
    EXPECT_NE(g.out.find("exact_equal: true"), std::string::npos);
}

TEST(Dispatch, UsageErrorsExitTwo) {
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"no-such-command"}).code, 2);
    EXPECT_EQ(run({"eval-d", "--graph", "1-1:2"}).code, 2);
    EXPECT_EQ(run({"eval-d", "--graph", "1-2:2", "--tau", "-i"}).code, 2);
    EXPECT_EQ(run({"eval-d", "--graph", "1-2:2", "--tau", "1+2"}).code, 2);
    EXPECT_EQ(run({"eval-d", "--tau", "i"}).code, 2);  // graph required
    EXPECT_EQ(run({"iterated-eis", "--tau", "i"}).code, 2);
    EXPECT_EQ(run({"eisenstein", "--digits", "3"}).code, 2);
    EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Dispatch, ComputationErrorsExitOne) {
    CliRun r = run({"eval-d", "--graph", "1-2,1-3,1-4,2-3,2-4,3-4", "--tau", "i", "--digits", "10"});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("error: Unsupported"), std::string::npos) << r.err;
    CliRun w = run({"iterated-eis", "--word", "4,2", "--tau", "i"});
    EXPECT_EQ(w.code, 1);
    EXPECT_NE(w.err.find("BadWord"), std::string::npos);
    CliRun k = run({"eisenstein", "--k", "3", "--tau", "i"});
    EXPECT_EQ(k.code, 1);
    EXPECT_NE(k.err.find("BadWeight"), std::string::npos);
}

TEST(Manifest, WriteAndReplay) {
    std::string path = tmp_path("manifest.json");
    CliRun r = run({"propagator", "--kind", "open", "--tau", "2i", "--x1", "0.3", "--digits", "20", "--manifest", path});
    ASSERT_EQ(r.code, 0) << r.err;
    std::ifstream f(path);
    nlohmann::json m;
    f >> m;
    EXPECT_EQ(m.at("command"), "propagator");
    EXPECT_EQ(m.at("output").get<std::string>(), r.out);
    EXPECT_EQ(m.at("context").at("digits"), 20);
    EXPECT_EQ(m.at("version"), library_version());
    for (const auto& a : m.at("argv")) EXPECT_NE(a.get<std::string>(), "--manifest");
    CliRun again = run({"--replay", path});
    EXPECT_EQ(again.code, 0);
    EXPECT_EQ(again.out, "replay: identical\n");

    // a tampered manifest no longer replays identically
    m["output"] = "value: 0\n";
    std::ofstream(path) << m.dump();
    CliRun bad = run({"--replay", path});
    EXPECT_EQ(bad.code, 1);
    EXPECT_EQ(bad.out.rfind("replay: differs", 0), 0u);
    std::remove(path.c_str());
    EXPECT_EQ(run({"--replay", "/nonexistent/m.json"}).code, 2);
}

TEST(Manifest, DeterministicOutput) {
    std::vector<std::string> args{"laplace-check", "--graph", "1-2:2", "--tau", "2i", "--lambda", "2",
                                  "--digits", "12"};
    CliRun a = run(args), b = run(args);
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(a.out, b.out);
}
