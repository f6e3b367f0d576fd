#include "test_util.hpp"

using namespace mgf;
using mgf::test::Fixture;

namespace {
double d(const real& x) { return to_double(x); }
} // namespace

TEST(ExactLaurent, TwoBanana) {
    ZetaLaurent b = b_banana_q0(2);
    EXPECT_EQ(b.variable(), "T");
    EXPECT_EQ(b.get(2), ZetaExpr(rational(1, 180)));
    EXPECT_TRUE(b.get(1).is_zero());
    EXPECT_EQ(b.get(0), ZetaExpr::zeta(2) * rational(1, 3));
    EXPECT_EQ(b.get(-1), -ZetaExpr::zeta(3));
    // zeta(2)^2 = 5/2 zeta(4), so the T^-2 coefficient is -3/2 zeta(4)
    Fixture f(30);
    EXPECT_LT(d(abs(expr_eval(b.get(-2), f.ctx) + real(3) / 2 * zeta_value(4, f.ctx))), 1e-28);
    EXPECT_EQ(b.min_exponent(), -2);
    EXPECT_EQ(b.max_exponent(), 2);
}

TEST(ExactLaurent, OneBananaVanishesAndBounds) {
    EXPECT_TRUE(b_banana_q0(1).terms().empty());
    for (int l = 2; l <= 5; ++l) {
        ZetaLaurent b = b_banana_q0(l);
        EXPECT_GE(b.min_exponent(), -l) << l;
        EXPECT_LE(b.max_exponent(), l) << l;
        // every coefficient of T^k is homogeneous of weight l - k
        for (const auto& [k, e] : b.terms()) EXPECT_EQ(e.weight_part(l - k), e) << l << " " << k;
    }
    EXPECT_THROW(b_banana_q0(0), error);
}

TEST(AGraph, QExpansionOfTwoBanana) {
    Fixture f(20);
    complex a = a_graph<real>(banana_graph(2), complex(0, 3), f.ctx);
    real q = exp(-6 * pi<real>());
    EXPECT_LT(d(abs(a.real() - zeta_value(2, f.ctx) / 2 - 2 * q - real(9) / 2 * q * q)), 1e-18);
    EXPECT_EQ(a.imag(), 0);
}

TEST(AGraph, SingleEdgeAndBridge) {
    Fixture f(20);
    // int_0^1 P = 0 for the single edge, and products of it vanish
    EXPECT_LT(d(abs(a_graph<real>(banana_graph(1), complex(0, 1), f.ctx))), 1e-18);
    EXPECT_LT(d(abs(a_graph<real>(MultiGraph::parse("1-2:2, 2-3:1"), complex(real("0.1"), real(1)), f.ctx))), 1e-15);
    EXPECT_THROW(a_graph<real>(MultiGraph::parse("1-2,2-3,3-4,1-4,1-3"), complex(0, 1), f.ctx), error);
}

TEST(BGraph, QTermOfTwoBanana) {
    Fixture f(20);
    complex tau(0, 4);
    real T = -4 * pi<real>(), q = exp(-8 * pi<real>());
    complex b = b_graph<real>(banana_graph(2), tau, f.ctx);
    real lau = numeric_laurent(b_banana_q0(2), f.ctx).eval(T);
    EXPECT_LT(d(abs(b.real() - lau - 2 * (1 - 1 / T) * q)), 1e-18);
}

TEST(BGraph, IsAAtMinusOneOverTau) {
    Fixture f(20);
    complex t(real("0.2"), real("1.1"));
    complex b = b_graph<real>(banana_graph(3), t, f.ctx);
    complex a = a_graph<real>(banana_graph(3), complex(-1) / t, f.ctx);
    EXPECT_LT(d(abs(b - a)), 1e-17);
    complex b2 = b_graph<real>(MultiGraph::parse("1-2:2, 2-3, 1-3"), complex(0, 1), f.ctx);
    complex a2 = a_graph<real>(MultiGraph::parse("1-2:2, 2-3, 1-3"), complex(0, 1), f.ctx);
    EXPECT_LT(d(abs(b2 - a2)), 1e-17);
}

TEST(BGraph, LaurentFitMatchesExact) {
    Fixture f(20);
    LaurentFitReport r = laurent_fit_b(banana_graph(2), f.ctx);
    EXPECT_EQ(r.coefficients.variable(), "T");
    LaurentPoly<real> exact = numeric_laurent(b_banana_q0(2), f.ctx);
    for (int k = -2; k <= 2; ++k)
        EXPECT_NEAR(d(r.coefficients.get(k)), d(exact.get(k)), 1e-10) << k;
}

TEST(BGraph, FitMatchesExactForThreeBanana) {
    Fixture f(20);
    LaurentFitReport r = laurent_fit_b(banana_graph(3), f.ctx);
    LaurentPoly<real> exact = numeric_laurent(b_banana_q0(3), f.ctx);
    for (int k = -3; k <= 3; ++k)
        EXPECT_NEAR(d(r.coefficients.get(k)), d(exact.get(k)), 1e-8 * std::max(1.0, std::abs(d(exact.get(k))))) << k;
}

TEST(IteratedEisensteinLink, TwoBananaSignCorrected) {
    // A[2-banana] = zeta(2)/2 - 6 E(4,0) - (pi i tau)^2 / 60 holds with this sign
    Fixture f(20);
    for (int t : {2, 3}) {
        complex tau(0, t);
        complex A = a_graph<real>(banana_graph(2), tau, f.ctx);
        complex T = complex(0, pi<real>()) * tau;
        complex E = iterated_eisenstein<real>(EisWord{{4, 0}}, tau, f.ctx);
        EXPECT_LT(d(abs(A + T * T / real(60) - zeta_value(2, f.ctx) / 2 + real(6) * E)), 1e-18) << t;
    }
}
