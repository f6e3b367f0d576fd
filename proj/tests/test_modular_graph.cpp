#include "test_util.hpp"

using namespace mgf;
using mgf::test::Fixture;

namespace {
double d(const real& x) { return to_double(x); }
const complex tau_a(real("0.2"), real("1.1"));
} // namespace

TEST(EisensteinNonHolo, KnownValueAndLatticeSum) {
    Fixture f(25);
    EXPECT_LT(d(abs(e_nonholo(2, complex(0, 1), f.ctx) - real("0.610643729451479343370"))), 1e-20);
    // direct double-precision lattice sum with a large cutoff
    std::complex<double> t(0.2, 1.1);
    for (int n : {3, 4}) {
        double s = 0;
        const int M = 400;
        for (int a = -M; a <= M; ++a)
            for (int b = -M; b <= M; ++b)
                if (a || b) s += std::pow(std::norm(double(a) + double(b) * t), -n);
        s *= std::pow(1.1 / M_PI, n);
        EXPECT_NEAR(d(e_nonholo(n, tau_a, f.ctx)), s, 1e-9) << n;
    }
}

TEST(EisensteinNonHolo, ModularInvariance) {
    Fixture f(25);
    for (int n : {2, 3, 5}) {
        real a = e_nonholo(n, tau_a, f.ctx);
        EXPECT_LT(d(abs(a - e_nonholo(n, complex(-1) / tau_a, f.ctx))), 1e-20);
        EXPECT_LT(d(abs(a - e_nonholo(n, tau_a + real(1), f.ctx))), 1e-20);
    }
    EXPECT_THROW(e_nonholo(1, tau_a, f.ctx), error);
}

TEST(EisensteinNonHolo, LaplaceEigenfunction) {
    Fixture f(30);
    for (int n : {2, 3, 4}) {
        real res = laplace_residual<real>([&](const complex& t) { return e_nonholo(n, t, f.ctx); }, complex(0, 2),
                                          real("1e-3"), real(n * (n - 1)), [](const complex&) { return real(0); });
        EXPECT_LT(d(res), 1e-4) << n;
    }
    EXPECT_THROW(laplace_residual<real>([&](const complex& t) { return e_nonholo(2, t, f.ctx); }, complex(0, 1),
                                        real(1), real(2), [](const complex&) { return real(0); }),
                 error);
}

TEST(FundamentalDomain, Reduction) {
    Fixture f(20);
    complex t = reduce_to_fundamental(complex(real("3.4"), real("0.05")));
    EXPECT_GE(d(abs(t)), 1.0 - 1e-15);
    EXPECT_LE(d(abs(t.real())), 0.5 + 1e-15);
    EXPECT_LT(d(abs(e_nonholo(2, t, f.ctx) - e_nonholo(2, complex(real("3.4"), real("0.05")), f.ctx))), 1e-14);
}

// Torus integrals at a generic tau are the slow path; 12 digits keep these short.
TEST(TorusIntegral, BananasAndCycles) {
    Fixture f(12);
    real e2 = e_nonholo(2, tau_a, f.ctx), e3 = e_nonholo(3, tau_a, f.ctx);
    EXPECT_LT(d(abs(d_torus_integral(banana_graph(2), tau_a, f.ctx) - e2)), 1e-10);
    EXPECT_LT(d(abs(d_torus_integral(cycle_graph(3), tau_a, f.ctx) - e3)), 1e-10);
    EXPECT_LT(d(abs(d_torus_integral(cycle_graph(4), tau_a, f.ctx) - e_nonholo(4, tau_a, f.ctx))), 1e-10);
    // the first non-trivial identity
    real z3 = zeta_value(3, f.ctx);
    EXPECT_LT(d(abs(d_torus_integral(banana_graph(3), tau_a, f.ctx) - e3 - z3)), 1e-9);
}

TEST(TorusIntegral, ReducibleGraphs) {
    Fixture f(12);
    EXPECT_EQ(d_torus_integral(MultiGraph::parse("1-2:2, 2-3:1"), tau_a, f.ctx), 0);
    real e2 = e_nonholo(2, tau_a, f.ctx);
    real bow = d_torus_integral(MultiGraph::parse("1-2:2, 2-3:2"), tau_a, f.ctx);
    EXPECT_LT(d(abs(bow - e2 * e2)), 1e-10);
    try {
        d_torus_integral(MultiGraph::parse("1-2,1-3,1-4,2-3,2-4,3-4"), tau_a, f.ctx);
        FAIL();
    } catch (const error& e) {
        EXPECT_EQ(e.kind(), error_kind::Unsupported);
    }
}

TEST(TorusIntegral, ModularInvariance) {
    Fixture f(12);
    MultiGraph g = MultiGraph::parse("1-2:2, 2-3:1, 1-3:1");
    complex t(real("0.45"), real("0.95"));
    real a = d_torus_integral(g, t, f.ctx);
    // tau is already in the fundamental domain, its images are not
    EXPECT_LT(d(abs(a - d_torus_integral(g, complex(-1) / t, f.ctx))), 1e-10);
    EXPECT_LT(d(abs(a - d_torus_integral(g, t - real(1), f.ctx))), 1e-10);
}

TEST(LatticeSum, AgreesWithinReportedError) {
    Fixture f(15);
    f.ctx.cutoff = 128;
    for (int n : {2, 3}) {
        LatticeSumResult r = d_lattice_sum_report(cycle_graph(n), std::complex<double>(0, 1), f.ctx);
        double exact = d(e_nonholo(n, complex(0, 1), f.ctx));
        EXPECT_LT(r.error, 1e-5);
        EXPECT_LE(std::abs(r.value - exact), std::max(r.error, 1e-12)) << n;
    }
    EXPECT_EQ(d_lattice_sum_report(MultiGraph::parse("1-2:2, 2-3"), std::complex<double>(0, 1), f.ctx).value, 0.0);
}

TEST(LaurentFit, TwoBanana) {
    Fixture f(20);
    LaurentFitReport r = laurent_fit_d(banana_graph(2), f.ctx);
    EXPECT_EQ(r.kmin, -1);
    EXPECT_EQ(r.kmax, 2);
    EXPECT_NEAR(d(r.coefficients.get(2)), 1.0 / 45, 1e-10);
    EXPECT_NEAR(d(r.coefficients.get(-1)), d(zeta_value(3, f.ctx)), 1e-10);
    EXPECT_NEAR(d(r.coefficients.get(1)), 0, 1e-10);
    EXPECT_NEAR(d(r.coefficients.get(0)), 0, 1e-10);
}

TEST(LaurentFit, Windows) {
    auto [lo, hi] = default_d_window(3, 20);
    EXPECT_GT(lo, 20.0);
    EXPECT_GT(hi, 4 * lo);
    Fixture f(20);
    f.ctx.samples = 3;
    EXPECT_THROW(laurent_fit_d(banana_graph(2), f.ctx), error);
}

TEST(Laplace, TwoBananaThroughTorusIntegral) {
    Fixture f(14);
    real res = laplace_check<real>(banana_graph(2), complex(0, 2), real("1e-3"), real(2),
                                   [](const complex&) { return real(0); }, f.ctx);
    EXPECT_LT(d(res), 1e-4);
}
