#include "test_util.hpp"

using namespace mgf;
using mgf::test::Fixture;

namespace {

const complex I(0, 1);

double cabs(const complex& z) { return to_double(real(abs(z))); }

// holomorphic derivative by a central difference along the imaginary axis
template <class F>
complex ddtau(F f, const complex& tau, const real& h) {
    return (f(tau + I * h) - f(tau - I * h)) / (real(2) * I * h);
}

} // namespace

TEST(Eta, ValueAtI) {
    Fixture f(40);
    complex e = dedekind_eta(complex(0, 1), f.ctx);
    real expect = tgamma(real(1) / 4) / (2 * pow(pi<real>(), real(3) / 4));
    EXPECT_LT(cabs(e - expect), 1e-38);
}

TEST(Eta, ModularTransformation) {
    Fixture f(35);
    for (complex tau : {complex(real("0.2"), real("1.1")), complex(real("-0.4"), real("0.9")), complex(real("0.1"), real("2"))}) {
        complex lhs = dedekind_eta(complex(-1) / tau, f.ctx);
        complex rhs = sqrt(-I * tau) * dedekind_eta(tau, f.ctx);
        EXPECT_LT(cabs(lhs - rhs), 1e-32);
        // T: eta(tau + 1) = exp(pi i / 12) eta(tau)
        complex t1 = dedekind_eta(tau + real(1), f.ctx);
        EXPECT_LT(cabs(t1 - exp(I * pi<real>() / real(12)) * dedekind_eta(tau, f.ctx)), 1e-32);
    }
}

TEST(Eta, DoublePrecisionInstantiation) {
    Fixture f(14);
    std::complex<double> e = dedekind_eta(std::complex<double>(0, 1), f.ctx);
    EXPECT_NEAR(e.real(), 0.768225422326056659, 1e-13);
    EXPECT_NEAR(e.imag(), 0.0, 1e-13);
}

TEST(Eta, SeriesMatchesProduct) {
    Fixture f(30);
    complex tau(real("0.3"), real("1.2"));
    complex s = eta_series<real>(40).eval(tau);
    EXPECT_LT(cabs(s - dedekind_eta(tau, f.ctx)), 1e-28);
}

TEST(Theta, OddAndDerivativeAtZero) {
    Fixture f(40);
    complex tau(real("0.1"), real("1.3"));
    complex z(real("0.23"), real("0.17"));
    EXPECT_LT(cabs(jacobi_theta(-z, tau, f.ctx) + jacobi_theta(z, tau, f.ctx)), 1e-38);
    real h("1e-12");
    complex d = (jacobi_theta(complex(h), tau, f.ctx) - jacobi_theta(complex(-h), tau, f.ctx)) / (real(2) * h);
    complex eta = dedekind_eta(tau, f.ctx);
    // theta = i theta_1, theta_1'(0) = 2 pi eta^3
    EXPECT_LT(cabs(d - real(2) * pi<real>() * I * eta * eta * eta), 1e-20);
}

TEST(Theta, QuasiPeriodicity) {
    Fixture f(35);
    complex tau(real("-0.2"), real("0.8"));
    complex z(real("0.31"), real("0.05"));
    complex th = jacobi_theta(z, tau, f.ctx);
    EXPECT_LT(cabs(jacobi_theta(z + real(1), tau, f.ctx) + th), 1e-32);
    complex q = exp(real(2) * pi<real>() * I * tau), u = exp(real(2) * pi<real>() * I * z);
    complex shifted = jacobi_theta(z + tau, tau, f.ctx);
    EXPECT_LT(cabs(shifted + th / (sqrt(q) * u)), 1e-30);
    // far outside the fundamental strip
    complex far = jacobi_theta(z + real(3) * tau, tau, f.ctx);
    complex expect = -th * exp(-real(2) * pi<real>() * I * (real(9) / 2 * tau + real(3) * z));
    EXPECT_LT(cabs(far - expect) / cabs(expect), 1e-30);
}

TEST(Theta, ModularTransformation) {
    Fixture f(35);
    complex tau(real("0.15"), real("1.05"));
    complex z(real("0.2"), real("0.1"));
    complex lhs = jacobi_theta(z / tau, complex(-1) / tau, f.ctx);
    complex rhs = -I * sqrt(-I * tau) * exp(I * pi<real>() * z * z / tau) * jacobi_theta(z, tau, f.ctx);
    EXPECT_LT(cabs(lhs - rhs), 1e-30);
}

TEST(Eisenstein, ClosedFormsAtI) {
    Fixture f(40);
    complex g4 = eisenstein_G(4, complex(0, 1), f.ctx);
    real expect = pow(tgamma(real(1) / 4), 8) / (960 * pi<real>() * pi<real>());
    EXPECT_LT(cabs(g4 - expect), 1e-37);
    EXPECT_LT(cabs(eisenstein_G(6, complex(0, 1), f.ctx)), 1e-37);
    EXPECT_LT(cabs(eisenstein_G(4, complex(0, 6), f.ctx) - real(2) * zeta_value(4, f.ctx)), 1e-12);
}

TEST(Eisenstein, AgainstLatticeSum) {
    Fixture f(20);
    complex tau(real("0.25"), real("1.1"));
    complex g8 = eisenstein_G(8, tau, f.ctx);
    std::complex<double> t(0.25, 1.1), s = 0;
    const int M = 200;
    for (int m = -M; m <= M; ++m)
        for (int n = -M; n <= M; ++n)
            if (m || n) s += 1.0 / std::pow(std::complex<double>(m) + double(n) * t, 8);
    EXPECT_NEAR(to_double(g8.real()), s.real(), 1e-10);
    EXPECT_NEAR(to_double(g8.imag()), s.imag(), 1e-10);
}

TEST(Eisenstein, WeightLaw) {
    Fixture f(30);
    complex tau(real("0.3"), real("0.95"));
    complex lhs = eisenstein_G(10, complex(-1) / tau, f.ctx);
    EXPECT_LT(cabs(lhs - pow(tau, 10) * eisenstein_G(10, tau, f.ctx)) / cabs(lhs), 1e-26);
}

TEST(Eisenstein, BadWeight) {
    Fixture f(20);
    for (int k : {0, 2, 3, 5, -4}) {
        try {
            eisenstein_G(k, complex(0, 1), f.ctx);
            FAIL() << k;
        } catch (const error& e) {
            EXPECT_EQ(e.kind(), error_kind::BadWeight);
        }
    }
}

TEST(IteratedEisenstein, BaseCases) {
    Fixture f(30);
    complex tau(real("0.2"), real("1.4"));
    EXPECT_LT(cabs(iterated_eisenstein(EisWord{{}}, tau, f.ctx) - complex(1)), 1e-28);
    EXPECT_LT(cabs(iterated_eisenstein(EisWord{{0}}, tau, f.ctx) - real(2) * pi<real>() * I * tau), 1e-27);
    // E(0,0) = (2 pi i tau)^2 / 2
    complex x = real(2) * pi<real>() * I * tau;
    EXPECT_LT(cabs(iterated_eisenstein(EisWord{{0, 0}}, tau, f.ctx) - x * x / real(2)), 1e-26);
}

TEST(IteratedEisenstein, DerivativeProperty) {
    Fixture f(40);
    complex tau(real("0.1"), real("1.2"));
    real h("1e-12");
    const complex tpi = real(2) * pi<real>() * I;
    for (const auto& w : std::vector<std::vector<int>>{{4}, {6}, {4, 0}, {0, 4}, {4, 4}, {4, 0, 6}}) {
        EisWord full{w}, head{std::vector<int>(w.begin(), w.end() - 1)};
        int k = w.back();
        complex d = ddtau([&](const complex& t) { return iterated_eisenstein(full, t, f.ctx); }, tau, h);
        complex gk = k == 0 ? complex(-1) : eisenstein_G(k, tau, f.ctx);
        complex expect = -gk / pow(tpi, k - 1) * iterated_eisenstein(head, tau, f.ctx);
        EXPECT_LT(cabs(d - expect) / std::max(1.0, cabs(expect)), 1e-18) << full.str();
    }
}

TEST(IteratedEisenstein, DecaysAtCuspWithoutZeros) {
    Fixture f(30);
    // E(4) -> 0 up to its polynomial part 2 zeta(4) tau/(2 pi i)^3
    for (real t : {real(3), real(5)}) {
        complex e = iterated_eisenstein(EisWord{{4}}, complex(0, t), f.ctx);
        complex poly = -real(2) * zeta_value(4, f.ctx) * complex(0, t) / pow(real(2) * pi<real>() * I, 3);
        EXPECT_LT(cabs(e - poly), 1e-6);
    }
}

TEST(IteratedEisenstein, Errors) {
    Fixture f(30);
    try {
        iterated_eisenstein(EisWord{{4, 2}}, complex(0, 1), f.ctx);
        FAIL();
    } catch (const error& e) {
        EXPECT_EQ(e.kind(), error_kind::BadWord);
    }
    EXPECT_THROW(iterated_eisenstein(EisWord{{5}}, complex(0, 1), f.ctx), error);
    PrecisionContext c = f.ctx;
    c.qorder = 3;
    try {
        iterated_eisenstein(EisWord{{4}}, complex(0, 1), c);
        FAIL();
    } catch (const error& e) {
        EXPECT_EQ(e.kind(), error_kind::TruncationInsufficient);
    }
    EXPECT_THROW(dedekind_eta(complex(0, -1), f.ctx), error);
}

TEST(QSeriesAlgebra, ProductIsAssociativeAndTruncates) {
    Fixture f(25);
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> c(-9, 9), ex(0, 7), deg(0, 2);
    auto rnd = [&]() {
        QSeries<real> s(rational(8));
        for (int i = 0; i < 6; ++i) s.add_term(ex(rng), deg(rng), complex(c(rng), c(rng)));
        return s;
    };
    complex tau(real("0.1"), real("0.7"));
    for (int trial = 0; trial < 10; ++trial) {
        auto a = rnd(), b = rnd(), d = rnd();
        auto l = (a * b) * d, r = a * (b * d);
        EXPECT_LT(cabs(l.eval(tau) - r.eval(tau)), 1e-18);
        for (const auto& [e, p] : l.coeffs()) EXPECT_LT(e, rational(8));
    }
}
