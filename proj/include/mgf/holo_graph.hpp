#ifndef MGF_HOLO_GRAPH_HPP
#define MGF_HOLO_GRAPH_HPP

// Holomorphic graph functions: A_Gamma(tau) integrates products of P(z_i - z_j)
// over [0,1]^{n-1} with z_n = 0, and B_Gamma(tau) = A_Gamma(-1/tau) is computed
// from the same integrand with P(.; -1/tau) = L + S.  Also: Euler sums, the
// exact q^0 part of two-vertex B-functions, and Laurent fits in T = pi i tau.

#include "graphs.hpp"
#include "laurent.hpp"
#include "propagators.hpp"
#include "quadrature.hpp"
#include "zeta_series.hpp"

namespace mgf {

namespace detail {

// Integral over the block's configuration space of prod P(gap)^mult, for a
// block with two or three vertices.  `P(x, 1-x)` is the propagator at a point
// of (0,1).  V is the value type (real for the purely imaginary fast path).
//
// Three vertices: z_3 = 0, and by the reflection z -> 1 - z (under which P is
// invariant) only 0 < z_2 < z_1 < 1 is integrated, in the coordinates
// z_1 = u, z_2 = u v, whose gaps uv, u(1-v), 1-u are all exact.
template <class Real, class V, class Kernel>
V open_block_integral(const MultiGraph& b, Kernel&& P, const PrecisionContext& ctx) {
    const int d = std::min(ctx.digits, working_digits<Real>());
    tanh_sinh<Real> ts(d + 2, ctx.quad_level);
    const Real tol = epsilon_for<Real>(d + 1);
    const Real half = Real(1) / 2;
    if (b.n() == 2) {
        const int l = b.multiplicity(0, 1);
        return Real(2) * ts.integrate2([&](const Real&, const Real& x, const Real&) {
            return V(pow(P(x, Real(1 - x)), l));
        }, Real(0), half, tol);
    }
    if (b.n() == 3) {
        const int l01 = b.multiplicity(0, 1), l02 = b.multiplicity(0, 2), l12 = b.multiplicity(1, 2);
        auto pw = [](const V& x, int k) { return k == 0 ? V(1) : V(pow(x, k)); };
        auto inner = [&](const Real& u, const Real& uc) {
            const V pu = pw(P(u, uc), l02);
            return ts.integrate2([&](const Real&, const Real& v, const Real& vc) {
                Real g1 = u * v, g2 = u * vc;
                V f = pu;
                if (l01) f *= pw(P(g2, Real(g1 + uc)), l01);
                if (l12) f *= pw(P(g1, Real(g2 + uc)), l12);
                return V(f * u);
            }, Real(0), Real(1), tol);
        };
        return Real(2) * ts.integrate2([&](const Real&, const Real& u, const Real& uc) {
            return inner(u, uc);
        }, Real(0), Real(1), tol);
    }
    throw error(error_kind::Unsupported,
                "open-string integrals are implemented for blocks with up to three vertices");
}

template <class Real, class V, class Kernel>
V open_graph_integral(const MultiGraph& g, Kernel&& P, const PrecisionContext& ctx) {
    V total(1);
    for (const MultiGraph& b : cut_vertex_factor(g)) total *= open_block_integral<Real, V>(b, P, ctx);
    return total;
}

} // namespace detail

template <class Real>
cplx<Real> a_graph(const MultiGraph& g, const cplx<Real>& tau, const PrecisionContext& ctx) {
    open_kernel<Real> K(tau, ctx);
    if (tau.real() == 0) {
        auto P = [&](const Real& x, const Real& xc) { return K(x, xc).real(); };
        return cplx<Real>(detail::open_graph_integral<Real, Real>(g, P, ctx));
    }
    return detail::open_graph_integral<Real, cplx<Real>>(g, K, ctx);
}

template <class Real>
cplx<Real> b_graph(const MultiGraph& g, const cplx<Real>& tau, const PrecisionContext& ctx) {
    ls_kernel<Real> K(tau, ctx);
    if (K.is_real()) {
        auto P = [&](const Real& x, const Real& xc) { return K.real_value(x, xc); };
        return cplx<Real>(detail::open_graph_integral<Real, Real>(g, P, ctx));
    }
    return detail::open_graph_integral<Real, cplx<Real>>(g, K, ctx);
}

// ---------------------------------------------------------------------------
// Euler sums
//   S(s, j) = sum_{m_1..m_s >= 1} 1 / (m_1 ... m_s (m_1 + ... + m_s)^{j+1})
//           = s! zeta(j+2, {1}^{s-1})   (standard ordering)
// In the library's ordering the word is (1, ..., 1, j+2).

inline ZetaWord euler_sum_word(int s, int j) {
    if (s < 1 || j < 0) throw error(error_kind::DomainError, "euler_sum needs s >= 1, j >= 0");
    std::vector<int> k(s - 1, 1);
    k.push_back(j + 2);
    return ZetaWord(k);
}

inline real euler_sum(int s, int j, const PrecisionContext& ctx) {
    ZetaWord w = euler_sum_word(s, j);
    return from_rational<real>(rational(factorial(s))) * mzv_value(w, ctx);
}

// Same value as a polynomial in Riemann zeta values.
inline ZetaExpr euler_sum_expr(int s, int j) {
    euler_sum_word(s, j);
    return height_one_zeta(j + 1, s) * rational(factorial(s));
}

// Laurent polynomial in T with exact coefficients.
using ZetaLaurent = LaurentPoly<ZetaExpr>;

namespace detail {

// Polynomials in z whose coefficients are Laurent polynomials in T.
using tcoef = std::map<int, ZetaExpr>;
using zpoly = std::vector<tcoef>;

inline void tadd(tcoef& a, const tcoef& b) {
    for (const auto& [k, e] : b) {
        a[k] += e;
        if (a[k].is_zero()) a.erase(k);
    }
}

inline tcoef tmul(const tcoef& a, const tcoef& b) {
    tcoef r;
    for (const auto& [ka, ea] : a)
        for (const auto& [kb, eb] : b) {
            r[ka + kb] += ea * eb;
            if (r[ka + kb].is_zero()) r.erase(ka + kb);
        }
    return r;
}

inline zpoly zmul(const zpoly& a, const zpoly& b) {
    zpoly r(a.size() + b.size() - 1);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) tadd(r[i + j], tmul(a[i], b[j]));
    return r;
}

} // namespace detail

// q^0 part of B for the banana with l edges, from
//   int_0^1 (L+S)^l = int_0^1 L^l + 2 sum_{s>=1} C(l,s) int_0^oo L^{l-s} S_0^s,
// S_0(z) = -log(1 - e^{2Tz}); products of S_0(z) and S_0(1-z) carry only
// positive powers of q.  With L^{l-s} = sum_p c_p z^p,
//   int_0^oo z^p S_0^s dz = p! S(s, p) / (-2T)^{p+1}.
inline ZetaLaurent b_banana_q0(int l) {
    using namespace detail;
    if (l < 1) throw error(error_kind::DomainError, "banana needs l >= 1");
    // L = -T/6 + zeta(2)/T + T z - T z^2
    zpoly L(3);
    L[0][1] = ZetaExpr(rational(-1, 6));
    L[0][-1] = ZetaExpr::zeta(2);
    L[1][1] = ZetaExpr(1);
    L[2][1] = ZetaExpr(-1);
    std::vector<zpoly> Lp(l + 1);
    Lp[0] = zpoly(1);
    Lp[0][0][0] = ZetaExpr(1);
    for (int k = 1; k <= l; ++k) Lp[k] = zmul(Lp[k - 1], L);
    tcoef out;
    for (size_t p = 0; p < Lp[l].size(); ++p) {
        tcoef t = Lp[l][p];
        for (auto& [k, e] : t) e *= rational(1, static_cast<int>(p) + 1);
        tadd(out, t);
    }
    for (int s = 1; s <= l; ++s) {
        rational cls = rational(2 * binomial(l, s));
        const zpoly& P = Lp[l - s];
        for (size_t p = 0; p < P.size(); ++p) {
            if (P[p].empty()) continue;
            // p! / (-2)^{p+1} * T^{-(p+1)}
            rational f = rational(factorial(static_cast<int>(p)));
            f /= rational(bigint(1) << (p + 1));
            if ((p + 1) % 2) f = -f;
            ZetaExpr es = euler_sum_expr(s, static_cast<int>(p)) * (f * cls);
            tcoef t;
            for (const auto& [k, e] : P[p]) t[k - static_cast<int>(p) - 1] = e * es;
            tadd(out, t);
        }
    }
    ZetaLaurent r("T");
    for (const auto& [k, e] : out)
        if (!e.is_zero()) r.set(k, e);
    return r;
}

inline LaurentPoly<real> numeric_laurent(const ZetaLaurent& b, const PrecisionContext& ctx) {
    LaurentPoly<real> r(b.variable());
    for (const auto& [k, e] : b.terms()) r.set(k, expr_eval(e, ctx));
    return r;
}

// B-Laurent fit from b_graph at tau = i t.  The fit variable is x = -T = pi t > 0
// and the coefficients are converted back to powers of T.
inline LaurentFitReport laurent_fit_b(const MultiGraph& g, const PrecisionContext& ctx) {
    const int l = g.weight();
    double xmin_d = 0.5 * (ctx.digits + 2) * std::log(10.0) + 1.5 * l;
    double xmin = ctx.ymin > 0 ? ctx.ymin : xmin_d;
    double xmax = ctx.ymax > xmin ? ctx.ymax : xmin * (l <= 2 ? 4.0 : 8.0);
    int m = ctx.samples > 0 ? ctx.samples : 2 * l + 5;
    const int kmin = -l, kmax = l;
    if (m < kmax - kmin + 1) throw error(error_kind::IllConditioned, "too few samples for the exponent range");
    precision_guard pg(ctx.digits + ctx.guard + 5);
    std::vector<real> xs = reciprocal_chebyshev_nodes(real(xmin), real(xmax), m);
    std::vector<real> fs;
    for (const real& x : xs) fs.push_back(b_graph<real>(g, complex(0, x / pi<real>()), ctx).real());
    LaurentFitReport rep = fit_laurent(xs, fs, kmin, kmax, "T");
    LaurentPoly<real> c("T");
    for (const auto& [k, v] : rep.coefficients.terms()) c.set(k, k % 2 ? real(-v) : v);
    rep.coefficients = c;
    return rep;
}

} // namespace mgf

#endif // MGF_HOLO_GRAPH_HPP
