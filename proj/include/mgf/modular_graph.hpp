#ifndef MGF_MODULAR_GRAPH_HPP
#define MGF_MODULAR_GRAPH_HPP

// Modular graph functions D_Gamma(tau): the momentum-space lattice sum, the
// position-space torus integral, non-holomorphic Eisenstein series through
// their Fourier expansion, Laurent fits in y = pi Im(tau), and a finite
// difference check of Laplace equations.

#include "graphs.hpp"
#include "laurent.hpp"
#include "propagators.hpp"
#include "quadrature.hpp"

namespace mgf {

// E(n, tau) = (Im tau / pi)^n sum' |m + n tau|^{-2n}, from
//   (-1)^{n-1} B_{2n}/(2n)! (4y)^n + 4 (2n-3)!/((n-2)!(n-1)!) zeta(2n-1) (4y)^{1-n}
//   + 2/(n-1)! sum_k k^{n-1} sigma_{1-2n}(k) 2 Re(q^k)
//             sum_{m<n} (n+m-1)!/(m!(n-m-1)!) (4ky)^{-m}.
template <class Real>
Real e_nonholo(int n, const cplx<Real>& tau, const PrecisionContext& ctx) {
    if (n < 2) throw error(error_kind::BadOrder, "E(n) needs n >= 2");
    detail::require_uhp(tau);
    using std::cos; using std::exp;
    const Real p = pi<Real>();
    const Real y = p * tau.imag();
    const Real y4 = 4 * y;
    rational lead = bernoulli_number(2 * n) / rational(factorial(2 * n));
    if (n % 2 == 0) lead = -lead;
    Real out = from_rational<Real>(lead) * pow(y4, n);
    rational c1 = rational(4 * factorial(2 * n - 3)) / rational(factorial(n - 2) * factorial(n - 1));
    out += from_rational<Real>(c1) * static_cast<Real>(zeta_value(2 * n - 1, ctx)) * pow(y4, 1 - n);
    const Real thr = detail::threshold<Real>(ctx);
    const Real aq = exp(-2 * p * tau.imag());
    std::vector<Real> mc(n);
    for (int m = 0; m < n; ++m)
        mc[m] = from_rational<Real>(rational(factorial(n + m - 1)) / rational(factorial(m) * factorial(n - m - 1)));
    const Real pref = from_rational<Real>(rational(2) / rational(factorial(n - 1)));
    Real qs = 0, qk = 1;
    for (int k = 1; k < 10000000; ++k) {
        qk *= aq;
        // sigma_{1-2n}(k) = sigma_{2n-1}(k) / k^{2n-1}
        Real sig = from_rational<Real>(rational(divisor_sigma(k, 2 * n - 1), bigint(k)) ) / pow(Real(k), 2 * n - 2);
        Real inner = 0, ik = 1 / (y4 * k), ip = 1;
        for (int m = 0; m < n; ++m) {
            inner += mc[m] * ip;
            ip *= ik;
        }
        Real term = pow(Real(k), n - 1) * sig * 2 * qk * cos(2 * p * k * tau.real()) * inner;
        qs += term;
        if (qk * pow(Real(k), n) * mc[n - 1] < thr) break;
    }
    return out + pref * qs;
}

// Brings tau into the standard fundamental domain.  D is SL2(Z)-invariant, and
// a larger Im(tau) makes every truncated sum shorter.
template <class Real>
cplx<Real> reduce_to_fundamental(cplx<Real> tau) {
    using std::floor; using std::norm;
    for (int it = 0; it < 1000; ++it) {
        Real sh = floor(tau.real() + Real(0.5));
        tau -= cplx<Real>(sh);
        if (norm(tau) < Real(1) - Real(1e-30)) tau = cplx<Real>(-1) / tau;
        else break;
    }
    return tau;
}

// Lattice sum for one 2-connected block.  Loop momenta live on the edges not
// in a BFS spanning tree; tree momenta follow from conservation at each vertex.
// Partial sums are collected per max-norm shell of the loop momenta and the
// cutoff dependence is removed by Richardson extrapolation with an empirical
// exponent estimated from the shells Lambda/4, Lambda/2, Lambda.
struct LatticeSumResult {
    double value = 0;
    double error = 0;
};

namespace detail {

inline LatticeSumResult lattice_sum_block(const MultiGraph& g, std::complex<double> tau, int cutoff) {
    const IncidenceMatrix inc = incidence(g);
    const int l = inc.cols(), n = g.n();
    // spanning tree by BFS from vertex n-1
    std::vector<int> tree_edge_of(n, -1);
    std::vector<bool> seen(n, false), is_tree(l, false);
    std::vector<int> order{n - 1};
    seen[n - 1] = true;
    for (size_t h = 0; h < order.size(); ++h) {
        int v = order[h];
        for (int a = 0; a < l; ++a) {
            int i = inc.edges[a].first, j = inc.edges[a].second;
            int w = i == v ? j : (j == v ? i : -1);
            if (w < 0 || seen[w]) continue;
            seen[w] = true;
            is_tree[a] = true;
            tree_edge_of[w] = a;
            order.push_back(w);
        }
    }
    std::vector<int> loops;
    for (int a = 0; a < l; ++a)
        if (!is_tree[a]) loops.push_back(a);
    const int L = static_cast<int>(loops.size());
    // Express every edge momentum as an integer combination of loop momenta.
    // Conservation: sum_a Gamma_{v,a} omega_a = 0.  Process leaves first.
    std::vector<std::vector<int>> coef(l, std::vector<int>(L, 0));
    for (int c = 0; c < L; ++c) coef[loops[c]][c] = 1;
    for (size_t h = order.size(); h-- > 1;) {
        int v = order[h];
        int a = tree_edge_of[v];
        std::vector<int> s(L, 0);
        for (int b = 0; b < l; ++b) {
            if (b == a) continue;
            int gvb = inc.entries[v][b];
            if (gvb == 0) continue;
            for (int c = 0; c < L; ++c) s[c] += gvb * coef[b][c];
        }
        int gva = inc.entries[v][a];
        for (int c = 0; c < L; ++c) coef[a][c] = -s[c] * gva;
    }
    const int box = cutoff;
    std::vector<double> shell(box + 1, 0.0);
    const int side = 2 * box + 1;
    // odometer over 2L integers in [-box, box]
    std::vector<int> k(2 * L, -box);
    const double t1 = tau.real(), t2 = tau.imag();
    std::vector<long> em(l), en(l);
    while (true) {
        int sh = 0;
        for (int c = 0; c < 2 * L; ++c) sh = std::max(sh, std::abs(k[c]));
        double prod = 1.0;
        bool zero = false;
        for (int a = 0; a < l && !zero; ++a) {
            long m = 0, nn = 0;
            for (int c = 0; c < L; ++c) {
                m += static_cast<long>(coef[a][c]) * k[2 * c];
                nn += static_cast<long>(coef[a][c]) * k[2 * c + 1];
            }
            if (m == 0 && nn == 0) { zero = true; break; }
            double wr = m + nn * t1, wi = nn * t2;
            prod /= (wr * wr + wi * wi);
        }
        if (!zero) shell[sh] += prod;
        int c = 0;
        while (c < 2 * L) {
            if (++k[c] <= box) break;
            k[c] = -box;
            ++c;
        }
        if (c == 2 * L) break;
    }
    (void)side;
    std::vector<double> cum(box + 1);
    double acc = 0;
    for (int s = 0; s <= box; ++s) cum[s] = (acc += shell[s]);
    const double norm = std::pow(t2 / 3.14159265358979323846, l);
    LatticeSumResult r;
    if (box < 8) throw error(error_kind::CutoffTooSmall, "cutoff must be at least 8");
    auto extrap = [&](int lam, double& p) {
        double s1 = cum[lam / 4], s2 = cum[lam / 2], s3 = cum[lam];
        double d1 = s2 - s1, d2 = s3 - s2;
        if (d2 == 0) { p = 99; return s3; }
        double ratio = d1 / d2;
        if (!(ratio > 1.05)) throw error(error_kind::CutoffTooSmall, "shell sums do not settle");
        p = std::log2(ratio);
        return s3 + d2 / (ratio - 1);
    };
    double p1, p0;
    double e1 = extrap(box - box % 4, p1);
    double e0 = extrap((box / 2) - (box / 2) % 4, p0);
    r.value = norm * e1;
    r.error = norm * (std::abs(e1 - e0) + 1e-15 * std::abs(e1));
    return r;
}

} // namespace detail

inline LatticeSumResult d_lattice_sum_report(const MultiGraph& g, std::complex<double> tau, const PrecisionContext& ctx) {
    if (!(tau.imag() > 0)) throw error(error_kind::NotUpperHalfPlane, "Im(tau) must be positive");
    LatticeSumResult total{1.0, 0.0};
    for (const MultiGraph& b : cut_vertex_factor(g)) {
        if (b.n() == 2 && b.weight() == 1) return LatticeSumResult{0.0, 0.0};  // bridge: zero momentum
        LatticeSumResult r = detail::lattice_sum_block(b, tau, ctx.cutoff);
        total.error = std::abs(total.value) * r.error + std::abs(r.value) * total.error;
        total.value *= r.value;
    }
    return total;
}

template <class Real>
Real d_lattice_sum(const MultiGraph& g, const cplx<Real>& tau, const PrecisionContext& ctx, Real* err = nullptr) {
    std::complex<double> t(to_double(tau.real()), to_double(tau.imag()));
    LatticeSumResult r = d_lattice_sum_report(g, t, ctx);
    if (err) *err = Real(r.error);
    return Real(r.value);
}

namespace detail {

// Integral over the torus of prod_i G_{a_i}(z).  The integrand is singular
// only at the corners of the unit cell; G(-z) = G(z) folds r onto [0, 1/2]
// and, for Re(tau) = 0, G(-conj z) = G(z) folds s onto [0, 1/2] as well.
template <class Real>
Real banana_torus_integral(const std::vector<int>& orders, const cplx<Real>& tau, const PrecisionContext& ctx) {
    int amax = *std::max_element(orders.begin(), orders.end());
    closed_kernel<Real> K(tau, amax, ctx);
    std::vector<int> count(amax + 1, 0);
    for (int a : orders) ++count[a];
    tanh_sinh<Real> ts(std::min(ctx.digits, working_digits<Real>()) + 2, ctx.quad_level);
    const Real tol = epsilon_for<Real>(std::min(ctx.digits, working_digits<Real>()) + 1);
    const bool rect = tau.real() == 0;
    const Real half(Real(1) / 2);
    auto integrand = [&](const Real& s, const Real& sc, const Real& r, const Real& rc) {
        Real v = 1;
        for (int a = 1; a <= amax; ++a) {
            if (!count[a]) continue;
            v *= pow(K(a, s, sc, r, rc), count[a]);
        }
        return v;
    };
    auto inner = [&](const Real& r, const Real&, const Real&) {
        Real rc = 1 - r;
        if (rect) {
            return 2 * ts.integrate2([&](const Real& s, const Real& da, const Real&) {
                return integrand(da, 1 - da, r, rc);
            }, Real(0), half, tol);
        }
        return ts.integrate2([&](const Real&, const Real& da, const Real& db) {
            return integrand(da, db, r, rc);
        }, Real(0), Real(1), tol);
    };
    // Beyond r* = cut / (2 pi tau2) every winding is below the working
    // precision and the integrand is a polynomial in r; splitting there keeps
    // the exponential boundary layer at r = 0 inside one well-resolved panel.
    Real rstar = detail::decay_cut<Real>(ctx) / (2 * pi<Real>() * tau.imag());
    if (!(rstar < half)) {
        return 2 * ts.integrate2([&](const Real&, const Real& da, const Real& db) {
            return inner(da, da, db);
        }, Real(0), half, tol);
    }
    Real lo = ts.integrate2([&](const Real&, const Real& da, const Real& db) {
        return inner(da, da, db);
    }, Real(0), rstar, tol);
    Real hi = ts.integrate2([&](const Real& r, const Real&, const Real&) {
        return inner(r, r, r);
    }, rstar, half, tol);
    return 2 * (lo + hi);
}

} // namespace detail

// Position-space evaluation.  Blocks multiply; inside a block, bivalent
// vertices are integrated out exactly (chains of propagators convolve into
// iterated propagators), which turns every graph whose blocks are cycles and
// chained bananas into weighted bananas: a single integral over the torus.
template <class Real>
Real d_torus_integral(const MultiGraph& g, const cplx<Real>& tau_in, const PrecisionContext& ctx) {
    detail::require_uhp(tau_in);
    cplx<Real> tau = reduce_to_fundamental(tau_in);
    Real total = 1;
    for (const MultiGraph& b : cut_vertex_factor(g)) {
        if (b.n() == 2 && b.weight() == 1) return Real(0);  // bridge: G integrates to zero
        WeightedGraph w = reduce_chains(WeightedGraph::from(b));
        if (w.n != 2)
            throw error(error_kind::Unsupported,
                        "block '" + b.str() + "' does not reduce to a two-vertex graph");
        const auto& orders = w.edges.begin()->second;
        total *= detail::banana_torus_integral<Real>(orders, tau, ctx);
    }
    return total;
}

// Default closed-side evaluator.
template <class Real>
Real d_graph(const MultiGraph& g, const cplx<Real>& tau, const PrecisionContext& ctx) {
    return d_torus_integral(g, tau, ctx);
}

// Suggested window in y for the d-Laurent fit at a target of `digits`: the
// q-corrections are O(y^l e^{-2y}).
inline std::pair<double, double> default_d_window(int l, int digits) {
    double ymin = 0.5 * (digits + 2) * std::log(10.0) + 1.5 * l;
    double ymax = ymin * (l <= 2 ? 4.0 : 8.0);
    return {ymin, ymax};
}

inline LaurentFitReport laurent_fit_d(const MultiGraph& g, const PrecisionContext& ctx) {
    const int l = g.weight();
    auto [dmin, dmax] = default_d_window(l, ctx.digits);
    double ymin = ctx.ymin > 0 ? ctx.ymin : dmin;
    double ymax = ctx.ymax > ymin ? ctx.ymax : std::max(dmax, 2 * ymin);
    int m = ctx.samples > 0 ? ctx.samples : 2 * l + 4;
    const int kmin = 1 - l, kmax = l;
    if (m < kmax - kmin + 1) throw error(error_kind::IllConditioned, "too few samples for the exponent range");
    PrecisionContext ev = ctx;
    precision_guard pg(ctx.digits + ctx.guard + 5);
    std::vector<real> ys = reciprocal_chebyshev_nodes(real(ymin), real(ymax), m);
    std::vector<real> fs;
    for (const real& y : ys) fs.push_back(d_graph<real>(g, complex(0, y / pi<real>()), ev));
    LaurentFitReport rep = fit_laurent(ys, fs, kmin, kmax, "y");
    return rep;
}

// Residual |(Delta - lambda) F(tau) - rhs(tau)| with Delta = Im(tau)^2 (d_x^2 + d_y^2)
// discretized by the isotropic 9-point stencil of spacing h.
template <class Real, class F, class R>
Real laplace_residual(F&& f, const cplx<Real>& tau, const Real& h, const Real& lambda, R&& rhs) {
    detail::require_uhp(tau);
    if (!(h > 0) || !(h * 4 < tau.imag()))
        throw error(error_kind::StencilBudgetExceeded, "step must be positive and below Im(tau)/4");
    using std::abs;
    auto at = [&](int i, int j) { return Real(f(tau + cplx<Real>(Real(i) * h, Real(j) * h))); };
    Real f0 = at(0, 0);
    Real edge = at(1, 0) + at(-1, 0) + at(0, 1) + at(0, -1);
    Real corner = at(1, 1) + at(1, -1) + at(-1, 1) + at(-1, -1);
    Real lap = (4 * edge + corner - 20 * f0) / (6 * h * h);
    Real y = tau.imag();
    return abs(y * y * lap - lambda * f0 - Real(rhs(tau)));
}

template <class Real>
Real laplace_check(const MultiGraph& g, const cplx<Real>& tau, const Real& h, const Real& lambda,
                   const std::function<Real(const cplx<Real>&)>& rhs, const PrecisionContext& ctx) {
    return laplace_residual<Real>([&](const cplx<Real>& t) { return d_graph<Real>(g, t, ctx); }, tau, h, lambda, rhs);
}

} // namespace mgf

#endif // MGF_MODULAR_GRAPH_HPP
