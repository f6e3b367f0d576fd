#ifndef MGF_QSERIES_HPP
#define MGF_QSERIES_HPP

// q-expansions in q = exp(2 pi i tau): the odd Jacobi theta function and the
// Dedekind eta function as truncated products, holomorphic Eisenstein series,
// and iterated Eisenstein integrals computed exactly on tau-polynomial times
// q-power representations.

#include "constants.hpp"

namespace mgf {

template <class Real>
using cplx = std::complex<Real>;

// Truncated series sum_e P_e(tau) q^e, exponents e rational (denominator
// dividing 24 in practice) and strictly below the order N.  P_e is a
// polynomial in tau with complex coefficients, lowest degree first.
template <class Real>
class QSeries {
public:
    using poly = std::vector<cplx<Real>>;

    explicit QSeries(rational order = 1) : order_(std::move(order)) {}

    const rational& order() const { return order_; }
    const std::map<rational, poly>& coeffs() const { return c_; }

    void add_term(const rational& e, int tau_degree, const cplx<Real>& v) {
        if (e >= order_) return;
        auto& p = c_[e];
        if (static_cast<int>(p.size()) <= tau_degree) p.resize(tau_degree + 1);
        p[tau_degree] += v;
    }

    int tau_degree() const {
        int d = 0;
        for (const auto& [e, p] : c_) d = std::max(d, static_cast<int>(p.size()) - 1);
        return d;
    }

    QSeries& operator+=(const QSeries& o) {
        order_ = std::min(order_, o.order_);
        for (const auto& [e, p] : o.c_)
            for (size_t d = 0; d < p.size(); ++d) add_term(e, static_cast<int>(d), p[d]);
        prune();
        return *this;
    }
    friend QSeries operator+(QSeries a, const QSeries& b) { return a += b; }

    QSeries& operator*=(const cplx<Real>& s) {
        for (auto& [e, p] : c_)
            for (auto& v : p) v *= s;
        return *this;
    }

    friend QSeries operator*(const QSeries& a, const QSeries& b) {
        QSeries r(std::min(a.order_, b.order_));
        for (const auto& [ea, pa] : a.c_)
            for (const auto& [eb, pb] : b.c_) {
                rational e = ea + eb;
                if (e >= r.order_) continue;
                for (size_t i = 0; i < pa.size(); ++i)
                    for (size_t j = 0; j < pb.size(); ++j)
                        r.add_term(e, static_cast<int>(i + j), pa[i] * pb[j]);
            }
        return r;
    }

    cplx<Real> eval(const cplx<Real>& tau) const {
        const Real tp = 2 * pi<Real>();
        cplx<Real> s{};
        for (const auto& [e, p] : c_) {
            cplx<Real> pv{};
            for (size_t d = p.size(); d-- > 0;) pv = pv * tau + p[d];
            cplx<Real> qe = std::exp(cplx<Real>(0, tp * from_rational<Real>(e)) * tau);
            s += pv * qe;
        }
        return s;
    }

private:
    void prune() {
        for (auto it = c_.begin(); it != c_.end();)
            it = it->first >= order_ ? c_.erase(it) : std::next(it);
    }

    rational order_;
    std::map<rational, poly> c_;
};

namespace detail {

template <class Real>
inline void require_uhp(const cplx<Real>& tau) {
    if (!(tau.imag() > 0))
        throw error(error_kind::NotUpperHalfPlane, "Im(tau) must be positive");
}

template <class Real>
inline Real threshold(const PrecisionContext& ctx) {
    return epsilon_for<Real>(std::min(ctx.digits + ctx.guard, working_digits<Real>() + 2));
}

} // namespace detail

// eta(tau) = q^{1/24} prod_{j>=1} (1 - q^j)
template <class Real>
cplx<Real> dedekind_eta(const cplx<Real>& tau, const PrecisionContext& ctx) {
    detail::require_uhp(tau);
    using C = cplx<Real>;
    const Real tp = 2 * pi<Real>();
    const C q = std::exp(C(0, tp) * tau);
    const Real thr = detail::threshold<Real>(ctx);
    C prod(1), qj = q;
    Real aq = std::abs(q);
    Real m = aq;
    for (int j = 1; j < 1000000; ++j) {
        prod *= C(1) - qj;
        if (m < thr) break;
        qj *= q;
        m *= aq;
    }
    return std::exp(C(0, tp / 24) * tau) * prod;
}

// theta(z, tau) = q^{1/8} (u^{1/2} - u^{-1/2}) prod (1-q^j)(1-q^j u)(1-q^j/u),
// u = exp(2 pi i z).  Arguments with |Im z| > Im tau are first moved into the
// strip by the quasi-periodicity theta(z + n tau) = (-1)^n q^{-n^2/2} u^{-n} theta(z).
template <class Real>
cplx<Real> jacobi_theta(const cplx<Real>& z, const cplx<Real>& tau, const PrecisionContext& ctx) {
    detail::require_uhp(tau);
    using C = cplx<Real>;
    using std::abs; using std::floor;
    const Real tp = 2 * pi<Real>();
    const C I(0, 1);
    C zz = z;
    int n = 0;
    if (abs(z.imag()) > tau.imag()) {
        Real ratio = z.imag() / tau.imag();
        n = static_cast<int>(to_double(floor(ratio + Real(0.5))));
        zz = z - Real(n) * tau;
    }
    const C q = std::exp(I * tp * tau);
    const C u = std::exp(I * tp * zz);
    const C uh = std::exp(I * pi<Real>() * zz);
    const Real thr = detail::threshold<Real>(ctx);
    const Real aq = abs(q);
    const Real big = std::max(abs(u), Real(1) / abs(u));
    C prod = C(1);
    C qj = q;
    Real m = aq;
    for (int j = 1; j < 1000000; ++j) {
        prod *= (C(1) - qj) * (C(1) - qj * u) * (C(1) - qj / u);
        if (m * big < thr) break;
        qj *= q;
        m *= aq;
    }
    C th = std::exp(I * (tp / 8) * tau) * (uh - C(1) / uh) * prod;
    if (n != 0) {
        // theta(zz + n tau) = (-1)^n q^{-n^2/2} u^{-n} theta(zz)
        C fac = std::exp(-I * tp * (Real(n) * Real(n) / 2) * tau - I * tp * Real(n) * zz);
        if (n % 2) fac = -fac;
        th *= fac;
    }
    return th;
}

inline void check_eisenstein_weight(int k) {
    if (k < 4 || k % 2 != 0)
        throw error(error_kind::BadWeight, "Eisenstein weight must be even and >= 4, got " + std::to_string(k));
}

inline bigint divisor_sigma(int n, int p) {
    bigint s = 0;
    for (int d = 1; d * d <= n; ++d)
        if (n % d == 0) {
            s += pow(bigint(d), p);
            if (d * d != n) s += pow(bigint(n / d), p);
        }
    return s;
}

template <class Real>
int eisenstein_qorder(int k, const cplx<Real>& tau, const PrecisionContext& ctx) {
    // |q|^N N^{k-1} below the threshold
    double y = to_double(tau.imag());
    double need = (ctx.digits + ctx.guard) * std::log(10.0);
    int n = 1;
    while (2 * 3.141592653589793 * y * n - (k - 1) * std::log(double(n)) < need + std::log(double(n) + 1)) ++n;
    return n;
}

// G_k(tau) = 2 zeta(k) + 2 (2 pi i)^k/(k-1)! sum_n sigma_{k-1}(n) q^n
template <class Real>
cplx<Real> eisenstein_G(int k, const cplx<Real>& tau, const PrecisionContext& ctx) {
    check_eisenstein_weight(k);
    detail::require_uhp(tau);
    using C = cplx<Real>;
    const Real tp = 2 * pi<Real>();
    const C q = std::exp(C(0, tp) * tau);
    int N = ctx.qorder > 0 ? ctx.qorder : eisenstein_qorder(k, tau, ctx);
    C s{}, qn = q;
    for (int n = 1; n < N; ++n) {
        s += from_rational<Real>(rational(divisor_sigma(n, k - 1))) * qn;
        qn *= q;
    }
    C pref = Real(2) * std::pow(C(0, tp), k) / from_rational<Real>(rational(factorial(k - 1)));
    Real z = static_cast<Real>(zeta_value(k, ctx));
    return Real(2) * z + pref * s;
}

// ---------------------------------------------------------------------------
// Iterated Eisenstein integrals

struct EisWord {
    std::vector<int> k;
    void validate() const {
        for (int x : k)
            if (!(x == 0 || (x >= 4 && x % 2 == 0)))
                throw error(error_kind::BadWord, "entries must be 0 or even >= 4, got " + std::to_string(x));
    }
    std::string str() const {
        std::string s;
        for (size_t i = 0; i < k.size(); ++i) s += (i ? "," : "") + std::to_string(k[i]);
        return s;
    }
};

// G_k(tau)/(2 pi i)^{k-1} as a series; G_0 = -1, so the k = 0 integrand is -2 pi i.
template <class Real>
QSeries<Real> eisenstein_integrand_series(int k, int N, const PrecisionContext& ctx) {
    using C = cplx<Real>;
    const Real tp = 2 * pi<Real>();
    const C tpi(0, tp);
    QSeries<Real> s{rational(N)};
    if (k == 0) {
        s.add_term(0, 0, -tpi);
        return s;
    }
    check_eisenstein_weight(k);
    Real z = static_cast<Real>(zeta_value(k, ctx));
    s.add_term(0, 0, Real(2) * z / std::pow(tpi, k - 1));
    C pref = Real(2) * tpi / from_rational<Real>(rational(factorial(k - 1)));
    for (int n = 1; n < N; ++n) s.add_term(n, 0, pref * from_rational<Real>(rational(divisor_sigma(n, k - 1))));
    return s;
}

// Integrates every monomial c tau^m q^j from tau to the cusp: closed form for
// j >= 1, and -int_0^tau for the q^0 polynomial part (the regularization).
template <class Real>
QSeries<Real> integrate_to_cusp(const QSeries<Real>& f) {
    using C = cplx<Real>;
    const Real tp = 2 * pi<Real>();
    QSeries<Real> r(f.order());
    for (const auto& [e, p] : f.coeffs()) {
        if (denominator(e) != 1)
            throw error(error_kind::BadWord, "fractional q-power in an Eisenstein integrand");
        if (e == 0) {
            for (size_t m = 0; m < p.size(); ++m)
                r.add_term(0, static_cast<int>(m + 1), -p[m] / Real(static_cast<int>(m + 1)));
            continue;
        }
        int j = static_cast<int>(numerator(e));
        C alpha(0, tp * j);
        for (size_t m = 0; m < p.size(); ++m) {
            // int_tau^{i oo} z^m e^{alpha z} dz
            //   = -e^{alpha tau} sum_p (-1)^p m!/(m-p)! tau^{m-p} / alpha^{p+1}
            Real ff = 1;  // m!/(m-p)!
            C apow = alpha;
            for (size_t pp = 0; pp <= m; ++pp) {
                C term = -p[m] * ff / apow;
                if (pp % 2) term = -term;
                r.add_term(e, static_cast<int>(m - pp), term);
                ff *= Real(static_cast<int>(m - pp));
                apow *= alpha;
            }
        }
    }
    return r;
}

template <class Real>
QSeries<Real> iterated_eisenstein_series(const EisWord& w, int N, const PrecisionContext& ctx) {
    w.validate();
    QSeries<Real> e{rational(N)};
    e.add_term(0, 0, cplx<Real>(1));
    for (int k : w.k) e = integrate_to_cusp(eisenstein_integrand_series<Real>(k, N, ctx) * e);
    return e;
}

// E(k_1,...,k_r; tau), with d/dtau E(k_1..k_r) = -G_{k_r}/(2 pi i)^{k_r - 1} E(k_1..k_{r-1}).
template <class Real>
cplx<Real> iterated_eisenstein(const EisWord& w, const cplx<Real>& tau, const PrecisionContext& ctx) {
    w.validate();
    detail::require_uhp(tau);
    int need = auto_qorder(to_double(tau.imag()), ctx.digits, ctx.guard) + 2 * static_cast<int>(w.k.size()) + 2;
    int N = need;
    if (ctx.qorder > 0) {
        if (ctx.qorder < need - 2 * static_cast<int>(w.k.size()) - 2)
            throw error(error_kind::TruncationInsufficient,
                        "q-order " + std::to_string(ctx.qorder) + " too small for " + std::to_string(ctx.digits) +
                            " digits at this Im(tau); need " + std::to_string(need));
        N = ctx.qorder;
    }
    return iterated_eisenstein_series<Real>(w, N, ctx).eval(tau);
}

// eta as an exact-exponent series: q^{1/24} sum_k (-1)^k q^{k(3k-1)/2}.
template <class Real>
QSeries<Real> eta_series(int N) {
    QSeries<Real> s{rational(N)};
    for (int k = -N; k <= N; ++k) {
        long e = static_cast<long>(k) * (3 * k - 1) / 2;
        if (e >= N) continue;
        s.add_term(rational(e) + rational(1, 24), 0, cplx<Real>(k % 2 ? -1 : 1));
    }
    return s;
}

} // namespace mgf

#endif // MGF_QSERIES_HPP
