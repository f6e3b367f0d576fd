#ifndef MGF_PROPAGATORS_HPP
#define MGF_PROPAGATORS_HPP

// Green functions on the torus C/(Z + tau Z) and on the boundary cycle.
//
// Closed string: G(z) = -log|theta(z)/eta|^2 + 2 pi (Im z)^2 / Im tau, or the
// same function written through its zero mode in r plus a sum over windings k
// in which the sum over the Fourier index m has been done in closed form:
//   G(s + r tau) = 2 pi tau2 B_2(r) - sum_k log|1 - w_k|^2,
//   w_k = exp(2 pi i (s + (r - k) tau1) - 2 pi tau2 |k - r|).
// The kernel class below also provides the iterated propagators G_a (the a-fold
// convolution of G, Fourier coefficient |omega|^{-2a}) needed once chains of
// bivalent vertices are integrated out.
//
// Open string: P(x) = -log(2 sin pi x) - sum_j log((1 - q^j u)(1 - q^j/u)),
// which is G^op - 2 log eta + i pi tau/6 + i pi/2 with the branch fixed by
// continuity from the real segment, and its image under tau -> -1/tau written
// as L + S.

#include "qseries.hpp"
#include "polylog.hpp"

namespace mgf {

template <class Real>
struct TorusPoint {
    Real s{}, r{};  // z = s + r tau, both reduced to [0,1)

    TorusPoint() = default;
    TorusPoint(Real s_, Real r_) : s(frac(s_)), r(frac(r_)) {}

    bool origin() const { return s == 0 && r == 0; }
    cplx<Real> z(const cplx<Real>& tau) const { return cplx<Real>(s) + r * tau; }
};

namespace detail {

// Representative of x mod 1 closest to zero, given x and 1 - x.
template <class Real>
inline Real centred(const Real& x, const Real& xc) {
    return x <= xc ? x : Real(-xc);
}

// log|1 - e^{-rho + i theta}|^2 without cancellation at rho, theta -> 0
template <class Real>
inline Real log_abs2_1m(const Real& rho, const Real& theta) {
    using std::exp; using std::expm1; using std::log; using std::sin;
    Real em = expm1(-rho);
    Real sh = sin(theta / 2);
    return log(em * em + 4 * (1 + em) * sh * sh);
}

template <class Real>
inline Real decay_cut(const PrecisionContext& ctx) {
    return Real((std::min(ctx.digits, working_digits<Real>()) + ctx.guard + 2) * std::log(10.0));
}

} // namespace detail

template <class Real>
Real closed_green_theta(const TorusPoint<Real>& z1, const TorusPoint<Real>& z2, const cplx<Real>& tau,
                        const PrecisionContext& ctx) {
    detail::require_uhp(tau);
    TorusPoint<Real> d(z1.s - z2.s, z1.r - z2.r);
    if (d.origin())
        throw error(error_kind::CoincidentPoints, "closed propagator at coincident points");
    using std::abs; using std::log;
    // The difference is reduced into the fundamental cell; G is doubly periodic.
    cplx<Real> z = d.z(tau);
    cplx<Real> th = jacobi_theta(z, tau, ctx);
    cplx<Real> et = dedekind_eta(tau, ctx);
    Real t2 = tau.imag();
    Real imz = d.r * t2;
    return -2 * log(abs(th / et)) + 2 * pi<Real>() * imz * imz / t2;
}

// Iterated closed propagators at fixed tau.  G(a, ...) takes the point as
// (s, 1-s, r, 1-r) so that the neighbourhood of every corner of the unit cell
// is resolved to full relative precision.
template <class Real>
class closed_kernel {
public:
    closed_kernel(const cplx<Real>& tau, int amax, const PrecisionContext& ctx)
        : tau1_(tau.real()), tau2_(tau.imag()), amax_(amax) {
        detail::require_uhp(tau);
        if (amax < 1) throw error(error_kind::DomainError, "propagator order must be >= 1");
        const Real p = pi<Real>();
        y_ = p * tau2_;
        cut_ = detail::decay_cut<Real>(ctx);
        double kwin = to_double(cut_ / (2 * p * tau2_));
        if (kwin > 1e6)
            throw error(error_kind::SlowConvergence, "Im(tau) too small for the winding sum");
        kmax_ = static_cast<int>(std::ceil(kwin)) + 1;
        tp_ = 2 * p;
        q_ = exp(-tp_ * tau2_);
        eps_ = exp(-cut_);
        // k <= -1 windings step by e^{2 pi i tau1}, k >= 2 by e^{-2 pi i tau1}
        step_plus_ = cplx<Real>(cos(tp_ * tau1_), sin(tp_ * tau1_)) * q_;
        step_minus_ = cplx<Real>(cos(tp_ * tau1_), -sin(tp_ * tau1_)) * q_;
        zero_.resize(amax + 1);
        pcoef_.resize(amax + 1);
        ypow_.resize(amax + 1);
        for (int a = 1; a <= amax; ++a) {
            // (4y)^a (-1)^{a+1} B_{2a}(r) / (2a)!
            auto c = bernoulli_poly_coeffs(2 * a);
            Real pre = pow(4 * y_, a) / from_rational<Real>(rational(factorial(2 * a)));
            if (a % 2 == 0) pre = -pre;
            zero_[a].resize(c.size());
            for (size_t i = 0; i < c.size(); ++i) zero_[a][i] = pre * from_rational<Real>(c[i]);
            // p_{a,j} = (2a-2-j)! / (j! (a-1-j)! (a-1)! 2^{2a-2-j})
            for (int j = 0; j <= a - 1; ++j) {
                rational v(factorial(2 * a - 2 - j));
                v /= rational(factorial(j) * factorial(a - 1 - j) * factorial(a - 1));
                v /= rational(bigint(1) << (2 * a - 2 - j));
                pcoef_[a].push_back(from_rational<Real>(v));
            }
            ypow_[a] = pow(y_, 1 - a);
        }
    }

    int amax() const { return amax_; }

    Real operator()(int a, const Real& s, const Real& sc, const Real& r, const Real& rc) const {
        if (a < 1 || a > amax_) throw error(error_kind::DomainError, "propagator order out of range");
        using std::cos; using std::exp; using std::expm1; using std::log; using std::sin;
        Real acc = 0;
        const auto& zc = zero_[a];
        for (size_t i = zc.size(); i-- > 0;) acc = acc * r + zc[i];
        const Real ss = detail::centred(s, sc);
        // The two windings next to the point (k = 0 at distance r, k = 1 at
        // distance 1 - r) carry the singularity; they are evaluated from the
        // exponent directly.  All other windings follow by multiplying with
        // Q e^{-+2 pi i tau1}, |Q| = e^{-2 pi tau2}.
        const Real rho0 = tp_ * tau2_ * r, rho1 = tp_ * tau2_ * rc;
        const Real th0 = tp_ * (ss + r * tau1_), th1 = tp_ * (ss - rc * tau1_);
        Real osc = 0;
        if (a == 1) {
            // G_a is finite at the origin only for a >= 2
            if ((rho0 == 0 && sin(th0 / 2) == 0) || (rho1 == 0 && sin(th1 / 2) == 0))
                throw error(error_kind::CoincidentPoints, "closed propagator at the origin");
            Real prod = 1;
            Real logs = 0;
            for (int side = 0; side < 2; ++side) {
                const Real& rho = side ? rho1 : rho0;
                const Real& th = side ? th1 : th0;
                if (rho > cut_) continue;
                Real em = expm1(-rho);
                Real sh = sin(th / 2);
                prod *= em * em + 4 * (1 + em) * sh * sh;
                if (kmax_ == 0) continue;
                // far windings on this side
                Real e = (1 + em) * q_;
                if (e < eps_) continue;
                const cplx<Real>& step = side ? step_minus_ : step_plus_;
                cplx<Real> w = cplx<Real>(cos(th), sin(th)) * (1 + em) * step;
                for (int k = 0; k < kmax_; ++k) {
                    prod *= 1 - 2 * w.real() + std::norm(w);
                    e *= q_;
                    if (e < eps_) break;
                    w *= step;
                }
                if (prod < Real(1e-100) || prod > Real(1e100)) {
                    logs += log(prod);
                    prod = 1;
                }
            }
            osc = -(logs + log(prod));
        } else {
            for (int side = 0; side < 2; ++side) {
                const Real& rho = side ? rho1 : rho0;
                const Real& th = side ? th1 : th0;
                if (rho > cut_) continue;
                osc += 2 * winding_term(a, rho, cplx<Real>(-rho, th));
                Real e = exp(-rho) * q_;
                const cplx<Real>& step = side ? step_minus_ : step_plus_;
                cplx<Real> w = cplx<Real>(cos(th), sin(th)) * exp(-rho) * step;
                Real rk = rho;
                for (int k = 0; k < kmax_ && e >= eps_; ++k) {
                    rk += tp_ * tau2_;
                    osc += 2 * far_term(a, rk, w, e);
                    e *= q_;
                    w *= step;
                }
            }
        }
        return acc + ypow_[a] * osc;
    }

    Real operator()(int a, const TorusPoint<Real>& z) const {
        return (*this)(a, z.s, Real(1 - z.s), z.r, Real(1 - z.r));
    }

private:
    // Re sum_j p_{a,j} rho^j Li_{2a-1-j}(e^mu)
    Real winding_term(int a, const Real& rho, const cplx<Real>& mu) const {
        cplx<Real> t{};
        Real rp = 1;
        for (int j = 0; j <= a - 1; ++j) {
            t += pcoef_[a][j] * rp * polylog_exp<Real>(2 * a - 1 - j, mu);
            rp *= rho;
        }
        return t.real();
    }

    // Same for a winding with |w| = e <= e^{-2 pi tau2}: plain power series.
    Real far_term(int a, const Real& rho, const cplx<Real>& w, const Real& e) const {
        Real t = 0;
        Real rp = 1;
        std::vector<Real> li(2 * a, Real(0));
        cplx<Real> wm = w;
        Real em = e;
        for (int m = 1; em >= eps_; ++m) {
            Real mr = Real(m), mp = mr;
            // Li_n accumulates Re(w^m) / m^n for n = 1 .. 2a-1
            for (int n = 1; n <= 2 * a - 1; ++n) {
                li[n] += wm.real() / mp;
                mp *= mr;
            }
            wm *= w;
            em *= e;
        }
        for (int j = 0; j <= a - 1; ++j) {
            t += pcoef_[a][j] * rp * li[2 * a - 1 - j];
            rp *= rho;
        }
        return t;
    }

    Real tau1_, tau2_, y_, cut_, tp_, q_, eps_;
    cplx<Real> step_plus_, step_minus_;
    int amax_, kmax_;
    std::vector<std::vector<Real>> zero_;
    std::vector<std::vector<Real>> pcoef_;
    std::vector<Real> ypow_;
};

template <class Real>
Real closed_green_fourier(const TorusPoint<Real>& z, const cplx<Real>& tau, const PrecisionContext& ctx) {
    if (z.origin())
        throw error(error_kind::CoincidentPoints, "closed propagator at the origin");
    closed_kernel<Real> k(tau, 1, ctx);
    return k(1, z);
}

template <class Real>
Real closed_green_iterated(int a, const TorusPoint<Real>& z, const cplx<Real>& tau, const PrecisionContext& ctx) {
    if (a == 1 && z.origin())
        throw error(error_kind::CoincidentPoints, "closed propagator at the origin");
    closed_kernel<Real> k(tau, a, ctx);
    return k(a, z);
}

// -------------------------------------------------------------------------
// Open string

template <class Real>
cplx<Real> open_green(const Real& x1, const Real& x2, const cplx<Real>& tau, const PrecisionContext& ctx) {
    detail::require_uhp(tau);
    Real x = frac(Real(x1 - x2));
    if (x == 0)
        throw error(error_kind::CoincidentPoints, "open propagator at coincident points");
    cplx<Real> th = jacobi_theta(cplx<Real>(x), tau, ctx);
    cplx<Real> et = dedekind_eta(tau, ctx);
    return -std::log(th / (et * et * et));
}

// P(x; tau) at fixed tau, with x in (0,1) passed together with 1 - x.
template <class Real>
class open_kernel {
public:
    open_kernel(const cplx<Real>& tau, const PrecisionContext& ctx) : tau_(tau) {
        detail::require_uhp(tau);
        real_ = tau.real() == 0;
        const Real tp = 2 * pi<Real>();
        Real cut = detail::decay_cut<Real>(ctx);
        // |q^j u^{+-1}| <= e^{-2 pi j tau2}
        jmax_ = static_cast<int>(std::ceil(to_double(cut / (tp * tau.imag()))));
        if (jmax_ > 1000000) throw error(error_kind::SlowConvergence, "Im(tau) too small");
        if (jmax_ < 1) jmax_ = 1;
        q_ = exp(-tp * tau.imag());
    }

    cplx<Real> operator()(const Real& x, const Real& xc) const {
        using std::log; using std::sin; using std::cos;
        if (x <= 0 || xc <= 0)
            throw error(error_kind::CoincidentPoints, "open propagator at coincident points");
        const Real p = pi<Real>();
        Real xm = x <= xc ? x : xc;
        Real lead = -log(2 * sin(p * xm));
        if (real_) {
            // log|1 - q^j u|^2 with |q^j u| = q^j, u on the unit circle
            Real c = cos(2 * p * xm), acc = 0, qj = 1;
            for (int j = 1; j <= jmax_; ++j) {
                qj *= q_;
                acc += log1p(qj * (qj - 2 * c));
            }
            return cplx<Real>(lead - acc);
        }
        const cplx<Real> I(0, 1);
        cplx<Real> acc{};
        const Real xs = detail::centred(x, xc);
        for (int j = 1; j <= jmax_; ++j) {
            cplx<Real> jt = Real(j) * tau_;
            acc += log1m_exp(Real(2) * p * I * (jt + xs)) + log1m_exp(Real(2) * p * I * (jt - xs));
        }
        return cplx<Real>(lead) - acc;
    }

private:
    cplx<Real> tau_;
    bool real_;
    int jmax_;
    Real q_;
};

template <class Real>
cplx<Real> shifted_open_prop(const Real& x1, const Real& x2, const cplx<Real>& tau, const PrecisionContext& ctx) {
    Real x = frac(Real(x1 - x2));
    if (x == 0)
        throw error(error_kind::CoincidentPoints, "open propagator at coincident points");
    open_kernel<Real> k(tau, ctx);
    return k(x, Real(1 - x));
}

// L(z; tau) = -T (z^2 - z + 1/6) + zeta(2)/T, T = pi i tau.
template <class Real>
cplx<Real> L_term(const Real& z, const cplx<Real>& tau, const PrecisionContext& ctx) {
    detail::require_uhp(tau);
    const cplx<Real> T = cplx<Real>(0, pi<Real>()) * tau;
    const Real z2 = static_cast<Real>(zeta_value(2, ctx));
    return -T * (z * z - z + Real(1) / 6) + z2 / T;
}

// P(x; -1/tau) = L(x; tau) + S(x; tau) at fixed tau, x in (0,1) with 1 - x.
// S = -sum_{n>=0} [log(1 - e^{2T(n+x)}) + log(1 - e^{2T(n+1-x)})].
template <class Real>
class ls_kernel {
public:
    ls_kernel(const cplx<Real>& tau, const PrecisionContext& ctx) {
        detail::require_uhp(tau);
        T_ = cplx<Real>(0, pi<Real>()) * tau;
        real_ = tau.real() == 0;
        Tr_ = T_.real();
        zeta2_ = static_cast<Real>(zeta_value(2, ctx));
        L0_ = -T_ / Real(6) + zeta2_ / T_;
        cut_ = detail::decay_cut<Real>(ctx);
        double d = to_double(cut_ / (-2 * Tr_));
        if (d > 1e6) throw error(error_kind::SlowConvergence, "Im(tau) too small");
        nmax_ = static_cast<int>(std::ceil(d)) + 1;
    }

    const cplx<Real>& T() const { return T_; }

    cplx<Real> L(const Real& x, const Real& xc) const { return L0_ + T_ * (x * xc); }

    cplx<Real> S(const Real& x, const Real& xc) const {
        if (x <= 0 || xc <= 0) throw error(error_kind::DomainError, "S requires 0 < z < 1");
        if (real_) return cplx<Real>(S_real(x, xc));
        cplx<Real> acc{};
        for (int n = 0; n <= nmax_; ++n) {
            for (const Real* g : {&x, &xc}) {
                Real e = Real(n) + *g;
                if (-2 * Tr_ * e > cut_) continue;
                acc -= log1m_exp(Real(2) * e * T_);
            }
        }
        return acc;
    }

    cplx<Real> operator()(const Real& x, const Real& xc) const { return L(x, xc) + S(x, xc); }

    // Real part only, valid (and exact) for purely imaginary tau.
    Real real_value(const Real& x, const Real& xc) const {
        return L0_.real() + Tr_ * (x * xc) + S_real(x, xc);
    }

    bool is_real() const { return real_; }

private:
    Real S_real(const Real& x, const Real& xc) const {
        Real acc = 0;
        for (int n = 0; n <= nmax_; ++n) {
            Real e1 = -2 * Tr_ * (Real(n) + x);
            if (e1 <= cut_) acc -= log1m_exp(Real(-e1));
            Real e2 = -2 * Tr_ * (Real(n) + xc);
            if (e2 <= cut_) acc -= log1m_exp(Real(-e2));
        }
        return acc;
    }

    cplx<Real> T_, L0_;
    Real Tr_, zeta2_, cut_;
    bool real_;
    int nmax_;
};

template <class Real>
cplx<Real> S_term(const Real& z, const cplx<Real>& tau, const PrecisionContext& ctx) {
    if (!(z > 0 && z < 1)) throw error(error_kind::DomainError, "S requires 0 < z < 1");
    ls_kernel<Real> k(tau, ctx);
    return k.S(z, Real(1 - z));
}

} // namespace mgf

#endif // MGF_PROPAGATORS_HPP
