#ifndef MGF_POLYLOG_HPP
#define MGF_POLYLOG_HPP

// Polylogarithms Li_n(e^mu) for integer n >= 1 and Re(mu) <= 0, the only
// case needed by the iterated torus propagators.  Away from w = e^mu = 1 the
// defining power series is summed; near the unit circle the expansion in mu,
//   Li_n(e^mu) = sum_{k != n-1} zeta(n-k) mu^k/k!
//                + mu^{n-1}/(n-1)! (H_{n-1} - log(-mu)),   |mu| < 2 pi,
// is used instead, with zeta at non-positive integers from Bernoulli numbers.

#include "constants.hpp"

namespace mgf {

namespace detail {

template <class Real>
struct polylog_table {
    std::vector<Real> c;  // zeta(n-k)/k!, with c[n-1] unused
    Real harmonic;        // H_{n-1} / (n-1)!
    Real inv_fact;        // 1/(n-1)!
    Real zeta_n;
};

template <class Real>
const polylog_table<Real>& polylog_coeffs(int n, int digits) {
    static std::mutex mu;
    static std::map<std::pair<int, int>, polylog_table<Real>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(n, digits);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    PrecisionContext ctx;
    ctx.digits = digits;
    polylog_table<Real> t;
    // |mu| <= sqrt(log(2)^2 + pi^2) < 3.22 on the region where this is used
    const int K = static_cast<int>(std::ceil((digits + 4) * std::log(10.0) / std::log(2 * 3.14159265 / 3.22))) + 4;
    t.c.resize(K + 1);
    rational fact = 1;
    for (int k = 0; k <= K; ++k) {
        if (k > 0) fact *= k;
        int arg = n - k;
        if (k == n - 1) {
            t.c[k] = 0;
            continue;
        }
        Real z;
        if (arg >= 2) {
            z = static_cast<Real>(zeta_value(arg, ctx));
        } else {
            // zeta(-m) = (-1)^m B_{m+1}/(m+1), m = -arg >= 0
            int m = -arg;
            rational b = bernoulli_number(m + 1) / rational(m + 1);
            if (m % 2) b = -b;
            z = from_rational<Real>(b);
        }
        t.c[k] = z / from_rational<Real>(fact);
    }
    rational h = 0;
    for (int j = 1; j <= n - 1; ++j) h += rational(1, j);
    rational f = rational(factorial(n - 1));
    t.harmonic = from_rational<Real>(h / f);
    t.inv_fact = from_rational<Real>(rational(1) / f);
    t.zeta_n = n >= 2 ? static_cast<Real>(zeta_value(n, ctx)) : Real(0);
    return cache.emplace(key, std::move(t)).first->second;
}

} // namespace detail

template <class Real>
std::complex<Real> polylog_exp(int n, std::complex<Real> mu) {
    using C = std::complex<Real>;
    using std::abs; using std::exp; using std::floor; using std::log;
    if (n < 1) throw error(error_kind::DomainError, "polylog order must be >= 1");
    if (mu.real() > 0) throw error(error_kind::DomainError, "polylog_exp needs |e^mu| <= 1");
    if (n == 1) return -log1m_exp(mu);
    const int digits = working_digits<Real>();
    const Real eps = epsilon_for<Real>(digits + 2);
    const Real ln2 = log(Real(2));
    if (mu.real() < -ln2) {
        C w = std::exp(mu);
        C wk = w, s = w;
        Real aw = abs(w), m = aw;
        for (int k = 2; k < 100000; ++k) {
            wk *= w;
            m *= aw;
            Real kn = Real(k), kr = kn;
            for (int i = 1; i < n; ++i) kn *= kr;
            s += wk / kn;
            if (m < eps) break;
        }
        return s;
    }
    const Real tp = 2 * pi<Real>();
    Real turns = floor(mu.imag() / tp + Real(0.5));
    mu -= C(0, tp * turns);
    const auto& t = detail::polylog_coeffs<Real>(n, digits);
    if (mu == C(0)) return C(t.zeta_n);
    // Horner over the regular part
    C s{};
    for (size_t k = t.c.size(); k-- > 0;) s = s * mu + t.c[k];
    C mpow = std::pow(mu, n - 1);
    s += mpow * (t.harmonic - t.inv_fact * std::log(-mu));
    return s;
}

} // namespace mgf

#endif // MGF_POLYLOG_HPP
