#ifndef MGF_CORE_HPP
#define MGF_CORE_HPP

// Shared plumbing: the multiprecision real type, the precision context that
// travels through every evaluator, the error type, and a handful of small
// numeric helpers (Bernoulli data, stable log(1 - e^mu), rational conversion).

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <cmath>
#include <complex>
#include <cstdlib>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

namespace mgf {

using real = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                           boost::multiprecision::et_off>;
using complex = std::complex<real>;
using rational = boost::multiprecision::cpp_rational;
using bigint = boost::multiprecision::cpp_int;

// Every failure surfaces as mgf::error; kind() carries the name the CLI prints.
enum class error_kind {
    InadmissibleWord, PrecisionUnreachable, NoSvRule, AlreadySvNormalized, ParseError,
    NotUpperHalfPlane, BadWeight, BadWord, TruncationInsufficient,
    CoincidentPoints, SlowConvergence, DomainError,
    InvalidGraph, CutoffTooSmall, QuadratureBudgetExceeded, Divergent, BadOrder,
    IllConditioned, StencilBudgetExceeded, Unsupported
};

inline const char* kind_name(error_kind k) {
    switch (k) {
    case error_kind::InadmissibleWord: return "InadmissibleWord";
    case error_kind::PrecisionUnreachable: return "PrecisionUnreachable";
    case error_kind::NoSvRule: return "NoSvRule";
    case error_kind::AlreadySvNormalized: return "AlreadySvNormalized";
    case error_kind::ParseError: return "ParseError";
    case error_kind::NotUpperHalfPlane: return "NotUpperHalfPlane";
    case error_kind::BadWeight: return "BadWeight";
    case error_kind::BadWord: return "BadWord";
    case error_kind::TruncationInsufficient: return "TruncationInsufficient";
    case error_kind::CoincidentPoints: return "CoincidentPoints";
    case error_kind::SlowConvergence: return "SlowConvergence";
    case error_kind::DomainError: return "DomainError";
    case error_kind::InvalidGraph: return "InvalidGraph";
    case error_kind::CutoffTooSmall: return "CutoffTooSmall";
    case error_kind::QuadratureBudgetExceeded: return "QuadratureBudgetExceeded";
    case error_kind::Divergent: return "Divergent";
    case error_kind::BadOrder: return "BadOrder";
    case error_kind::IllConditioned: return "IllConditioned";
    case error_kind::StencilBudgetExceeded: return "StencilBudgetExceeded";
    case error_kind::Unsupported: return "Unsupported";
    }
    return "Unknown";
}

class error : public std::runtime_error {
public:
    error(error_kind k, const std::string& what)
        : std::runtime_error(std::string(kind_name(k)) + ": " + what), kind_(k) {}
    error_kind kind() const noexcept { return kind_; }
    const char* name() const noexcept { return kind_name(kind_); }
private:
    error_kind kind_;
};

// Working precision and truncation knobs.  Zero means "derive from digits".
struct PrecisionContext {
    int digits = 30;      // decimal digits of the working precision
    int cutoff = 64;      // lattice box half-width for lattice sums
    int qorder = 0;       // q-truncation order N; 0 = automatic
    int quad_level = 0;   // maximal tanh-sinh refinement level; 0 = automatic
    double ymin = 0;      // lower end of the fit window (0 = default per fit)
    double ymax = 0;      // upper end of the fit window (0 = default per fit)
    int samples = 0;      // fit sample count (0 = default per fit)
    int threads = 1;

    // Target for truncated sums: absolute error below 10^-(digits + guard).
    int guard = 5;

    static PrecisionContext from_env() {
        PrecisionContext c;
        if (const char* s = std::getenv("MGF_DIGITS")) {
            int d = std::atoi(s);
            if (d >= 10 && d <= 2000)
                c.digits = d;
        }
        return c;
    }
};

// Sets the mpfr default precision for the lifetime of the guard.  The library
// keeps one precision per computation; the guard restores the previous value.
class precision_guard {
public:
    explicit precision_guard(int digits) : old_(real::default_precision()) {
        real::default_precision(static_cast<unsigned>(digits));
    }
    ~precision_guard() { real::default_precision(old_); }
    precision_guard(const precision_guard&) = delete;
    precision_guard& operator=(const precision_guard&) = delete;
private:
    unsigned old_;
};

template <class Real>
inline int working_digits() {
    if constexpr (std::is_floating_point_v<Real>)
        return std::numeric_limits<Real>::digits10;
    else
        return static_cast<int>(Real::default_precision());
}

template <class Real>
inline Real epsilon_for(int digits) {
    return pow(Real(10), -digits);
}
template <>
inline double epsilon_for<double>(int digits) { return std::pow(10.0, -digits); }

template <class Real>
inline Real pi() {
    if constexpr (std::is_floating_point_v<Real>)
        return Real(3.14159265358979323846264338327950288L);
    else
        return boost::math::constants::pi<Real>();
}

template <class Real>
inline Real from_rational(const rational& q) {
    if constexpr (std::is_floating_point_v<Real>) {
        return static_cast<Real>(static_cast<long double>(numerator(q).convert_to<long double>()) /
                                 denominator(q).convert_to<long double>());
    } else {
        Real n(numerator(q).str());
        Real d(denominator(q).str());
        return n / d;
    }
}

// Exact Bernoulli numbers B_n (B_1 = -1/2), cached.
inline rational bernoulli_number(int n) {
    static std::mutex mu;
    static std::vector<rational> cache{rational(1)};
    std::lock_guard<std::mutex> lock(mu);
    while (static_cast<int>(cache.size()) <= n) {
        int m = static_cast<int>(cache.size());
        // sum_{k=0}^{m} C(m+1,k) B_k = 0
        rational s = 0;
        bigint c = 1;  // C(m+1, k)
        for (int k = 0; k < m; ++k) {
            s += rational(c) * cache[k];
            c = c * (m + 1 - k) / (k + 1);
        }
        cache.push_back(-s / rational(m + 1));
    }
    return cache[n];
}

inline bigint binomial(int n, int k) {
    if (k < 0 || k > n)
        return 0;
    bigint c = 1;
    for (int i = 0; i < k; ++i)
        c = c * (n - i) / (i + 1);
    return c;
}

inline bigint factorial(int n) {
    bigint f = 1;
    for (int i = 2; i <= n; ++i)
        f *= i;
    return f;
}

// Coefficients of the Bernoulli polynomial B_n(x) = sum_k C(n,k) B_{n-k} x^k.
inline std::vector<rational> bernoulli_poly_coeffs(int n) {
    std::vector<rational> c(n + 1);
    for (int k = 0; k <= n; ++k)
        c[k] = rational(binomial(n, k)) * bernoulli_number(n - k);
    return c;
}

template <class Real>
inline Real bernoulli_poly(int n, const Real& x) {
    auto c = bernoulli_poly_coeffs(n);
    Real acc = 0;
    for (int k = n; k >= 0; --k)
        acc = acc * x + from_rational<Real>(c[k]);
    return acc;
}

template <class Real>
inline Real frac(const Real& x) {
    using std::floor;
    return x - floor(x);
}

// e^mu - 1 for complex mu without cancellation near mu = 0.
template <class Real>
inline std::complex<Real> cexpm1(const std::complex<Real>& mu) {
    using std::cos; using std::exp; using std::expm1; using std::sin;
    Real a = mu.real(), b = mu.imag();
    Real em = expm1(a);
    Real sh = sin(b / 2);
    Real re = em * cos(b) - 2 * sh * sh;
    Real im = exp(a) * sin(b);
    return {re, im};
}

// log(1 - e^mu) for Re(mu) <= 0, principal branch, accurate both for mu near 0
// (where 1 - e^mu is small) and for Re(mu) very negative.
template <class Real>
inline std::complex<Real> log1m_exp(const std::complex<Real>& mu) {
    using std::abs; using std::atan2; using std::exp; using std::log; using std::log1p;
    using std::cos; using std::sin;
    if (mu.real() > Real(-0.5) && abs(mu.imag()) < Real(1)) {
        return std::log(-cexpm1(mu));
    }
    Real r = exp(mu.real());
    Real wr = r * cos(mu.imag()), wi = r * sin(mu.imag());
    Real mod2m1 = -2 * wr + r * r;  // |1-w|^2 - 1
    return {log1p(mod2m1) / 2, atan2(-wi, 1 - wr)};
}

template <class Real>
inline Real log1m_exp(const Real& mu) {
    using std::expm1; using std::log; using std::log1p; using std::exp;
    if (mu > Real(-0.7))
        return log(-expm1(mu));
    return log1p(-exp(mu));
}

// Smallest N with e^{-2 pi y N} below 10^{-(digits+guard)} for y = Im(tau).
inline int auto_qorder(double im_tau, int digits, int guard) {
    double need = (digits + guard) * std::log(10.0);
    int n = static_cast<int>(std::ceil(need / (2 * 3.141592653589793 * im_tau)));
    return n < 1 ? 1 : n;
}

template <class Real>
inline double to_double(const Real& x) {
    if constexpr (std::is_floating_point_v<Real>)
        return static_cast<double>(x);
    else
        return x.template convert_to<double>();
}

} // namespace mgf

#endif // MGF_CORE_HPP
