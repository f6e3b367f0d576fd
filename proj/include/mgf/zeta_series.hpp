#ifndef MGF_ZETA_SERIES_HPP
#define MGF_ZETA_SERIES_HPP

// Truncated bivariate power series with ZetaExpr coefficients.  Used for the
// genus-zero amplitudes and for the generating function of height-one MZVs,
//   sum_{m,n>=1} zeta(m+1, {1}^{n-1}) x^m y^n
//       = 1 - exp( sum_{k>=2} zeta(k) (x^k + y^k - (x+y)^k) / k ),
// (standard ordering, first argument on the largest summation variable),
// which rewrites every height-one MZV through Riemann zeta values.

#include "constants.hpp"

namespace mgf {

class BiSeries {
public:
    using key = std::pair<int, int>;

    explicit BiSeries(int order = 0) : order_(order) {}

    int order() const { return order_; }
    const std::map<key, ZetaExpr>& terms() const { return c_; }

    void add(int a, int b, const ZetaExpr& e) {
        if (a + b > order_ || e.is_zero()) return;
        c_[{a, b}] += e;
        if (c_[{a, b}].is_zero()) c_.erase({a, b});
    }

    ZetaExpr get(int a, int b) const {
        auto it = c_.find({a, b});
        return it == c_.end() ? ZetaExpr{} : it->second;
    }

    BiSeries& operator+=(const BiSeries& o) {
        for (const auto& [k, e] : o.c_) add(k.first, k.second, e);
        return *this;
    }

    friend BiSeries operator*(const BiSeries& a, const BiSeries& b) {
        BiSeries r(std::min(a.order_, b.order_));
        for (const auto& [ka, ea] : a.c_)
            for (const auto& [kb, eb] : b.c_)
                if (ka.first + kb.first + ka.second + kb.second <= r.order_)
                    r.add(ka.first + kb.first, ka.second + kb.second, ea * eb);
        return r;
    }

    BiSeries& operator*=(const rational& q) {
        for (auto& [k, e] : c_) e *= q;
        return *this;
    }

    // exp of a series without constant term
    BiSeries exp() const {
        if (c_.count({0, 0})) throw error(error_kind::DomainError, "exp of a series with constant term");
        BiSeries out(order_), pw(order_);
        out.add(0, 0, ZetaExpr(1));
        pw.add(0, 0, ZetaExpr(1));
        rational fact = 1;
        for (int k = 1; k <= order_; ++k) {
            pw = pw * (*this);
            fact *= k;
            BiSeries t = pw;
            t *= rational(1) / fact;
            out += t;
        }
        return out;
    }

    // Coefficient-wise map, e.g. sv.
    template <class F>
    BiSeries map(F&& f) const {
        BiSeries r(order_);
        for (const auto& [k, e] : c_) r.c_[k] = f(e);
        for (auto it = r.c_.begin(); it != r.c_.end();)
            it = it->second.is_zero() ? r.c_.erase(it) : std::next(it);
        return r;
    }

    bool operator==(const BiSeries& o) const { return order_ == o.order_ && c_ == o.c_; }

private:
    int order_;
    std::map<key, ZetaExpr> c_;
};

// sum_n coef(n) zeta(n)/n (x^n + y^n - (x+y)^n) over 2 <= n <= order
template <class Coef>
BiSeries zeta_power_sum(int order, Coef&& coef) {
    BiSeries s(order);
    for (int n = 2; n <= order; ++n) {
        rational c = coef(n);
        if (c == 0) continue;
        ZetaExpr z = ZetaExpr::zeta(n) * (c / rational(n));
        // x^n + y^n - (x+y)^n = - sum_{0<a<n} C(n,a) x^a y^{n-a}
        for (int a = 1; a < n; ++a) s.add(a, n - a, z * rational(-binomial(n, a)));
    }
    return s;
}

// zeta(m+1, {1}^{n-1}) in standard ordering, m, n >= 1, as a polynomial in
// Riemann zeta values.
inline ZetaExpr height_one_zeta(int m, int n) {
    if (m < 1 || n < 1) throw error(error_kind::InadmissibleWord, "height-one index out of range");
    static std::mutex mu;
    static std::map<int, BiSeries> cache;
    const int order = m + n;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.lower_bound(order);
    if (it == cache.end()) {
        BiSeries e = zeta_power_sum(order, [](int) { return rational(1); }).exp();
        it = cache.emplace(order, std::move(e)).first;
    }
    return -it->second.get(m, n);
}

} // namespace mgf

#endif // MGF_ZETA_SERIES_HPP
