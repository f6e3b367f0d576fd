#ifndef MGF_QUADRATURE_HPP
#define MGF_QUADRATURE_HPP

// Double-exponential (tanh-sinh) quadrature on finite intervals, written for a
// run-time precision type.  Nodes are generated once per precision and shared.
// The complement 1 - |x| of every node is stored exactly so that endpoint
// singularities (the log^k behaviour of propagators at coincident points) are
// sampled without cancellation when the endpoint is 0.

#include "core.hpp"

#include <memory>

namespace mgf {

template <class Real>
class tanh_sinh {
public:
    struct node {
        Real c;  // distance of the node from the endpoint, in units of (b-a)/2
        Real w;  // weight (without the step h)
    };

    explicit tanh_sinh(int digits, int max_level = 0)
        : digits_(digits), max_level_(max_level > 0 ? max_level : 11) {
        table_ = shared_table(digits_, max_level_);
    }

    // Integrates f over [a,b].  tol is relative to the L1 norm of the integrand.
    // The estimate is the difference between the last two refinement levels.
    template <class F>
    auto integrate(F&& f, const Real& a, const Real& b, const Real& tol, Real* err = nullptr,
                   int* levels = nullptr) const {
        return integrate2([&](const Real& x, const Real&, const Real&) { return f(x); }, a, b, tol,
                          err, levels);
    }

    // As integrate, but f(x, x - a, b - x) also receives both endpoint
    // distances, each computed without cancellation.
    template <class F>
    auto integrate2(F&& f, const Real& a, const Real& b, const Real& tol, Real* err = nullptr,
                    int* levels = nullptr) const {
        using R = decltype(f(a, a, b));
        using std::abs;
        Real half = (b - a) / 2;
        const auto& lv = table_->levels;
        R sum = f(a + half, half, half);
        Real l1 = abs(sum) * Real(table_->w0);
        sum *= table_->w0;
        R prev{};
        Real h = 1;
        Real e = 0;
        int used = 0;
        for (int k = 0; k < static_cast<int>(lv.size()); ++k) {
            R s{};
            Real sl1 = 0;
            for (const node& nd : lv[k]) {
                Real dx = half * nd.c;
                Real xl = a + dx, xr = b - dx;
                if (!(xl > a) || !(xr < b) || dx == 0)
                    continue;
                Real far = 2 * half - dx;
                R fl = f(xl, dx, far), fr = f(xr, far, dx);
                s += (fl + fr) * nd.w;
                sl1 += (abs(fl) + abs(fr)) * nd.w;
            }
            if (k > 0)
                h /= 2;
            sum += s;
            l1 += sl1;
            R cur = sum * h * half;
            used = k;
            if (k >= 3) {
                e = abs(cur - prev);
                Real scale = l1 * h * abs(half);
                if (e <= tol * scale || e == 0) {
                    if (err) *err = e;
                    if (levels) *levels = k;
                    return cur;
                }
            }
            prev = cur;
        }
        if (err) *err = e;
        if (levels) *levels = used;
        R cur = sum * h * half;
        Real scale = l1 * h * abs(half);
        if (e > sqrt_tol(tol) * scale)
            throw error(error_kind::QuadratureBudgetExceeded,
                        "tanh-sinh did not converge within " + std::to_string(max_level_) +
                            " levels");
        return cur;
    }

    int digits() const { return digits_; }

private:
    struct table {
        Real w0;
        std::vector<std::vector<node>> levels;
    };

    static Real sqrt_tol(const Real& tol) {
        using std::sqrt;
        return sqrt(tol);
    }

    static std::shared_ptr<const table> shared_table(int digits, int max_level) {
        static std::mutex mu;
        static std::map<std::pair<int, int>, std::shared_ptr<const table>> cache;
        std::lock_guard<std::mutex> lock(mu);
        auto key = std::make_pair(digits, max_level);
        auto it = cache.find(key);
        if (it != cache.end())
            return it->second;
        auto t = std::make_shared<table>(build(digits, max_level));
        cache[key] = t;
        return t;
    }

    static table build(int digits, int max_level) {
        using std::asinh; using std::cosh; using std::exp; using std::sinh;
        table t;
        const Real p = pi<Real>();
        const Real halfpi = p / 2;
        // Endpoint distance below eps^1.5 is never needed, even for log^k terms.
        double lnc = 1.5 * (digits + 2) * std::log(10.0);
        if constexpr (std::is_floating_point_v<Real>)
            lnc = std::min(lnc, 700.0);
        Real umax = asinh(Real(lnc) / p);
        t.w0 = halfpi;  // weight at u = 0 (x = 0)
        t.levels.resize(max_level + 1);
        auto mk = [&](const Real& u) {
            Real v = halfpi * sinh(u);
            Real ev = exp(-2 * v);
            node nd;
            nd.c = 2 * ev / (1 + ev);
            Real ch = (1 + ev) / 2;  // cosh(v) e^{-v}
            nd.w = halfpi * cosh(u) * ev / (ch * ch);
            return nd;
        };
        for (int j = 1; Real(j) <= umax; ++j)
            t.levels[0].push_back(mk(Real(j)));
        Real h = 1;
        for (int k = 1; k <= max_level; ++k) {
            h /= 2;
            for (int j = 1;; j += 2) {
                Real u = h * j;
                if (u > umax)
                    break;
                t.levels[k].push_back(mk(u));
            }
        }
        return t;
    }

    int digits_;
    int max_level_;
    std::shared_ptr<const table> table_;
};

} // namespace mgf

#endif // MGF_QUADRATURE_HPP
