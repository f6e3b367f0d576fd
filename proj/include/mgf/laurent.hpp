#ifndef MGF_LAURENT_HPP
#define MGF_LAURENT_HPP

// Laurent polynomials over an arbitrary coefficient ring and the least-squares
// extraction of a numeric Laurent polynomial from samples of a function whose
// non-polynomial part is exponentially small on the sampling window.

#include "core.hpp"

#include <Eigen/Dense>
#include <boost/multiprecision/eigen.hpp>

#include <functional>

namespace mgf {

template <class Coef>
class LaurentPoly {
public:
    LaurentPoly() = default;
    explicit LaurentPoly(std::string var) : var_(std::move(var)) {}

    const std::string& variable() const { return var_; }
    void set_variable(std::string v) { var_ = std::move(v); }

    void set(int k, const Coef& c) { c_[k] = c; }
    Coef get(int k) const {
        auto it = c_.find(k);
        return it == c_.end() ? Coef{} : it->second;
    }
    bool has(int k) const { return c_.count(k) > 0; }
    const std::map<int, Coef>& terms() const { return c_; }

    int min_exponent() const { return c_.empty() ? 0 : c_.begin()->first; }
    int max_exponent() const { return c_.empty() ? 0 : c_.rbegin()->first; }

    template <class X>
    X eval(const X& x) const {
        X s{};
        for (const auto& [k, c] : c_) s += X(c) * pow(x, k);
        return s;
    }

private:
    std::string var_ = "y";
    std::map<int, Coef> c_;
};

struct LaurentFitReport {
    LaurentPoly<real> coefficients;
    real residual;    // max relative misfit over the samples
    real condition;   // 2-norm condition number of the column-scaled system
    double xmin = 0, xmax = 0;
    int samples = 0;
    int kmin = 0, kmax = 0;
};

// Sample abscissae whose reciprocals are Chebyshev points of [1/xmax, 1/xmin].
// Fitting in u = 1/x makes the system a polynomial fit in u, for which these
// nodes are the well-conditioned choice.
inline std::vector<real> reciprocal_chebyshev_nodes(const real& xmin, const real& xmax, int m) {
    std::vector<real> xs;
    real ua = 1 / xmax, ub = 1 / xmin;
    const real p = pi<real>();
    for (int i = 0; i < m; ++i) {
        real c = cos(p * (2 * i + 1) / (2 * m));
        real u = (ua + ub) / 2 + (ub - ua) / 2 * c;
        xs.push_back(1 / u);
    }
    std::sort(xs.begin(), xs.end());
    return xs;
}

// Least-squares fit of f(x) = sum_{k=kmin}^{kmax} a_k x^k.  Rows are divided
// by x^kmax and columns scaled to unit norm before a column-pivoted QR solve.
inline LaurentFitReport fit_laurent(const std::vector<real>& xs, const std::vector<real>& fs, int kmin, int kmax,
                                    const std::string& var, double max_condition = 1e40) {
    using Mat = Eigen::Matrix<real, Eigen::Dynamic, Eigen::Dynamic>;
    using Vec = Eigen::Matrix<real, Eigen::Dynamic, 1>;
    if (kmax < kmin) throw error(error_kind::BadOrder, "empty exponent range");
    const int m = static_cast<int>(xs.size());
    const int nc = kmax - kmin + 1;
    if (m < nc) throw error(error_kind::IllConditioned, "fewer samples than unknowns");
    Mat A(m, nc);
    Vec b(m);
    for (int i = 0; i < m; ++i) {
        real u = 1 / xs[i];
        real scale = pow(xs[i], kmax);
        b(i) = fs[i] / scale;
        real up = 1;
        // column j holds u^j, i.e. exponent kmax - j
        for (int j = 0; j < nc; ++j) {
            A(i, j) = up;
            up *= u;
        }
    }
    Vec cn(nc);
    for (int j = 0; j < nc; ++j) {
        real s = 0;
        for (int i = 0; i < m; ++i) s += A(i, j) * A(i, j);
        cn(j) = sqrt(s);
        for (int i = 0; i < m; ++i) A(i, j) /= cn(j);
    }
    Eigen::JacobiSVD<Mat> svd(A);
    const auto& sv = svd.singularValues();
    real cond = sv(nc - 1) > 0 ? real(sv(0) / sv(nc - 1)) : real(1e300);
    if (cond > max_condition)
        throw error(error_kind::IllConditioned, "Vandermonde condition " + std::to_string(to_double(cond)));
    Vec sol = A.colPivHouseholderQr().solve(b);
    LaurentFitReport rep;
    rep.coefficients = LaurentPoly<real>(var);
    for (int j = 0; j < nc; ++j) rep.coefficients.set(kmax - j, real(sol(j) / cn(j)));
    Vec r = A * sol - b;
    real res = 0;
    for (int i = 0; i < m; ++i) {
        real den = abs(b(i)) > 0 ? real(abs(b(i))) : real(1);
        res = std::max(res, real(abs(r(i)) / den));
    }
    rep.residual = res;
    rep.condition = cond;
    rep.xmin = to_double(*std::min_element(xs.begin(), xs.end()));
    rep.xmax = to_double(*std::max_element(xs.begin(), xs.end()));
    rep.samples = m;
    rep.kmin = kmin;
    rep.kmax = kmax;
    return rep;
}

} // namespace mgf

#endif // MGF_LAURENT_HPP
