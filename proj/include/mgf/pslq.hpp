#ifndef MGF_PSLQ_HPP
#define MGF_PSLQ_HPP

// Integer relation detection (PSLQ) and continued-fraction rationalization,
// both in the working mpfr precision.  Used to recognise numerically fitted
// Laurent coefficients as rational combinations of zeta products.

#include "core.hpp"

#include <optional>

namespace mgf {

struct IntegerRelation {
    std::vector<long long> coeffs;
    real residual;   // |sum c_i x_i|
};

// Finds integers c, not all zero, with |sum c_i x_i| < tol and max |c_i| <=
// max_coeff.  Returns nothing when the norm bound proves no such relation
// exists or the iteration budget runs out.
inline std::optional<IntegerRelation> pslq(const std::vector<real>& x, const real& tol, long long max_coeff,
                                           int max_iter = 20000) {
    const int n = static_cast<int>(x.size());
    if (n < 2) throw error(error_kind::DomainError, "pslq needs at least two numbers");
    for (int i = 0; i < n; ++i)
        if (abs(x[i]) < tol) {
            IntegerRelation r;
            r.coeffs.assign(n, 0);
            r.coeffs[i] = 1;
            r.residual = abs(x[i]);
            return r;
        }

    using Mat = std::vector<std::vector<real>>;
    const real gamma = sqrt(real(4) / 3);
    std::vector<real> s(n), y(n);
    real norm = 0;
    for (const real& v : x) norm += v * v;
    norm = sqrt(norm);
    for (int k = n - 1; k >= 0; --k) {
        real acc = 0;
        for (int j = k; j < n; ++j) acc += x[j] * x[j];
        s[k] = sqrt(acc) / norm;
    }
    for (int i = 0; i < n; ++i) y[i] = x[i] / norm;

    Mat H(n, std::vector<real>(n - 1, real(0)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n - 1; ++j) {
            if (i < j) continue;
            if (i == j)
                H[i][j] = s[j + 1] / s[j];
            else
                H[i][j] = -y[i] * y[j] / (s[j] * s[j + 1]);
        }
    Mat A(n, std::vector<real>(n, real(0))), B = A;
    for (int i = 0; i < n; ++i) A[i][i] = B[i][i] = 1;

    auto reduce = [&](int from) {
        for (int i = from; i < n; ++i)
            for (int j = std::min(i - 1, n - 2); j >= 0; --j) {
                if (H[j][j] == 0) continue;
                real t = round(H[i][j] / H[j][j]);
                if (t == 0) continue;
                y[j] += t * y[i];
                for (int k = 0; k <= j; ++k) H[i][k] -= t * H[j][k];
                for (int k = 0; k < n; ++k) {
                    A[i][k] -= t * A[j][k];
                    B[k][j] += t * B[k][i];
                }
            }
    };
    reduce(1);

    const real big = real(max_coeff);
    bool overflow = false;
    // a small entry of y marks a relation in the matching column of B
    auto found = [&]() -> std::optional<IntegerRelation> {
        for (int j = 0; j < n; ++j) {
            if (abs(y[j]) * norm > tol) continue;
            IntegerRelation r;
            real maxc = 0, res = 0;
            for (int k = 0; k < n; ++k) {
                maxc = std::max(maxc, real(abs(B[k][j])));
                res += B[k][j] * x[k];
            }
            if (maxc > big) {
                overflow = true;
                return std::nullopt;
            }
            for (int k = 0; k < n; ++k) r.coeffs.push_back(B[k][j].convert_to<long long>());
            r.residual = abs(res);
            return r;
        }
        return std::nullopt;
    };
    // the first reduction can already expose a relation
    if (auto r = found()) return *r;
    if (overflow) return std::nullopt;
    for (int iter = 0; iter < max_iter; ++iter) {
        int m = 0;
        real best = -1, gp = 1;
        for (int i = 0; i < n - 1; ++i) {
            gp *= gamma;
            real v = gp * abs(H[i][i]);
            if (v > best) {
                best = v;
                m = i;
            }
        }
        std::swap(y[m], y[m + 1]);
        std::swap(A[m], A[m + 1]);
        std::swap(H[m], H[m + 1]);
        for (int k = 0; k < n; ++k) std::swap(B[k][m], B[k][m + 1]);
        if (m < n - 2) {
            real t0 = sqrt(H[m][m] * H[m][m] + H[m][m + 1] * H[m][m + 1]);
            real t1 = H[m][m] / t0, t2 = H[m][m + 1] / t0;
            for (int i = m; i < n; ++i) {
                real t3 = H[i][m], t4 = H[i][m + 1];
                H[i][m] = t1 * t3 + t2 * t4;
                H[i][m + 1] = -t2 * t3 + t1 * t4;
            }
        }
        reduce(m + 1);

        if (auto r = found()) return *r;
        if (overflow) return std::nullopt;
        // any relation has norm >= 1 / max |H_jj|
        real hmax = 0;
        for (int j = 0; j < n - 1; ++j) hmax = std::max(hmax, real(abs(H[j][j])));
        if (hmax > 0 && 1 / hmax > big * sqrt(real(n))) return std::nullopt;
    }
    return std::nullopt;
}

// Best rational approximation p/q with q <= max_den and |x - p/q| <= tol.
inline std::optional<rational> rationalize(const real& x, const real& tol, long long max_den) {
    bigint p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    real r = x;
    for (int it = 0; it < 64; ++it) {
        real fl = floor(r);
        bigint a(fl.convert_to<long long>());
        bigint p2 = a * p1 + p0, q2 = a * q1 + q0;
        if (q2 > max_den) break;
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        real approx = from_rational<real>(rational(p1, q1));
        if (abs(x - approx) <= tol) return rational(p1, q1);
        real frac_part = r - fl;
        if (frac_part == 0) break;
        r = 1 / frac_part;
    }
    return std::nullopt;
}

} // namespace mgf

#endif // MGF_PSLQ_HPP
