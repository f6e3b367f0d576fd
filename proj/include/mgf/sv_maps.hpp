#ifndef MGF_SV_MAPS_HPP
#define MGF_SV_MAPS_HPP

// The esv map on B-cycle Laurent polynomials (zeta -> sv zeta, T -> -2y), the
// coefficientwise comparison with the modular-graph Laurent polynomial, and the
// genus-zero statement sv(Veneziano) = Virasoro.

#include "holo_graph.hpp"
#include "modular_graph.hpp"
#include "pslq.hpp"
#include "zeta_series.hpp"

#include <optional>
#include <set>

namespace mgf {

// ---------------------------------------------------------------------------
// Basis matching

namespace detail {

inline void odd_partitions(int w, int min_part, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
    if (w == 0) {
        out.push_back(cur);
        return;
    }
    for (int p = min_part; p <= w; p += 2) {
        cur.push_back(p);
        odd_partitions(w - p, p, cur, out);
        cur.pop_back();
    }
}

} // namespace detail

// Candidate basis of weight w: zeta(2)^a times products of odd Riemann zeta
// values, plus any caller-supplied depth >= 2 words (times zeta(2)^a and odd
// products) of weight <= w.  Up to weight 7 this spans the whole MZV space.
inline std::vector<ZetaExpr> weight_basis(int w, const std::vector<ZetaWord>& extra = {}) {
    std::vector<ZetaExpr> out;
    if (w < 0) return out;
    auto products = [&](int rest, const ZetaExpr& head) {
        for (int a = 0; 2 * a <= rest; ++a) {
            std::vector<std::vector<int>> parts;
            std::vector<int> cur;
            detail::odd_partitions(rest - 2 * a, 3, cur, parts);
            for (const auto& p : parts) {
                ZetaExpr e = head;
                for (int i = 0; i < a; ++i) e = e * ZetaExpr::zeta(2);
                for (int n : p) e = e * ZetaExpr::zeta(n);
                out.push_back(e);
            }
        }
    };
    products(w, ZetaExpr(1));
    for (const ZetaWord& x : extra)
        if (x.weight() <= w) products(w - x.weight(), ZetaExpr::zeta(x));
    return out;
}

struct BasisMatch {
    bool matched = false;
    ZetaExpr expr;
    real residual = 0;
    std::string how;  // "zero", "basis" or "candidate"
};

// Recognises value as a rational combination of the basis.  A relation is
// accepted only if it reproduces value to rel_tol, its leading coefficient
// (the common denominator) is <= max_den and its height stays well below the
// level where chance relations appear.
inline BasisMatch basis_match(const real& value, const std::vector<ZetaExpr>& basis, const PrecisionContext& ctx,
                              const real& rel_tol, long long max_den = 100000) {
    BasisMatch bm;
    real scale = std::max(real(1), real(abs(value)));
    if (abs(value) < rel_tol) {
        bm.matched = true;
        bm.residual = abs(value);
        bm.how = "zero";
        return bm;
    }
    if (basis.empty()) return bm;
    std::vector<real> x{value};
    for (const ZetaExpr& b : basis) x.push_back(expr_eval(b, ctx));
    // Random n+1 numbers admit relations of height about tol^{-1/(n+1)} at
    // tolerance tol; the height cap stays a factor 100 below that.
    double height = std::pow(to_double(rel_tol), -1.0 / static_cast<double>(x.size())) / 100;
    long long cap = static_cast<long long>(std::min<double>(height, static_cast<double>(max_den) * max_den));
    if (cap < 1) return bm;
    auto rel = pslq(x, rel_tol * scale, cap);
    if (!rel || rel->coeffs[0] == 0 || std::llabs(rel->coeffs[0]) > max_den) return bm;
    // boost::rational mishandles a negative built-in denominator, so the sign
    // goes into the numerator first
    const long long den = std::llabs(rel->coeffs[0]), sgn = rel->coeffs[0] < 0 ? 1 : -1;
    ZetaExpr e;
    for (size_t i = 1; i < x.size(); ++i)
        if (rel->coeffs[i]) e += basis[i - 1] * rational(sgn * rel->coeffs[i], den);
    real res = abs(expr_eval(e, ctx) - value);
    if (res > rel_tol * scale) return bm;
    bm.matched = true;
    bm.expr = e;
    bm.residual = res;
    bm.how = "basis";
    return bm;
}

// ---------------------------------------------------------------------------
// esv

// Coefficient of T^k becomes sv(b_k) (-2)^k at y^k.
inline ZetaLaurent esv_laurent(const ZetaLaurent& b, const SvTable& table) {
    ZetaLaurent out("y");
    for (const auto& [k, e] : b.terms()) {
        ZetaExpr img;
        try {
            img = e.sv_normalized() ? e : sv_rewrite(e, table);
        } catch (const error& err) {
            throw error(err.kind(), std::string(err.what()) + " (exponent " + std::to_string(k) + ")");
        }
        rational f = 1;
        for (int i = 0; i < std::abs(k); ++i) f *= -2;
        if (k < 0) f = 1 / f;
        img *= f;
        img.mark_sv_normalized();
        if (!img.is_zero()) out.set(k, img);
    }
    return out;
}

struct EsvRow {
    int k = 0;
    bool skipped = false;
    bool agree = false;
    std::string note;      // why skipped, or how b_k was matched
    real b_fit = 0, d_fit = 0;
    ZetaExpr b_matched;
    real sv_b = 0;         // sv(b_k), numeric
    real d_scaled = 0;     // (-2)^{-k} d_k
    real diff = 0;
};

struct EsvReport {
    std::vector<EsvRow> rows;
    std::vector<int> skipped;
    bool all_agree = true;          // over rows that were not skipped
    bool leading_ok = false;        // b_l = (-2)^{-l} d_l
    bool trailing_ok = false;       // b_{-l} / zeta(2l) rational
    double tol = 1e-6;
    int weight = 0;
    LaurentFitReport bfit, dfit;
};

struct EsvOptions {
    double tol = 1e-6;                  // relative agreement demanded per exponent
    std::vector<int> exponents;         // empty: every exponent in either support
    std::map<int, ZetaExpr> candidates; // supplied candidate values for b_k
    std::vector<ZetaWord> extra_words;  // depth >= 2 words added to the basis
    long long max_den = 100000;
};

namespace detail {

inline real relative_gap(const real& a, const real& b) {
    real s = std::max(real(abs(a)), real(abs(b)));
    return s > 0 ? real(abs(a - b) / s) : real(0);
}

inline bool proposition_leading(const LaurentFitReport& b, const LaurentFitReport& d, int l, double tol) {
    real bl = b.coefficients.get(l), dl = d.coefficients.get(l);
    return relative_gap(bl, dl / pow(real(-2), l)) < tol;
}

// b_{-l} is a rational multiple of zeta(2l); tested by continued fractions.
inline bool proposition_trailing(const LaurentFitReport& b, int l, const PrecisionContext& ctx, double tol,
                                 long long max_den) {
    real r = b.coefficients.get(-l) / zeta_value(2 * l, ctx);
    return rationalize(r, real(tol) * std::max(real(1), real(abs(r))), max_den).has_value();
}

} // namespace detail

// Compares already computed fits.  b_k is matched against the weight-graded
// basis first, then against a supplied candidate; exponents whose sv image
// needs a rule the table lacks are skipped.
inline EsvReport esv_compare(const LaurentFitReport& bfit, const LaurentFitReport& dfit, int l, const SvTable& table,
                             const PrecisionContext& ctx, const EsvOptions& opt = {}) {
    EsvReport rep;
    rep.tol = opt.tol;
    rep.weight = l;
    rep.bfit = bfit;
    rep.dfit = dfit;
    std::vector<int> ks = opt.exponents;
    if (ks.empty()) {
        std::set<int> all;
        for (const auto& [k, v] : bfit.coefficients.terms()) all.insert(k);
        for (const auto& [k, v] : dfit.coefficients.terms()) all.insert(k);
        ks.assign(all.begin(), all.end());
    }
    const real match_tol = pow(real(10), -(ctx.digits / 2));
    for (int k : ks) {
        EsvRow row;
        row.k = k;
        row.b_fit = bfit.coefficients.get(k);
        row.d_fit = dfit.coefficients.get(k);
        row.d_scaled = row.d_fit / pow(real(-2), k);
        // matching tolerance scales with the fit's own accuracy profile
        BasisMatch bm = basis_match(row.b_fit, weight_basis(l - k, opt.extra_words), ctx, match_tol, opt.max_den);
        if (!bm.matched) {
            auto it = opt.candidates.find(k);
            if (it != opt.candidates.end()) {
                real cv = expr_eval(it->second, ctx);
                if (detail::relative_gap(cv, row.b_fit) < opt.tol) {
                    bm.matched = true;
                    bm.expr = it->second;
                    bm.residual = abs(cv - row.b_fit);
                    bm.how = "candidate";
                }
            }
        }
        if (!bm.matched) {
            row.skipped = true;
            row.note = "no basis match";
            rep.skipped.push_back(k);
            rep.rows.push_back(row);
            continue;
        }
        row.b_matched = bm.expr;
        auto missing = missing_sv_rules(bm.expr, table);
        if (!missing.empty()) {
            row.skipped = true;
            row.note = "no sv rule for zeta(" + missing.front().str() + ")";
            rep.skipped.push_back(k);
            rep.rows.push_back(row);
            continue;
        }
        row.note = bm.how;
        row.sv_b = expr_eval(sv_rewrite(bm.expr, table), ctx);
        row.diff = abs(row.sv_b - row.d_scaled);
        // relative where the values are sizeable, absolute near zero
        real scale = std::max({real(abs(row.sv_b)), real(abs(row.d_scaled)), real(1e-300)});
        row.agree = row.diff <= opt.tol * (scale > 1e-12 ? scale : real(1));
        rep.all_agree = rep.all_agree && row.agree;
        rep.rows.push_back(row);
    }
    rep.leading_ok = detail::proposition_leading(bfit, dfit, l, opt.tol);
    rep.trailing_ok = detail::proposition_trailing(bfit, l, ctx, opt.tol, opt.max_den);
    return rep;
}

inline EsvReport esv_check(const MultiGraph& g, const PrecisionContext& ctx, const SvTable& table = SvTable{},
                           const EsvOptions& opt = {}) {
    LaurentFitReport b = laurent_fit_b(g, ctx);
    LaurentFitReport d = laurent_fit_d(g, ctx);
    return esv_compare(b, d, g.weight(), table, ctx, opt);
}

// ---------------------------------------------------------------------------
// Genus zero.  Both amplitudes are (s1+s2)/(s1 s2) F(s1, s2); the series
// returned here are the exponentials F through total degree `order`.

inline BiSeries veneziano_series(int order) {
    return zeta_power_sum(order, [](int n) { return rational(n % 2 ? -1 : 1); }).exp();
}

inline BiSeries virasoro_series(int order) {
    return zeta_power_sum(order, [](int n) { return rational(n % 2 ? -2 : 0); }).exp();
}

inline real genus0_value(const BiSeries& f, const real& s1, const real& s2, const PrecisionContext& ctx) {
    real acc = 0;
    for (const auto& [k, e] : f.terms()) acc += expr_eval(e, ctx) * pow(s1, k.first) * pow(s2, k.second);
    return (s1 + s2) / (s1 * s2) * acc;
}

struct Genus0Report {
    int order = 0;
    bool exact_equal = false;
    int mismatched = 0;         // coefficients where sv(Veneziano) != Virasoro
    real s1 = 0, s2 = 0;
    real series_value = 0;      // Veneziano series at (s1, s2)
    real beta_value = 0;        // Gamma(s1) Gamma(s2) / Gamma(s1 + s2)
    real beta_diff = 0;
};

inline Genus0Report genus0_sv_check(int order, const PrecisionContext& ctx, real s1 = real("-0.05"),
                                    real s2 = real("-0.07")) {
    Genus0Report r;
    r.order = order;
    SvTable table;
    BiSeries ven = veneziano_series(order), vir = virasoro_series(order);
    BiSeries img = ven.map([&](const ZetaExpr& e) { return sv_rewrite(e, table); });
    for (int a = 0; a <= order; ++a)
        for (int b = 0; a + b <= order; ++b)
            if (img.get(a, b) != vir.get(a, b)) ++r.mismatched;
    r.exact_equal = r.mismatched == 0;
    r.s1 = s1;
    r.s2 = s2;
    r.series_value = genus0_value(ven, s1, s2, ctx);
    r.beta_value = tgamma(s1) * tgamma(s2) / tgamma(s1 + s2);
    r.beta_diff = abs(r.series_value - r.beta_value);
    return r;
}

} // namespace mgf

#endif // MGF_SV_MAPS_HPP
