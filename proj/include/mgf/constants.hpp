#ifndef MGF_CONSTANTS_HPP
#define MGF_CONSTANTS_HPP

// Multiple zeta values: symbolic expressions over Q and numeric evaluation.
//
// Convention: zeta(k_1,...,k_r) = sum over 0 < v_1 < ... < v_r of
// prod v_i^{-k_i}, admissible when k_r >= 2.  So zeta(3,5) is the sum with
// the larger summation variable carrying the exponent 5.
//
// Numerics use the Hoelder convolution at t = 1/2: the iterated-integral word
// of the MZV is split at 1/2, the upper piece is mapped back by t -> 1-t, and
// every piece becomes a multiple polylogarithm at 1/2, a nested sum whose
// terms decay like 2^-n.  The tail after N terms is bounded explicitly.

#include "core.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace mgf {

struct ZetaWord {
    std::vector<int> k;

    ZetaWord() = default;
    ZetaWord(std::initializer_list<int> l) : k(l) {}
    explicit ZetaWord(std::vector<int> v) : k(std::move(v)) {}

    int weight() const {
        int w = 0;
        for (int x : k) w += x;
        return w;
    }
    int depth() const { return static_cast<int>(k.size()); }
    bool admissible() const {
        if (k.empty()) return false;
        for (int x : k)
            if (x < 1) return false;
        return k.back() >= 2;
    }
    std::string str() const {
        std::string s;
        for (size_t i = 0; i < k.size(); ++i) {
            if (i) s += ",";
            s += std::to_string(k[i]);
        }
        return s;
    }
    bool operator<(const ZetaWord& o) const { return k < o.k; }
    bool operator==(const ZetaWord& o) const { return k == o.k; }
};

// A monomial is a sorted multiset of words; the empty monomial is 1.
using ZetaMonomial = std::vector<ZetaWord>;

inline int monomial_weight(const ZetaMonomial& m) {
    int w = 0;
    for (const auto& z : m) w += z.weight();
    return w;
}

inline std::string monomial_str(const ZetaMonomial& m) {
    std::string s;
    for (size_t i = 0; i < m.size(); ++i) {
        if (i) s += "*";
        if (m[i].depth() == 1)
            s += "z" + std::to_string(m[i].k[0]);
        else
            s += "z(" + m[i].str() + ")";
    }
    return s;
}

class ZetaExpr {
public:
    using map_type = std::map<ZetaMonomial, rational>;

    ZetaExpr() = default;
    ZetaExpr(const rational& q) { add(ZetaMonomial{}, q); }  // NOLINT: implicit on purpose
    ZetaExpr(int q) : ZetaExpr(rational(q)) {}                 // NOLINT

    static ZetaExpr zeta(const ZetaWord& w, const rational& c = 1) {
        if (!w.admissible())
            throw error(error_kind::InadmissibleWord, "zeta(" + w.str() + ")");
        ZetaExpr e;
        e.add(ZetaMonomial{w}, c);
        return e;
    }
    static ZetaExpr zeta(int n) { return zeta(ZetaWord{n}); }

    void add(ZetaMonomial m, const rational& c) {
        if (c == 0) return;
        std::sort(m.begin(), m.end());
        auto it = terms_.find(m);
        if (it == terms_.end()) {
            terms_.emplace(std::move(m), c);
        } else {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    const map_type& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool sv_normalized() const { return sv_normalized_; }
    void mark_sv_normalized() { sv_normalized_ = true; }

    rational coefficient(const ZetaMonomial& m) const {
        ZetaMonomial s = m;
        std::sort(s.begin(), s.end());
        auto it = terms_.find(s);
        return it == terms_.end() ? rational(0) : it->second;
    }

    // Part of given weight.
    ZetaExpr weight_part(int w) const {
        ZetaExpr e;
        for (const auto& [m, c] : terms_)
            if (monomial_weight(m) == w) e.terms_.emplace(m, c);
        e.sv_normalized_ = sv_normalized_;
        return e;
    }

    ZetaExpr& operator+=(const ZetaExpr& o) {
        for (const auto& [m, c] : o.terms_) add(m, c);
        sv_normalized_ = sv_normalized_ && o.sv_normalized_;
        return *this;
    }
    ZetaExpr& operator-=(const ZetaExpr& o) {
        for (const auto& [m, c] : o.terms_) add(m, -c);
        sv_normalized_ = sv_normalized_ && o.sv_normalized_;
        return *this;
    }
    ZetaExpr& operator*=(const rational& q) {
        if (q == 0) {
            terms_.clear();
            return *this;
        }
        for (auto& [m, c] : terms_) c *= q;
        return *this;
    }
    friend ZetaExpr operator+(ZetaExpr a, const ZetaExpr& b) { return a += b; }
    friend ZetaExpr operator-(ZetaExpr a, const ZetaExpr& b) { return a -= b; }
    friend ZetaExpr operator-(ZetaExpr a) { return a *= rational(-1); }
    friend ZetaExpr operator*(ZetaExpr a, const rational& q) { return a *= q; }
    friend ZetaExpr operator*(const rational& q, ZetaExpr a) { return a *= q; }
    friend ZetaExpr operator*(const ZetaExpr& a, const ZetaExpr& b) {
        ZetaExpr r;
        for (const auto& [ma, ca] : a.terms_)
            for (const auto& [mb, cb] : b.terms_) {
                ZetaMonomial m = ma;
                m.insert(m.end(), mb.begin(), mb.end());
                r.add(std::move(m), ca * cb);
            }
        r.sv_normalized_ = a.sv_normalized_ && b.sv_normalized_;
        return r;
    }
    ZetaExpr& operator*=(const ZetaExpr& o) { return *this = *this * o; }
    bool operator==(const ZetaExpr& o) const { return terms_ == o.terms_; }
    bool operator!=(const ZetaExpr& o) const { return !(*this == o); }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::string s;
        bool first = true;
        for (const auto& [m, c] : terms_) {
            rational a = c;
            if (!first) {
                s += a < 0 ? " - " : " + ";
                if (a < 0) a = -a;
            } else if (a < 0) {
                s += "-";
                a = -a;
            }
            first = false;
            if (m.empty()) {
                s += a.str();
            } else {
                if (a != 1) s += a.str() + "*";
                s += monomial_str(m);
            }
        }
        return s;
    }

private:
    map_type terms_;
    bool sv_normalized_ = false;
};

// ---------------------------------------------------------------------------
// Numeric MZVs

namespace detail {

// Multiple polylogarithm at 1/2 with the standard ordering:
//   Li_{s_1..s_k}(1/2) = sum_{n_1 > ... > n_k >= 1} 2^{-n_1} / (n_1^{s_1} ... n_k^{s_k}).
// Returns the value and a rigorous bound on the truncation error.
inline real multi_li_half(const std::vector<int>& s, int nterms, real* tail) {
    const int k = static_cast<int>(s.size());
    if (k == 0) {
        if (tail) *tail = 0;
        return real(1);
    }
    // inner[j](n) = sum over n > n_{j+1} > ... of the inner factors;
    // processed from the innermost index outward with running prefix sums.
    std::vector<real> acc(nterms + 1, real(0));
    // innermost: a_k(n) = 1/n^{s_k}; prefix P(n) = sum_{m<n} a(m)
    std::vector<real> cur(nterms + 1);
    for (int n = 1; n <= nterms; ++n)
        cur[n] = pow(real(n), -s[k - 1]);
    for (int j = k - 2; j >= 0; --j) {
        real run = 0;
        std::vector<real> nxt(nterms + 1, real(0));
        for (int n = 1; n <= nterms; ++n) {
            nxt[n] = run * pow(real(n), -s[j]);
            run += cur[n];
        }
        cur.swap(nxt);
    }
    real sum = 0, p2 = 1;
    for (int n = 1; n <= nterms; ++n) {
        p2 /= 2;
        sum += cur[n] * p2;
    }
    if (tail) {
        // Each inner nested sum is at most H_n^{k-1} <= (1 + log n)^{k-1}, and
        // the n-th outer term is then below 2^-n (1+log n)^{k-1}; the ratio of
        // consecutive bounds is < 2/3 for n > N >= 8, hence the factor 3.
        real N(nterms + 1);
        *tail = 3 * pow(real(2), -(nterms + 1)) * pow(1 + log(N), k - 1);
    }
    return sum;
}

// Word in letters 0 (dt/t) and 1 (dt/(1-t)), outermost letter first, to
// polylog indices; returns false if the word does not end in letter 1.
inline bool word_to_indices(const std::vector<int>& w, std::vector<int>& s) {
    s.clear();
    int run = 0;
    for (int letter : w) {
        if (letter == 0) {
            ++run;
        } else {
            s.push_back(run + 1);
            run = 0;
        }
    }
    return run == 0;
}

} // namespace detail

// Value of zeta(word) to ctx digits, with certified truncation error.
inline real mzv_value(const ZetaWord& word, const PrecisionContext& ctx, real* error_bound = nullptr) {
    if (!word.admissible())
        throw error(error_kind::InadmissibleWord, "zeta(" + word.str() + ") has last index 1 or is empty");
    if (ctx.digits > 5000)
        throw error(error_kind::PrecisionUnreachable, "requested " + std::to_string(ctx.digits) + " digits");

    static std::mutex mu;
    static std::map<std::pair<std::vector<int>, int>, std::pair<real, real>> cache;
    const unsigned prec = real::default_precision();
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find({word.k, static_cast<int>(prec)});
        if (it != cache.end() && static_cast<int>(prec) >= ctx.digits) {
            if (error_bound) *error_bound = it->second.second;
            return it->second.first;
        }
    }
    precision_guard pg(std::max<int>(prec, ctx.digits) + 10);

    // standard ordering s_1 = k_r (outermost, largest variable)
    std::vector<int> s(word.k.rbegin(), word.k.rend());
    std::vector<int> letters;
    for (int si : s) {
        for (int j = 0; j < si - 1; ++j) letters.push_back(0);
        letters.push_back(1);
    }
    const int n = static_cast<int>(letters.size());
    const int target = ctx.digits + ctx.guard;
    int nterms = static_cast<int>(std::ceil((target + 2) * std::log2(10.0))) + 8 * word.depth() + 16;

    // The tail bound of deep pieces carries a factor (1 + log N)^(depth - 1);
    // terms are added until the bound certifies the target.
    real total = 0, bound = 0;
    for (int attempt = 0; attempt < 6; ++attempt) {
        total = 0;
        bound = 0;
        for (int j = 0; j <= n; ++j) {
            // upper piece: letters[0..j) on [1/2,1] -> reversed dual on [0,1/2]
            std::vector<int> up;
            for (int i = j - 1; i >= 0; --i) up.push_back(1 - letters[i]);
            std::vector<int> lo(letters.begin() + j, letters.end());
            std::vector<int> su, sl;
            bool okup = detail::word_to_indices(up, su);
            bool oklo = detail::word_to_indices(lo, sl);
            if (!okup || !oklo)
                throw error(error_kind::PrecisionUnreachable, "internal: divergent piece in zeta(" + word.str() + ")");
            real tu, tl;
            real vu = detail::multi_li_half(su, nterms, &tu);
            real vl = detail::multi_li_half(sl, nterms, &tl);
            total += vu * vl;
            bound += abs(vu) * tl + abs(vl) * tu + tu * tl;
        }
        if (bound <= pow(real(10), -target)) break;
        double excess = to_double(log10(bound)) + target;
        nterms += static_cast<int>(std::ceil((excess + 1) * std::log2(10.0))) + 8;
    }
    if (bound > pow(real(10), -target))
        throw error(error_kind::PrecisionUnreachable, "tail bound for zeta(" + word.str() + ") not certified");
    {
        std::lock_guard<std::mutex> lock(mu);
        cache[{word.k, static_cast<int>(prec)}] = {total, bound};
    }
    if (error_bound) *error_bound = bound;
    return total;
}

inline real zeta_value(int n, const PrecisionContext& ctx) { return mzv_value(ZetaWord{n}, ctx); }

inline real expr_eval(const ZetaExpr& e, const PrecisionContext& ctx) {
    real s = 0;
    for (const auto& [m, c] : e.terms()) {
        real t = from_rational<real>(c);
        for (const auto& w : m) t *= mzv_value(w, ctx);
        s += t;
    }
    return s;
}

// ---------------------------------------------------------------------------
// The single-valued map

class SvTable {
public:
    // Depth-one rules are implicit: zeta(2k) -> 0, zeta(2k+1) -> 2 zeta(2k+1).
    bool has_rule(const ZetaWord& w) const { return w.depth() == 1 || rules_.count(w) > 0; }

    ZetaExpr image(const ZetaWord& w) const {
        if (w.depth() == 1) {
            int n = w.k[0];
            if (n % 2 == 0) return ZetaExpr{};
            return ZetaExpr::zeta(w, 2);
        }
        auto it = rules_.find(w);
        if (it == rules_.end())
            throw error(error_kind::NoSvRule, "zeta(" + w.str() + ")");
        return it->second;
    }

    void add_rule(const ZetaWord& w, const ZetaExpr& img) {
        if (!w.admissible())
            throw error(error_kind::InadmissibleWord, "rule for zeta(" + w.str() + ")");
        if (w.depth() == 1)
            throw error(error_kind::ParseError, "depth-one rules are built in: zeta(" + w.str() + ")");
        rules_[w] = img;
    }

    size_t size() const { return rules_.size(); }

    // Grammar, one rule per line ('#' starts a comment):
    //   rule  := word "->" combo
    //   word  := int ("," int)*
    //   combo := term (("+"|"-") term)*
    //   term  := [rational "*"] factor ("*" factor)*  |  rational
    //   factor:= "z" int  |  "z(" word ")"
    static SvTable parse(std::istream& in) {
        SvTable t;
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
            auto arrow = line.find("->");
            if (arrow == std::string::npos)
                throw error(error_kind::ParseError, "line " + std::to_string(lineno) + ": missing '->'");
            ZetaWord w = parse_word(line.substr(0, arrow), lineno);
            ZetaExpr e = parse_combo(line.substr(arrow + 2), lineno);
            if (t.rules_.count(w))
                throw error(error_kind::ParseError,
                            "line " + std::to_string(lineno) + ": second rule for zeta(" + w.str() + ")");
            t.add_rule(w, e);
        }
        return t;
    }
    static SvTable load(const std::string& path) {
        std::ifstream f(path);
        if (!f) throw error(error_kind::ParseError, "cannot open " + path);
        return parse(f);
    }

    static ZetaWord parse_word(const std::string& s, int lineno = 0) {
        std::vector<int> k;
        std::stringstream ss(s);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            auto b = tok.find_first_not_of(" \t");
            auto e = tok.find_last_not_of(" \t\r");
            if (b == std::string::npos)
                throw error(error_kind::ParseError, "line " + std::to_string(lineno) + ": empty index");
            tok = tok.substr(b, e - b + 1);
            for (char c : tok)
                if (!std::isdigit(static_cast<unsigned char>(c)))
                    throw error(error_kind::ParseError, "line " + std::to_string(lineno) + ": bad index '" + tok + "'");
            k.push_back(std::stoi(tok));
        }
        ZetaWord w(k);
        if (!w.admissible())
            throw error(error_kind::InadmissibleWord, "line " + std::to_string(lineno) + ": zeta(" + w.str() + ")");
        return w;
    }

    static ZetaExpr parse_combo(const std::string& src, int lineno = 0) {
        std::string s;
        for (char c : src)
            if (!std::isspace(static_cast<unsigned char>(c))) s += c;
        auto fail = [&](const std::string& why) {
            return error(error_kind::ParseError, "line " + std::to_string(lineno) + ": " + why + " in '" + src + "'");
        };
        ZetaExpr out;
        size_t i = 0;
        if (s.empty()) throw fail("empty right-hand side");
        if (s == "0") return out;
        while (i < s.size()) {
            int sign = 1;
            if (s[i] == '+' || s[i] == '-') {
                if (s[i] == '-') sign = -1;
                ++i;
            } else if (i != 0) {
                throw fail("expected sign");
            }
            rational coef = 1;
            ZetaMonomial mono;
            bool any = false;
            while (i < s.size() && s[i] != '+' && s[i] != '-') {
                if (s[i] == '*') {
                    ++i;
                    continue;
                }
                if (std::isdigit(static_cast<unsigned char>(s[i]))) {
                    size_t j = i;
                    while (j < s.size() && (std::isdigit(static_cast<unsigned char>(s[j])) || s[j] == '/')) ++j;
                    std::string q = s.substr(i, j - i);
                    auto slash = q.find('/');
                    if (slash == std::string::npos)
                        coef *= rational(bigint(q));
                    else
                        coef *= rational(bigint(q.substr(0, slash)), bigint(q.substr(slash + 1)));
                    i = j;
                    any = true;
                } else if (s[i] == 'z') {
                    ++i;
                    if (i < s.size() && s[i] == '(') {
                        auto close = s.find(')', i);
                        if (close == std::string::npos) throw fail("unclosed z(");
                        mono.push_back(parse_word(s.substr(i + 1, close - i - 1), lineno));
                        i = close + 1;
                    } else {
                        size_t j = i;
                        while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
                        if (j == i) throw fail("z without index");
                        ZetaWord w{std::stoi(s.substr(i, j - i))};
                        if (!w.admissible()) throw error(error_kind::InadmissibleWord, "z1");
                        mono.push_back(w);
                        i = j;
                    }
                    any = true;
                } else {
                    throw fail(std::string("unexpected '") + s[i] + "'");
                }
            }
            if (!any) throw fail("empty term");
            out.add(mono, coef * sign);
        }
        return out;
    }

private:
    std::map<ZetaWord, ZetaExpr> rules_;
};

// Applies sv monomial by monomial.  The result is marked sv-normalized: the
// depth-one image 2 zeta(2k+1) is itself a zeta word, so a second application
// would double it again, and is refused.
inline ZetaExpr sv_rewrite(const ZetaExpr& e, const SvTable& table) {
    if (e.sv_normalized())
        throw error(error_kind::AlreadySvNormalized, "expression is already an sv image: " + e.str());
    ZetaExpr out;
    for (const auto& [m, c] : e.terms()) {
        ZetaExpr t(c);
        for (const auto& w : m) {
            t = t * table.image(w);
            if (t.is_zero()) break;
        }
        out += t;
    }
    out.mark_sv_normalized();
    return out;
}

// Words occurring in e for which the table has no rule.
inline std::vector<ZetaWord> missing_sv_rules(const ZetaExpr& e, const SvTable& table) {
    std::vector<ZetaWord> miss;
    for (const auto& [m, c] : e.terms())
        for (const auto& w : m)
            if (!table.has_rule(w) && std::find(miss.begin(), miss.end(), w) == miss.end())
                miss.push_back(w);
    return miss;
}

} // namespace mgf

#endif // MGF_CONSTANTS_HPP
