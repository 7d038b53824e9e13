/**
 * @file scalar.hpp
 * @brief Exact coefficient field: fractions of finitely supported sums of
 *        formal powers q^e.
 *
 * An exponent is a vector (r0, r1, ..., rs) of rationals. Coordinate 0 is the
 * ordinary rational power of q; coordinates 1..s multiply declared formal
 * transcendentals, so q^(r0 + r1*x1) is how an irrational entry of an
 * alternating form shows up in a q-power. q itself is never evaluated;
 * q^e == 1 exactly when e == 0.
 *
 * Normal form of a Scalar num/den:
 *   - a monomial denominator is absorbed into the numerator (den == 1);
 *   - in the univariate case (no formal coordinates present) num and den are
 *     reduced by their polynomial gcd in t = q^(1/D);
 *   - the denominator is centred (max and min exponent symmetric about 0 in
 *     every coordinate) and its lex-highest coefficient is 1.
 * Equality always uses cross-multiplication, so an incomplete reduction in the
 * multivariate case never changes a comparison.
 */

#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "qmpg/rational.hpp"

namespace qmpg {

/// Coordinate 0 plus up to three formal symbols.
inline constexpr std::size_t kExpDim = 4;

struct ExponentVec {
    std::array<Rat, kExpDim> c{};

    ExponentVec() = default;
    explicit ExponentVec(Rat r0) { c[0] = r0; }

    static ExponentVec symbol(std::size_t k, Rat coeff = Rat(1)) {
        if (k == 0 || k >= kExpDim) throw std::out_of_range("formal symbol index out of range");
        ExponentVec e;
        e.c[k] = coeff;
        return e;
    }

    [[nodiscard]] bool is_zero() const {
        for (const auto& x : c)
            if (!x.is_zero()) return false;
        return true;
    }
    /// True when only coordinate 0 may be nonzero.
    [[nodiscard]] bool is_rational() const {
        for (std::size_t k = 1; k < kExpDim; ++k)
            if (!c[k].is_zero()) return false;
        return true;
    }
    [[nodiscard]] Rat rational_part() const { return c[0]; }

    ExponentVec operator-() const {
        ExponentVec r;
        for (std::size_t k = 0; k < kExpDim; ++k) r.c[k] = -c[k];
        return r;
    }
    friend ExponentVec operator+(const ExponentVec& a, const ExponentVec& b) {
        ExponentVec r;
        for (std::size_t k = 0; k < kExpDim; ++k) r.c[k] = a.c[k] + b.c[k];
        return r;
    }
    friend ExponentVec operator-(const ExponentVec& a, const ExponentVec& b) { return a + (-b); }
    friend ExponentVec operator*(const Rat& s, const ExponentVec& a) {
        ExponentVec r;
        for (std::size_t k = 0; k < kExpDim; ++k) r.c[k] = s * a.c[k];
        return r;
    }
    ExponentVec& operator+=(const ExponentVec& o) { return *this = *this + o; }
    ExponentVec& operator-=(const ExponentVec& o) { return *this = *this - o; }

    friend bool operator==(const ExponentVec&, const ExponentVec&) = default;
    friend auto operator<=>(const ExponentVec& a, const ExponentVec& b) {
        for (std::size_t k = 0; k < kExpDim; ++k) {
            if (auto cmp = a.c[k] <=> b.c[k]; cmp != 0) return cmp;
        }
        return std::strong_ordering::equal;
    }
};

/// A linear form r0 + sum rk*xk; same storage as an exponent.
using LinExp = ExponentVec;

struct ExponentVecHash {
    std::size_t operator()(const ExponentVec& e) const {
        std::size_t h = 0;
        for (const auto& x : e.c) {
            h = hash_combine(h, std::hash<std::int64_t>{}(x.num()));
            h = hash_combine(h, std::hash<std::int64_t>{}(x.den()));
        }
        return h;
    }
};

inline const std::vector<std::string>& default_symbol_names() {
    static const std::vector<std::string> names{"x1", "x2", "x3"};
    return names;
}

/// Renders r0 + r1*x1 + ... ; "0" for the zero form.
inline std::string render_linexp(const LinExp& e, std::span<const std::string> names = default_symbol_names()) {
    std::string s;
    if (!e.c[0].is_zero()) s = e.c[0].str();
    for (std::size_t k = 1; k < kExpDim; ++k) {
        const Rat r = e.c[k];
        if (r.is_zero()) continue;
        const std::string name = k - 1 < names.size() ? names[k - 1] : "x" + std::to_string(k);
        std::string t;
        if (r == Rat(1)) t = name;
        else if (r == Rat(-1)) t = "-" + name;
        else t = r.str() + "*" + name;
        if (!s.empty() && t[0] != '-') s += "+";
        s += t;
    }
    return s.empty() ? "0" : s;
}

/// Finitely supported map exponent -> nonzero rational, sorted ascending.
class QPoly {
public:
    struct Term {
        ExponentVec e;
        mpq_class c;
    };

    QPoly() = default;
    explicit QPoly(const mpq_class& c) {
        if (c != 0) terms_.push_back({ExponentVec{}, c});
    }
    static QPoly monomial(const ExponentVec& e, const mpq_class& c = 1) {
        QPoly p;
        if (c != 0) p.terms_.push_back({e, c});
        return p;
    }

    [[nodiscard]] const std::vector<Term>& terms() const { return terms_; }
    [[nodiscard]] bool is_zero() const { return terms_.empty(); }
    [[nodiscard]] std::size_t size() const { return terms_.size(); }
    [[nodiscard]] bool is_monomial() const { return terms_.size() == 1; }
    [[nodiscard]] bool is_one() const {
        return terms_.size() == 1 && terms_[0].e.is_zero() && terms_[0].c == 1;
    }
    [[nodiscard]] bool is_univariate() const {
        for (const auto& t : terms_)
            if (!t.e.is_rational()) return false;
        return true;
    }
    [[nodiscard]] const Term& leading() const { return terms_.back(); }

    friend QPoly operator+(const QPoly& a, const QPoly& b) {
        QPoly r;
        r.terms_.reserve(a.terms_.size() + b.terms_.size());
        std::size_t i = 0, j = 0;
        while (i < a.terms_.size() || j < b.terms_.size()) {
            if (j == b.terms_.size() || (i < a.terms_.size() && a.terms_[i].e < b.terms_[j].e)) {
                r.terms_.push_back(a.terms_[i++]);
            } else if (i == a.terms_.size() || b.terms_[j].e < a.terms_[i].e) {
                r.terms_.push_back(b.terms_[j++]);
            } else {
                mpq_class s = a.terms_[i].c + b.terms_[j].c;
                if (s != 0) r.terms_.push_back({a.terms_[i].e, std::move(s)});
                ++i;
                ++j;
            }
        }
        return r;
    }
    QPoly operator-() const {
        QPoly r = *this;
        for (auto& t : r.terms_) t.c = -t.c;
        return r;
    }
    friend QPoly operator-(const QPoly& a, const QPoly& b) { return a + (-b); }

    friend QPoly operator*(const QPoly& a, const QPoly& b) {
        if (a.is_zero() || b.is_zero()) return {};
        if (a.terms_.size() == 1) return b.mul_term(a.terms_[0].e, a.terms_[0].c);
        if (b.terms_.size() == 1) return a.mul_term(b.terms_[0].e, b.terms_[0].c);
        std::vector<Term> raw;
        raw.reserve(a.terms_.size() * b.terms_.size());
        for (const auto& x : a.terms_)
            for (const auto& y : b.terms_) raw.push_back({x.e + y.e, x.c * y.c});
        return from_unsorted(std::move(raw));
    }

    [[nodiscard]] QPoly mul_term(const ExponentVec& e, const mpq_class& c) const {
        QPoly r;
        if (c == 0) return r;
        r.terms_.reserve(terms_.size());
        for (const auto& t : terms_) r.terms_.push_back({t.e + e, t.c * c});
        return r;
    }

    static QPoly from_unsorted(std::vector<Term> raw) {
        std::sort(raw.begin(), raw.end(), [](const Term& x, const Term& y) { return x.e < y.e; });
        QPoly r;
        for (auto& t : raw) {
            if (!r.terms_.empty() && r.terms_.back().e == t.e) {
                r.terms_.back().c += t.c;
                if (r.terms_.back().c == 0) r.terms_.pop_back();
            } else if (t.c != 0) {
                r.terms_.push_back(std::move(t));
            }
        }
        return r;
    }

    friend bool operator==(const QPoly& a, const QPoly& b) {
        if (a.terms_.size() != b.terms_.size()) return false;
        for (std::size_t i = 0; i < a.terms_.size(); ++i)
            if (a.terms_[i].e != b.terms_[i].e || a.terms_[i].c != b.terms_[i].c) return false;
        return true;
    }

    /// Terms in descending exponent order, e.g. "q^2+1+q^-2".
    [[nodiscard]] std::string str(std::span<const std::string> names = default_symbol_names()) const {
        if (terms_.empty()) return "0";
        std::string s;
        for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
            std::string t = render_term(*it, names);
            if (!s.empty() && t[0] != '-') s += "+";
            s += t;
        }
        return s;
    }

    static std::string render_monomial(const ExponentVec& e, std::span<const std::string> names) {
        if (e.is_zero()) return "";
        if (e.is_rational()) {
            const Rat r = e.c[0];
            if (r == Rat(1)) return "q";
            if (r.is_integer()) return "q^" + r.str();
            return "q^(" + r.str() + ")";
        }
        return "q^(" + render_linexp(e, names) + ")";
    }

private:
    static std::string render_term(const Term& t, std::span<const std::string> names) {
        const std::string m = render_monomial(t.e, names);
        if (m.empty()) return t.c.get_str();
        if (t.c == 1) return m;
        if (t.c == -1) return "-" + m;
        return t.c.get_str() + "*" + m;
    }

    std::vector<Term> terms_;
};

namespace detail {

using Dense = std::vector<mpq_class>;  // coefficient k multiplies t^k

inline void trim(Dense& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

inline Dense poly_mod(Dense a, const Dense& b) {
    trim(a);
    const std::size_t db = b.size() - 1;
    while (a.size() >= b.size()) {
        const mpq_class f = a.back() / b.back();
        const std::size_t shift = a.size() - 1 - db;
        for (std::size_t i = 0; i <= db; ++i) a[shift + i] -= f * b[i];
        a.pop_back();
        trim(a);
    }
    return a;
}

inline Dense poly_div_exact(Dense a, const Dense& b) {
    trim(a);
    if (a.size() < b.size()) return {};
    Dense q(a.size() - b.size() + 1);
    const std::size_t db = b.size() - 1;
    while (!a.empty() && a.size() >= b.size()) {
        const mpq_class f = a.back() / b.back();
        const std::size_t shift = a.size() - 1 - db;
        q[shift] = f;
        for (std::size_t i = 0; i <= db; ++i) a[shift + i] -= f * b[i];
        a.pop_back();
        trim(a);
    }
    return q;
}

inline Dense poly_gcd(Dense a, Dense b) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        Dense r = poly_mod(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty()) {
        const mpq_class lc = a.back();
        for (auto& x : a) x /= lc;
    }
    return a;
}

}  // namespace detail

/// Element of the fraction field of QPoly.
class Scalar {
public:
    Scalar() : den_(mpq_class(1)) {}
    Scalar(int v) : num_(mpq_class(v)), den_(mpq_class(1)) {}  // NOLINT(google-explicit-constructor)
    Scalar(const mpq_class& v) : num_(v), den_(mpq_class(1)) {}  // NOLINT(google-explicit-constructor)
    explicit Scalar(const Rat& r) : num_(r.to_mpq()), den_(mpq_class(1)) {}
    explicit Scalar(QPoly p) : num_(std::move(p)), den_(mpq_class(1)) {}
    Scalar(QPoly num, QPoly den) : num_(std::move(num)), den_(std::move(den)) {
        if (den_.is_zero()) throw std::domain_error("Scalar: zero denominator");
        normalize();
    }

    [[nodiscard]] const QPoly& num() const { return num_; }
    [[nodiscard]] const QPoly& den() const { return den_; }
    [[nodiscard]] bool is_zero() const { return num_.is_zero(); }
    [[nodiscard]] bool is_one() const { return den_.is_one() && num_.is_one(); }
    [[nodiscard]] bool is_laurent() const { return den_.is_one(); }

    /// Exponent of a monomial c*q^e; throws otherwise.
    [[nodiscard]] std::pair<mpq_class, ExponentVec> as_monomial() const {
        if (!den_.is_one() || !num_.is_monomial()) throw std::logic_error("Scalar is not a monomial");
        return {num_.terms()[0].c, num_.terms()[0].e};
    }
    [[nodiscard]] bool is_monomial() const { return den_.is_one() && num_.is_monomial(); }

    Scalar operator-() const {
        Scalar r = *this;
        r.num_ = -r.num_;
        return r;
    }
    friend Scalar operator+(const Scalar& a, const Scalar& b) {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        if (a.den_.is_one() && b.den_.is_one()) return Scalar(a.num_ + b.num_);
        if (a.den_ == b.den_) return Scalar(a.num_ + b.num_, a.den_);
        return Scalar(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend Scalar operator-(const Scalar& a, const Scalar& b) { return a + (-b); }
    friend Scalar operator*(const Scalar& a, const Scalar& b) {
        if (a.is_zero() || b.is_zero()) return Scalar();
        if (a.den_.is_one() && b.den_.is_one()) return Scalar(a.num_ * b.num_);
        if (a.is_monomial()) return b.mul_monomial(a.num_.terms()[0].e, a.num_.terms()[0].c);
        if (b.is_monomial()) return a.mul_monomial(b.num_.terms()[0].e, b.num_.terms()[0].c);
        return Scalar(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend Scalar operator/(const Scalar& a, const Scalar& b) { return a * b.inv(); }
    Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
    Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
    Scalar& operator*=(const Scalar& o) { return *this = *this * o; }
    Scalar& operator/=(const Scalar& o) { return *this = *this / o; }

    [[nodiscard]] Scalar inv() const {
        if (is_zero()) throw std::domain_error("Scalar: inverse of zero");
        return Scalar(den_, num_);
    }

    /// Multiplication by c*q^e keeps the normal form without a gcd.
    [[nodiscard]] Scalar mul_monomial(const ExponentVec& e, const mpq_class& c) const {
        if (c == 0 || is_zero()) return Scalar();
        Scalar r;
        r.num_ = num_.mul_term(e, c);
        r.den_ = den_;
        return r;
    }

    friend bool operator==(const Scalar& a, const Scalar& b) {
        if (a.den_.is_one() && b.den_.is_one()) return a.num_ == b.num_;
        if (a.den_ == b.den_) return a.num_ == b.num_;
        return a.num_ * b.den_ == b.num_ * a.den_;
    }

    [[nodiscard]] std::string str(std::span<const std::string> names = default_symbol_names()) const {
        if (den_.is_one()) return num_.str(names);
        auto wrap = [&](const QPoly& p) {
            return p.size() > 1 ? "(" + p.str(names) + ")" : p.str(names);
        };
        return wrap(num_) + "/" + wrap(den_);
    }

    static Scalar parse(std::string_view text, std::span<const std::string> names = default_symbol_names());

private:
    void normalize();

    QPoly num_;
    QPoly den_;
};

inline bool is_zero(const Scalar& s) { return s.is_zero(); }

inline void Scalar::normalize() {
    if (num_.is_zero()) {
        den_ = QPoly(mpq_class(1));
        return;
    }
    auto absorb_monomial_den = [this]() {
        const auto& t = den_.terms()[0];
        const mpq_class inv_c = 1 / t.c;
        num_ = num_.mul_term(-t.e, inv_c);
        den_ = QPoly(mpq_class(1));
    };
    if (den_.is_monomial()) {
        absorb_monomial_den();
        return;
    }
    if (num_.is_univariate() && den_.is_univariate()) {
        std::int64_t D = 1;
        Rat emin = num_.terms().front().e.c[0];
        for (const auto* p : {&num_, &den_}) {
            for (const auto& t : p->terms()) {
                D = lcm64(D, t.e.c[0].den());
                if (t.e.c[0] < emin) emin = t.e.c[0];
            }
        }
        auto to_dense = [&](const QPoly& p) {
            detail::Dense d;
            for (const auto& t : p.terms()) {
                const Rat k = (t.e.c[0] - emin) * Rat(D);
                const auto idx = static_cast<std::size_t>(k.num());
                if (d.size() <= idx) d.resize(idx + 1);
                d[idx] = t.c;
            }
            return d;
        };
        detail::Dense n = to_dense(num_), d = to_dense(den_);
        const detail::Dense g = detail::poly_gcd(n, d);
        if (g.size() > 1) {
            n = detail::poly_div_exact(n, g);
            d = detail::poly_div_exact(d, g);
            auto from_dense = [&](const detail::Dense& v) {
                std::vector<QPoly::Term> raw;
                for (std::size_t k = 0; k < v.size(); ++k)
                    if (v[k] != 0)
                        raw.push_back({ExponentVec(Rat(static_cast<std::int64_t>(k), D)), v[k]});
                return QPoly::from_unsorted(std::move(raw));
            };
            num_ = from_dense(n);
            den_ = from_dense(d);
            if (den_.is_monomial()) {
                absorb_monomial_den();
                return;
            }
        }
    }
    // centre the denominator and make its leading coefficient 1
    ExponentVec shift;
    for (std::size_t k = 0; k < kExpDim; ++k) {
        Rat lo = den_.terms().front().e.c[k], hi = lo;
        for (const auto& t : den_.terms()) {
            lo = std::min(lo, t.e.c[k]);
            hi = std::max(hi, t.e.c[k]);
        }
        shift.c[k] = -(lo + hi) / Rat(2);
    }
    const mpq_class lc = den_.leading().c;
    const mpq_class inv_lc = 1 / lc;
    num_ = num_.mul_term(shift, inv_lc);
    den_ = den_.mul_term(shift, inv_lc);
}

/// q^e.
/// Substitutes integers for the formal symbols: r0 + sum rk*xk.
inline Rat substitute(const ExponentVec& e, std::span<const std::int64_t> xs) {
    Rat r = e.c[0];
    for (std::size_t k = 1; k < kExpDim; ++k)
        if (!e.c[k].is_zero()) r = r + e.c[k] * Rat(k - 1 < xs.size() ? xs[k - 1] : 0);
    return r;
}

/// Exact value of p at q = t^D with the symbols replaced by xs. Every substituted
/// exponent times D must be an integer.
inline mpq_class evaluate(const QPoly& p, std::int64_t D, const mpq_class& t, std::span<const std::int64_t> xs) {
    mpq_class total = 0;
    for (const auto& term : p.terms()) {
        const Rat e = Rat(D) * substitute(term.e, xs);
        if (!e.is_integer()) throw std::invalid_argument("evaluate: exponent not a multiple of 1/D");
        const std::int64_t k = e.num();
        const auto u = static_cast<unsigned long>(k < 0 ? -k : k);
        mpz_class a, b;
        mpz_pow_ui(a.get_mpz_t(), t.get_num_mpz_t(), u);
        mpz_pow_ui(b.get_mpz_t(), t.get_den_mpz_t(), u);
        mpq_class power = k < 0 ? mpq_class(b, a) : mpq_class(a, b);
        power.canonicalize();
        total += term.c * power;
    }
    return total;
}

inline Scalar qpow(const ExponentVec& e) { return Scalar(QPoly::monomial(e)); }
inline Scalar qpow(const Rat& r) { return qpow(ExponentVec(r)); }

/// [m]_t = (t - t^-1)(t^2 - t^-2)...(t^m - t^-m) with t = q^d.
inline Scalar qbracket(int m, int d) {
    if (m < 0) throw std::invalid_argument("qbracket: m must be nonnegative");
    Scalar r(1);
    for (int j = 1; j <= m; ++j) r *= qpow(Rat(static_cast<std::int64_t>(j) * d)) - qpow(Rat(-static_cast<std::int64_t>(j) * d));
    return r;
}

/// [m k]_t = [m]_t / ([k]_t [m-k]_t).
inline Scalar qbinom(int m, int k, int d) {
    if (k < 0 || k > m) throw std::out_of_range("qbinom: k out of range");
    return qbracket(m, d) / (qbracket(k, d) * qbracket(m - k, d));
}

/// q_i-hat = (q^d - q^-d)^-1.
inline Scalar qhat(int d) { return (qpow(Rat(d)) - qpow(Rat(-d))).inv(); }

// ---------------------------------------------------------------------------
// Parsing of rendered scalars (used by the pairing cache).

namespace detail {

class ScalarParser {
public:
    ScalarParser(std::string_view s, std::span<const std::string> names) : s_(s), names_(names) {}

    Scalar parse() {
        QPoly n = operand();
        if (pos_ < s_.size() && s_[pos_] == '/') {
            ++pos_;
            QPoly d = operand();
            expect_end();
            return Scalar(std::move(n), std::move(d));
        }
        expect_end();
        return Scalar(std::move(n));
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw std::invalid_argument("cannot parse scalar '" + std::string(s_) + "': " + what);
    }
    void expect_end() const {
        if (pos_ != s_.size()) fail("trailing input");
    }
    bool peek(char c) const { return pos_ < s_.size() && s_[pos_] == c; }

    QPoly operand() {
        if (peek('(')) {
            ++pos_;
            QPoly p = poly();
            if (!peek(')')) fail("missing ')'");
            ++pos_;
            return p;
        }
        return poly();
    }

    QPoly poly() {
        QPoly acc = term(true);
        while (peek('+') || peek('-')) acc = acc + term(true);
        return acc;
    }

    mpq_class integer() {
        const std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (start == pos_) fail("expected digits");
        return mpq_class(mpz_class(std::string(s_.substr(start, pos_ - start))));
    }

    QPoly term(bool allow_plus) {
        int sign = 1;
        if (allow_plus && peek('+')) ++pos_;
        if (peek('-')) {
            sign = -1;
            ++pos_;
        }
        mpq_class c = 1;
        bool have_coeff = false;
        if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
            c = integer();
            have_coeff = true;
            if (peek('/') && pos_ + 1 < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_ + 1]))) {
                ++pos_;
                c /= integer();
            }
        }
        ExponentVec e;
        if (have_coeff && peek('*')) ++pos_;
        if (peek('q')) {
            ++pos_;
            e = ExponentVec(Rat(1));
            if (peek('^')) {
                ++pos_;
                e = exponent();
            }
        } else if (!have_coeff) {
            fail("expected term");
        }
        return QPoly::monomial(e, sign * c);
    }

    ExponentVec exponent() {
        if (peek('(')) {
            ++pos_;
            const std::size_t close = s_.find(')', pos_);
            if (close == std::string_view::npos) fail("missing ')' in exponent");
            ExponentVec e = linexp(s_.substr(pos_, close - pos_));
            pos_ = close + 1;
            return e;
        }
        int sign = 1;
        if (peek('-')) {
            sign = -1;
            ++pos_;
        }
        const mpq_class v = integer();
        return ExponentVec(Rat(sign * v.get_num().get_si()));
    }

    ExponentVec linexp(std::string_view t) const {
        ExponentVec e;
        std::size_t i = 0;
        while (i < t.size()) {
            std::size_t j = i + 1;
            while (j < t.size() && t[j] != '+' && t[j] != '-') ++j;
            std::string_view piece = t.substr(i, j - i);
            if (!piece.empty() && piece[0] == '+') piece.remove_prefix(1);
            const auto star = piece.find('*');
            std::string_view coeff = star == std::string_view::npos ? piece : piece.substr(0, star);
            std::string_view name = star == std::string_view::npos ? std::string_view{} : piece.substr(star + 1);
            if (star == std::string_view::npos) {
                std::string_view body = coeff;
                const bool neg = !body.empty() && body[0] == '-';
                if (neg) body.remove_prefix(1);
                if (!body.empty() && !std::isdigit(static_cast<unsigned char>(body[0]))) {
                    name = body;
                    coeff = neg ? "-1" : "1";
                }
            }
            const Rat r = Rat::parse(coeff);
            if (name.empty()) {
                e.c[0] += r;
            } else {
                std::size_t k = 0;
                for (; k < names_.size(); ++k)
                    if (names_[k] == name) break;
                if (k == names_.size() || k + 1 >= kExpDim) fail("unknown symbol '" + std::string(name) + "'");
                e.c[k + 1] += r;
            }
            i = j;
        }
        return e;
    }

    std::string_view s_;
    std::span<const std::string> names_;
    std::size_t pos_ = 0;
};

}  // namespace detail

inline Scalar Scalar::parse(std::string_view text, std::span<const std::string> names) {
    return detail::ScalarParser(text, names).parse();
}

}  // namespace qmpg
