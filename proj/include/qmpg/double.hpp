/**
 * @file double.hpp
 * @brief The double D = U(b+) |><| U(b-) in normal form (plus part left of
 *        minus part), straightening of minus-times-plus products, and the
 *        checks that the generator relations and the twisted double come out
 *        as expected.
 *
 * Notation in the double: s_l = k_l (x) 1, t_l = 1 (x) k_l, e_i = e_i (x) 1,
 * f_i = 1 (x) f_i. A monomial s_l E t_m F is stored as the pair
 * (k_l E, k_m F) of Borel monomials.
 *
 * The basic rewriting rule for y in U(b-), x in U(b+) is
 *   y x = sum <x(1) | S(y(1))> <x(3) | y(3)> x(2) y(2).
 */

#pragma once

#include <functional>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "qmpg/qpair.hpp"
#include "qmpg/twist.hpp"

namespace qmpg {

struct DoubleMonomial {
    BorelMonomial a;  // plus side
    BorelMonomial u;  // minus side
    friend auto operator<=>(const DoubleMonomial&, const DoubleMonomial&) = default;
    friend bool operator==(const DoubleMonomial&, const DoubleMonomial&) = default;
};

struct DoubleElt {
    LinComb<DoubleMonomial> terms;

    [[nodiscard]] bool is_zero() const { return terms.empty(); }
    friend bool operator==(const DoubleElt& a, const DoubleElt& b) {
        if (a.terms.size() != b.terms.size()) return false;
        auto it = b.terms.begin();
        for (const auto& [k, v] : a.terms) {
            if (!(k == it->first) || !(v == it->second)) return false;
            ++it;
        }
        return true;
    }
    friend DoubleElt operator+(DoubleElt a, const DoubleElt& b) {
        add_into(a.terms, b.terms);
        return a;
    }
    friend DoubleElt operator-(DoubleElt a, const DoubleElt& b) {
        add_into(a.terms, b.terms, Scalar(-1));
        return a;
    }
    friend DoubleElt operator*(const Scalar& c, const DoubleElt& a) { return {scale(a.terms, c)}; }
};

/// Pairing on (plus monomial, minus monomial); lets straightening run with a deformed pairing.
using MonoPairing = std::function<Scalar(const BorelMonomial&, const BorelMonomial&)>;

enum class Straightening {
    Direct,         // whole-monomial rewriting rule
    LastPastFirst,  // move the last minus factor past the first plus factor, recurse
    PeelLeft,       // peel minus factors off the left, recurse
};

inline std::string torus_str(char letter, const IVec& l) { return std::string(1, letter) + "(" + join_ivec(l) + ")"; }

inline std::string double_mono_str(const DoubleMonomial& m) {
    std::vector<std::string> parts;
    if (!is_zero_vec(m.a.torus)) parts.push_back(torus_str('s', m.a.torus));
    if (!m.a.word.empty()) parts.push_back(word_str(m.a.word, 'e'));
    if (!is_zero_vec(m.u.torus)) parts.push_back(torus_str('t', m.u.torus));
    if (!m.u.word.empty()) parts.push_back(word_str(m.u.word, 'f'));
    if (parts.empty()) return "1";
    std::string s;
    for (std::size_t k = 0; k < parts.size(); ++k) s += (k ? " " : "") + parts[k];
    return s;
}

/// True when a rendered scalar is a sum at top level, so it needs brackets before a product.
inline bool is_top_level_sum(const std::string& s) {
    int depth = 0;
    for (std::size_t k = 0; k < s.size(); ++k) {
        if (s[k] == '(') ++depth;
        if (s[k] == ')') --depth;
        if (depth == 0 && k > 0 && (s[k] == '+' || s[k] == '-') && s[k - 1] != '^') return true;
    }
    return false;
}

/// Renders as "c1*m1 + c2*m2", coefficients in canonical scalar form.
template <class Key, class Render>
std::string lincomb_str(const LinComb<Key>& x, Render&& render_key) {
    if (x.empty()) return "0";
    std::string s;
    for (const auto& [m, c] : x) {
        std::string coeff = c.str();
        const bool neg = coeff[0] == '-' && !is_top_level_sum(coeff);
        if (neg) coeff = (-c).str();
        if (is_top_level_sum(coeff)) coeff = "(" + coeff + ")";
        const std::string mono = render_key(m);
        const std::string term = coeff == "1" ? mono : (mono == "1" ? coeff : coeff + "*" + mono);
        if (s.empty())
            s = (neg ? "-" : "") + term;
        else
            s += (neg ? " - " : " + ") + term;
    }
    return s;
}

inline std::string double_str(const DoubleElt& x) { return lincomb_str(x.terms, double_mono_str); }

class QuantumDouble {
public:
    explicit QuantumDouble(const QuantumBorel& B, int height_cap = 6) : B_(B), n_(B.rank()), cap_(height_cap) {}
    QuantumDouble(const QuantumDouble&) = delete;
    QuantumDouble& operator=(const QuantumDouble&) = delete;

    [[nodiscard]] const QuantumBorel& borel() const { return B_; }

    // ---- elements

    [[nodiscard]] DoubleElt mono(const BorelMonomial& a, const BorelMonomial& u, const Scalar& c = Scalar(1)) const {
        DoubleElt x;
        add_term(x.terms, DoubleMonomial{a, u}, c);
        return x;
    }
    [[nodiscard]] BorelMonomial unit() const { return {IVec(n_, 0), {}}; }
    [[nodiscard]] DoubleElt one() const { return mono(unit(), unit()); }
    [[nodiscard]] DoubleElt s(const IVec& l) const { return mono({l, {}}, unit()); }
    [[nodiscard]] DoubleElt t(const IVec& l) const { return mono(unit(), {l, {}}); }
    [[nodiscard]] DoubleElt e(std::size_t i) const { return mono({IVec(n_, 0), {static_cast<int>(i)}}, unit()); }
    [[nodiscard]] DoubleElt f(std::size_t i) const { return mono(unit(), {IVec(n_, 0), {static_cast<int>(i)}}); }
    [[nodiscard]] DoubleElt from_plus(const BorelElt& x) const {
        DoubleElt r;
        for (const auto& [m, c] : x.terms) add_term(r.terms, DoubleMonomial{m, unit()}, c);
        return r;
    }
    [[nodiscard]] DoubleElt from_minus(const BorelElt& y) const {
        DoubleElt r;
        for (const auto& [m, c] : y.terms) add_term(r.terms, DoubleMonomial{unit(), m}, c);
        return r;
    }

    /// Bidegree in the double: plus part keeps its degree, a minus part of degree (g, d) contributes (-g, -d).
    [[nodiscard]] Bidegree degree(const DoubleMonomial& m) const {
        const Bidegree da = B_.degree(Side::Plus, m.a), du = B_.degree(Side::Minus, m.u);
        return {da.l - du.l, da.m - du.m};
    }

    // ---- straightening

    /// The product y x for y a minus monomial and x a plus monomial, in normal form.
    [[nodiscard]] DoubleElt straighten(const BorelMonomial& y, const BorelMonomial& x,
                                       Straightening how = Straightening::Direct) const {
        check_cap(y, x);
        const auto key = std::make_tuple(static_cast<int>(how), y, x);
        {
            std::shared_lock lock(mutex_);
            if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        }
        DoubleElt r;
        switch (how) {
            case Straightening::Direct: r = direct(y, x, default_pairing()); break;
            case Straightening::LastPastFirst: r = last_past_first(y, x); break;
            case Straightening::PeelLeft: r = peel_left(y, x); break;
        }
        std::unique_lock lock(mutex_);
        return memo_.emplace(key, std::move(r)).first->second;
    }

    /// Whole-monomial rewriting rule with an arbitrary pairing (coproduct and antipode unchanged).
    [[nodiscard]] DoubleElt direct(const BorelMonomial& y, const BorelMonomial& x, const MonoPairing& pair) const {
        const BorelElt ye{Side::Minus, {{y, Scalar(1)}}}, xe{Side::Plus, {{x, Scalar(1)}}};
        const Tensor3 x3 = B_.coproduct3(xe), y3 = B_.coproduct3(ye);
        std::map<BorelMonomial, BorelElt> antipodes;
        auto pair_S = [&](const BorelMonomial& x1, const BorelMonomial& y1) {
            auto it = antipodes.find(y1);
            if (it == antipodes.end()) it = antipodes.emplace(y1, B_.antipode_mono(Side::Minus, y1)).first;
            Scalar v;
            for (const auto& [m, c] : it->second.terms) {
                const Scalar p = pair(x1, m);
                if (!p.is_zero()) v += c * p;
            }
            return v;
        };
        DoubleElt r;
        for (const auto& [xs, cx] : x3)
            for (const auto& [ys, cy] : y3) {
                if (B_.word_root_coords(xs[2].word) != B_.word_root_coords(ys[2].word)) continue;
                if (B_.word_root_coords(xs[0].word) != B_.word_root_coords(ys[0].word)) continue;
                const Scalar p3 = pair(xs[2], ys[2]);
                if (p3.is_zero()) continue;
                const Scalar p1 = pair_S(xs[0], ys[0]);
                if (p1.is_zero()) continue;
                add_term(r.terms, DoubleMonomial{xs[1], ys[1]}, cx * cy * p1 * p3);
            }
        return r;
    }

    [[nodiscard]] DoubleElt mul(const DoubleElt& a, const DoubleElt& b, Straightening how = Straightening::Direct) const {
        DoubleElt r;
        for (const auto& [ma, ca] : a.terms)
            for (const auto& [mb, cb] : b.terms) {
                const DoubleElt mid = straighten(ma.u, mb.a, how);
                for (const auto& [mm, cm] : mid.terms) {
                    const auto [e1, left] = B_.mul_mono(Side::Plus, ma.a, mm.a);
                    const auto [e2, right] = B_.mul_mono(Side::Minus, mm.u, mb.u);
                    add_term(r.terms, DoubleMonomial{left, right},
                             (ca * cb * cm).mul_monomial(ExponentVec(Rat(e1 + e2)), 1));
                }
            }
        return r;
    }

    /// True when every term of y x has the bidegree deg(y) + deg(x).
    [[nodiscard]] bool is_homogeneous(const BorelMonomial& y, const BorelMonomial& x, const DoubleElt& r) const {
        const Bidegree want = degree({unit(), y}) + degree({x, unit()});
        for (const auto& [m, c] : r.terms)
            if (!(degree(m) == want)) return false;
        return true;
    }

    /// Image in U_q(g) under s_l, t_l -> k_l, as (k_l E F) normal monomials keyed by (l, E, F).
    [[nodiscard]] LinComb<std::tuple<IVec, Word, Word>> to_uqg(const DoubleElt& x) const {
        LinComb<std::tuple<IVec, Word, Word>> r;
        for (const auto& [m, c] : x.terms) {
            // k_l E k_m F = q^{-(m, wt E)} k_{l+m} E F
            const std::int64_t ex = -B_.inner_word(m.u.torus, m.a.word);
            add_term(r, {m.a.torus + m.u.torus, m.a.word, m.u.word}, c.mul_monomial(ExponentVec(Rat(ex)), 1));
        }
        return r;
    }

    /// Character h with h(s_l) = q^{(l, eta)}, h(t_l) = q^{-(l, eta)}, h(e) = h(f) = 0.
    [[nodiscard]] Scalar character(const DoubleElt& x, const IVec& eta) const {
        Scalar v;
        const auto& c = B_.cartan();
        for (const auto& [m, coeff] : x.terms)
            if (m.a.word.empty() && m.u.word.empty()) v += coeff * qpow(c.inner(m.a.torus, eta) - c.inner(m.u.torus, eta));
        return v;
    }

    [[nodiscard]] std::size_t memo_size() const {
        std::shared_lock lock(mutex_);
        return memo_.size();
    }

private:
    [[nodiscard]] MonoPairing default_pairing() const {
        return [this](const BorelMonomial& a, const BorelMonomial& y) { return B_.pair_mono(a, y); };
    }

    void check_cap(const BorelMonomial& y, const BorelMonomial& x) const {
        if (static_cast<int>(y.word.size()) > cap_ || static_cast<int>(x.word.size()) > cap_)
            throw std::length_error("straightening exceeds the height cap of " + std::to_string(cap_));
    }

    /// Splits k_l w1 ... wm into its generator factors k_l, w1, ..., wm (k omitted when l = 0).
    [[nodiscard]] std::vector<BorelMonomial> factors(const BorelMonomial& m) const {
        std::vector<BorelMonomial> out;
        if (!is_zero_vec(m.torus)) out.push_back({m.torus, {}});
        for (int j : m.word) out.push_back({IVec(n_, 0), {j}});
        return out;
    }
    [[nodiscard]] BorelMonomial product(const std::vector<BorelMonomial>& fs, std::size_t from, std::size_t to) const {
        BorelMonomial r = unit();
        for (std::size_t k = from; k < to; ++k) {
            r.torus = r.torus + fs[k].torus;
            r.word.insert(r.word.end(), fs[k].word.begin(), fs[k].word.end());
        }
        return r;
    }

    [[nodiscard]] DoubleElt last_past_first(const BorelMonomial& y, const BorelMonomial& x) const {
        const auto fy = factors(y), fx = factors(x);
        if (fy.size() <= 1 && fx.size() <= 1) return direct(y, x, default_pairing());
        if (fy.empty() || fx.empty()) return mono(x, y);
        // y x = y' (g h) x'
        const BorelMonomial y1 = product(fy, 0, fy.size() - 1), g = fy.back();
        const BorelMonomial h = fx.front(), x1 = product(fx, 1, fx.size());
        const auto how = Straightening::LastPastFirst;
        const DoubleElt gh = straighten(g, h, how);
        return mul(mul(mono(unit(), y1), gh, how), mono(x1, unit()), how);
    }

    [[nodiscard]] DoubleElt peel_left(const BorelMonomial& y, const BorelMonomial& x) const {
        const auto fy = factors(y), fx = factors(x);
        if (fy.size() <= 1 && fx.size() <= 1) return direct(y, x, default_pairing());
        if (fy.empty() || fx.empty()) return mono(x, y);
        const auto how = Straightening::PeelLeft;
        if (fy.size() == 1) {
            // g x'' h = (g x'') h
            const BorelMonomial x2 = product(fx, 0, fx.size() - 1), h = fx.back();
            return mul(straighten(y, x2, how), mono(h, unit()), how);
        }
        // g (y'' x)
        const BorelMonomial g = fy.front(), y2 = product(fy, 1, fy.size());
        return mul(mono(unit(), g), straighten(y2, x, how), how);
    }

    const QuantumBorel& B_;
    std::size_t n_;
    int cap_;
    mutable std::shared_mutex mutex_;
    mutable std::map<std::tuple<int, BorelMonomial, BorelMonomial>, DoubleElt> memo_;
};

// ---- relation checks

struct RelationCheck {
    std::string name;
    std::string derived;  // rendered left-hand side after straightening
    std::string expected;
    bool ok = true;
};

/// Derives the generator relations of the double by straightening.
inline std::vector<RelationCheck> double_relations(const QuantumDouble& D, const std::vector<IVec>& torus_sample) {
    const QuantumBorel& B = D.borel();
    const auto& c = B.cartan();
    const std::size_t n = B.rank();
    std::vector<RelationCheck> out;
    auto push = [&](std::string name, const DoubleElt& got, const DoubleElt& want) {
        out.push_back({std::move(name), double_str(got), double_str(want), got == want});
    };
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const DoubleElt comm = D.mul(D.e(i), D.f(j)) - D.mul(D.f(j), D.e(i));
            DoubleElt want;
            if (i == j) want = qhat(static_cast<int>(c.d(i))) * (D.s(B.alpha(i)) - D.t(-B.alpha(i)));
            push("e" + std::to_string(i + 1) + " f" + std::to_string(j + 1) + " - f" + std::to_string(j + 1) + " e" +
                     std::to_string(i + 1),
                 comm, want);
        }
    for (const auto& l : torus_sample) {
        const std::string tag = "(" + join_ivec(l) + ")";
        push("s" + tag + " t" + tag + " - t" + tag + " s" + tag, D.mul(D.s(l), D.t(l)) - D.mul(D.t(l), D.s(l)),
             DoubleElt{});
        for (std::size_t j = 0; j < n; ++j) {
            const std::string J = std::to_string(j + 1);
            const Scalar up = qpow(Rat(c.inner_simple(l, j))), down = qpow(Rat(-c.inner_simple(l, j)));
            push("s" + tag + " e" + J + " s" + tag + "^-1", D.mul(D.mul(D.s(l), D.e(j)), D.s(-l)), up * D.e(j));
            push("t" + tag + " e" + J + " t" + tag + "^-1", D.mul(D.mul(D.t(l), D.e(j)), D.t(-l)), up * D.e(j));
            push("s" + tag + " f" + J + " s" + tag + "^-1", D.mul(D.mul(D.s(l), D.f(j)), D.s(-l)), down * D.f(j));
            push("t" + tag + " f" + J + " t" + tag + "^-1", D.mul(D.mul(D.t(l), D.f(j)), D.t(-l)), down * D.f(j));
        }
    }
    return out;
}

/// After s_l, t_l -> k_l the commutators become e_i f_j - f_j e_i = delta_ij qhat_i (k_i - k_i^-1).
inline std::vector<RelationCheck> quotient_check(const QuantumDouble& D, const std::vector<IVec>& torus_sample) {
    const QuantumBorel& B = D.borel();
    const auto& c = B.cartan();
    const std::size_t n = B.rank();
    std::vector<RelationCheck> out;
    auto render = [&](const LinComb<std::tuple<IVec, Word, Word>>& x) {
        DoubleElt d;
        for (const auto& [k, v] : x) add_term(d.terms, DoubleMonomial{{std::get<0>(k), std::get<1>(k)}, {IVec(n, 0), std::get<2>(k)}}, v);
        return double_str(d);
    };
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const auto got = D.to_uqg(D.mul(D.e(i), D.f(j)) - D.mul(D.f(j), D.e(i)));
            LinComb<std::tuple<IVec, Word, Word>> want;
            if (i == j) {
                const Scalar qh = qhat(static_cast<int>(c.d(i)));
                add_term(want, {B.alpha(i), {}, {}}, qh);
                add_term(want, {-B.alpha(i), {}, {}}, -qh);
            }
            out.push_back({"[e" + std::to_string(i + 1) + ", f" + std::to_string(j + 1) + "] in U_q(g)", render(got),
                           render(want), got == want});
        }
    for (const auto& l : torus_sample) {
        const auto got = D.to_uqg(D.mul(D.s(l), D.t(l)));
        LinComb<std::tuple<IVec, Word, Word>> want;
        add_term(want, {2 * l, {}, {}}, Scalar(1));
        out.push_back({"k(" + join_ivec(l) + ") k(" + join_ivec(l) + ")", render(got), render(want), got == want});
    }
    return out;
}

/// Outcome of comparing straightening in the twisted double with the twist of the straightened form.
struct TwistDoubleReport {
    bool ok = true;
    std::string lhs, rhs;  // both sides for the first mismatch
};

/// For y (minus) and x (plus): twist the normal form of y x by p, and compare
/// with straightening in A_p |><| U_p using the pairing p(l,g)^-1 p(m,d)^-1 < , >.
inline TwistDoubleReport twisted_double_check(const QuantumDouble& D, const Bicharacter& p, const BorelMonomial& y,
                                              const BorelMonomial& x) {
    const QuantumBorel& B = D.borel();
    const DoubleElt plain = D.straighten(y, x);
    const DoubleMonomial dy{D.unit(), y}, dx{x, D.unit()};
    const ExponentVec outer = p.twist_exp(D.degree(dy), D.degree(dx));
    DoubleElt lhs;
    for (const auto& [m, c] : plain.terms) {
        const ExponentVec inner = p.twist_exp(D.degree({m.a, D.unit()}), D.degree({D.unit(), m.u}));
        add_term(lhs.terms, m, c.mul_monomial(outer - inner, 1));
    }
    const MonoPairing twisted = [&](const BorelMonomial& a, const BorelMonomial& u) {
        const Scalar v = B.pair_mono(a, u);
        if (v.is_zero()) return v;
        const Bidegree da = B.degree(Side::Plus, a), du = B.degree(Side::Minus, u);
        return v.mul_monomial(-(p.p_exp(da.l, du.l) + p.p_exp(da.m, du.m)), 1);
    };
    const DoubleElt rhs = D.direct(y, x, twisted);
    TwistDoubleReport rep;
    if (!(lhs == rhs)) {
        rep.ok = false;
        rep.lhs = double_str(lhs);
        rep.rhs = double_str(rhs);
    }
    return rep;
}

}  // namespace qmpg
