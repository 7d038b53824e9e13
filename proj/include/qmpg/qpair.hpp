/**
 * @file qpair.hpp
 * @brief Quantum Borel algebras U(b+) and U(b-) as spans of normal-ordered
 *        monomials, their Hopf structure, and the non-degenerate pairing
 *        between them.
 *
 * A plus monomial is k_l e_{j1} ... e_{jm}, a minus monomial k_l f_{j1} ... f_{jm}
 * (torus part always on the left). Conventions:
 *   k_l e_j = q^{(l,a_j)} e_j k_l,   k_l f_j = q^{-(l,a_j)} f_j k_l
 *   D(e) = e (x) 1 + k_a (x) e,       D(f) = f (x) k_a^-1 + 1 (x) f
 *   S(e) = -k_a^-1 e,                 S(f) = -f k_a
 * The pairing is on U(b+)^op x U(b-):
 *   <x | y1 y2> = sum <x(1) | y1><x(2) | y2>
 *   <x1 x2 | y> = sum <x2 | y(1)><x1 | y(2)>
 *   <k_l | k_m> = q^-(l,m),  <e_i | f_j> = -delta_ij qhat_i.
 * With this orientation the torus part factors out:
 *   <k_l E | k_m F> = q^{(l,b) - (m,b) - (l,m)} <E | F>,   b = weight of E.
 */

#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qmpg/linalg.hpp"
#include "qmpg/rootsys.hpp"
#include "qmpg/scalar.hpp"
#include "qmpg/twist.hpp"

namespace qmpg {

/// Rank over the coefficient field. A full rank at one exact specialisation
/// q = 2^D, x_k = 2k + 1 already certifies full rank; otherwise falls back to
/// symbolic elimination.
inline std::size_t scalar_rank(const Matrix<Scalar>& m) {
    static constexpr std::array<std::int64_t, kExpDim - 1> xs{3, 5, 7};
    std::int64_t D = 1;
    auto scan = [&](const QPoly& p) {
        for (const auto& t : p.terms()) D = std::lcm(D, substitute(t.e, xs).den());
    };
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) {
            scan(m(i, j).num());
            scan(m(i, j).den());
        }
    Matrix<mpq_class> v(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (m(i, j).is_zero()) continue;
            const mpq_class den = evaluate(m(i, j).den(), D, 2, xs);
            if (den == 0) return rank(m);
            v(i, j) = evaluate(m(i, j).num(), D, 2, xs) / den;
        }
    const std::size_t r = rank(v);
    return r == std::min(m.rows(), m.cols()) ? r : rank(m);
}

enum class Side { Plus, Minus };

using Word = std::vector<int>;

struct BorelMonomial {
    IVec torus;
    Word word;
    friend auto operator<=>(const BorelMonomial&, const BorelMonomial&) = default;
    friend bool operator==(const BorelMonomial&, const BorelMonomial&) = default;
};

template <class K>
using LinComb = std::map<K, Scalar>;

template <class K>
void add_term(LinComb<K>& m, const K& key, const Scalar& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = m.try_emplace(key, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) m.erase(it);
    }
}

template <class K>
LinComb<K> scale(const LinComb<K>& m, const Scalar& c) {
    LinComb<K> r;
    if (c.is_zero()) return r;
    for (const auto& [k, v] : m) r.emplace(k, v * c);
    return r;
}

template <class K>
void add_into(LinComb<K>& acc, const LinComb<K>& m, const Scalar& c = Scalar(1)) {
    for (const auto& [k, v] : m) add_term(acc, k, v * c);
}

struct BorelElt {
    Side side = Side::Plus;
    LinComb<BorelMonomial> terms;

    [[nodiscard]] bool is_zero() const { return terms.empty(); }
    friend bool operator==(const BorelElt& a, const BorelElt& b) {
        if (a.terms.size() != b.terms.size()) return false;
        auto it = b.terms.begin();
        for (const auto& [k, v] : a.terms) {
            if (!(k == it->first) || !(v == it->second)) return false;
            ++it;
        }
        return true;
    }
    friend BorelElt operator+(BorelElt a, const BorelElt& b) {
        add_into(a.terms, b.terms);
        return a;
    }
    friend BorelElt operator-(BorelElt a, const BorelElt& b) {
        add_into(a.terms, b.terms, Scalar(-1));
        return a;
    }
    friend BorelElt operator*(const Scalar& c, const BorelElt& a) { return {a.side, scale(a.terms, c)}; }
};

using Tensor2 = LinComb<std::pair<BorelMonomial, BorelMonomial>>;
using Tensor3 = LinComb<std::array<BorelMonomial, 3>>;

inline std::string word_str(const Word& w, char letter) {
    if (w.empty()) return "1";
    std::string s;
    for (std::size_t k = 0; k < w.size(); ++k) {
        if (k) s += " ";
        s += letter + std::to_string(w[k] + 1);
    }
    return s;
}

/// Pairing matrix on U+_b x U-_{-b} in the word bases, with rank data.
struct GramBlock {
    IVec beta;                  // root coordinates
    std::vector<Word> words;    // lexicographic; rows (e-words) and columns (f-words)
    Matrix<Scalar> matrix;
    std::size_t rank = 0;
    std::vector<std::size_t> plus_basis, minus_basis;
    std::vector<std::vector<Scalar>> radical_plus;   // c with sum_a c_a <x_a | .> = 0
    std::vector<std::vector<Scalar>> radical_minus;  // c with sum_b c_b <. | y_b> = 0
    Matrix<Scalar> basis_inverse;                    // inverse of matrix[plus_basis x minus_basis]
};

struct CanonicalTerm {
    Word plus, minus;
    Scalar coeff;
};

/// All words with the letter multiplicities in root-coordinate vector beta, in lexicographic order.
inline std::vector<Word> words_of_weight(const IVec& beta) {
    Word w;
    for (std::size_t i = 0; i < beta.size(); ++i)
        for (std::int64_t k = 0; k < beta[i]; ++k) w.push_back(static_cast<int>(i));
    std::vector<Word> out;
    do {
        out.push_back(w);
    } while (std::next_permutation(w.begin(), w.end()));
    return out;
}

class QuantumBorel {
public:
    explicit QuantumBorel(const CartanData& c) : c_(c), n_(c.rank()) {
        for (std::size_t i = 0; i < n_; ++i) {
            alpha_.push_back(c.simple_root(i));
            qhat_.push_back(qhat(static_cast<int>(c.d(i))));
        }
    }
    QuantumBorel(const QuantumBorel&) = delete;
    QuantumBorel& operator=(const QuantumBorel&) = delete;

    [[nodiscard]] const CartanData& cartan() const { return c_; }
    [[nodiscard]] std::size_t rank() const { return n_; }
    [[nodiscard]] const IVec& alpha(std::size_t i) const { return alpha_[i]; }

    // ---- weights and degrees

    [[nodiscard]] IVec word_weight(const Word& w) const {
        IVec r(n_, 0);
        for (int j : w) r = r + alpha_[static_cast<std::size_t>(j)];
        return r;
    }
    [[nodiscard]] IVec word_root_coords(const Word& w) const {
        IVec r(n_, 0);
        for (int j : w) ++r[static_cast<std::size_t>(j)];
        return r;
    }
    /// (l, weight of w), an integer.
    [[nodiscard]] std::int64_t inner_word(const IVec& l, const Word& w) const {
        std::int64_t s = 0;
        for (int j : w) s += c_.inner_simple(l, static_cast<std::size_t>(j));
        return s;
    }
    /// Bigrading: k_l in (-l, l); e_i in (-a_i, 0); f_i in (0, -a_i).
    [[nodiscard]] Bidegree degree(Side side, const BorelMonomial& m) const {
        const IVec b = word_weight(m.word);
        if (side == Side::Plus) return {-m.torus - b, m.torus};
        return {-m.torus, m.torus - b};
    }

    // ---- elements

    [[nodiscard]] BorelElt monomial(Side side, const IVec& torus, const Word& w, const Scalar& c = Scalar(1)) const {
        BorelElt x{side, {}};
        add_term(x.terms, BorelMonomial{torus, w}, c);
        return x;
    }
    [[nodiscard]] BorelElt one(Side side) const { return monomial(side, IVec(n_, 0), {}); }
    [[nodiscard]] BorelElt k(Side side, const IVec& l) const { return monomial(side, l, {}); }
    [[nodiscard]] BorelElt e(std::size_t i) const { return monomial(Side::Plus, IVec(n_, 0), {static_cast<int>(i)}); }
    [[nodiscard]] BorelElt f(std::size_t i) const { return monomial(Side::Minus, IVec(n_, 0), {static_cast<int>(i)}); }

    /// Exponent and normal-ordered product of two monomials.
    [[nodiscard]] std::pair<std::int64_t, BorelMonomial> mul_mono(Side side, const BorelMonomial& a,
                                                                  const BorelMonomial& b) const {
        // plus: E k_m = q^{-(m,b_E)} k_m E;  minus: F k_m = q^{(m,b_F)} k_m F
        std::int64_t ex = inner_word(b.torus, a.word);
        if (side == Side::Plus) ex = -ex;
        BorelMonomial r{a.torus + b.torus, a.word};
        r.word.insert(r.word.end(), b.word.begin(), b.word.end());
        return {ex, std::move(r)};
    }

    [[nodiscard]] BorelElt mul(const BorelElt& a, const BorelElt& b) const {
        if (a.side != b.side) throw std::invalid_argument("mul: operands on different sides");
        BorelElt r{a.side, {}};
        for (const auto& [ma, ca] : a.terms)
            for (const auto& [mb, cb] : b.terms) {
                auto [ex, m] = mul_mono(a.side, ma, mb);
                add_term(r.terms, m, (ca * cb).mul_monomial(ExponentVec(Rat(ex)), 1));
            }
        return r;
    }

    // ---- Hopf structure

    [[nodiscard]] Scalar counit(const BorelElt& x) const {
        Scalar s;
        for (const auto& [m, c] : x.terms)
            if (m.word.empty()) s += c;
        return s;
    }

    /// Two-fold coproduct of a monomial, as (exponent, left, right) triples.
    void coproduct_mono(Side side, const BorelMonomial& x,
                        const std::function<void(std::int64_t, BorelMonomial&&, BorelMonomial&&)>& emit) const {
        const std::size_t m = x.word.size();
        if (m > 20) throw std::length_error("coproduct: word too long");
        for (std::uint32_t T = 0; T < (1u << m); ++T) {
            std::int64_t ex = 0;
            Word in_T, out_T;
            IVec bT(n_, 0);
            for (std::size_t p = 0; p < m; ++p) {
                const auto jp = static_cast<std::size_t>(x.word[p]);
                if (T >> p & 1u) {
                    in_T.push_back(x.word[p]);
                    bT = bT + alpha_[jp];
                    for (std::size_t r = 0; r < p; ++r)
                        if (!(T >> r & 1u)) ex -= c_.root_inner(jp, static_cast<std::size_t>(x.word[r]));
                } else {
                    out_T.push_back(x.word[p]);
                }
            }
            if (side == Side::Plus) {
                // T marks the factors k_a (x) e
                emit(ex, BorelMonomial{x.torus + bT, std::move(out_T)}, BorelMonomial{x.torus, std::move(in_T)});
            } else {
                // T marks the factors f (x) k_a^-1
                emit(ex, BorelMonomial{x.torus, std::move(in_T)}, BorelMonomial{x.torus - bT, std::move(out_T)});
            }
        }
    }

    [[nodiscard]] Tensor2 coproduct(const BorelElt& x) const {
        Tensor2 r;
        for (const auto& [m, c] : x.terms)
            coproduct_mono(x.side, m, [&](std::int64_t ex, BorelMonomial&& a, BorelMonomial&& b) {
                add_term(r, {std::move(a), std::move(b)}, c.mul_monomial(ExponentVec(Rat(ex)), 1));
            });
        return r;
    }

    /// (D (x) 1) D.
    [[nodiscard]] Tensor3 coproduct3(const BorelElt& x) const {
        Tensor3 r;
        for (const auto& [m, c] : x.terms)
            coproduct_mono(x.side, m, [&](std::int64_t ex, BorelMonomial&& a, BorelMonomial&& b) {
                const BorelMonomial right = std::move(b);
                coproduct_mono(x.side, a, [&](std::int64_t ex2, BorelMonomial&& a1, BorelMonomial&& a2) {
                    add_term(r, {std::move(a1), std::move(a2), right}, c.mul_monomial(ExponentVec(Rat(ex + ex2)), 1));
                });
            });
        return r;
    }

    /// (1 (x) D) D, for coassociativity checks.
    [[nodiscard]] Tensor3 coproduct3_right(const BorelElt& x) const {
        Tensor3 r;
        for (const auto& [m, c] : x.terms)
            coproduct_mono(x.side, m, [&](std::int64_t ex, BorelMonomial&& a, BorelMonomial&& b) {
                const BorelMonomial left = std::move(a);
                coproduct_mono(x.side, b, [&](std::int64_t ex2, BorelMonomial&& b1, BorelMonomial&& b2) {
                    add_term(r, {left, std::move(b1), std::move(b2)}, c.mul_monomial(ExponentVec(Rat(ex + ex2)), 1));
                });
            });
        return r;
    }

    [[nodiscard]] BorelElt antipode_mono(Side side, const BorelMonomial& x) const {
        // S(k_l g1 ... gm) = S(gm) ... S(g1) k_-l
        BorelElt r = one(side);
        for (auto it = x.word.rbegin(); it != x.word.rend(); ++it) {
            const auto j = static_cast<std::size_t>(*it);
            BorelElt s;
            if (side == Side::Plus)
                s = monomial(side, -alpha_[j], {*it}, Scalar(-1));
            else
                s = mul(monomial(side, IVec(n_, 0), {*it}, Scalar(-1)), k(side, alpha_[j]));
            r = mul(r, s);
        }
        return mul(r, k(side, -x.torus));
    }

    [[nodiscard]] BorelElt antipode(const BorelElt& x) const {
        BorelElt r{x.side, {}};
        for (const auto& [m, c] : x.terms) add_into(r.terms, antipode_mono(x.side, m).terms, c);
        return r;
    }

    // ---- pairing

    /// <E | F> on bare words (no torus), memoised.
    [[nodiscard]] Scalar pair_words(const Word& E, const Word& F) const {
        if (E.size() != F.size()) return Scalar();
        if (E.empty()) return Scalar(1);
        if (word_root_coords(E) != word_root_coords(F)) return Scalar();
        const auto key = std::make_pair(E, F);
        {
            std::shared_lock lock(memo_mutex_);
            if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        }
        ++recursions_;
        // <E' e_i | F> = sum_{p: F_p = i} (-qhat_i) q^{-(a_i, sum_{r<p} a_{F_r}) + (a_i, b - a_i)} <E' | F \ p>
        const auto i = static_cast<std::size_t>(E.back());
        const Word Eprime(E.begin(), E.end() - 1);
        const IVec beta_rest = word_weight(Eprime);
        const std::int64_t tail = c_.inner_simple(beta_rest, i);
        Scalar total;
        std::int64_t prefix = 0;
        for (std::size_t p = 0; p < F.size(); ++p) {
            const auto jp = static_cast<std::size_t>(F[p]);
            if (jp == i) {
                Word Fp = F;
                Fp.erase(Fp.begin() + static_cast<std::ptrdiff_t>(p));
                const Scalar sub = pair_words(Eprime, Fp);
                if (!sub.is_zero()) total += (sub * qhat_[i]).mul_monomial(ExponentVec(Rat(tail - prefix)), -1);
            }
            prefix += c_.root_inner(i, jp);
        }
        {
            std::unique_lock lock(memo_mutex_);
            memo_.emplace(key, total);
        }
        return total;
    }

    [[nodiscard]] Scalar pair_mono(const BorelMonomial& a, const BorelMonomial& y) const {
        if (word_root_coords(a.word) != word_root_coords(y.word)) return Scalar();
        const Scalar core = pair_words(a.word, y.word);
        if (core.is_zero()) return core;
        const IVec b = word_weight(a.word);
        const Rat ex = c_.inner(a.torus, b) - c_.inner(y.torus, b) - c_.inner(a.torus, y.torus);
        return core.mul_monomial(ExponentVec(ex), 1);
    }

    [[nodiscard]] Scalar pair(const BorelElt& a, const BorelElt& y) const {
        if (a.side != Side::Plus || y.side != Side::Minus) throw std::invalid_argument("pair: expects (plus, minus)");
        Scalar s;
        for (const auto& [ma, ca] : a.terms)
            for (const auto& [my, cy] : y.terms) {
                const Scalar v = pair_mono(ma, my);
                if (!v.is_zero()) s += ca * cy * v;
            }
        return s;
    }

    /// Number of memo misses in pair_words since construction.
    [[nodiscard]] std::uint64_t recursion_count() const { return recursions_.load(); }

    [[nodiscard]] std::vector<std::pair<std::pair<Word, Word>, Scalar>> memo_snapshot() const {
        std::shared_lock lock(memo_mutex_);
        return {memo_.begin(), memo_.end()};
    }
    void memo_insert(const Word& E, const Word& F, const Scalar& v) const {
        std::unique_lock lock(memo_mutex_);
        memo_.emplace(std::make_pair(E, F), v);
    }

    // ---- graded blocks

    [[nodiscard]] const GramBlock& gram(const IVec& beta) const {
        {
            std::shared_lock lock(gram_mutex_);
            if (auto it = grams_.find(beta); it != grams_.end()) return it->second;
        }
        GramBlock g;
        g.beta = beta;
        g.words = words_of_weight(beta);
        const std::size_t N = g.words.size();
        g.matrix = Matrix<Scalar>(N, N);
        for (std::size_t a = 0; a < N; ++a)
            for (std::size_t b = 0; b < N; ++b) g.matrix(a, b) = pair_words(g.words[a], g.words[b]);
        g.plus_basis = independent_rows(g.matrix);
        g.minus_basis = echelon(g.matrix).pivots;
        g.rank = g.plus_basis.size();
        g.radical_plus = kernel(g.matrix.transpose());
        g.radical_minus = kernel(g.matrix);
        Matrix<Scalar> sub(g.rank, g.rank);
        for (std::size_t a = 0; a < g.rank; ++a)
            for (std::size_t b = 0; b < g.rank; ++b) sub(a, b) = g.matrix(g.plus_basis[a], g.minus_basis[b]);
        g.basis_inverse = g.rank ? inverse(sub) : sub;
        std::unique_lock lock(gram_mutex_);
        return grams_.emplace(beta, std::move(g)).first->second;
    }

    /// C_b = sum_{a,b} (Gram^-1)_{ba} x_a (x) y_b over the pivot bases.
    [[nodiscard]] std::vector<CanonicalTerm> canonical_element(const IVec& beta) const {
        const GramBlock& g = gram(beta);
        std::vector<CanonicalTerm> out;
        for (std::size_t a = 0; a < g.rank; ++a)
            for (std::size_t b = 0; b < g.rank; ++b) {
                const Scalar& c = g.basis_inverse(b, a);
                if (!c.is_zero()) out.push_back({g.words[g.plus_basis[a]], g.words[g.minus_basis[b]], c});
            }
        return out;
    }

    /// Quantum Serre element for i != j as (root coords, coefficient per word).
    [[nodiscard]] std::pair<IVec, std::vector<std::pair<Word, Scalar>>> serre_element(std::size_t i, std::size_t j) const {
        if (i == j) throw std::invalid_argument("serre_element: i must differ from j");
        const int m = static_cast<int>(1 - c_.cartan()[i][j]);
        IVec beta(n_, 0);
        beta[i] = m;
        beta[j] = 1;
        std::vector<std::pair<Word, Scalar>> terms;
        for (int k = 0; k <= m; ++k) {
            Word w(static_cast<std::size_t>(m - k), static_cast<int>(i));
            w.push_back(static_cast<int>(j));
            w.insert(w.end(), static_cast<std::size_t>(k), static_cast<int>(i));
            Scalar c = qbinom(m, k, static_cast<int>(c_.d(i)));
            if (k % 2) c = -c;
            terms.emplace_back(std::move(w), std::move(c));
        }
        return {beta, terms};
    }

    /// True when the Serre element (in e's, and separately in f's) pairs to zero with its whole weight space.
    [[nodiscard]] bool serre_in_radical(std::size_t i, std::size_t j) const {
        const auto [beta, terms] = serre_element(i, j);
        for (const Word& other : words_of_weight(beta)) {
            Scalar plus, minus;
            for (const auto& [w, c] : terms) {
                plus += c * pair_words(w, other);
                minus += c * pair_words(other, w);
            }
            if (!plus.is_zero() || !minus.is_zero()) return false;
        }
        return true;
    }

    /// <x.k_l | y.k_m>_{p^-1} = q^{(Phi_- l, m)} <x | y> for words x, y.
    [[nodiscard]] Scalar twisted_pair(const Word& x, const IVec& l, const Word& y, const IVec& m,
                                      const Bicharacter& b) const {
        const Scalar core = pair_words(x, y);
        if (core.is_zero()) return core;
        return core.mul_monomial(b.phi_minus_pair(l, m), 1);
    }

    /// Generic deformed pairing on monomials: <a|u>_{p^-1} = p(l,g) p(m,d) <a|u>.
    [[nodiscard]] Scalar deformed_pair_mono(const BorelMonomial& a, const BorelMonomial& y, const Bicharacter& b) const {
        const Scalar v = pair_mono(a, y);
        if (v.is_zero()) return v;
        const Bidegree da = degree(Side::Plus, a), dy = degree(Side::Minus, y);
        return v.mul_monomial(b.p_exp(da.l, dy.l) + b.p_exp(da.m, dy.m), 1);
    }

private:
    const CartanData& c_;
    std::size_t n_;
    std::vector<IVec> alpha_;
    std::vector<Scalar> qhat_;

    mutable std::shared_mutex memo_mutex_;
    mutable std::map<std::pair<Word, Word>, Scalar> memo_;
    mutable std::atomic<std::uint64_t> recursions_{0};

    mutable std::shared_mutex gram_mutex_;
    mutable std::map<IVec, GramBlock> grams_;
};

/// Product a.b = p(l, l') p(m, m')^-1 ab of the twisted algebra A_p, for any table p.
inline BorelElt twist_mul(const QuantumBorel& B, const BorelElt& a, const BorelElt& b, const PairingFactor& p) {
    if (a.side != b.side) throw std::invalid_argument("twist_mul: operands on different sides");
    BorelElt r{a.side, {}};
    for (const auto& [ma, ca] : a.terms)
        for (const auto& [mb, cb] : b.terms) {
            auto [ex, m] = B.mul_mono(a.side, ma, mb);
            const ExponentVec f = twist_exp(p, B.degree(a.side, ma), B.degree(a.side, mb));
            add_term(r.terms, m, (ca * cb).mul_monomial(ExponentVec(Rat(ex)) + f, 1));
        }
    return r;
}

/// Tensor-square product (a (x) b).(c (x) d) = a.c (x) b.d in A_p (x) A_p.
inline Tensor2 twist_mul(const QuantumBorel& B, Side side, const Tensor2& x, const Tensor2& y, const PairingFactor& p) {
    Tensor2 r;
    for (const auto& [lx, cx] : x)
        for (const auto& [ly, cy] : y) {
            const BorelElt l = twist_mul(B, BorelElt{side, {{lx.first, Scalar(1)}}}, BorelElt{side, {{ly.first, Scalar(1)}}}, p);
            const BorelElt rr = twist_mul(B, BorelElt{side, {{lx.second, Scalar(1)}}}, BorelElt{side, {{ly.second, Scalar(1)}}}, p);
            for (const auto& [ml, cl] : l.terms)
                for (const auto& [mr, cr] : rr.terms) add_term(r, {ml, mr}, cx * cy * cl * cr);
        }
    return r;
}

struct HopfTwistReport {
    bool ok = true;
    std::string failure;  // first violated identity
};

/// Checks that counit and coproduct stay multiplicative for m_p and that S is
/// still an antipode, on all ordered pairs of the sample.
inline HopfTwistReport verify_hopf_twist(const QuantumBorel& B, const std::vector<BorelElt>& sample, const PairingFactor& p) {
    HopfTwistReport rep;
    auto fail = [&](std::string what) {
        if (rep.ok) {
            rep.ok = false;
            rep.failure = std::move(what);
        }
    };
    for (std::size_t a = 0; a < sample.size() && rep.ok; ++a) {
        const BorelElt& x = sample[a];
        const Side side = x.side;
        BorelElt anti{side, {}};
        for (const auto& [legs, c] : B.coproduct(x))
            anti = anti + c * twist_mul(B, B.antipode(BorelElt{side, {{legs.first, Scalar(1)}}}),
                                        BorelElt{side, {{legs.second, Scalar(1)}}}, p);
        if (!(anti == B.counit(x) * B.one(side))) fail("antipode axiom fails on sample " + std::to_string(a));
        for (std::size_t b = 0; b < sample.size() && rep.ok; ++b) {
            const BorelElt& y = sample[b];
            if (y.side != side) continue;
            const BorelElt xy = twist_mul(B, x, y, p);
            if (!(B.counit(xy) == B.counit(x) * B.counit(y)))
                fail("counit not multiplicative on samples " + std::to_string(a) + "," + std::to_string(b));
            else if (!(B.coproduct(xy) == twist_mul(B, side, B.coproduct(x), B.coproduct(y), p)))
                fail("coproduct not multiplicative on samples " + std::to_string(a) + "," + std::to_string(b));
        }
    }
    return rep;
}

}  // namespace qmpg
