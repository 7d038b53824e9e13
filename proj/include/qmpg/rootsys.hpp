/**
 * @file rootsys.hpp
 * @brief Cartan data, the invariant form, lattices between Q and P, and the
 *        Weyl group.
 *
 * Every weight is an integer vector of fundamental-weight coordinates. The
 * simple root alpha_j is column j of the Cartan matrix A, the form on
 * fundamental weights is G = diag(d) A^-1, and s_i(l) = l - l_i alpha_i.
 */

#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qmpg/linalg.hpp"
#include "qmpg/rational.hpp"

namespace qmpg {

using IMat = std::vector<IVec>;  // row-major

class CartanData {
public:
    /// Series letter A-G and rank, e.g. ('B', 2).
    static CartanData from_series(char series, int rank) {
        if (rank < 1) throw std::invalid_argument("Cartan rank must be positive");
        const auto n = static_cast<std::size_t>(rank);
        IMat A(n, IVec(n, 0));
        for (std::size_t i = 0; i < n; ++i) A[i][i] = 2;
        auto chain = [&] {
            for (std::size_t i = 0; i + 1 < n; ++i) A[i][i + 1] = A[i + 1][i] = -1;
        };
        switch (series) {
            case 'A': chain(); break;
            case 'B':
                if (n < 2) throw std::invalid_argument("B series needs rank >= 2");
                chain();
                A[n - 1][n - 2] = -2;
                break;
            case 'C':
                if (n < 2) throw std::invalid_argument("C series needs rank >= 2");
                chain();
                A[n - 2][n - 1] = -2;
                break;
            case 'D':
                if (n < 4) throw std::invalid_argument("D series needs rank >= 4");
                chain();
                A[n - 2][n - 1] = A[n - 1][n - 2] = 0;
                A[n - 3][n - 1] = A[n - 1][n - 3] = -1;
                break;
            case 'G':
                if (n != 2) throw std::invalid_argument("G series has rank 2 only");
                A = {{2, -1}, {-3, 2}};
                break;
            default: throw std::invalid_argument(std::string("unsupported Cartan series '") + series + "'");
        }
        CartanData c = from_matrix(A);
        c.name_ = std::string(1, series) + std::to_string(rank);
        return c;
    }

    static CartanData from_matrix(const IMat& A) {
        CartanData c;
        c.n_ = A.size();
        if (c.n_ == 0) throw std::invalid_argument("empty Cartan matrix");
        for (const auto& row : A)
            if (row.size() != c.n_) throw std::invalid_argument("Cartan matrix must be square");
        for (std::size_t i = 0; i < c.n_; ++i) {
            if (A[i][i] != 2) throw std::invalid_argument("Cartan matrix diagonal must be 2");
            for (std::size_t j = 0; j < c.n_; ++j) {
                if (i != j && A[i][j] > 0) throw std::invalid_argument("Cartan matrix off-diagonal entries must be <= 0");
                if ((A[i][j] == 0) != (A[j][i] == 0))
                    throw std::invalid_argument("Cartan matrix zero pattern must be symmetric");
            }
        }
        c.A_ = A;
        c.d_ = symmetrizer(A);
        c.name_ = "custom";
        QMatrix DA(c.n_, c.n_);
        for (std::size_t i = 0; i < c.n_; ++i)
            for (std::size_t j = 0; j < c.n_; ++j) DA(i, j) = mpq_class(static_cast<long>(c.d_[i] * A[i][j]));
        for (std::size_t k = 1; k <= c.n_; ++k) {
            QMatrix minor(k, k);
            for (std::size_t i = 0; i < k; ++i)
                for (std::size_t j = 0; j < k; ++j) minor(i, j) = DA(i, j);
            if (det(minor) <= 0) throw std::invalid_argument("Cartan matrix is not of finite type (symmetrized form not positive definite)");
        }
        QMatrix Aq(c.n_, c.n_);
        for (std::size_t i = 0; i < c.n_; ++i)
            for (std::size_t j = 0; j < c.n_; ++j) Aq(i, j) = mpq_class(static_cast<long>(A[i][j]));
        const QMatrix Ainv = inverse(Aq);
        c.G_.assign(c.n_, std::vector<Rat>(c.n_));
        for (std::size_t i = 0; i < c.n_; ++i)
            for (std::size_t j = 0; j < c.n_; ++j) {
                const mpq_class g = mpq_class(static_cast<long>(c.d_[i])) * Ainv(i, j);
                c.G_[i][j] = Rat(g.get_num().get_si(), g.get_den().get_si());
            }
        c.build_roots();
        return c;
    }

    [[nodiscard]] std::size_t rank() const { return n_; }
    [[nodiscard]] const IMat& cartan() const { return A_; }
    [[nodiscard]] const IVec& symmetrizers() const { return d_; }
    [[nodiscard]] std::int64_t d(std::size_t i) const { return d_[i]; }
    [[nodiscard]] const std::string& name() const { return name_; }
    /// (w_i, w_j) on fundamental weights.
    [[nodiscard]] const std::vector<std::vector<Rat>>& gram_fw() const { return G_; }

    [[nodiscard]] IVec simple_root(std::size_t j) const {
        IVec a(n_);
        for (std::size_t k = 0; k < n_; ++k) a[k] = A_[k][j];
        return a;
    }
    [[nodiscard]] IVec fundamental_weight(std::size_t i) const {
        IVec w(n_, 0);
        w[i] = 1;
        return w;
    }
    /// Converts root-coordinates (sum c_j alpha_j) to fundamental-weight coordinates.
    [[nodiscard]] IVec from_root_coords(const IVec& c) const {
        IVec w(n_, 0);
        for (std::size_t j = 0; j < n_; ++j)
            for (std::size_t k = 0; k < n_; ++k) w[k] += A_[k][j] * c[j];
        return w;
    }

    [[nodiscard]] Rat inner(const IVec& l, const IVec& m) const {
        Rat s;
        for (std::size_t i = 0; i < n_; ++i) {
            if (l[i] == 0) continue;
            for (std::size_t j = 0; j < n_; ++j)
                if (m[j] != 0) s += Rat(l[i] * m[j]) * G_[i][j];
        }
        return s;
    }
    /// (l, alpha_i) = l_i d_i.
    [[nodiscard]] std::int64_t inner_simple(const IVec& l, std::size_t i) const { return l[i] * d_[i]; }
    /// (alpha_i, alpha_j) = d_i a_ij.
    [[nodiscard]] std::int64_t root_inner(std::size_t i, std::size_t j) const { return d_[i] * A_[i][j]; }

    [[nodiscard]] IVec reflect(std::size_t i, const IVec& l) const {
        IVec r = l;
        const std::int64_t c = l[i];
        if (c != 0)
            for (std::size_t k = 0; k < n_; ++k) r[k] -= c * A_[k][i];
        return r;
    }

    /// Positive roots in root coordinates, sorted by height then lexicographically.
    [[nodiscard]] const std::vector<IVec>& positive_roots() const { return pos_roots_; }

    [[nodiscard]] bool is_dominant(const IVec& l) const {
        return std::all_of(l.begin(), l.end(), [](std::int64_t x) { return x >= 0; });
    }

    /// Returns (L, word) with L dominant and s_{w1} ... s_{wk} L = l.
    [[nodiscard]] std::pair<IVec, std::vector<int>> dominant_orbit(const IVec& l) const {
        IVec cur = l;
        std::vector<int> word;
        for (;;) {
            std::size_t i = 0;
            while (i < n_ && cur[i] >= 0) ++i;
            if (i == n_) break;
            cur = reflect(i, cur);
            word.push_back(static_cast<int>(i));
        }
        return {cur, word};
    }

private:
    static IVec symmetrizer(const IMat& A) {
        const std::size_t n = A.size();
        std::vector<std::optional<Rat>> d(n);
        for (std::size_t start = 0; start < n; ++start) {
            if (d[start]) continue;
            d[start] = Rat(1);
            std::vector<std::size_t> stack{start};
            while (!stack.empty()) {
                const std::size_t i = stack.back();
                stack.pop_back();
                for (std::size_t j = 0; j < n; ++j) {
                    if (i == j || A[i][j] == 0) continue;
                    const Rat dj = *d[i] * Rat(A[i][j]) / Rat(A[j][i]);  // d_i a_ij = d_j a_ji
                    if (!d[j]) {
                        d[j] = dj;
                        stack.push_back(j);
                    } else if (*d[j] != dj) {
                        throw std::invalid_argument("Cartan matrix is not symmetrizable");
                    }
                }
            }
        }
        std::int64_t L = 1;
        for (const auto& x : d) L = lcm64(L, x->den());
        IVec out(n);
        std::int64_t g = 0;
        for (std::size_t i = 0; i < n; ++i) {
            out[i] = (*d[i] * Rat(L)).num();
            g = std::gcd(g, out[i]);
        }
        for (auto& x : out) x /= g;
        return out;
    }

    void build_roots() {
        // closure of simple roots under reflections, tracked in root coordinates
        std::map<IVec, bool> seen;
        std::vector<IVec> queue;
        for (std::size_t i = 0; i < n_; ++i) {
            IVec e(n_, 0);
            e[i] = 1;
            queue.push_back(e);
            seen[e] = true;
        }
        for (std::size_t q = 0; q < queue.size(); ++q) {
            const IVec r = queue[q];
            const IVec w = from_root_coords(r);
            for (std::size_t i = 0; i < n_; ++i) {
                IVec s = r;
                s[i] -= w[i];
                if (!seen.count(s)) {
                    seen[s] = true;
                    queue.push_back(s);
                }
            }
            if (queue.size() > 10000) throw std::invalid_argument("root system is not finite");
        }
        for (const auto& [r, _] : seen)
            if (std::all_of(r.begin(), r.end(), [](std::int64_t x) { return x >= 0; })) pos_roots_.push_back(r);
        std::sort(pos_roots_.begin(), pos_roots_.end(), [](const IVec& a, const IVec& b) {
            const auto ha = std::accumulate(a.begin(), a.end(), std::int64_t{0});
            const auto hb = std::accumulate(b.begin(), b.end(), std::int64_t{0});
            return ha != hb ? ha < hb : a < b;
        });
    }

    std::size_t n_ = 0;
    IMat A_;
    IVec d_;
    std::vector<std::vector<Rat>> G_;
    std::vector<IVec> pos_roots_;
    std::string name_;
};

/// Height of a root-coordinate vector.
inline std::int64_t height(const IVec& root_coords) {
    return std::accumulate(root_coords.begin(), root_coords.end(), std::int64_t{0});
}

struct WeylElt {
    std::vector<int> word;  // s_{word[0]} s_{word[1]} ...
    IMat mat;               // action on fundamental-weight coordinates
    [[nodiscard]] std::size_t length() const { return word.size(); }

    [[nodiscard]] IVec act(const IVec& l) const {
        IVec r(l.size(), 0);
        for (std::size_t i = 0; i < mat.size(); ++i)
            for (std::size_t j = 0; j < l.size(); ++j) r[i] += mat[i][j] * l[j];
        return r;
    }
    /// "s1,s2" (1-based), or "e".
    [[nodiscard]] std::string str() const {
        if (word.empty()) return "e";
        std::string s;
        for (std::size_t k = 0; k < word.size(); ++k) {
            if (k) s += ",";
            s += "s" + std::to_string(word[k] + 1);
        }
        return s;
    }
};

inline IMat imat_mul(const IMat& a, const IMat& b) {
    const std::size_t n = a.size(), m = b.empty() ? 0 : b[0].size();
    IMat r(n, IVec(m, 0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < b.size(); ++k)
            if (a[i][k] != 0)
                for (std::size_t j = 0; j < m; ++j) r[i][j] += a[i][k] * b[k][j];
    return r;
}

inline IMat imat_identity(std::size_t n) {
    IMat r(n, IVec(n, 0));
    for (std::size_t i = 0; i < n; ++i) r[i][i] = 1;
    return r;
}

class WeylGroup {
public:
    explicit WeylGroup(const CartanData& c) : n_(c.rank()) {
        simple_.resize(n_);
        for (std::size_t i = 0; i < n_; ++i) {
            simple_[i] = imat_identity(n_);
            const IVec a = c.simple_root(i);
            for (std::size_t k = 0; k < n_; ++k) simple_[i][k][i] -= a[k];
        }
        std::map<IMat, std::size_t> index;
        elts_.push_back({{}, imat_identity(n_)});
        index[elts_[0].mat] = 0;
        for (std::size_t q = 0; q < elts_.size(); ++q) {
            for (std::size_t i = 0; i < n_; ++i) {
                IMat m = imat_mul(elts_[q].mat, simple_[i]);
                if (index.count(m)) continue;
                WeylElt w{elts_[q].word, std::move(m)};
                w.word.push_back(static_cast<int>(i));
                index[w.mat] = elts_.size();
                elts_.push_back(std::move(w));
                if (elts_.size() > 100000) throw std::invalid_argument("Weyl group too large");
            }
        }
        longest_ = elts_.size() - 1;
    }

    [[nodiscard]] const std::vector<WeylElt>& elements() const { return elts_; }
    [[nodiscard]] std::size_t size() const { return elts_.size(); }
    [[nodiscard]] const WeylElt& longest() const { return elts_[longest_]; }
    [[nodiscard]] const WeylElt& identity() const { return elts_[0]; }

    /// Element for a word in 0-based generator indices (need not be reduced).
    [[nodiscard]] const WeylElt& from_word(const std::vector<int>& word) const {
        IMat m = imat_identity(n_);
        for (int i : word) {
            if (i < 0 || static_cast<std::size_t>(i) >= n_) throw std::out_of_range("Weyl word letter out of range");
            m = imat_mul(m, simple_[static_cast<std::size_t>(i)]);
        }
        for (const auto& w : elts_)
            if (w.mat == m) return w;
        throw std::logic_error("Weyl element not found");
    }

    /// Parses "e" or "s1,s2" (1-based letters).
    [[nodiscard]] const WeylElt& parse(const std::string& text) const {
        std::vector<int> word;
        std::string t;
        for (char ch : text)
            if (ch != ' ') t += ch;
        if (!t.empty() && t != "e") {
            std::stringstream ss(t);
            std::string tok;
            while (std::getline(ss, tok, ',')) {
                if (tok.size() < 2 || tok[0] != 's') throw std::invalid_argument("bad Weyl letter '" + tok + "'");
                word.push_back(std::stoi(tok.substr(1)) - 1);
            }
        }
        return from_word(word);
    }

    [[nodiscard]] std::size_t index_of(const WeylElt& w) const {
        for (std::size_t k = 0; k < elts_.size(); ++k)
            if (elts_[k].mat == w.mat) return k;
        throw std::logic_error("Weyl element not in group");
    }

    [[nodiscard]] const WeylElt& inverse(const WeylElt& w) const {
        std::vector<int> rev(w.word.rbegin(), w.word.rend());
        return from_word(rev);
    }

private:
    std::size_t n_;
    std::vector<WeylElt> elts_;
    std::size_t longest_ = 0;
    std::vector<IMat> simple_;
};

/// Sublattice of P given by integer basis columns in fundamental-weight coordinates.
class Lattice {
public:
    static Lattice weight(const CartanData& c) { return Lattice(c, imat_identity(c.rank()), "weight"); }
    static Lattice root(const CartanData& c) {
        IMat B(c.rank(), IVec(c.rank()));
        for (std::size_t j = 0; j < c.rank(); ++j) {
            const IVec a = c.simple_root(j);
            for (std::size_t k = 0; k < c.rank(); ++k) B[k][j] = a[k];
        }
        return Lattice(c, B, "root");
    }
    /// basis_rows[k][j] = coordinate k of basis vector j.
    static Lattice custom(const CartanData& c, const IMat& basis_cols) { return Lattice(c, basis_cols, "custom"); }

    [[nodiscard]] const IMat& basis() const { return B_; }
    [[nodiscard]] IVec basis_vector(std::size_t j) const {
        IVec v(B_.size());
        for (std::size_t k = 0; k < B_.size(); ++k) v[k] = B_[k][j];
        return v;
    }
    [[nodiscard]] const std::string& kind() const { return kind_; }
    [[nodiscard]] const QMatrix& basis_inverse() const { return Binv_; }

    /// Coordinates of l in the lattice basis, if l lies in the lattice.
    [[nodiscard]] std::optional<IVec> coords(const IVec& l) const {
        IVec out(l.size());
        for (std::size_t i = 0; i < l.size(); ++i) {
            mpq_class s = 0;
            for (std::size_t k = 0; k < l.size(); ++k) s += Binv_(i, k) * mpq_class(static_cast<long>(l[k]));
            if (s.get_den() != 1) return std::nullopt;
            out[i] = s.get_num().get_si();
        }
        return out;
    }
    [[nodiscard]] bool contains(const IVec& l) const { return coords(l).has_value(); }

private:
    Lattice(const CartanData& c, IMat B, std::string kind) : B_(std::move(B)), kind_(std::move(kind)) {
        const std::size_t n = c.rank();
        if (B_.size() != n) throw std::invalid_argument("lattice basis must be n x n");
        QMatrix Bq(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            if (B_[i].size() != n) throw std::invalid_argument("lattice basis must be n x n");
            for (std::size_t j = 0; j < n; ++j) Bq(i, j) = mpq_class(static_cast<long>(B_[i][j]));
        }
        if (det(Bq) == 0) throw std::invalid_argument("lattice basis is singular");
        Binv_ = inverse(Bq);
        for (std::size_t j = 0; j < n; ++j)
            if (!contains(c.simple_root(j)))
                throw std::invalid_argument("lattice does not contain simple root alpha_" + std::to_string(j + 1));
    }

    IMat B_;
    QMatrix Binv_;
    std::string kind_;
};

/// Checks that (m, m') = (L, L) forces m = m' and m in W L, over all pairs.
struct NormCriterionReport {
    bool holds = true;
    std::string counterexample;
};

inline NormCriterionReport norm_criterion(const CartanData& c, const WeylGroup& W, const IVec& Lambda,
                                          const std::vector<IVec>& weights) {
    NormCriterionReport rep;
    const Rat norm = c.inner(Lambda, Lambda);
    std::vector<IVec> orbit;
    for (const auto& w : W.elements()) orbit.push_back(w.act(Lambda));
    for (const auto& m : weights) {
        for (const auto& m2 : weights) {
            if (c.inner(m, m2) != norm) continue;
            const bool in_orbit = std::find(orbit.begin(), orbit.end(), m) != orbit.end();
            if (m != m2 || !in_orbit) {
                rep.holds = false;
                rep.counterexample = "(" + join_ivec(m) + ") , (" + join_ivec(m2) + ")";
                return rep;
            }
        }
    }
    return rep;
}

}  // namespace qmpg
