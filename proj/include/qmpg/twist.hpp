/**
 * @file twist.hpp
 * @brief Antisymmetric bicharacters p(l, m) = q^(u(l, m)/2), the operator Phi
 *        with u(l, m) = (Phi l, m), and the scalar factors of the cocycle
 *        twist.
 *
 * u is given on a lattice basis; entries are linear forms r0 + sum rk*xk in
 * the formal symbols, so an irrational entry never needs a numeric value.
 * Bidegrees are pairs (l, m) of weights; "twisting by p" multiplies
 * a_{l,m} b_{l',m'} by p(l, l') / p(m, m').
 */

#pragma once

#include <cctype>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qmpg/linalg.hpp"
#include "qmpg/rootsys.hpp"
#include "qmpg/scalar.hpp"

namespace qmpg {

using LinMat = std::vector<std::vector<LinExp>>;

struct Bidegree {
    IVec l, m;
    friend Bidegree operator+(const Bidegree& a, const Bidegree& b) { return {a.l + b.l, a.m + b.m}; }
    friend bool operator==(const Bidegree&, const Bidegree&) = default;
};

inline Rat to_rat(const mpq_class& x) { return Rat(x.get_num().get_si(), x.get_den().get_si()); }

/// Parses "r", "r*x1", "r + r'*x1 - x2", ... into a linear form.
inline LinExp parse_linexp(std::string_view text, std::span<const std::string> names = default_symbol_names()) {
    std::string t;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) t += ch;
    if (t.empty()) throw std::invalid_argument("empty linear form");
    LinExp e;
    std::size_t i = 0;
    while (i < t.size()) {
        std::size_t j = i + 1;
        while (j < t.size() && t[j] != '+' && t[j] != '-') ++j;
        std::string piece = t.substr(i, j - i);
        i = j;
        bool neg = false;
        if (piece[0] == '+' || piece[0] == '-') {
            neg = piece[0] == '-';
            piece.erase(0, 1);
        }
        if (piece.empty()) throw std::invalid_argument("dangling sign in '" + std::string(text) + "'");
        std::string coeff = piece, name;
        if (const auto star = piece.find('*'); star != std::string::npos) {
            coeff = piece.substr(0, star);
            name = piece.substr(star + 1);
        } else if (!std::isdigit(static_cast<unsigned char>(piece[0]))) {
            coeff = "1";
            name = piece;
        }
        Rat r = Rat::parse(coeff);
        if (neg) r = -r;
        if (name.empty()) {
            e.c[0] += r;
            continue;
        }
        std::size_t k = 0;
        while (k < names.size() && names[k] != name) ++k;
        if (k == names.size()) throw std::invalid_argument("undeclared symbol '" + name + "'");
        if (k + 1 >= kExpDim) throw std::invalid_argument("too many formal symbols (at most 3)");
        e.c[k + 1] += r;
    }
    return e;
}

class Bicharacter {
public:
    /// U[i][j] = u(omega_i, omega_j) on the lattice basis.
    Bicharacter(const CartanData& c, const Lattice& L, LinMat U) : n_(c.rank()), U_(std::move(U)) {
        if (U_.size() != n_) throw std::invalid_argument("u must be an n x n matrix");
        for (const auto& row : U_)
            if (row.size() != n_) throw std::invalid_argument("u must be an n x n matrix");
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j)
                if (U_[i][j] != -U_[j][i]) throw std::invalid_argument("u must be antisymmetric");
        const QMatrix& Binv = L.basis_inverse();
        Uw_.assign(n_, std::vector<LinExp>(n_));
        for (std::size_t a = 0; a < n_; ++a)
            for (std::size_t b = 0; b < n_; ++b)
                for (std::size_t i = 0; i < n_; ++i)
                    for (std::size_t j = 0; j < n_; ++j) {
                        const Rat f = to_rat(Binv(i, a) * Binv(j, b));
                        if (!f.is_zero()) Uw_[a][b] += f * U_[i][j];
                    }
        // Phi = -G^-1 Uw, so that (Phi l, m) = l^T Uw m
        QMatrix Gq(n_, n_);
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j) Gq(i, j) = c.gram_fw()[i][j].to_mpq();
        const QMatrix Ginv = qmpg::inverse(Gq);
        Phi_.assign(n_, std::vector<LinExp>(n_));
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j)
                for (std::size_t k = 0; k < n_; ++k) Phi_[i][j] -= to_rat(Ginv(i, k)) * Uw_[k][j];
        G_ = c.gram_fw();
    }

    static Bicharacter trivial(const CartanData& c, const Lattice& L) {
        return Bicharacter(c, L, LinMat(c.rank(), std::vector<LinExp>(c.rank())));
    }

    [[nodiscard]] std::size_t rank() const { return n_; }
    [[nodiscard]] const LinMat& u_lattice() const { return U_; }
    /// u on fundamental weights.
    [[nodiscard]] const LinMat& u_fw() const { return Uw_; }
    /// Phi acting on fundamental-weight coordinates (column convention).
    [[nodiscard]] const LinMat& phi() const { return Phi_; }

    [[nodiscard]] bool is_zero() const {
        for (const auto& row : U_)
            for (const auto& x : row)
                if (!x.is_zero()) return false;
        return true;
    }

    /// Bicharacter with u replaced by -u.
    [[nodiscard]] Bicharacter inverse() const {
        Bicharacter b = *this;
        for (auto* M : {&b.U_, &b.Uw_, &b.Phi_})
            for (auto& row : *M)
                for (auto& x : row) x = -x;
        return b;
    }

    [[nodiscard]] LinExp u(const IVec& l, const IVec& m) const {
        LinExp s;
        for (std::size_t i = 0; i < n_; ++i) {
            if (l[i] == 0) continue;
            for (std::size_t j = 0; j < n_; ++j)
                if (m[j] != 0 && !Uw_[i][j].is_zero()) s += Rat(l[i] * m[j]) * Uw_[i][j];
        }
        return s;
    }
    /// Exponent of p(l, m).
    [[nodiscard]] ExponentVec p_exp(const IVec& l, const IVec& m) const { return Rat(1, 2) * u(l, m); }
    [[nodiscard]] Scalar p(const IVec& l, const IVec& m) const { return qpow(p_exp(l, m)); }

    [[nodiscard]] Rat form(const IVec& l, const IVec& m) const {
        Rat s;
        for (std::size_t i = 0; i < n_; ++i) {
            if (l[i] == 0) continue;
            for (std::size_t j = 0; j < n_; ++j)
                if (m[j] != 0) s += Rat(l[i] * m[j]) * G_[i][j];
        }
        return s;
    }
    /// (Phi l, m) computed from the matrix of Phi and the form.
    [[nodiscard]] LinExp phi_pair(const IVec& l, const IVec& m) const {
        LinExp s;
        for (std::size_t i = 0; i < n_; ++i) {
            LinExp phil_i;
            for (std::size_t j = 0; j < n_; ++j)
                if (l[j] != 0) phil_i += Rat(l[j]) * Phi_[i][j];
            if (phil_i.is_zero()) continue;
            Rat gi;
            for (std::size_t k = 0; k < n_; ++k) gi += G_[i][k] * Rat(m[k]);
            s += gi * phil_i;
        }
        return s;
    }
    /// (Phi_+ l, m) = u(l, m) + (l, m).
    [[nodiscard]] LinExp phi_plus_pair(const IVec& l, const IVec& m) const { return u(l, m) + LinExp(form(l, m)); }
    /// (Phi_- l, m) = u(l, m) - (l, m).
    [[nodiscard]] LinExp phi_minus_pair(const IVec& l, const IVec& m) const { return u(l, m) - LinExp(form(l, m)); }

    /// Exponent of p(l, l') / p(m, m'): the m_p factor for a in A_{l,m}, b in A_{l',m'}.
    [[nodiscard]] ExponentVec twist_exp(const Bidegree& a, const Bidegree& b) const {
        return p_exp(a.l, b.l) - p_exp(a.m, b.m);
    }

    /// Exponent of p(l, d - g) p(d, g): the factor turning ux into u.x for u of
    /// bidegree (g, d) in the double twisted by p^-1 and x of weight l.
    [[nodiscard]] ExponentVec action_exp(const Bidegree& deg_u, const IVec& l) const {
        return p_exp(l, deg_u.m - deg_u.l) + p_exp(deg_u.m, deg_u.l);
    }

    /// gamma_ij = p(w_i, w_j)^2 = q^{u(w_i, w_j)} on the lattice basis.
    [[nodiscard]] std::vector<std::vector<Scalar>> cocycle_class() const {
        std::vector<std::vector<Scalar>> g(n_, std::vector<Scalar>(n_));
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j) g[i][j] = qpow(U_[i][j]);
        return g;
    }

private:
    std::size_t n_;
    LinMat U_, Uw_, Phi_;
    std::vector<std::vector<Rat>> G_;
};

/// A function L x L -> scalars, used where a non-bicharacter table is needed
/// for negative controls.
using PairingFactor = std::function<ExponentVec(const IVec&, const IVec&)>;

inline PairingFactor as_factor(const Bicharacter& b) {
    return [b](const IVec& l, const IVec& m) { return b.p_exp(l, m); };
}

/// Exponent of p(l, l') / p(m, m') for an arbitrary table p.
inline ExponentVec twist_exp(const PairingFactor& p, const Bidegree& a, const Bidegree& b) {
    return p(a.l, b.l) - p(a.m, b.m);
}

}  // namespace qmpg
