/**
 * @file poisson.hpp
 * @brief Leaf and torus-orbit dimension arithmetic for pairs w = (w+, w-) of
 *        Weyl group elements, and the algebraicity criterion for u.
 *
 * Phi acts on fundamental-weight coordinates with (Phi l, m) = u(l, m);
 * Phi_+ = Phi + 1, Phi_- = Phi - 1 and
 *   sigma(w) = Phi_- w- Phi_+ - Phi_+ w+ Phi_-.
 * Entries are affine in the formal symbols, so sigma(w) has entries of degree
 * at most two. Ranks are taken over Q(symbols): a symbol x_k is encoded as the
 * monomial with exponent vector e_k, which turns an entry into an element of
 * the Scalar field whose variables are independent.
 */

#pragma once

#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qmpg/linalg.hpp"
#include "qmpg/rootsys.hpp"
#include "qmpg/scalar.hpp"
#include "qmpg/twist.hpp"

namespace qmpg {

/// Matrix with entries r0 + sum rk x_k.
using LinMatrix = std::vector<std::vector<LinExp>>;

/// Polynomial in the formal symbols, stored as the Scalar with monomials x_k -> exponent e_k.
inline Scalar symbolic(const LinExp& e) {
    Scalar s(e.c[0]);
    for (std::size_t k = 1; k < kExpDim; ++k)
        if (!e.c[k].is_zero()) s += qpow(ExponentVec::symbol(k)) * Scalar(e.c[k]);
    return s;
}

struct PoissonContext {
    const CartanData& cartan;
    const Lattice& lattice;
    const Bicharacter& bichar;

    [[nodiscard]] std::size_t rank() const { return cartan.rank(); }

    /// Phi + s * 1 as an affine matrix.
    [[nodiscard]] LinMatrix phi_shift(int s) const {
        LinMatrix m = bichar.phi();
        for (std::size_t i = 0; i < rank(); ++i) m[i][i] += LinExp(Rat(s));
        return m;
    }
    [[nodiscard]] LinMatrix phi_plus() const { return phi_shift(1); }
    [[nodiscard]] LinMatrix phi_minus() const { return phi_shift(-1); }
};

inline Matrix<Scalar> symbolic(const LinMatrix& m) {
    Matrix<Scalar> r(m.size(), m.empty() ? 0 : m[0].size());
    for (std::size_t i = 0; i < r.rows(); ++i)
        for (std::size_t j = 0; j < r.cols(); ++j) r(i, j) = symbolic(m[i][j]);
    return r;
}

inline Matrix<Scalar> symbolic(const IMat& m) {
    Matrix<Scalar> r(m.size(), m.size());
    for (std::size_t i = 0; i < r.rows(); ++i)
        for (std::size_t j = 0; j < r.cols(); ++j) r(i, j) = Scalar(static_cast<int>(m[i][j]));
    return r;
}

/// sigma(w) = Phi_- w- Phi_+ - Phi_+ w+ Phi_- over Q(symbols).
inline Matrix<Scalar> sigma_w(const PoissonContext& ctx, const WeylElt& wplus, const WeylElt& wminus) {
    const Matrix<Scalar> P = symbolic(ctx.phi_plus()), M = symbolic(ctx.phi_minus());
    return M * symbolic(wminus.mat) * P - P * symbolic(wplus.mat) * M;
}

inline std::size_t s_of_w(const PoissonContext& ctx, const WeylElt& wplus, const WeylElt& wminus) {
    return rank(sigma_w(ctx, wplus, wminus));
}

struct LeafReport {
    WeylElt wplus, wminus;
    std::size_t l = 0, s = 0, leaf_dim = 0, orbit_rank = 0;
    std::optional<std::size_t> zw_dim;  // lattice rank of ker sigma(w) n L; absent when u is not algebraic
};

/// Leaf dimension l(w) + s(w) and orbit rank n - s(w).
inline LeafReport leaf_report(const PoissonContext& ctx, const WeylElt& wplus, const WeylElt& wminus);

inline std::size_t leaf_dim(const PoissonContext& ctx, const WeylElt& wplus, const WeylElt& wminus) {
    return wplus.length() + wminus.length() + s_of_w(ctx, wplus, wminus);
}

inline std::size_t orbit_rank(const PoissonContext& ctx, const WeylElt& wplus, const WeylElt& wminus) {
    return ctx.rank() - s_of_w(ctx, wplus, wminus);
}

// ---- algebraicity

struct AlgebraicityReport {
    bool algebraic = false;               // u(P x P) rational
    bool witness_exists = false;          // some m with Phi(m P) in P
    std::int64_t m = 0;                   // minimal such m
    std::pair<std::size_t, std::size_t> offending{0, 0};  // (i, j) with u(w_i, w_j) irrational
};

inline std::int64_t lcm_of_denominators(const LinMatrix& m) {
    std::int64_t l = 1;
    for (const auto& row : m)
        for (const auto& x : row) l = std::lcm(l, x.c[0].den());
    return l;
}

/// Checks rationality of u on P x P and, separately, searches for the minimal m
/// with m Phi integral; the search runs up to the lcm of the denominators.
inline AlgebraicityReport is_algebraic(const PoissonContext& ctx) {
    AlgebraicityReport rep;
    const std::size_t n = ctx.rank();
    const LinMat& Uw = ctx.bichar.u_fw();
    rep.algebraic = true;
    for (std::size_t i = 0; i < n && rep.algebraic; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (!Uw[i][j].is_rational()) {
                rep.algebraic = false;
                rep.offending = {i, j};
                break;
            }
    const LinMatrix& Phi = ctx.bichar.phi();
    bool rational = true;
    for (const auto& row : Phi)
        for (const auto& x : row) rational = rational && x.is_rational();
    if (!rational) return rep;
    const std::int64_t bound = lcm_of_denominators(Phi);
    for (std::int64_t m = 1; m <= bound; ++m) {
        bool ok = true;
        for (const auto& row : Phi)
            for (const auto& x : row) ok = ok && (Rat(m) * x.c[0]).den() == 1;
        if (ok) {
            rep.witness_exists = true;
            rep.m = m;
            break;
        }
    }
    return rep;
}

// ---- the space a_Q^perp

struct AperpReport {
    std::vector<std::vector<mpq_class>> basis;  // (lambda, mu) stacked, length 2n
    std::size_t rank = 0;
    std::size_t atilde_dim = 0;                // 2n - rank
    std::size_t rational_phi_dim = 0;          // dim {nu : Phi nu rational}
    bool lemma_ok = false;                     // rank equals rational_phi_dim and the map lands in a_Q^perp
};

inline AperpReport aperp(const PoissonContext& ctx) {
    const std::size_t n = ctx.rank();
    const LinMatrix P = ctx.phi_plus(), M = ctx.phi_minus();
    // Phi_+ l + Phi_- m = 0 splits into one rational system per symbol coordinate
    QMatrix A(kExpDim * n, 2 * n);
    QMatrix S((kExpDim - 1) * n, n);
    for (std::size_t k = 0; k < kExpDim; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                A(k * n + i, j) = P[i][j].c[k].to_mpq();
                A(k * n + i, n + j) = M[i][j].c[k].to_mpq();
                if (k > 0) S((k - 1) * n + i, j) = P[i][j].c[k].to_mpq();
            }
    AperpReport rep;
    rep.basis = kernel(A);
    rep.rank = rep.basis.size();
    rep.atilde_dim = 2 * n - rep.rank;
    const auto nus = kernel(S);
    rep.rational_phi_dim = nus.size();
    // nu -> (-Phi_- nu, Phi_+ nu) lands in a_Q^perp and is injective
    QMatrix image(nus.size(), 2 * n);
    bool lands = true;
    for (std::size_t r = 0; r < nus.size(); ++r) {
        std::vector<mpq_class> vec(2 * n);
        for (std::size_t i = 0; i < n; ++i) {
            mpq_class a = 0, b = 0;
            for (std::size_t j = 0; j < n; ++j) {
                a -= M[i][j].c[0].to_mpq() * nus[r][j];
                b += P[i][j].c[0].to_mpq() * nus[r][j];
            }
            vec[i] = a;
            vec[n + i] = b;
        }
        for (std::size_t k = 0; k < 2 * n; ++k) image(r, k) = vec[k];
        const auto Av = A.apply(vec);
        for (const auto& x : Av) lands = lands && x == 0;
    }
    rep.lemma_ok = lands && rep.rank == rep.rational_phi_dim && qmpg::rank(image) == nus.size();
    return rep;
}

// ---- Z_w data

struct ZwData {
    std::size_t dim = 0;                     // n - s(w)
    std::optional<std::size_t> lattice_rank; // rank of ker sigma(w) n L
    std::vector<IVec> lattice_basis;         // in L coordinates
};

inline QMatrix rational_matrix(const Matrix<Scalar>& m) {
    QMatrix r(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) {
            const Scalar& x = m(i, j);
            if (x.is_zero()) continue;
            if (!x.is_laurent() || !x.num().is_monomial() || !x.num().leading().e.is_zero())
                throw std::invalid_argument("matrix is not rational");
            r(i, j) = x.num().leading().c;
        }
    return r;
}

inline ZwData zw_data(const PoissonContext& ctx, const WeylElt& wplus, const WeylElt& wminus) {
    const std::size_t n = ctx.rank();
    const Matrix<Scalar> sig = sigma_w(ctx, wplus, wminus);
    ZwData z;
    z.dim = n - rank(sig);
    if (!is_algebraic(ctx).algebraic) return z;
    // kernel of sigma(w) B over Q, cleared to integer vectors in L coordinates
    QMatrix B(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        const IVec b = ctx.lattice.basis_vector(j);
        for (std::size_t i = 0; i < n; ++i) B(i, j) = mpq_class(static_cast<long>(b[i]));
    }
    for (const auto& k : kernel(rational_matrix(sig) * B)) {
        mpz_class den = 1;
        for (const auto& x : k) den = lcm(den, mpz_class(x.get_den()));
        IVec v(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = mpz_class(k[i] * den).get_si();
        z.lattice_basis.push_back(std::move(v));
    }
    z.lattice_rank = z.lattice_basis.size();
    return z;
}

/// (m sigma(w) lambda, eta) for algebraic u with minimal witness m.
inline Rat y_lambda_exponent(const PoissonContext& ctx, const WeylElt& wplus, const WeylElt& wminus,
                             const IVec& lambda, const IVec& eta) {
    const AlgebraicityReport alg = is_algebraic(ctx);
    if (!alg.algebraic || !alg.witness_exists) throw std::invalid_argument("u is not algebraic");
    const QMatrix sig = rational_matrix(sigma_w(ctx, wplus, wminus));
    const std::size_t n = ctx.rank();
    std::vector<mpq_class> l(n);
    for (std::size_t i = 0; i < n; ++i) l[i] = mpq_class(static_cast<long>(lambda[i]));
    const auto sl = sig.apply(l);
    mpq_class s = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            s += sl[i] * mpq_class(static_cast<long>(eta[j])) * ctx.cartan.gram_fw()[i][j].to_mpq();
    s *= alg.m;
    return to_rat(s);
}

inline LeafReport leaf_report(const PoissonContext& ctx, const WeylElt& wplus, const WeylElt& wminus) {
    LeafReport r;
    r.wplus = wplus;
    r.wminus = wminus;
    r.l = wplus.length() + wminus.length();
    r.s = s_of_w(ctx, wplus, wminus);
    r.leaf_dim = r.l + r.s;
    r.orbit_rank = ctx.rank() - r.s;
    r.zw_dim = zw_data(ctx, wplus, wminus).lattice_rank;
    return r;
}

/// Weyl elements ordered by length, then lexicographically by reduced word.
inline std::vector<WeylElt> length_lex(const WeylGroup& W) {
    std::vector<WeylElt> v = W.elements();
    std::stable_sort(v.begin(), v.end(), [](const WeylElt& a, const WeylElt& b) {
        if (a.length() != b.length()) return a.length() < b.length();
        return a.word < b.word;
    });
    return v;
}

/// The full W x W table in length-lex order on (w+, w-).
inline std::vector<LeafReport> leaf_table(const PoissonContext& ctx, const WeylGroup& W) {
    std::vector<LeafReport> out;
    const auto order = length_lex(W);
    for (const auto& a : order)
        for (const auto& b : order) out.push_back(leaf_report(ctx, a, b));
    return out;
}

}  // namespace qmpg
