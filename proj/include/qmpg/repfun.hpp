/**
 * @file repfun.hpp
 * @brief Finite-dimensional modules L(Lambda), their rescaled (twisted)
 *        actions, matrix coefficients c_{f,v}, braiding operators and the
 *        ideal data attached to pairs of Weyl group elements.
 *
 * Module vectors are sparse maps basis-index -> Scalar. Functionals on a
 * module are stored the same way, in the dual basis. On a tensor product
 * M (x) N the basis vector x_a (x) y_b has index a * dim N + b.
 *
 * The module structure uses e_i f_j - f_j e_i = delta_ij qhat_i (k_i - k_i^-1),
 * k_l acting by q^{(l, mu)} on weight mu, and the coproduct
 * D(e) = e (x) 1 + k_a (x) e, D(f) = f (x) k_a^-1 + 1 (x) f.
 */

#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qmpg/double.hpp"
#include "qmpg/linalg.hpp"
#include "qmpg/qpair.hpp"
#include "qmpg/rootsys.hpp"
#include "qmpg/twist.hpp"

namespace qmpg {

using ModVec = LinComb<std::size_t>;

struct Module {
    const CartanData* cartan = nullptr;
    IVec highest;                           // empty unless built as L(Lambda)
    std::vector<IVec> weights;
    std::vector<Word> pedigree;             // f-word producing the vector from v_Lambda
    std::vector<std::vector<ModVec>> E, F;  // E[i][b] = e_i x_b

    [[nodiscard]] std::size_t dim() const { return weights.size(); }
    [[nodiscard]] std::size_t rank() const { return E.size(); }

    [[nodiscard]] std::map<IVec, std::size_t> multiplicities() const {
        std::map<IVec, std::size_t> m;
        for (const auto& w : weights) ++m[w];
        return m;
    }
    /// Basis indices of the given weight.
    [[nodiscard]] std::vector<std::size_t> indices_of(const IVec& wt) const {
        std::vector<std::size_t> r;
        for (std::size_t b = 0; b < dim(); ++b)
            if (weights[b] == wt) r.push_back(b);
        return r;
    }
    [[nodiscard]] Matrix<Scalar> matrix(const std::vector<ModVec>& op) const {
        Matrix<Scalar> m(dim(), dim());
        for (std::size_t b = 0; b < dim(); ++b)
            for (const auto& [a, c] : op[b]) m(a, b) = c;
        return m;
    }
};

using ModulePtr = std::shared_ptr<const Module>;

/// Root coordinates of a weight in the root lattice, or nullopt.
inline std::optional<IVec> root_coords(const CartanData& c, const IVec& wt) {
    const std::size_t n = c.rank();
    QMatrix A(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        const IVec a = c.simple_root(j);
        for (std::size_t i = 0; i < n; ++i) A(i, j) = mpq_class(static_cast<long>(a[i]));
    }
    std::vector<mpq_class> rhs(n);
    for (std::size_t i = 0; i < n; ++i) rhs[i] = mpq_class(static_cast<long>(wt[i]));
    const auto x = solve(A, rhs);
    if (!x) return std::nullopt;
    IVec r(n);
    for (std::size_t i = 0; i < n; ++i) {
        if ((*x)[i].get_den() != 1) return std::nullopt;
        r[i] = (*x)[i].get_num().get_si();
    }
    return r;
}

inline bool is_nonnegative(const IVec& v) {
    for (auto x : v)
        if (x < 0) return false;
    return true;
}

// ---- construction

/// L(Lambda) by breadth-first application of f_i to v_Lambda. A candidate
/// f_i x_b is a new basis vector iff its e-images are independent of those of
/// earlier candidates of the same weight; in an irreducible module a vector
/// below the top that all e_j kill is zero.
inline ModulePtr build_hw_module(const CartanData& c, const IVec& Lambda, std::size_t dim_cap = 4096) {
    const std::size_t n = c.rank();
    if (Lambda.size() != n || !c.is_dominant(Lambda)) throw std::invalid_argument("highest weight must be dominant");
    auto M = std::make_shared<Module>();
    M->cartan = &c;
    M->highest = Lambda;
    M->E.assign(n, {});
    M->F.assign(n, {});
    auto push_vector = [&](const IVec& wt, Word ped) {
        if (M->dim() >= dim_cap) throw std::length_error("module dimension exceeds cap " + std::to_string(dim_cap));
        M->weights.push_back(wt);
        M->pedigree.push_back(std::move(ped));
        for (std::size_t i = 0; i < n; ++i) {
            M->E[i].emplace_back();
            M->F[i].emplace_back();
        }
        return M->dim() - 1;
    };
    push_vector(Lambda, {});
    std::vector<IVec> alpha;
    std::vector<Scalar> qh;
    for (std::size_t i = 0; i < n; ++i) {
        alpha.push_back(c.simple_root(i));
        qh.push_back(qhat(static_cast<int>(c.d(i))));
    }
    auto apply_f = [&](std::size_t i, const ModVec& x) {
        ModVec r;
        for (const auto& [b, cb] : x) add_into(r, M->F[i][b], cb);
        return r;
    };

    std::vector<std::size_t> level{0};
    while (!level.empty()) {
        struct Cand {
            std::size_t b;
            std::size_t i;
        };
        std::vector<IVec> order;
        std::map<IVec, std::vector<Cand>> groups;
        for (std::size_t b : level)
            for (std::size_t i = 0; i < n; ++i) {
                const IVec wt = M->weights[b] - alpha[i];
                auto [it, fresh] = groups.try_emplace(wt);
                if (fresh) order.push_back(wt);
                it->second.push_back({b, i});
            }
        std::vector<std::size_t> next;
        for (const IVec& wt : order) {
            const auto& cands = groups[wt];
            // e_j f_i x_b = f_i e_j x_b + delta_ij qhat_i (q^{(a_i,mu)} - q^{-(a_i,mu)}) x_b
            std::vector<std::vector<ModVec>> images(cands.size(), std::vector<ModVec>(n));
            std::map<std::pair<std::size_t, std::size_t>, std::size_t> row_of;
            for (std::size_t k = 0; k < cands.size(); ++k) {
                const auto [b, i] = cands[k];
                for (std::size_t j = 0; j < n; ++j) {
                    ModVec img = apply_f(i, M->E[j][b]);
                    if (i == j) {
                        const std::int64_t h = c.inner_simple(M->weights[b], i);
                        add_term(img, b, qh[i] * (qpow(Rat(h)) - qpow(Rat(-h))));
                    }
                    for (const auto& [a, ca] : img) row_of.try_emplace({j, a}, row_of.size());
                    images[k][j] = std::move(img);
                }
            }
            Matrix<Scalar> A(row_of.size(), cands.size());
            for (std::size_t k = 0; k < cands.size(); ++k)
                for (std::size_t j = 0; j < n; ++j)
                    for (const auto& [a, ca] : images[k][j]) A(row_of.at({j, a}), k) = ca;
            const auto ech = echelon(A);
            std::vector<std::size_t> new_index;
            for (std::size_t k : ech.pivots) {
                const auto [b, i] = cands[k];
                Word ped{static_cast<int>(i)};
                ped.insert(ped.end(), M->pedigree[b].begin(), M->pedigree[b].end());
                const std::size_t idx = push_vector(wt, std::move(ped));
                for (std::size_t j = 0; j < n; ++j) M->E[j][idx] = images[k][j];
                new_index.push_back(idx);
                next.push_back(idx);
            }
            for (std::size_t k = 0; k < cands.size(); ++k) {
                const auto [b, i] = cands[k];
                ModVec img;
                for (std::size_t r = 0; r < ech.pivots.size(); ++r) add_term(img, new_index[r], ech.rref(r, k));
                M->F[i][b] = std::move(img);
            }
        }
        level = std::move(next);
    }
    return M;
}

/// The dual module, (u f)(x) = f(S(u) x), on the dual basis.
/// S(e_i) = -k_{a_i}^-1 e_i, S(f_i) = -f_i k_{a_i}, S(k_l) = k_{-l}.
inline ModulePtr dual_module(const Module& M) {
    const CartanData& c = *M.cartan;
    auto D = std::make_shared<Module>();
    D->cartan = M.cartan;
    for (const auto& w : M.weights) D->weights.push_back(-w);
    D->pedigree.assign(M.dim(), {});
    D->E.assign(M.rank(), std::vector<ModVec>(M.dim()));
    D->F.assign(M.rank(), std::vector<ModVec>(M.dim()));
    for (std::size_t i = 0; i < M.rank(); ++i)
        for (std::size_t b = 0; b < M.dim(); ++b) {
            const std::int64_t hb = c.inner_simple(M.weights[b], i);
            for (const auto& [a, ca] : M.E[i][b]) {
                const std::int64_t ha = c.inner_simple(M.weights[a], i);
                add_term(D->E[i][a], b, -(ca * qpow(Rat(-ha))));
            }
            for (const auto& [a, ca] : M.F[i][b]) add_term(D->F[i][a], b, -(ca * qpow(Rat(hb))));
        }
    return D;
}

/// M (x) N with the coproduct above.
inline ModulePtr tensor_module(const Module& M, const Module& N) {
    const CartanData& c = *M.cartan;
    const std::size_t dM = M.dim(), dN = N.dim(), n = M.rank();
    auto T = std::make_shared<Module>();
    T->cartan = M.cartan;
    T->E.assign(n, std::vector<ModVec>(dM * dN));
    T->F.assign(n, std::vector<ModVec>(dM * dN));
    for (std::size_t a = 0; a < dM; ++a)
        for (std::size_t b = 0; b < dN; ++b) {
            T->weights.push_back(M.weights[a] + N.weights[b]);
            T->pedigree.emplace_back();
            const std::size_t idx = a * dN + b;
            for (std::size_t i = 0; i < n; ++i) {
                const std::int64_t ha = c.inner_simple(M.weights[a], i), hb = c.inner_simple(N.weights[b], i);
                for (const auto& [a2, c2] : M.E[i][a]) add_term(T->E[i][idx], a2 * dN + b, c2);
                for (const auto& [b2, c2] : N.E[i][b]) add_term(T->E[i][idx], a * dN + b2, c2 * qpow(Rat(ha)));
                for (const auto& [a2, c2] : M.F[i][a]) add_term(T->F[i][idx], a2 * dN + b, c2 * qpow(Rat(-hb)));
                for (const auto& [b2, c2] : N.F[i][b]) add_term(T->F[i][idx], a * dN + b2, c2);
            }
        }
    return T;
}

// ---- actions

inline ModVec apply_op(const std::vector<ModVec>& op, const ModVec& x) {
    ModVec r;
    for (const auto& [b, cb] : x) add_into(r, op[b], cb);
    return r;
}

inline ModVec act_k(const Module& M, const IVec& l, const ModVec& x) {
    ModVec r;
    for (const auto& [b, cb] : x) add_term(r, b, cb * qpow(M.cartan->inner(l, M.weights[b])));
    return r;
}

/// Action of k_l g_1 ... g_m (g = e on the plus side, f on the minus side).
inline ModVec act_borel(const Module& M, Side side, const BorelMonomial& m, ModVec x) {
    const auto& ops = side == Side::Plus ? M.E : M.F;
    for (auto it = m.word.rbegin(); it != m.word.rend() && !x.empty(); ++it)
        x = apply_op(ops[static_cast<std::size_t>(*it)], x);
    return act_k(M, m.torus, x);
}

/// Untwisted action of s_l E t_m F; s and t both act as k.
inline ModVec act(const Module& M, const DoubleMonomial& m, const ModVec& x) {
    return act_borel(M, Side::Plus, m.a, act_borel(M, Side::Minus, m.u, x));
}

inline ModVec act(const Module& M, const DoubleElt& u, const ModVec& x) {
    ModVec r;
    for (const auto& [m, c] : u.terms) add_into(r, act(M, m, x), c);
    return r;
}

inline Bidegree double_degree(const QuantumBorel& B, const DoubleMonomial& m) {
    const Bidegree da = B.degree(Side::Plus, m.a), du = B.degree(Side::Minus, m.u);
    return {da.l - du.l, da.m - du.m};
}

/// Action of the double twisted by p^-1: u.x = p(l, d - g) p(d, g) u x for u of bidegree (g, d), x of weight l.
inline ModVec twisted_act(const Module& M, const QuantumBorel& B, const Bicharacter& p, const DoubleMonomial& m,
                          const ModVec& x) {
    const Bidegree deg = double_degree(B, m);
    ModVec scaled;
    for (const auto& [b, cb] : x) add_term(scaled, b, cb * qpow(p.action_exp(deg, M.weights[b])));
    return act(M, m, scaled);
}

inline ModVec twisted_act(const Module& M, const QuantumBorel& B, const Bicharacter& p, const DoubleElt& u,
                          const ModVec& x) {
    ModVec r;
    for (const auto& [m, c] : u.terms) add_into(r, twisted_act(M, B, p, m, x), c);
    return r;
}

using DoubleTensor2 = LinComb<std::pair<DoubleMonomial, DoubleMonomial>>;

/// D(a u) = D(a) D(u) for a normal-ordered monomial a u; each leg is again normal-ordered.
inline DoubleTensor2 double_coproduct(const QuantumBorel& B, const DoubleMonomial& m) {
    std::vector<std::tuple<std::int64_t, BorelMonomial, BorelMonomial>> pa, pu;
    B.coproduct_mono(Side::Plus, m.a, [&](std::int64_t e, BorelMonomial&& l, BorelMonomial&& r) {
        pa.emplace_back(e, std::move(l), std::move(r));
    });
    B.coproduct_mono(Side::Minus, m.u, [&](std::int64_t e, BorelMonomial&& l, BorelMonomial&& r) {
        pu.emplace_back(e, std::move(l), std::move(r));
    });
    DoubleTensor2 r;
    for (const auto& [ea, a1, a2] : pa)
        for (const auto& [eu, u1, u2] : pu)
            add_term(r, {DoubleMonomial{a1, u1}, DoubleMonomial{a2, u2}}, qpow(Rat(ea + eu)));
    return r;
}

/// Action on the tensor product of the twisted modules M and N through the coproduct.
inline ModVec tensor_twisted_act(const Module& M, const Module& N, const QuantumBorel& B, const Bicharacter& p,
                                 const DoubleMonomial& m, const ModVec& x) {
    const std::size_t dN = N.dim();
    ModVec r;
    const DoubleTensor2 cop = double_coproduct(B, m);
    for (const auto& [idx, cx] : x) {
        const std::size_t a = idx / dN, b = idx % dN;
        for (const auto& [legs, cc] : cop) {
            const ModVec left = twisted_act(M, B, p, legs.first, {{a, Scalar(1)}});
            if (left.empty()) continue;
            const ModVec right = twisted_act(N, B, p, legs.second, {{b, Scalar(1)}});
            for (const auto& [a2, ca] : left)
                for (const auto& [b2, cb] : right) add_term(r, a2 * dN + b2, cx * cc * ca * cb);
        }
    }
    return r;
}

/// Generators e_i, f_i, s_l, t_l for l in the given torus sample.
inline std::vector<DoubleMonomial> double_generators(const QuantumBorel& B, const std::vector<IVec>& torus) {
    const std::size_t n = B.rank();
    const BorelMonomial unit{IVec(n, 0), {}};
    std::vector<DoubleMonomial> g;
    for (std::size_t i = 0; i < n; ++i) {
        g.push_back({{IVec(n, 0), {static_cast<int>(i)}}, unit});
        g.push_back({unit, {IVec(n, 0), {static_cast<int>(i)}}});
    }
    for (const auto& l : torus) {
        g.push_back({{l, {}}, unit});
        g.push_back({unit, {l, {}}});
    }
    return g;
}

/// On every basis vector of weight mu: s_a.x = q^{(Phi_+ mu, a)} x and t_a.x = q^{-(Phi_- mu, a)} x.
inline bool eigenvalue_identity(const Module& M, const QuantumBorel& B, const Bicharacter& p) {
    const std::size_t n = B.rank();
    const BorelMonomial unit{IVec(n, 0), {}};
    for (std::size_t i = 0; i < n; ++i) {
        const IVec& a = B.alpha(i);
        for (std::size_t b = 0; b < M.dim(); ++b) {
            const ModVec x{{b, Scalar(1)}};
            const ModVec sx = twisted_act(M, B, p, {{a, {}}, unit}, x);
            const ModVec tx = twisted_act(M, B, p, {unit, {a, {}}}, x);
            if (!(sx == ModVec{{b, qpow(p.phi_plus_pair(M.weights[b], a))}})) return false;
            if (!(tx == ModVec{{b, qpow(-p.phi_minus_pair(M.weights[b], a))}})) return false;
        }
    }
    return true;
}

/// phi(x (x) y) = p(l, m) x (x) y carries the twisted action on (M (x) N) to the
/// tensor product of the twisted actions. Returns a description of the first failure.
inline std::optional<std::string> phi_coherence(const Module& M, const Module& N, const QuantumBorel& B,
                                                const Bicharacter& p, const std::vector<DoubleMonomial>& gens) {
    const ModulePtr T = tensor_module(M, N);
    const std::size_t dN = N.dim();
    auto phi = [&](const ModVec& x) {
        ModVec r;
        for (const auto& [idx, c] : x) add_term(r, idx, c * p.p(M.weights[idx / dN], N.weights[idx % dN]));
        return r;
    };
    for (const auto& g : gens)
        for (std::size_t idx = 0; idx < T->dim(); ++idx) {
            const ModVec x{{idx, Scalar(1)}};
            if (!(phi(twisted_act(*T, B, p, g, x)) == tensor_twisted_act(M, N, B, p, g, phi(x))))
                return "generator " + double_mono_str(g) + " on basis pair " + std::to_string(idx / dN) + "," +
                       std::to_string(idx % dN);
        }
    return std::nullopt;
}

// ---- braiding

/// Linear operator as its columns.
using Operator = std::vector<ModVec>;

/// Root-coordinate vectors b != 0 with mu + b a weight of M for some weight mu of M.
inline std::vector<IVec> raising_degrees(const Module& M) {
    std::set<IVec> out;
    const auto mult = M.multiplicities();
    for (const auto& [w1, k1] : mult)
        for (const auto& [w2, k2] : mult) {
            const auto r = root_coords(*M.cartan, w2 - w1);
            if (r && is_nonnegative(*r) && !is_zero_vec(*r)) out.insert(*r);
        }
    return {out.begin(), out.end()};
}

/// psi = tau o C o E^-1 : M (x) N -> N (x) M, with E = q^{(Phi_+ l, m)} and C the
/// canonical element acting through the twisted actions.
inline Operator braiding(const Module& M, const Module& N, const QuantumBorel& B, const Bicharacter& p) {
    const std::size_t dM = M.dim(), dN = N.dim(), n = B.rank();
    std::vector<CanonicalTerm> C{{{}, {}, Scalar(1)}};
    for (const IVec& beta : raising_degrees(M))
        for (auto& t : B.canonical_element(beta)) C.push_back(std::move(t));
    Operator psi(dM * dN);
    for (std::size_t a = 0; a < dM; ++a)
        for (std::size_t b = 0; b < dN; ++b) {
            const Scalar e_inv = qpow(-p.phi_plus_pair(M.weights[a], N.weights[b]));
            ModVec& out = psi[a * dN + b];
            for (const auto& t : C) {
                const ModVec xa = twisted_act(M, B, p, {{IVec(n, 0), t.plus}, {IVec(n, 0), {}}}, {{a, Scalar(1)}});
                if (xa.empty()) continue;
                const ModVec yb = twisted_act(N, B, p, {{IVec(n, 0), {}}, {IVec(n, 0), t.minus}}, {{b, Scalar(1)}});
                for (const auto& [a2, ca] : xa)
                    for (const auto& [b2, cb] : yb) add_term(out, b2 * dM + a2, e_inv * t.coeff * ca * cb);
            }
        }
    return psi;
}

/// psi o (u on M (x) N) = (u on N (x) M) o psi for each generator; first failure described.
inline std::optional<std::string> braiding_naturality(const Module& M, const Module& N, const QuantumBorel& B,
                                                      const Bicharacter& p, const Operator& psi,
                                                      const std::vector<DoubleMonomial>& gens) {
    for (const auto& g : gens)
        for (std::size_t idx = 0; idx < psi.size(); ++idx) {
            const ModVec x{{idx, Scalar(1)}};
            const ModVec lhs = apply_op(psi, tensor_twisted_act(M, N, B, p, g, x));
            const ModVec rhs = tensor_twisted_act(N, M, B, p, g, psi[idx]);
            if (!(lhs == rhs)) return "generator " + double_mono_str(g) + " on basis index " + std::to_string(idx);
        }
    return std::nullopt;
}

inline Matrix<Scalar> operator_matrix(const Operator& op, std::size_t rows) {
    Matrix<Scalar> m(rows, op.size());
    for (std::size_t b = 0; b < op.size(); ++b)
        for (const auto& [a, c] : op[b]) m(a, b) = c;
    return m;
}

// ---- matrix coefficients

struct CoordTerm {
    ModulePtr module;
    ModVec f;  // functional in the dual basis, supported on one weight
    ModVec v;  // vector of one weight
    Scalar coeff;
};

/// A finite sum of coefficients c_{f,v}, read as functionals on the double.
struct CoordFn {
    std::vector<CoordTerm> terms;
};

inline std::map<IVec, ModVec> split_by_weight(const Module& M, const ModVec& x) {
    std::map<IVec, ModVec> r;
    for (const auto& [b, c] : x) add_term(r[M.weights[b]], b, c);
    return r;
}

/// c_{f,v}, split into homogeneous pieces.
inline CoordFn coord(const ModulePtr& M, const ModVec& f, const ModVec& v, const Scalar& c = Scalar(1)) {
    CoordFn r;
    for (const auto& [wf, fp] : split_by_weight(*M, f))
        for (const auto& [wv, vp] : split_by_weight(*M, v)) r.terms.push_back({M, fp, vp, c});
    return r;
}

inline CoordFn operator+(CoordFn a, const CoordFn& b) {
    a.terms.insert(a.terms.end(), b.terms.begin(), b.terms.end());
    return a;
}
inline CoordFn operator*(const Scalar& s, CoordFn a) {
    for (auto& t : a.terms) t.coeff = s * t.coeff;
    return a;
}

/// Bidegree (l, m): f pairs with the weight space -l, v has weight m.
inline Bidegree coord_degree(const CoordTerm& t) {
    return {-t.module->weights.at(t.f.begin()->first), t.module->weights.at(t.v.begin()->first)};
}

inline Scalar apply_functional(const ModVec& f, const ModVec& x) {
    Scalar s;
    for (const auto& [b, c] : x)
        if (auto it = f.find(b); it != f.end()) s += it->second * c;
    return s;
}

/// <c | m>_p through the twisted action: f(m . v).
inline Scalar coord_eval(const CoordFn& c, const QuantumBorel& B, const Bicharacter& p, const DoubleMonomial& m) {
    Scalar s;
    for (const auto& t : c.terms) {
        if (t.f.empty() || t.v.empty()) continue;
        s += t.coeff * apply_functional(t.f, twisted_act(*t.module, B, p, m, t.v));
    }
    return s;
}

/// <c | m> = p(l, g) p(m, d) f(m v): the deformed pairing applied to the untwisted coefficient.
inline Scalar coord_eval_deformed(const CoordFn& c, const QuantumBorel& B, const Bicharacter& p,
                                  const DoubleMonomial& m) {
    const Bidegree du = double_degree(B, m);
    Scalar s;
    for (const auto& t : c.terms) {
        if (t.f.empty() || t.v.empty()) continue;
        const Scalar v = apply_functional(t.f, act(*t.module, m, t.v));
        if (v.is_zero()) continue;
        const Bidegree dc = coord_degree(t);
        s += t.coeff * v.mul_monomial(p.p_exp(dc.l, du.l) + p.p_exp(dc.m, du.m), 1);
    }
    return s;
}

/// Product in the twisted function algebra: c_{f,v} c_{f',v'} = c_{f (x) f', v (x) v'} on M (x) N,
/// scaled by p(l, l') / p(m, m').
inline CoordFn coord_mul(const CoordFn& a, const CoordFn& b, const Bicharacter& p) {
    std::map<std::pair<const Module*, const Module*>, ModulePtr> tensors;
    CoordFn r;
    for (const auto& s : a.terms)
        for (const auto& t : b.terms) {
            if (s.f.empty() || s.v.empty() || t.f.empty() || t.v.empty()) continue;
            auto& T = tensors[{s.module.get(), t.module.get()}];
            if (!T) T = tensor_module(*s.module, *t.module);
            const std::size_t dN = t.module->dim();
            ModVec f, v;
            for (const auto& [i, ci] : s.f)
                for (const auto& [j, cj] : t.f) add_term(f, i * dN + j, ci * cj);
            for (const auto& [i, ci] : s.v)
                for (const auto& [j, cj] : t.v) add_term(v, i * dN + j, ci * cj);
            const Scalar factor = qpow(p.twist_exp(coord_degree(s), coord_degree(t)));
            r.terms.push_back({T, std::move(f), std::move(v), s.coeff * t.coeff * factor});
        }
    return r;
}

/// f-words w (acting as f_{w0} ... f_{wk}) with a nonzero image of v.
inline std::set<Word> live_minus_words(const Module& M, const ModVec& v) {
    std::set<Word> out;
    std::vector<std::pair<Word, ModVec>> stack{{{}, v}};
    while (!stack.empty()) {
        auto [w, x] = std::move(stack.back());
        stack.pop_back();
        out.insert(w);
        for (std::size_t i = 0; i < M.rank(); ++i) {
            ModVec y = apply_op(M.F[i], x);
            if (y.empty()) continue;
            Word w2{static_cast<int>(i)};
            w2.insert(w2.end(), w.begin(), w.end());
            stack.emplace_back(std::move(w2), std::move(y));
        }
    }
    return out;
}

/// Monomials s_l E t_m F on which the terms of c of bidegree deg can be nonzero.
inline std::vector<DoubleMonomial> evaluation_set(const CoordFn& c, const Bidegree& deg, const QuantumBorel& B,
                                                  const std::vector<IVec>& torus) {
    const CartanData& cd = B.cartan();
    std::set<Word> fwords;
    for (const auto& t : c.terms)
        if (!t.f.empty() && !t.v.empty() && coord_degree(t) == deg) fwords.merge(live_minus_words(*t.module, t.v));
    // weight(E) - weight(F) = -(l + m)
    const auto shift = root_coords(cd, -(deg.l + deg.m));
    std::vector<DoubleMonomial> out;
    if (!shift) return out;
    const std::size_t n = cd.rank();
    std::vector<IVec> tor{IVec(n, 0)};
    tor.insert(tor.end(), torus.begin(), torus.end());
    for (const Word& F : fwords) {
        const IVec target = B.word_root_coords(F) + *shift;
        if (!is_nonnegative(target)) continue;
        for (const Word& E : words_of_weight(target))
            for (const auto& l : tor)
                for (const auto& m : tor) out.push_back({{l, E}, {m, F}});
    }
    return out;
}

/// Compares two coordinate functions as functionals on the double. Terms of
/// different bidegrees are separated by the torus, so each bidegree is compared
/// on its own evaluation set. Returns a separating monomial on mismatch.
inline std::optional<std::string> coordfn_compare(const CoordFn& a, const CoordFn& b, const QuantumBorel& B,
                                                  const Bicharacter& p, const std::vector<IVec>& torus = {}) {
    std::vector<Bidegree> degs;
    auto collect = [&](const CoordFn& c) {
        for (const auto& t : c.terms) {
            if (t.f.empty() || t.v.empty()) continue;
            const Bidegree d = coord_degree(t);
            if (std::find(degs.begin(), degs.end(), d) == degs.end()) degs.push_back(d);
        }
    };
    collect(a);
    collect(b);
    auto restrict_to = [](const CoordFn& c, const Bidegree& d) {
        CoordFn r;
        for (const auto& t : c.terms)
            if (!t.f.empty() && !t.v.empty() && coord_degree(t) == d) r.terms.push_back(t);
        return r;
    };
    // Values agree with coord_eval. For homogeneous f and v the torus parts and the
    // twist only contribute a q-power, so f(E F v) is needed once per word pair.
    const CartanData& cd = B.cartan();
    // g_{w_0} ... g_{w_k} x is built from the image of the suffix w_1 ... w_k
    std::map<std::tuple<const CoordTerm*, Side, Word, Word>, ModVec> images;
    std::function<const ModVec&(const CoordTerm&, Side, const Word&, const Word&)> image =
        [&](const CoordTerm& t, Side side, const Word& w, const Word& F) -> const ModVec& {
        const auto key = std::make_tuple(&t, side, w, F);
        if (auto it = images.find(key); it != images.end()) return it->second;
        ModVec x;
        if (w.empty()) x = side == Side::Minus ? t.v : image(t, Side::Minus, F, F);
        else {
            const ModVec& rest = image(t, side, Word(w.begin() + 1, w.end()), F);
            const auto& ops = side == Side::Plus ? t.module->E : t.module->F;
            x = apply_op(ops[static_cast<std::size_t>(w[0])], rest);
        }
        return images.emplace(key, std::move(x)).first->second;
    };
    // within one bidegree every term has the same weights and hence the same q-power
    std::map<std::tuple<const CoordFn*, Word, Word>, Scalar> sums;
    auto eval = [&](const CoordFn& c, const DoubleMonomial& m) {
        if (c.terms.empty()) return Scalar();
        auto [it, fresh] = sums.try_emplace({&c, m.a.word, m.u.word});
        if (fresh)
            for (const auto& t : c.terms) {
                const Scalar x = apply_functional(t.f, image(t, Side::Plus, m.a.word, m.u.word));
                if (!x.is_zero()) it->second += t.coeff * x;
            }
        if (it->second.is_zero()) return Scalar();
        const CoordTerm& t0 = c.terms.front();
        const IVec wv = t0.module->weights.at(t0.v.begin()->first);
        const IVec w1 = wv - cd.from_root_coords(B.word_root_coords(m.u.word));
        const IVec w2 = w1 + cd.from_root_coords(B.word_root_coords(m.a.word));
        const ExponentVec e = ExponentVec(cd.inner(m.a.torus, w2)) + ExponentVec(cd.inner(m.u.torus, w1)) +
                              p.action_exp(double_degree(B, m), wv);
        return it->second.mul_monomial(e, 1);
    };
    for (const auto& d : degs) {
        // both memos key on addresses inside ra and rb
        sums.clear();
        images.clear();
        const CoordFn ra = restrict_to(a, d), rb = restrict_to(b, d);
        const CoordFn both = ra + rb;
        for (const auto& m : evaluation_set(both, d, B, torus)) {
            const Scalar va = eval(ra, m), vb = eval(rb, m);
            if (!(va == vb)) return double_mono_str(m) + ": " + va.str() + " vs " + vb.str();
        }
    }
    return std::nullopt;
}

// ---- commutation relations of matrix coefficients

struct Cor310Report {
    bool ok = true;
    LinExp exponent;               // (Phi_+ Lambda, gamma) - (Phi_+ mu, eta)
    std::size_t corrections = 0;   // nonzero terms of sum_{b != 0} C_b (f (x) g)
    std::string separating;
};

/// For f in L(Lambda)* of weight -mu, g in L(Lambda')* of weight -eta and v in L(Lambda')_gamma:
///   c_{g,v} c_{f,vL} = q^X (c_{f,vL} c_{g,v} + sum_nu c_{f_nu,vL} c_{g_nu,v}),
/// with sum f_nu (x) g_nu = sum_{b != 0} C_b (f (x) g) and X = (Phi_+ Lambda, gamma) - (Phi_+ mu, eta).
inline Cor310Report verify_cor310(const QuantumBorel& B, const Bicharacter& p, const ModulePtr& L,
                                  const ModulePtr& Lp, const ModVec& f, const ModVec& g, const ModVec& v,
                                  const std::vector<IVec>& torus = {}) {
    const std::size_t n = B.rank();
    if (f.empty() || g.empty() || v.empty()) throw std::invalid_argument("verify_cor310: zero argument");
    const IVec mu = L->weights[f.begin()->first], eta = Lp->weights[g.begin()->first];
    const IVec gamma = Lp->weights[v.begin()->first];
    const ModVec vL{{0, Scalar(1)}};
    Cor310Report rep;
    rep.exponent = p.phi_plus_pair(L->highest, gamma) - p.phi_plus_pair(mu, eta);

    const ModulePtr Ld = dual_module(*L), Lpd = dual_module(*Lp);
    const BorelMonomial unit{IVec(n, 0), {}};
    CoordFn corr;
    for (const IVec& beta : raising_degrees(*L))
        for (const auto& t : B.canonical_element(beta)) {
            const ModVec fn = twisted_act(*Ld, B, p, {{IVec(n, 0), t.plus}, unit}, f);
            if (fn.empty()) continue;
            const ModVec gn = twisted_act(*Lpd, B, p, {unit, {IVec(n, 0), t.minus}}, g);
            if (gn.empty()) continue;
            ++rep.corrections;
            corr = corr + t.coeff * coord_mul(coord(L, fn, vL), coord(Lp, gn, v), p);
        }
    const CoordFn lhs = coord_mul(coord(Lp, g, v), coord(L, f, vL), p);
    const CoordFn rhs = qpow(rep.exponent) * (coord_mul(coord(L, f, vL), coord(Lp, g, v), p) + corr);
    if (auto sep = coordfn_compare(lhs, rhs, B, p, torus)) {
        rep.ok = false;
        rep.separating = *sep;
    }
    return rep;
}

// ---- ideal data

/// Smallest subspace containing the seed and stable under the given operators; rows are a basis.
inline Matrix<Scalar> saturate(const Module& M, const std::vector<std::vector<ModVec>>& ops, const ModVec& seed) {
    std::vector<ModVec> basis;
    Matrix<Scalar> rows(0, M.dim());
    auto try_add = [&](const ModVec& x) {
        if (x.empty()) return false;
        Matrix<Scalar> m(rows.rows() + 1, M.dim());
        for (std::size_t r = 0; r < rows.rows(); ++r)
            for (std::size_t c = 0; c < M.dim(); ++c) m(r, c) = rows(r, c);
        for (const auto& [b, c] : x) m(rows.rows(), b) = c;
        if (rank(m) == rows.rows()) return false;
        rows = std::move(m);
        basis.push_back(x);
        return true;
    };
    try_add(seed);
    for (std::size_t k = 0; k < basis.size(); ++k)
        for (const auto& op : ops) try_add(apply_op(op, basis[k]));
    return rows;
}

struct IdealData {
    std::size_t plus_saturation = 0, minus_saturation = 0;
    std::vector<ModVec> plus;   // f with c_{f, v_Lambda} generating the plus ideal
    std::vector<ModVec> minus;  // f with c_{f, v_{w0 Lambda}} generating the minus ideal
};

inline std::vector<ModVec> orthogonal(const Matrix<Scalar>& rows, std::size_t dim) {
    std::vector<ModVec> out;
    if (rows.rows() == 0) {
        for (std::size_t b = 0; b < dim; ++b) out.push_back({{b, Scalar(1)}});
        return out;
    }
    for (const auto& k : kernel(rows)) {
        ModVec f;
        for (std::size_t b = 0; b < k.size(); ++b) add_term(f, b, k[b]);
        out.push_back(std::move(f));
    }
    return out;
}

/// Orthogonals of U(b+) L(Lambda)_{w+ Lambda} and U(b-) L(Lambda)_{w- w0 Lambda}.
inline IdealData ideal_generators(const Module& M, const WeylGroup& W, const WeylElt& wplus, const WeylElt& wminus) {
    const auto extreme = [&](const IVec& wt) {
        const auto idx = M.indices_of(wt);
        if (idx.size() != 1) throw std::logic_error("extreme weight space must be one-dimensional");
        return ModVec{{idx[0], Scalar(1)}};
    };
    IdealData d;
    const Matrix<Scalar> sp = saturate(M, M.E, extreme(wplus.act(M.highest)));
    const Matrix<Scalar> sm = saturate(M, M.F, extreme(wminus.act(W.longest().act(M.highest))));
    d.plus_saturation = sp.rows();
    d.minus_saturation = sm.rows();
    d.plus = orthogonal(sp, M.dim());
    d.minus = orthogonal(sm, M.dim());
    return d;
}

/// Exponents in c_{wL} a = q^{x} a c_{wL} (mod the plus ideal) and the analogue for
/// the lowest-weight coefficient, for a of bidegree (-eta, gamma).
inline std::pair<LinExp, LinExp> cw_exponents(const Bicharacter& p, const WeylElt& wplus, const WeylElt& wminus,
                                              const IVec& Lambda, const IVec& eta, const IVec& gamma) {
    return {p.phi_plus_pair(wplus.act(Lambda), eta) - p.phi_plus_pair(Lambda, gamma),
            p.phi_minus_pair(Lambda, gamma) - p.phi_minus_pair(wminus.act(Lambda), eta)};
}

// ---- restriction to the minus Borel

struct BorelRestriction {
    BorelElt x;  // plus side, torus-free; the restriction is x k_{-Lambda}
    IVec Lambda;
    bool roundtrip = false;
};

/// Solves <x k_{-Lambda} | y>_p = <c_{f, v_Lambda} | y>_p for y running over minus monomials.
inline BorelRestriction borel_restriction(const QuantumBorel& B, const Bicharacter& p, const Module& M,
                                          const ModVec& f, const std::vector<IVec>& torus = {}) {
    if (f.empty()) throw std::invalid_argument("borel_restriction: zero functional");
    const CartanData& c = B.cartan();
    const std::size_t n = B.rank();
    const IVec lambda = M.weights[f.begin()->first];
    const auto beta = root_coords(c, M.highest - lambda);
    if (!beta || !is_nonnegative(*beta)) throw std::logic_error("borel_restriction: weight outside L(Lambda)");
    const ModulePtr Mp(std::shared_ptr<const Module>(), &M);
    const CoordFn cf = coord(Mp, f, {{0, Scalar(1)}});
    const BorelMonomial unit{IVec(n, 0), {}};
    const GramBlock& g = B.gram(*beta);
    const IVec negL = -M.highest;
    auto pairing = [&](const Word& E, const BorelMonomial& y) { return B.deformed_pair_mono({negL, E}, y, p); };
    Matrix<Scalar> A(g.words.size(), g.rank);
    std::vector<Scalar> rhs(g.words.size());
    for (std::size_t r = 0; r < g.words.size(); ++r) {
        const BorelMonomial y{IVec(n, 0), g.words[r]};
        for (std::size_t k = 0; k < g.rank; ++k) A(r, k) = pairing(g.words[g.plus_basis[k]], y);
        rhs[r] = coord_eval(cf, B, p, {unit, y});
    }
    const auto sol = solve(A, rhs);
    if (!sol) throw std::domain_error("borel_restriction: singular system");
    BorelRestriction res;
    res.Lambda = M.highest;
    res.x.side = Side::Plus;
    for (std::size_t k = 0; k < g.rank; ++k) add_term(res.x.terms, BorelMonomial{IVec(n, 0), g.words[g.plus_basis[k]]}, (*sol)[k]);
    res.roundtrip = true;
    std::vector<IVec> tor{IVec(n, 0)};
    tor.insert(tor.end(), torus.begin(), torus.end());
    for (const Word& F : g.words)
        for (const auto& m : tor) {
            const BorelMonomial y{m, F};
            Scalar lhs;
            for (const auto& [xm, xc] : res.x.terms) lhs += xc * pairing(xm.word, y);
            if (!(lhs == coord_eval(cf, B, p, {unit, y}))) res.roundtrip = false;
        }
    return res;
}

}  // namespace qmpg
