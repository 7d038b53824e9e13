/// @file cli.hpp
/// @brief Subcommands of the qmpg tool: run sessions, verification suites and report assembly.
#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <functional>
#include <map>
#include <mutex>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "qmpg/cache.hpp"
#include "qmpg/config.hpp"
#include "qmpg/double.hpp"
#include "qmpg/poisson.hpp"
#include "qmpg/qpair.hpp"
#include "qmpg/repfun.hpp"
#include "qmpg/report.hpp"
#include "qmpg/rootsys.hpp"
#include "qmpg/twist.hpp"

namespace qmpg {

struct RunOptions {
    int height_cap = 0;  // overrides the configuration when positive
    unsigned jobs = 1;
};

/// Runs f(0..count-1) on up to `jobs` threads; the first exception is rethrown.
template <class F>
void parallel_for(std::size_t count, unsigned jobs, F&& f) {
    if (jobs <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) f(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr err;
    std::mutex m;
    std::vector<std::thread> pool;
    const std::size_t workers = std::min<std::size_t>(jobs, count);
    for (std::size_t t = 0; t < workers; ++t)
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next++;
                if (i >= count) return;
                try {
                    f(i);
                } catch (...) {
                    std::lock_guard lock(m);
                    if (!err) err = std::current_exception();
                }
            }
        });
    for (auto& t : pool) t.join();
    if (err) std::rethrow_exception(err);
}

/// Everything a subcommand needs, built once from a configuration.
class Session {
public:
    Session(const Config& cfg, RunOptions opt)
        : cfg(cfg),
          lattice(cfg.lattice()),
          p(cfg.bicharacter()),
          B(cfg.cartan),
          height(opt.height_cap > 0 ? opt.height_cap : cfg.height_cap()),
          D(B, std::max(height, 6)),
          W(cfg.cartan),
          jobs(std::max(1u, opt.jobs)) {
        names = cfg.symbols;
        for (std::size_t k = names.size(); k + 1 < kExpDim; ++k) names.push_back("x" + std::to_string(k + 1));
    }
    Session(const Session&) = delete;
    Session& operator=(const Session&) = delete;

    const Config& cfg;
    Lattice lattice;
    Bicharacter p;
    QuantumBorel B;
    int height;
    QuantumDouble D;
    WeylGroup W;
    unsigned jobs;
    std::vector<std::string> names;

    [[nodiscard]] std::size_t rank() const { return cfg.cartan.rank(); }
    [[nodiscard]] std::string str(const Scalar& x) const { return x.str(names); }
    [[nodiscard]] std::string str(const LinExp& x) const { return render_linexp(x, names); }
    [[nodiscard]] std::vector<IVec> lattice_basis() const {
        std::vector<IVec> v;
        for (std::size_t j = 0; j < rank(); ++j) v.push_back(lattice.basis_vector(j));
        return v;
    }
    /// sum_j c_j b_j in fundamental-weight coordinates.
    [[nodiscard]] IVec from_lattice(const IVec& coeffs) const {
        IVec v(rank(), 0);
        for (std::size_t j = 0; j < rank(); ++j) v = v + coeffs[j] * lattice.basis_vector(j);
        return v;
    }
    [[nodiscard]] std::mt19937 rng(unsigned salt) const { return std::mt19937(cfg.seed * 7919u + salt); }
};

inline std::string cartan_label(const CartanData& c) {
    if (c.name() != "custom") return c.name();
    return "[" + cartan_key(c) + "]";
}

inline std::string lattice_label(const Config& cfg) {
    if (cfg.lattice_kind != "custom") return cfg.lattice_kind;
    std::string s = "basis";
    for (std::size_t j = 0; j < cfg.cartan.rank(); ++j) {
        IVec b;
        for (std::size_t k = 0; k < cfg.cartan.rank(); ++k) b.push_back(cfg.lattice_basis[k][j]);
        s += " (" + join_ivec(b) + ")";
    }
    return s;
}

inline std::string u_label(const Session& s) {
    std::string out;
    for (std::size_t i = 0; i < s.rank(); ++i) {
        if (i) out += "; ";
        for (std::size_t j = 0; j < s.rank(); ++j) out += (j ? " " : "") + s.str(s.cfg.u[i][j]);
    }
    return out;
}

inline Report new_report(const Session& s, const std::string& command) {
    Report r;
    r.command = command;
    r.set("cartan", cartan_label(s.cfg.cartan));
    r.set("lattice", lattice_label(s.cfg));
    r.set("u", u_label(s));
    if (!s.cfg.symbols.empty()) {
        std::string sy;
        for (const auto& n : s.cfg.symbols) sy += (sy.empty() ? "" : ",") + n;
        r.set("symbols", sy);
    }
    return r;
}

// ---- independent counts used by the suites

/// Number of ways to write beta (root coordinates) as a multiset of positive roots.
inline std::int64_t kostant_count(const std::vector<IVec>& roots, const IVec& beta, std::size_t from = 0) {
    if (is_zero_vec(beta)) return 1;
    std::int64_t total = 0;
    for (std::size_t k = from; k < roots.size(); ++k) {
        const IVec rest = beta - roots[k];
        if (is_nonnegative(rest)) total += kostant_count(roots, rest, k);
    }
    return total;
}

/// prod over positive roots of (Lambda + rho, a) / (rho, a).
inline std::int64_t weyl_dimension(const CartanData& c, const IVec& Lambda) {
    const IVec rho(c.rank(), 1);
    Rat d(1);
    for (const IVec& r : c.positive_roots()) {
        const IVec a = c.from_root_coords(r);
        d = d * c.inner(Lambda + rho, a) / c.inner(rho, a);
    }
    if (!d.is_integer()) throw std::logic_error("Weyl dimension is not an integer");
    return d.num();
}

/// Nonnegative root-coordinate vectors of the given height, lexicographically.
inline std::vector<IVec> vectors_of_height(std::size_t n, std::int64_t h) {
    std::vector<IVec> out;
    IVec v(n, 0);
    std::function<void(std::size_t, std::int64_t)> rec = [&](std::size_t k, std::int64_t left) {
        if (k + 1 == n) {
            v[k] = left;
            out.push_back(v);
            return;
        }
        for (std::int64_t x = left; x >= 0; --x) {
            v[k] = x;
            rec(k + 1, left - x);
        }
    };
    rec(0, h);
    std::sort(out.begin(), out.end());
    return out;
}

/// All coefficient vectors in [-r, r]^n.
inline std::vector<IVec> box(std::size_t n, std::int64_t r) {
    std::vector<IVec> out{IVec{}};
    for (std::size_t k = 0; k < n; ++k) {
        std::vector<IVec> next;
        for (const auto& v : out)
            for (std::int64_t x = -r; x <= r; ++x) {
                IVec w = v;
                w.push_back(x);
                next.push_back(std::move(w));
            }
        out = std::move(next);
    }
    return out;
}

/// Dominant weights of L with coordinates in [0, bound], smallest coordinate sum first,
/// ties broken so that w_1 precedes w_2.
inline std::vector<IVec> dominant_in_lattice(const Session& s, std::int64_t bound, bool lattice_only = true) {
    std::vector<IVec> out;
    for (IVec v : box(s.rank(), bound)) {
        if (!is_nonnegative(v)) continue;
        if (lattice_only && !s.lattice.contains(v)) continue;
        out.push_back(std::move(v));
    }
    std::sort(out.begin(), out.end(), [](const IVec& a, const IVec& b) {
        const auto sa = std::accumulate(a.begin(), a.end(), std::int64_t{0});
        const auto sb = std::accumulate(b.begin(), b.end(), std::int64_t{0});
        return sa != sb ? sa < sb : a > b;
    });
    return out;
}

/// The smallest nonzero dominant weight of L.
inline IVec smallest_dominant(const Session& s) {
    for (std::int64_t bound = 1;; ++bound)
        for (const auto& v : dominant_in_lattice(s, bound))
            if (!is_zero_vec(v)) return v;
}

// ---- pairing helpers

inline BorelElt as_elt(Side side, const BorelMonomial& m) { return BorelElt{side, {{m, Scalar(1)}}}; }

inline Scalar deformed_pair(const QuantumBorel& B, const Bicharacter& p, const BorelElt& a, const BorelElt& y) {
    Scalar s;
    for (const auto& [ma, ca] : a.terms)
        for (const auto& [my, cy] : y.terms) {
            const Scalar v = B.deformed_pair_mono(ma, my, p);
            if (!v.is_zero()) s += ca * cy * v;
        }
    return s;
}

/// The four dual-pair axioms for <a|u>_{p^-1} = p(l,g) p(m,d) <a|u> between
/// U_{q,p^-1}(b+)^op and U_{q,p^-1}(b-); a trivial p gives the undeformed pairing.
/// Returns the first failing axiom.
inline std::optional<std::string> dual_pair_axioms(const QuantumBorel& B, const Bicharacter& p, const BorelElt& x,
                                                   const BorelElt& x1, const BorelElt& x2, const BorelElt& y,
                                                   const BorelElt& y1, const BorelElt& y2) {
    const PairingFactor m = as_factor(p.inverse());
    auto P = [&](const BorelElt& a, const BorelElt& u) { return deformed_pair(B, p, a, u); };
    if (!(P(x, B.one(Side::Minus)) == B.counit(x)) || !(P(B.one(Side::Plus), y) == B.counit(y))) return "counit";
    Scalar r2;
    for (const auto& [legs, c] : B.coproduct(x))
        r2 += c * P(as_elt(Side::Plus, legs.first), y1) * P(as_elt(Side::Plus, legs.second), y2);
    if (!(P(x, twist_mul(B, y1, y2, m)) == r2)) return "product of the minus factors";
    Scalar r3;
    for (const auto& [legs, c] : B.coproduct(y))
        r3 += c * P(x2, as_elt(Side::Minus, legs.first)) * P(x1, as_elt(Side::Minus, legs.second));
    if (!(P(twist_mul(B, x1, x2, m), y) == r3)) return "product of the plus factors";
    if (!(P(B.antipode(x), B.antipode(y)) == P(x, y))) return "antipode";
    return std::nullopt;
}

/// Random monomial with torus part in L and a word of length at most max_len.
inline BorelMonomial random_mono(std::mt19937& rng, const Session& s, std::size_t max_len) {
    const std::size_t n = s.rank();
    std::uniform_int_distribution<int> len(0, static_cast<int>(max_len)), gen(0, static_cast<int>(n) - 1), tor(-1, 1);
    IVec coeffs(n);
    for (auto& c : coeffs) c = tor(rng);
    BorelMonomial m{s.from_lattice(coeffs), {}};
    const int L = len(rng);
    for (int k = 0; k < L; ++k) m.word.push_back(gen(rng));
    return m;
}

// ---- suites

struct SuiteOutput {
    std::string suite;
    std::vector<std::vector<std::string>> checks;  // check, status, detail
    std::vector<Section> sections;

    void check(const std::string& name, bool ok, const std::string& detail) {
        checks.push_back({name, ok ? "PASS" : "FAIL", detail});
    }
    void skip(const std::string& name, const std::string& why) { checks.push_back({name, "SKIP", why}); }
    Section& section(const std::string& name, std::vector<std::string> columns) {
        sections.push_back({suite + ": " + name, std::move(columns), {}});
        return sections.back();
    }
};

inline std::string pass_text(bool ok) { return ok ? "PASS" : "FAIL"; }

inline SuiteOutput suite_hopf(const Session& s) {
    SuiteOutput out{"hopf", {}, {}};
    const QuantumBorel& B = s.B;
    const std::size_t n = s.rank();
    std::vector<BorelElt> sample;
    for (Side side : {Side::Plus, Side::Minus}) {
        for (const IVec& b : s.lattice_basis()) sample.push_back(B.k(side, b));
        sample.push_back(B.monomial(side, s.lattice.basis_vector(0), {0}));
        if (n > 1) sample.push_back(B.monomial(side, IVec(n, 0), {0, 1}));
    }
    for (std::size_t i = 0; i < n; ++i) {
        sample.push_back(B.e(i));
        sample.push_back(B.f(i));
    }
    const Bicharacter pinv = s.p.inverse();
    const auto rep = verify_hopf_twist(B, sample, as_factor(pinv));
    out.check("twisted Borel algebras are Hopf", rep.ok,
              rep.ok ? std::to_string(sample.size()) + " sample elements, all ordered pairs" : rep.failure);

    bool coassoc = true;
    for (const auto& x : sample) coassoc = coassoc && B.coproduct3(x) == B.coproduct3_right(x);
    out.check("coassociativity", coassoc, std::to_string(sample.size()) + " sample elements");

    // twisting by p and then by p^-1 gives back the original product
    std::string untwist_fail;
    for (const auto& x : sample)
        for (const auto& y : sample) {
            if (x.side != y.side || !untwist_fail.empty()) continue;
            const BorelElt once = twist_mul(B, x, y, as_factor(s.p));
            const auto& mx = x.terms.begin()->first;
            const auto& my = y.terms.begin()->first;
            const ExponentVec back = pinv.twist_exp(B.degree(x.side, mx), B.degree(y.side, my));
            BorelElt twice{x.side, {}};
            for (const auto& [m, c] : once.terms) add_term(twice.terms, m, c.mul_monomial(back, 1));
            if (!(twice == B.mul(x, y))) untwist_fail = "pair " + lincomb_str(x.terms, [](const BorelMonomial& m) { return torus_str('k', m.torus) + " " + word_str(m.word, 'g'); });
        }
    out.check("twist then untwist", untwist_fail.empty(), untwist_fail.empty() ? "products restored exactly" : untwist_fail);

    auto rng = s.rng(11);
    const int trials = 20;
    std::optional<std::string> fail;
    for (int t = 0; t < trials && !fail; ++t) {
        const auto x = as_elt(Side::Plus, random_mono(rng, s, 3));
        const auto x1 = as_elt(Side::Plus, random_mono(rng, s, 2));
        const auto x2 = as_elt(Side::Plus, random_mono(rng, s, 2));
        const auto y = as_elt(Side::Minus, random_mono(rng, s, 3));
        const auto y1 = as_elt(Side::Minus, random_mono(rng, s, 2));
        const auto y2 = as_elt(Side::Minus, random_mono(rng, s, 2));
        if (auto f = dual_pair_axioms(B, s.p, x, x1, x2, y, y1, y2)) fail = "trial " + std::to_string(t) + ": " + *f;
    }
    out.check("deformed pairing dual-pair axioms", !fail, fail ? *fail : std::to_string(trials) + " random triples");
    return out;
}

inline SuiteOutput suite_pairing(const Session& s) {
    SuiteOutput out{"pairing", {}, {}};
    const QuantumBorel& B = s.B;
    const auto& c = s.cfg.cartan;
    const std::size_t n = s.rank();
    Section& tab = out.section("generator values", {"pairing", "value", "expected", "status"});
    bool all = true;
    auto row = [&](const std::string& name, const Scalar& got, const Scalar& want) {
        const bool ok = got == want;
        all = all && ok;
        tab.add({name, s.str(got), s.str(want), pass_text(ok)});
    };
    const auto basis = s.lattice_basis();
    for (const auto& l : basis)
        for (const auto& m : basis)
            row("<k(" + join_ivec(l) + ")|k(" + join_ivec(m) + ")>", B.pair(B.k(Side::Plus, l), B.k(Side::Minus, m)),
                qpow(-c.inner(l, m)));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            row("<e" + std::to_string(i + 1) + "|f" + std::to_string(j + 1) + ">", B.pair(B.e(i), B.f(j)),
                i == j ? -qhat(static_cast<int>(c.d(i))) : Scalar());
    for (std::size_t i = 0; i < n; ++i)
        for (const auto& l : basis) {
            row("<e" + std::to_string(i + 1) + "|k(" + join_ivec(l) + ")>", B.pair(B.e(i), B.k(Side::Minus, l)), Scalar());
            row("<k(" + join_ivec(l) + ")|f" + std::to_string(i + 1) + ">", B.pair(B.k(Side::Plus, l), B.f(i)), Scalar());
        }
    out.check("generator table", all, std::to_string(tab.rows.size()) + " values");

    auto rng = s.rng(23);
    const auto triv = Bicharacter::trivial(c, s.lattice);
    std::optional<std::string> fail;
    const int trials = 20;
    for (int t = 0; t < trials && !fail; ++t) {
        const auto x = as_elt(Side::Plus, random_mono(rng, s, 4));
        const auto x1 = as_elt(Side::Plus, random_mono(rng, s, 2));
        const auto x2 = as_elt(Side::Plus, random_mono(rng, s, 2));
        const auto y = as_elt(Side::Minus, random_mono(rng, s, 4));
        const auto y1 = as_elt(Side::Minus, random_mono(rng, s, 2));
        const auto y2 = as_elt(Side::Minus, random_mono(rng, s, 2));
        if (auto f = dual_pair_axioms(B, triv, x, x1, x2, y, y1, y2)) fail = "trial " + std::to_string(t) + ": " + *f;
    }
    out.check("dual-pair axioms", !fail, fail ? *fail : std::to_string(trials) + " random triples");
    return out;
}

inline std::string serre_str(const std::vector<std::pair<Word, Scalar>>& terms, const Session& s) {
    std::string out;
    for (const auto& [w, c] : terms) {
        std::string cs = s.str(c);
        const bool neg = !cs.empty() && cs[0] == '-';
        if (neg) cs = s.str(-c);
        if (!out.empty()) out += neg ? " - " : " + ";
        else if (neg) out += "-";
        if (cs != "1") out += (cs.find_first_of("+-/ ") != std::string::npos ? "(" + cs + ")" : cs) + " ";
        out += word_str(w, 'e');
    }
    return out;
}

inline SuiteOutput suite_serre(const Session& s) {
    SuiteOutput out{"serre", {}, {}};
    const QuantumBorel& B = s.B;
    const auto& c = s.cfg.cartan;
    const std::size_t n = s.rank();
    Section& wit = out.section("radical witness", {"i", "j", "weight", "element", "words", "rank", "in radical"});
    bool all = true;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            ++pairs;
            const auto [beta, terms] = B.serre_element(i, j);
            const GramBlock& g = B.gram(beta);
            const bool ok = B.serre_in_radical(i, j);
            all = all && ok;
            wit.add({std::to_string(i + 1), std::to_string(j + 1), join_ivec(beta), serre_str(terms, s),
                     std::to_string(g.words.size()), std::to_string(g.rank), ok ? "yes" : "no"});
        }
    out.check("Serre elements lie in the radical", all, std::to_string(pairs) + " ordered pairs");

    Section& ranks = out.section("gram ranks", {"beta", "words", "rank", "kostant", "status"});
    std::vector<IVec> betas;
    for (int h = 1; h <= s.height; ++h)
        for (auto& b : vectors_of_height(n, h)) betas.push_back(std::move(b));
    std::vector<std::vector<std::string>> rows(betas.size());
    std::vector<char> good(betas.size(), 0);
    parallel_for(betas.size(), s.jobs, [&](std::size_t k) {
        const GramBlock& g = B.gram(betas[k]);
        const auto kc = kostant_count(c.positive_roots(), betas[k]);
        good[k] = static_cast<std::int64_t>(g.rank) == kc;
        rows[k] = {join_ivec(betas[k]), std::to_string(g.words.size()), std::to_string(g.rank), std::to_string(kc),
                   pass_text(good[k])};
    });
    for (auto& r : rows) ranks.add(std::move(r));
    const bool rank_ok = std::all_of(good.begin(), good.end(), [](char x) { return x != 0; });
    out.check("gram rank equals partition count", rank_ok,
              std::to_string(betas.size()) + " weights up to height " + std::to_string(s.height));
    return out;
}

inline SuiteOutput suite_double(const Session& s) {
    SuiteOutput out{"double", {}, {}};
    const auto torus = s.lattice_basis();
    Section& rel = out.section("derived relations", {"relation", "derived", "expected", "status"});
    bool all = true;
    for (const auto& r : double_relations(s.D, torus)) {
        all = all && r.ok;
        rel.add({r.name, r.derived, r.expected, pass_text(r.ok)});
    }
    out.check("double relations by straightening", all, std::to_string(rel.rows.size()) + " relations");

    Section& quo = out.section("quotient", {"relation", "derived", "expected", "status"});
    bool qall = true;
    for (const auto& r : quotient_check(s.D, torus)) {
        qall = qall && r.ok;
        quo.add({r.name, r.derived, r.expected, pass_text(r.ok)});
    }
    out.check("relations after identifying s and t", qall, std::to_string(quo.rows.size()) + " relations");

    const std::size_t n = s.rank();
    std::vector<std::pair<BorelMonomial, BorelMonomial>> pairs;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) pairs.push_back({{IVec(n, 0), {static_cast<int>(j)}}, {IVec(n, 0), {static_cast<int>(i)}}});
    auto rng = s.rng(31);
    for (int t = 0; t < 10; ++t) pairs.push_back({random_mono(rng, s, 2), random_mono(rng, s, 2)});
    std::string fail;
    for (const auto& [y, x] : pairs) {
        const DoubleElt a = s.D.straighten(y, x, Straightening::Direct);
        if (!(a == s.D.straighten(y, x, Straightening::LastPastFirst)) || !(a == s.D.straighten(y, x, Straightening::PeelLeft))) {
            fail = double_mono_str({x, y});
            break;
        }
    }
    out.check("straightening strategies agree", fail.empty(), fail.empty() ? std::to_string(pairs.size()) + " products" : fail);
    return out;
}

inline SuiteOutput suite_twistdouble(const Session& s) {
    SuiteOutput out{"twistdouble", {}, {}};
    const std::size_t n = s.rank();
    std::vector<BorelMonomial> ys, xs;
    for (std::size_t i = 0; i < n; ++i) {
        ys.push_back({IVec(n, 0), {static_cast<int>(i)}});
        xs.push_back({IVec(n, 0), {static_cast<int>(i)}});
    }
    for (const auto& b : s.lattice_basis()) {
        ys.push_back({b, {}});
        xs.push_back({b, {}});
    }
    std::vector<std::pair<BorelMonomial, BorelMonomial>> pairs;
    for (const auto& y : ys)
        for (const auto& x : xs) pairs.emplace_back(y, x);
    const std::size_t gen_pairs = pairs.size();
    auto rng = s.rng(41);
    for (int t = 0; t < 20; ++t) pairs.emplace_back(random_mono(rng, s, 3), random_mono(rng, s, 3));
    std::vector<TwistDoubleReport> reps(pairs.size());
    parallel_for(pairs.size(), s.jobs, [&](std::size_t k) { reps[k] = twisted_double_check(s.D, s.p, pairs[k].first, pairs[k].second); });
    auto first_fail = [&](std::size_t from, std::size_t to) -> std::string {
        for (std::size_t k = from; k < to; ++k)
            if (!reps[k].ok) return double_mono_str({pairs[k].second, pairs[k].first}) + ": " + reps[k].lhs + " vs " + reps[k].rhs;
        return {};
    };
    const std::string g = first_fail(0, gen_pairs), r = first_fail(gen_pairs, pairs.size());
    out.check("generator pairs", g.empty(), g.empty() ? std::to_string(gen_pairs) + " pairs" : g);
    out.check("random monomials up to length 3", r.empty(), r.empty() ? std::to_string(pairs.size() - gen_pairs) + " pairs" : r);
    return out;
}

/// e_i f_j - f_j e_i = delta_ij qhat_i (k_i - k_i^-1) on every basis vector.
inline bool module_relations(const Module& M, const CartanData& c) {
    for (std::size_t i = 0; i < M.rank(); ++i)
        for (std::size_t j = 0; j < M.rank(); ++j)
            for (std::size_t b = 0; b < M.dim(); ++b) {
                ModVec lhs = apply_op(M.E[i], M.F[j][b]);
                add_into(lhs, apply_op(M.F[j], M.E[i][b]), Scalar(-1));
                ModVec rhs;
                if (i == j) {
                    const auto h = c.inner_simple(M.weights[b], i);
                    add_term(rhs, b, qhat(static_cast<int>(c.d(i))) * (qpow(Rat(h)) - qpow(Rat(-h))));
                }
                if (!(lhs == rhs)) return false;
            }
    return true;
}

/// Every W-conjugate of a weight has the same multiplicity.
inline bool multiplicities_invariant(const Module& M, const WeylGroup& W) {
    const auto mult = M.multiplicities();
    for (const auto& [wt, k] : mult)
        for (const auto& w : W.elements()) {
            const auto it = mult.find(w.act(wt));
            if (it == mult.end() || it->second != k) return false;
        }
    return true;
}

inline SuiteOutput suite_modules(const Session& s) {
    SuiteOutput out{"modules", {}, {}};
    const auto& c = s.cfg.cartan;
    const auto weights = dominant_in_lattice(s, std::max(1, s.cfg.caps.grid));
    std::vector<ModulePtr> mods(weights.size());
    std::vector<std::vector<std::string>> rows(weights.size());
    std::vector<char> good(weights.size(), 1);
    parallel_for(weights.size(), s.jobs, [&](std::size_t k) {
        const IVec& L = weights[k];
        const auto wd = weyl_dimension(c, L);
        if (static_cast<std::size_t>(wd) > s.cfg.caps.dimension) {
            rows[k] = {join_ivec(L), "-", std::to_string(wd), "-", "-", "-", "SKIP"};
            return;
        }
        mods[k] = build_hw_module(c, L, s.cfg.caps.dimension);
        const Module& M = *mods[k];
        const bool dim_ok = static_cast<std::int64_t>(M.dim()) == wd;
        const bool inv = multiplicities_invariant(M, s.W);
        const bool rel = module_relations(M, c);
        const bool eig = eigenvalue_identity(M, s.B, s.p);
        good[k] = dim_ok && inv && rel && eig;
        rows[k] = {join_ivec(L), std::to_string(M.dim()), std::to_string(wd), inv ? "yes" : "no", rel ? "yes" : "no",
                   eig ? "yes" : "no", pass_text(good[k])};
    });
    Section& tab = out.section("highest weight modules",
                               {"Lambda", "dim", "weyl dim", "W-invariant", "relations", "eigenvalues", "status"});
    for (auto& r : rows) tab.add(std::move(r));
    const bool all = std::all_of(good.begin(), good.end(), [](char x) { return x != 0; });
    out.check("dimensions, multiplicities and eigenvalue identity", all, std::to_string(weights.size()) + " modules");

    // the twisted action respects the product of the twisted double
    ModulePtr M;
    for (const auto& m : mods)
        if (m && m->dim() > 1) {
            M = m;
            break;
        }
    if (!M) {
        out.skip("twisted action is a module", "no nontrivial module within the caps");
        return out;
    }
    const auto gens = double_generators(s.B, s.lattice_basis());
    std::string fail;
    for (const auto& g1 : gens)
        for (const auto& g2 : gens) {
            if (!fail.empty()) break;
            const DoubleElt prod = s.D.mul(s.D.mono(g1.a, g1.u), s.D.mono(g2.a, g2.u));
            const ExponentVec tw = -s.p.twist_exp(double_degree(s.B, g1), double_degree(s.B, g2));
            for (std::size_t b = 0; b < M->dim() && fail.empty(); ++b) {
                const ModVec x{{b, Scalar(1)}};
                const ModVec lhs = twisted_act(*M, s.B, s.p, g1, twisted_act(*M, s.B, s.p, g2, x));
                ModVec rhs;
                add_into(rhs, twisted_act(*M, s.B, s.p, prod, x), qpow(tw));
                if (!(lhs == rhs)) fail = double_mono_str(g1) + " * " + double_mono_str(g2) + " on v" + std::to_string(b + 1);
            }
        }
    out.check("twisted action is a module", fail.empty(),
              fail.empty() ? "L(" + join_ivec(M->highest) + "), " + std::to_string(gens.size() * gens.size()) + " generator products" : fail);
    const auto coh = phi_coherence(*M, *M, s.B, s.p, gens);
    out.check("tensor coherence", !coh, coh ? *coh : "L(" + join_ivec(M->highest) + ") tensor itself");
    return out;
}

inline SuiteOutput suite_braiding(const Session& s) {
    SuiteOutput out{"braiding", {}, {}};
    if (s.cfg.is_g2() && !s.cfg.expensive) {
        out.skip("braiding", "G2 needs \"expensive\": true");
        return out;
    }
    const IVec L = smallest_dominant(s);
    const auto M = build_hw_module(s.cfg.cartan, L, s.cfg.caps.dimension);
    const Operator psi = braiding(*M, *M, s.B, s.p);
    const std::size_t d = M->dim();
    Section& tab = out.section("highest vector", {"v", "weight", "coefficient", "expected", "status"});
    bool all = true;
    for (std::size_t b = 0; b < d; ++b) {
        const Scalar want = qpow(-s.p.phi_plus_pair(L, M->weights[b]));
        const ModVec expect{{b * d, want}};
        const bool ok = psi[b] == expect;
        all = all && ok;
        Scalar got;
        if (auto it = psi[b].find(b * d); it != psi[b].end()) got = it->second;
        tab.add({"v" + std::to_string(b + 1), join_ivec(M->weights[b]), s.str(got), s.str(want), pass_text(ok)});
    }
    out.check("psi(vL (x) v) = q^-(Phi+ L, g) v (x) vL", all, "L(" + join_ivec(L) + "), " + std::to_string(d) + " vectors");
    const auto nat = braiding_naturality(*M, *M, s.B, s.p, psi, double_generators(s.B, s.lattice_basis()));
    out.check("naturality", !nat, nat ? *nat : "all double generators");
    if (d * d <= 36) {
        const auto r = scalar_rank(operator_matrix(psi, d * d));
        out.check("invertibility", r == d * d, "rank " + std::to_string(r) + " of " + std::to_string(d * d));
    }
    return out;
}

inline SuiteOutput suite_cor310(const Session& s) {
    SuiteOutput out{"cor310", {}, {}};
    if (s.cfg.is_g2() && !s.cfg.expensive) {
        out.skip("commutation of matrix coefficients", "G2 needs \"expensive\": true");
        return out;
    }
    const IVec L = smallest_dominant(s);
    const auto M = build_hw_module(s.cfg.cartan, L, s.cfg.caps.dimension);
    const std::size_t d = M->dim();
    std::vector<std::array<std::size_t, 3>> triples;
    for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = 0; b < d; ++b)
            for (std::size_t v = 0; v < d; ++v) triples.push_back({a, b, v});
    const std::size_t total = triples.size();
    constexpr std::size_t kMaxTriples = 64;
    if (total > kMaxTriples) {
        auto rng = s.rng(53);
        std::shuffle(triples.begin(), triples.end(), rng);
        triples.resize(kMaxTriples);
        std::sort(triples.begin(), triples.end());
    }
    std::vector<Cor310Report> reps(triples.size());
    const auto torus = s.lattice_basis();
    parallel_for(triples.size(), s.jobs, [&](std::size_t k) {
        const auto& [a, b, v] = triples[k];
        reps[k] = verify_cor310(s.B, s.p, M, M, {{a, Scalar(1)}}, {{b, Scalar(1)}}, {{v, Scalar(1)}}, torus);
    });
    Section& tab = out.section("coefficients", {"f", "g", "v", "exponent", "corrections", "status"});
    bool all = true;
    for (std::size_t k = 0; k < triples.size(); ++k) {
        const auto& [a, b, v] = triples[k];
        all = all && reps[k].ok;
        tab.add({"v" + std::to_string(a + 1) + "*", "v" + std::to_string(b + 1) + "*", "v" + std::to_string(v + 1),
                 s.str(reps[k].exponent), std::to_string(reps[k].corrections), reps[k].ok ? "PASS" : "FAIL: " + reps[k].separating});
    }
    out.check("commutation of matrix coefficients", all,
              "L(" + join_ivec(L) + "), " + std::to_string(triples.size()) + " of " + std::to_string(total) + " triples");
    return out;
}

inline SuiteOutput suite_kprop(const Session& s) {
    SuiteOutput out{"kprop", {}, {}};
    const std::size_t n = s.rank();
    const auto basis = s.lattice_basis();
    // lambda -> ((Phi_- lambda, b_j))_j is injective on the box
    std::map<std::string, IVec> seen;
    std::string clash;
    for (const IVec& coeffs : box(n, 5)) {
        const IVec l = s.from_lattice(coeffs);
        std::string key;
        for (const auto& b : basis) key += s.str(s.p.phi_minus_pair(l, b)) + ";";
        const auto [it, fresh] = seen.emplace(key, coeffs);
        if (!fresh && clash.empty()) clash = "(" + join_ivec(it->second) + ") and (" + join_ivec(coeffs) + ")";
    }
    out.check("characters q^(Phi- l, .) are distinct", clash.empty(),
              clash.empty() ? std::to_string(seen.size()) + " lattice points in [-5,5]^" + std::to_string(n) : clash);

    // trivial kernel of the twisted pairing on {x k_l} x {y k_m} blocks
    std::vector<IVec> S;
    if (n <= 2) {
        for (const auto& c : box(n, 1)) S.push_back(s.from_lattice(c));
    } else {
        S.push_back(IVec(n, 0));
        for (const auto& b : basis) {
            S.push_back(b);
            S.push_back(-b);
        }
    }
    // The block entry at ((a,i),(b,j)) is G(a,b) C(i,j) with C(i,j) = q^(Phi- S_i, S_j): it is
    // the Kronecker product of the restricted Gram block and C, so its rank is rank(G) rank(C).
    // The factorisation is checked entry by entry before the ranks are multiplied.
    Matrix<Scalar> C(S.size(), S.size());
    for (std::size_t i = 0; i < S.size(); ++i)
        for (std::size_t j = 0; j < S.size(); ++j) C(i, j) = qpow(s.p.phi_minus_pair(S[i], S[j]));
    const std::size_t rank_c = scalar_rank(C);
    out.check("torus characters are independent", rank_c == S.size(),
              "rank " + std::to_string(rank_c) + " of " + std::to_string(S.size()));
    Section& tab = out.section("blocks", {"beta", "size", "rank", "status"});
    std::vector<IVec> betas;
    for (int h = 1; h <= std::min(2, s.height); ++h)
        for (auto& b : vectors_of_height(n, h)) betas.push_back(std::move(b));
    std::vector<std::vector<std::string>> rows(betas.size());
    std::vector<char> good(betas.size(), 0);
    parallel_for(betas.size(), s.jobs, [&](std::size_t k) {
        const GramBlock& g = s.B.gram(betas[k]);
        const std::size_t r = g.rank, N = r * S.size();
        Matrix<Scalar> G(r, r);
        bool factors = true;
        for (std::size_t a = 0; a < r; ++a)
            for (std::size_t b = 0; b < r; ++b) {
                const Word& x = g.words[g.plus_basis[a]];
                const Word& y = g.words[g.minus_basis[b]];
                G(a, b) = s.B.pair_words(x, y);
                for (std::size_t i = 0; i < S.size() && factors; ++i)
                    for (std::size_t j = 0; j < S.size() && factors; ++j)
                        factors = s.B.twisted_pair(x, S[i], y, S[j], s.p) == G(a, b) * C(i, j);
            }
        const std::size_t block_rank = factors ? scalar_rank(G) * rank_c : 0;
        good[k] = factors && block_rank == N;
        rows[k] = {join_ivec(betas[k]), std::to_string(N) + "x" + std::to_string(N),
                   factors ? std::to_string(block_rank) : "no product form", pass_text(good[k])};
    });
    for (auto& r : rows) tab.add(std::move(r));
    const bool all = std::all_of(good.begin(), good.end(), [](char x) { return x != 0; });
    out.check("twisted pairing has trivial kernel on blocks", all,
              std::to_string(betas.size()) + " weights, " + std::to_string(S.size()) + " torus elements per side");
    return out;
}

inline SuiteOutput suite_norms(const Session& s) {
    SuiteOutput out{"norms", {}, {}};
    const auto weights = dominant_in_lattice(s, std::max(1, s.cfg.caps.grid), false);
    Section& tab = out.section("weight norms", {"Lambda", "weights", "status"});
    bool all = true;
    std::size_t done = 0;
    for (const auto& L : weights) {
        if (static_cast<std::size_t>(weyl_dimension(s.cfg.cartan, L)) > s.cfg.caps.dimension) continue;
        const auto M = build_hw_module(s.cfg.cartan, L, s.cfg.caps.dimension);
        const auto rep = norm_criterion(s.cfg.cartan, s.W, L, M->weights);
        all = all && rep.holds;
        ++done;
        tab.add({join_ivec(L), std::to_string(M->dim()), rep.holds ? "PASS" : "FAIL: " + rep.counterexample});
    }
    out.check("equal norms force an extreme weight", all, std::to_string(done) + " modules");
    return out;
}

inline SuiteOutput run_suite(const Session& s, const std::string& name) {
    if (name == "hopf") return suite_hopf(s);
    if (name == "pairing") return suite_pairing(s);
    if (name == "serre") return suite_serre(s);
    if (name == "double") return suite_double(s);
    if (name == "twistdouble") return suite_twistdouble(s);
    if (name == "modules") return suite_modules(s);
    if (name == "braiding") return suite_braiding(s);
    if (name == "cor310") return suite_cor310(s);
    if (name == "kprop") return suite_kprop(s);
    if (name == "norms") return suite_norms(s);
    throw std::invalid_argument("unknown suite '" + name + "'");
}

// ---- subcommands

inline Report cmd_verify(const Session& s, const std::vector<std::string>& suite_names) {
    const auto suites = expand_suites(suite_names.empty() ? std::vector<std::string>{"all"} : suite_names);
    Report r = new_report(s, "verify");
    std::string list;
    for (const auto& n : suites) list += (list.empty() ? "" : ",") + n;
    r.set("suites", list);
    r.set("height cap", std::to_string(s.height));
    std::vector<SuiteOutput> outs(suites.size());
    // suites fan out over the worker pool themselves; running them one after
    // another keeps the pool size bounded by --jobs
    for (std::size_t k = 0; k < suites.size(); ++k) outs[k] = run_suite(s, suites[k]);
    Section checks{"checks", {"suite", "check", "status", "detail"}, {}};
    for (const auto& o : outs)
        for (const auto& c : o.checks) {
            checks.add({o.suite, c[0], c[1], c[2]});
            if (c[1] == "FAIL") r.ok = false;
        }
    r.sections.push_back(std::move(checks));
    for (auto& o : outs)
        for (auto& sec : o.sections) r.sections.push_back(std::move(sec));
    return r;
}

inline Report cmd_leaves(const Session& s) {
    Report r = new_report(s, "leaves");
    const PoissonContext ctx{s.cfg.cartan, s.lattice, s.p};
    const AlgebraicityReport alg = is_algebraic(ctx);
    if (alg.algebraic && alg.witness_exists)
        r.set("algebraicity", "algebraic (m = " + std::to_string(alg.m) + ")");
    else if (alg.algebraic)
        r.set("algebraicity", "algebraic");
    else
        r.set("algebraicity", "non-algebraic (u(w" + std::to_string(alg.offending.first + 1) + ", w" +
                                  std::to_string(alg.offending.second + 1) + ") is not rational)");
    const auto order = length_lex(s.W);
    std::vector<std::pair<const WeylElt*, const WeylElt*>> cells;
    for (const auto& a : order)
        for (const auto& b : order) cells.emplace_back(&a, &b);
    std::vector<LeafReport> rows(cells.size());
    parallel_for(cells.size(), s.jobs, [&](std::size_t k) { rows[k] = leaf_report(ctx, *cells[k].first, *cells[k].second); });
    std::vector<std::string> cols{"w", "l", "s", "leafDim", "orbitRank"};
    if (alg.algebraic) cols.push_back("zwDim");
    Section& tab = r.section("leaves", cols);
    const std::size_t n = s.rank();
    for (const auto& lr : rows) {
        std::vector<std::string> row{lr.wplus.str() + "|" + lr.wminus.str(), std::to_string(lr.l), std::to_string(lr.s),
                                     std::to_string(lr.leaf_dim), std::to_string(lr.orbit_rank)};
        bool ok = lr.leaf_dim == lr.l + lr.s && lr.orbit_rank == n - lr.s;
        if (alg.algebraic) {
            row.push_back(lr.zw_dim ? std::to_string(*lr.zw_dim) : "-");
            ok = ok && lr.zw_dim && *lr.zw_dim == lr.orbit_rank;
        }
        if (!ok) r.ok = false;
        tab.add(std::move(row));
    }
    r.set("rows", std::to_string(rows.size()));
    return r;
}

inline Report cmd_pairing(const Session& s, const std::string& weight_text) {
    const auto& c = s.cfg.cartan;
    const IVec beta_w = parse_weight(weight_text, s.rank());
    const auto beta = root_coords(c, beta_w);
    if (!beta || !is_nonnegative(*beta) || is_zero_vec(*beta))
        throw std::invalid_argument("\"" + weight_text + "\" is not a nonzero sum of simple roots");
    if (height(*beta) > s.height)
        throw std::length_error("weight " + weight_text + " has height " + std::to_string(height(*beta)) +
                                ", above the height cap " + std::to_string(s.height));
    const GramBlock& g = s.B.gram(*beta);
    Report r = new_report(s, "pairing");
    r.set("weight", weight_text);
    r.set("root coordinates", join_ivec(*beta));
    r.set("block size", std::to_string(g.words.size()) + "x" + std::to_string(g.words.size()));
    r.set("rank", std::to_string(g.rank));
    std::vector<std::string> cols{"e-word \\ f-word"};
    for (const auto& w : g.words) cols.push_back(word_str(w, 'f'));
    Section& m = r.section("gram block", cols);
    for (std::size_t a = 0; a < g.words.size(); ++a) {
        std::vector<std::string> row{word_str(g.words[a], 'e')};
        for (std::size_t b = 0; b < g.words.size(); ++b) row.push_back(s.str(g.matrix(a, b)));
        m.add(std::move(row));
    }
    auto radical = [&](const std::string& name, const std::vector<std::vector<Scalar>>& vecs, char letter) {
        Section& sec = r.section(name, {"vector", "element"});
        for (std::size_t k = 0; k < vecs.size(); ++k) {
            std::vector<std::pair<Word, Scalar>> terms;
            for (std::size_t a = 0; a < vecs[k].size(); ++a)
                if (!vecs[k][a].is_zero()) terms.emplace_back(g.words[a], vecs[k][a]);
            std::string e = serre_str(terms, s);
            if (letter == 'f') std::replace(e.begin(), e.end(), 'e', 'f');
            sec.add({std::to_string(k + 1), e});
        }
    };
    radical("radical (plus side)", g.radical_plus, 'e');
    radical("radical (minus side)", g.radical_minus, 'f');
    Section& ce = r.section("canonical element", {"plus", "minus", "coefficient"});
    for (const auto& t : s.B.canonical_element(*beta)) ce.add({word_str(t.plus, 'e'), word_str(t.minus, 'f'), s.str(t.coeff)});
    return r;
}

inline ModulePtr checked_module(const Session& s, const IVec& L) {
    if (!s.cfg.cartan.is_dominant(L)) throw std::invalid_argument("highest weight (" + join_ivec(L) + ") is not dominant");
    const auto wd = weyl_dimension(s.cfg.cartan, L);
    if (static_cast<std::size_t>(wd) > s.cfg.caps.dimension)
        throw std::length_error("L(" + join_ivec(L) + ") has dimension " + std::to_string(wd) + ", above the dimension cap " +
                                std::to_string(s.cfg.caps.dimension));
    return build_hw_module(s.cfg.cartan, L, s.cfg.caps.dimension);
}

inline Report cmd_module(const Session& s, const std::string& weight_text) {
    const IVec L = parse_weight(weight_text, s.rank());
    const auto M = checked_module(s, L);
    Report r = new_report(s, "module");
    r.set("highest weight", join_ivec(L));
    r.set("dim", std::to_string(M->dim()));
    r.set("weyl dim", std::to_string(weyl_dimension(s.cfg.cartan, L)));
    if (M->dim() != static_cast<std::size_t>(weyl_dimension(s.cfg.cartan, L))) r.ok = false;
    const auto mult = M->multiplicities();
    Section& w = r.section("basis", {"vector", "weight", "multiplicity", "pedigree"});
    for (std::size_t b = 0; b < M->dim(); ++b)
        w.add({"v" + std::to_string(b + 1), join_ivec(M->weights[b]), std::to_string(mult.at(M->weights[b])),
               (M->pedigree[b].empty() ? std::string("vL") : word_str(M->pedigree[b], 'f') + " vL")});
    Section& act = r.section("action", {"generator", "vector", "image"});
    for (std::size_t i = 0; i < s.rank(); ++i)
        for (const auto& [letter, ops] : {std::pair{'e', &M->E[i]}, std::pair{'f', &M->F[i]}})
            for (std::size_t b = 0; b < M->dim(); ++b) {
                const ModVec& img = (*ops)[b];
                if (img.empty()) continue;
                act.add({std::string(1, letter) + std::to_string(i + 1), "v" + std::to_string(b + 1),
                         lincomb_str(img, [](std::size_t k) { return "v" + std::to_string(k + 1); })});
            }
    if (!eigenvalue_identity(*M, s.B, s.p)) r.ok = false;
    r.set("eigenvalue identity", eigenvalue_identity(*M, s.B, s.p) ? "holds" : "fails");
    return r;
}

inline Report cmd_ideals(const Session& s, const std::string& weyl_text, const std::string& weight_text) {
    const auto [wp, wm] = parse_weyl_pair(s.W, weyl_text);
    const IVec L = parse_weight(weight_text, s.rank());
    const auto M = checked_module(s, L);
    const IdealData d = ideal_generators(*M, s.W, wp, wm);
    Report r = new_report(s, "ideals");
    r.set("w", wp.str() + "|" + wm.str());
    r.set("highest weight", join_ivec(L));
    r.set("dim", std::to_string(M->dim()));
    r.set("plus saturation", std::to_string(d.plus_saturation));
    r.set("minus saturation", std::to_string(d.minus_saturation));
    r.set("plus generators", std::to_string(d.plus.size()));
    r.set("minus generators", std::to_string(d.minus.size()));
    auto functional = [](const ModVec& f) { return lincomb_str(f, [](std::size_t k) { return "v" + std::to_string(k + 1) + "*"; }); };
    auto emit = [&](const std::string& name, const std::vector<ModVec>& gens, const std::string& vec) {
        Section& sec = r.section(name, {"generator", "weight", "functional", "vector"});
        for (std::size_t k = 0; k < gens.size(); ++k) {
            const IVec wt = -M->weights[gens[k].begin()->first];
            sec.add({std::to_string(k + 1), join_ivec(wt), functional(gens[k]), vec});
        }
    };
    const IVec top = wp.act(L), bottom = wm.act(s.W.longest().act(L));
    emit("I+ generators", d.plus, "v(" + join_ivec(top) + ")");
    emit("I- generators", d.minus, "v(" + join_ivec(bottom) + ")");
    return r;
}

}  // namespace qmpg
