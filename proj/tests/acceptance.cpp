/// @file acceptance.cpp
/// @brief Acceptance runner: one PASS/FAIL line per criterion AC1..AC11.
///
/// Criteria are checked against reference computations that avoid the code
/// under test where one exists (partition counts, Weyl dimensions, Freudenthal
/// multiplicities, brute-force witnesses), and through the verification suites
/// of the command-line tool otherwise. AC11 runs the installed binary.
#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <iterator>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

#include "oracles.hpp"
#include "qmpg/cli.hpp"

#ifndef QMPG_BINARY
#error "QMPG_BINARY must name the qmpg executable"
#endif
#ifndef QMPG_CONFIG_DIR
#error "QMPG_CONFIG_DIR must name the configs directory"
#endif

using namespace qmpg;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
    bool ok = true;
    std::string detail;

    void fail(const std::string& why) {
        if (ok) detail = why;
        ok = false;
    }
    void note(const std::string& what) {
        if (ok) detail = what;
    }
};

Config make_config(char series, std::size_t rank, const std::string& lattice, LinMat u = {}) {
    Config cfg;
    cfg.source = "acceptance";
    cfg.cartan = CartanData::from_series(series, rank);
    cfg.lattice_kind = lattice;
    cfg.u = u.empty() ? LinMat(rank, std::vector<LinExp>(rank)) : std::move(u);
    cfg.caps.dimension = 512;
    return cfg;
}

std::string label(char series, std::size_t rank) { return std::string(1, series) + std::to_string(rank); }

LinMat rational_u(std::mt19937& rng, std::size_t n) {
    std::uniform_int_distribution<int> num(-5, 5), den(1, 4);
    LinMat U(n, std::vector<LinExp>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            U[i][j] = LinExp(Rat(num(rng), den(rng)));
            U[j][i] = -U[i][j];
        }
    return U;
}

LinMat half_u() { return {{LinExp(), LinExp(Rat(1, 2))}, {LinExp(Rat(-1, 2)), LinExp()}}; }

LinMat irrational_sl3() {
    const std::vector<std::string> names{"alpha"};
    const LinExp a = parse_linexp("alpha", names);
    return {{LinExp(), a}, {-a, LinExp()}};
}

/// Folds the named checks of a suite run (all when `names` is empty) into an outcome.
void require(Outcome& o, const SuiteOutput& out, const std::string& where, const std::vector<std::string>& names = {}) {
    for (const auto& c : out.checks) {
        if (!names.empty() && std::find(names.begin(), names.end(), c[0]) == names.end()) continue;
        if (c[1] != "PASS") o.fail(where + ": " + c[0] + " " + c[1] + " (" + c[2] + ")");
    }
}

std::vector<IVec> heights_up_to(std::size_t n, int h) {
    std::vector<IVec> out;
    for (int k = 1; k <= h; ++k)
        for (auto& b : vectors_of_height(n, k)) out.push_back(std::move(b));
    return out;
}

/// Smallest m <= 24 with m Phi(w_i) in P, from u and the Gram matrix of fundamental weights.
std::optional<std::int64_t> brute_force_m(const CartanData& c, const Bicharacter& b) {
    const std::size_t n = c.rank();
    QMatrix G(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) G(i, j) = c.gram_fw()[i][j].to_mpq();
    std::vector<std::vector<mpq_class>> cols;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<mpq_class> rhs(n);
        for (std::size_t j = 0; j < n; ++j) rhs[j] = b.u(c.fundamental_weight(i), c.fundamental_weight(j)).c[0].to_mpq();
        cols.push_back(*solve(G, rhs));
    }
    for (std::int64_t m = 1; m <= 24; ++m) {
        bool ok = true;
        for (const auto& col : cols)
            for (const auto& x : col) ok = ok && mpq_class(x * m).get_den() == 1;
        if (ok) return m;
    }
    return std::nullopt;
}

bool symbol_free(const LinMat& U) {
    for (const auto& row : U)
        for (const auto& x : row)
            for (std::size_t k = 1; k < kExpDim; ++k)
                if (!(x.c[k] == Rat(0))) return false;
    return true;
}

// ---- criteria

Outcome ac1() {
    Outcome o;
    std::size_t values = 0;
    for (auto [series, rank] : {std::pair<char, std::size_t>{'A', 1}, {'A', 2}, {'B', 2}})
        for (const char* lat : {"weight", "root"}) {
            const Config cfg = make_config(series, rank, lat);
            const Session s(cfg, {});
            const auto out = suite_pairing(s);
            require(o, out, label(series, rank) + " " + lat, {"generator table"});
            values += out.sections.front().rows.size();
        }
    o.note(std::to_string(values) + " generator values for A1, A2, B2 over P and Q");
    return o;
}

Outcome ac2() {
    Outcome o;
    std::size_t blocks = 0;
    for (auto [series, rank, h] : {std::tuple<char, std::size_t, int>{'A', 2, 5}, {'B', 2, 4}}) {
        const auto c = CartanData::from_series(series, rank);
        const QuantumBorel B(c);
        for (std::size_t i = 0; i < rank; ++i)
            for (std::size_t j = 0; j < rank; ++j)
                if (i != j && !B.serre_in_radical(i, j))
                    o.fail(label(series, rank) + ": Serre element (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                           ") not in the radical");
        const auto roots = oracle::positive_roots(c.cartan());
        for (const auto& beta : heights_up_to(rank, h)) {
            const auto want = oracle::kostant(roots, beta);
            const auto got = B.gram(beta).rank;
            ++blocks;
            if (static_cast<std::int64_t>(got) != want)
                o.fail(label(series, rank) + " beta " + join_ivec(beta) + ": rank " + std::to_string(got) + ", partitions " +
                       std::to_string(want));
        }
    }
    o.note(std::to_string(blocks) + " Gram blocks (A2 h<=5, B2 h<=4), Serre elements in the radical");
    return o;
}

Outcome ac3() {
    Outcome o;
    std::mt19937 rng(301);
    for (int t = 0; t < 20; ++t) {
        Config cfg = make_config('A', 2, "weight", rational_u(rng, 2));
        cfg.seed = 100 + t;
        const Session s(cfg, {});
        require(o, suite_hopf(s), "U #" + std::to_string(t + 1) + " " + s.str(cfg.u[0][1]));
    }
    o.note("20 random rational U: Hopf twist, untwist, deformed dual-pair axioms");
    return o;
}

Outcome ac4() {
    Outcome o;
    std::size_t rels = 0;
    for (std::size_t rank : {1u, 2u}) {
        const Config cfg = make_config('A', rank, "weight");
        const Session s(cfg, {});
        const auto out = suite_double(s);
        require(o, out, label('A', rank), {"double relations by straightening", "relations after identifying s and t"});
        for (const auto& sec : out.sections) rels += sec.rows.size();
    }
    o.note(std::to_string(rels) + " relations for A1 and A2, before and after the quotient");
    return o;
}

Outcome ac5() {
    Outcome o;
    std::mt19937 rng(501);
    std::size_t runs = 0;
    for (std::size_t rank : {1u, 2u})
        for (int t = 0; t < 10; ++t) {
            // A1 has no antisymmetric freedom; its ten runs vary the sampled monomials only
            Config cfg = make_config('A', rank, "weight", rank == 1 ? LinMat{} : rational_u(rng, rank));
            cfg.seed = 200 + t;
            const Session s(cfg, {4, 4});
            require(o, suite_twistdouble(s), label('A', rank) + " run " + std::to_string(t + 1));
            ++runs;
        }
    o.note(std::to_string(runs) + " runs over generator pairs and random monomials of length <= 3");
    return o;
}

Outcome ac6() {
    Outcome o;
    std::vector<std::pair<Config, std::vector<IVec>>> cases;
    {
        std::vector<IVec> ws;
        for (std::int64_t m = 0; m <= 6; ++m) ws.push_back({m});
        cases.emplace_back(make_config('A', 1, "weight"), ws);
    }
    for (auto [series, bound] : {std::pair<char, std::int64_t>{'A', 2}, {'B', 1}}) {
        std::vector<IVec> ws;
        for (std::int64_t a = 0; a <= bound; ++a)
            for (std::int64_t b = 0; b <= bound; ++b) ws.push_back({a, b});
        cases.emplace_back(make_config(series, 2, "weight", half_u()), ws);
    }
    std::size_t modules = 0, vectors = 0;
    bool saw_adjoint = false;
    for (const auto& [cfg, ws] : cases) {
        const auto& c = cfg.cartan;
        const QuantumBorel B(c);
        const Bicharacter p = cfg.bicharacter();
        const Bicharacter p0 = Bicharacter::trivial(c, cfg.lattice());
        for (const auto& L : ws) {
            const auto M = build_hw_module(c, L, 4096);
            const std::string where = cartan_label(c) + " L(" + join_ivec(L) + ")";
            const auto wd = oracle::weyl_dimension(c, L);
            if (static_cast<std::int64_t>(M->dim()) != wd)
                o.fail(where + ": dim " + std::to_string(M->dim()) + ", Weyl " + std::to_string(wd));
            if (c.name() == "A2" && L == IVec{1, 1}) saw_adjoint = wd == 8;
            const auto fr = oracle::freudenthal(c, L);
            const auto got = M->multiplicities();
            bool same = fr.size() == got.size();
            for (const auto& [w, k] : fr) {
                const auto it = got.find(w);
                same = same && it != got.end() && static_cast<std::int64_t>(it->second) == k;
            }
            if (!same) o.fail(where + ": multiplicities differ from Freudenthal");
            if (!eigenvalue_identity(*M, B, p) || !eigenvalue_identity(*M, B, p0)) o.fail(where + ": eigenvalue identity");
            ++modules;
            vectors += M->dim();
        }
    }
    if (!saw_adjoint) o.fail("A2 L(1,1) is not 8-dimensional");
    o.note(std::to_string(modules) + " modules, eigenvalue identity on " + std::to_string(vectors) + " basis vectors");
    return o;
}

Outcome ac7() {
    Outcome o;
    std::vector<std::string> done;
    auto run = [&](const Config& cfg, const std::string& what) {
        const Session s(cfg, {0, 4});
        require(o, suite_braiding(s), what, {"psi(vL (x) v) = q^-(Phi+ L, g) v (x) vL"});
        const auto cor = suite_cor310(s);
        require(o, cor, what);
        for (const auto& c : cor.checks) done.push_back(what + " " + c[2]);
    };
    run(make_config('A', 1, "weight"), "A1 u=0");
    run(make_config('A', 2, "weight"), "A2 u=0");
    run(make_config('A', 2, "weight", half_u()), "A2 U12=1/2");
    std::string d;
    for (const auto& x : done) d += (d.empty() ? "" : "; ") + x;
    o.note(d);
    return o;
}

Outcome ac8() {
    Outcome o;
    // A1, u = 0, length-lex order (e,e), (e,s), (s,e), (s,s)
    {
        const auto c = CartanData::from_series('A', 1);
        const auto L = Lattice::weight(c);
        const Bicharacter b = Bicharacter::trivial(c, L);
        const auto table = leaf_table({c, L, b}, WeylGroup(c));
        const std::vector<std::size_t> dims{0, 2, 2, 2}, orbits{1, 0, 0, 1};
        if (table.size() != 4) o.fail("A1 table has " + std::to_string(table.size()) + " rows");
        for (std::size_t k = 0; k < std::min<std::size_t>(4, table.size()); ++k)
            if (table[k].leaf_dim != dims[k] || table[k].orbit_rank != orbits[k])
                o.fail("A1 row " + std::to_string(k + 1) + ": leafDim " + std::to_string(table[k].leaf_dim) + ", orbitRank " +
                       std::to_string(table[k].orbit_rank));
    }
    std::mt19937 rng(801);
    std::size_t cells = 0;
    for (auto [series, rank] : {std::pair<char, std::size_t>{'A', 1}, {'A', 2}, {'B', 2}}) {
        const auto c = CartanData::from_series(series, rank);
        const auto L = Lattice::weight(c);
        const WeylGroup W(c);
        std::vector<LinMat> us{LinMat(rank, std::vector<LinExp>(rank))};
        if (rank > 1) us.push_back(rational_u(rng, rank));
        for (std::size_t k = 0; k < us.size(); ++k) {
            const Bicharacter b(c, L, us[k]);
            const PoissonContext ctx{c, L, b};
            if (k == 0)
                for (const auto& wp : W.elements())
                    for (const auto& wm : W.elements()) {
                        const auto sg = sigma_w(ctx, wp, wm);
                        for (std::size_t i = 0; i < rank; ++i)
                            for (std::size_t j = 0; j < rank; ++j)
                                if (!(sg(i, j) == Scalar(static_cast<int>(wp.mat[i][j] - wm.mat[i][j]))))
                                    o.fail(label(series, rank) + ": sigma(" + wp.str() + "|" + wm.str() + ") != w+ - w-");
                    }
            for (const auto& r : leaf_table(ctx, W)) {
                ++cells;
                const std::string where = label(series, rank) + " " + r.wplus.str() + "|" + r.wminus.str();
                if (r.leaf_dim != r.l + r.s) o.fail(where + ": leafDim != l + s");
                if (r.orbit_rank != rank - r.s) o.fail(where + ": orbitRank != n - s");
                if (!r.zw_dim || *r.zw_dim != r.orbit_rank) o.fail(where + ": zwDim != orbitRank");
            }
        }
    }
    o.note("A1 table exact; " + std::to_string(cells) + " W x W cells satisfy leafDim = l + s, orbitRank = zwDim = n - s");
    return o;
}

Outcome ac9() {
    Outcome o;
    {
        const auto c = CartanData::from_series('A', 2);
        const auto L = Lattice::weight(c);
        const LinMat U = irrational_sl3();
        const Bicharacter b(c, L, U);
        const auto rep = is_algebraic({c, L, b});
        if (rep.algebraic || rep.witness_exists) o.fail("SL3 with irrational alpha reported algebraic");
        if (rep.algebraic != symbol_free(U)) o.fail("SL3 irrational: (ii) and (iii) disagree");
    }
    std::mt19937 rng(901);
    std::size_t checked = 0, compared = 0;
    for (auto [series, rank] : {std::pair<char, std::size_t>{'A', 2}, {'B', 2}})
        for (int t = 0; t < 50; ++t) {
            const auto c = CartanData::from_series(series, rank);
            const auto L = Lattice::weight(c);
            const LinMat U = rational_u(rng, rank);
            const Bicharacter b(c, L, U);
            const auto rep = is_algebraic({c, L, b});
            const std::string where = label(series, rank) + " U #" + std::to_string(t + 1);
            ++checked;
            // (ii) u rational on P x P, (iii) some m with Phi(mP) in P
            if (!rep.algebraic || rep.algebraic != symbol_free(U)) o.fail(where + ": rational u not reported algebraic");
            if (rep.algebraic != rep.witness_exists) o.fail(where + ": (ii) and (iii) disagree");
            const auto m = brute_force_m(c, b);
            if (m) {
                ++compared;
                if (rep.m != *m) o.fail(where + ": m = " + std::to_string(rep.m) + ", brute force " + std::to_string(*m));
            } else if (rep.m <= 24) {
                o.fail(where + ": m = " + std::to_string(rep.m) + " but brute force finds none <= 24");
            }
        }
    o.note("irrational SL3 rejected; " + std::to_string(checked) + " rational U, minimal m matched on " +
           std::to_string(compared) + " by brute force");
    return o;
}

Outcome ac10() {
    Outcome o;
    std::mt19937 rng(1001);
    for (int t = 0; t < 20; ++t) {
        const Config cfg = make_config('A', 2, "weight", rational_u(rng, 2));
        const Session s(cfg, {0, 4});
        require(o, suite_kprop(s), "U #" + std::to_string(t + 1) + " " + s.str(cfg.u[0][1]));
    }
    o.note("20 random rational U: trivial kernel on blocks, injective on [-5,5]^2");
    return o;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

int run_binary(const std::string& args, const fs::path& out, const fs::path& err) {
    const std::string cmd = "env -u QMPG_CACHE \"" + std::string(QMPG_BINARY) + "\" " + args + " > \"" + out.string() +
                            "\" 2> \"" + err.string() + "\"";
    const int rc = std::system(cmd.c_str());
    return rc == -1 ? -1 : WEXITSTATUS(rc);
}

Outcome ac11() {
    Outcome o;
    const fs::path dir = fs::temp_directory_path() / ("qmpg_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    const std::string cfg = std::string(QMPG_CONFIG_DIR) + "/a2.json";
    const std::string base = "verify --suite all --jobs 4 --config \"" + cfg + "\"";
    double worst = 0;
    std::vector<std::string> outs;
    for (int k = 0; k < 2; ++k) {
        const auto t0 = Clock::now();
        const int rc = run_binary(base, dir / ("cold" + std::to_string(k)), dir / "err");
        worst = std::max(worst, seconds_since(t0));
        if (rc != 0) o.fail("cold run " + std::to_string(k + 1) + " exited " + std::to_string(rc) + ": " + slurp(dir / "err"));
        outs.push_back(slurp(dir / ("cold" + std::to_string(k))));
    }
    if (outs[0] != outs[1]) o.fail("cold runs differ");
    if (worst > 180) o.fail("cold run took " + std::to_string(worst) + " s");

    const fs::path cache = dir / "pairing.cache";
    const std::string cached = base + " --cache \"" + cache.string() + "\" --stats";
    run_binary(cached, dir / "fill", dir / "fill_err");
    const int rc = run_binary(cached, dir / "warm", dir / "warm_err");
    const std::string stats = slurp(dir / "warm_err");
    if (rc != 0) o.fail("warm run exited " + std::to_string(rc));
    if (stats.find("pairing recursions: 0\n") == std::string::npos) o.fail("warm run recursed: " + stats);
    if (slurp(dir / "warm") != outs[0]) o.fail("warm output differs from cold output");
    fs::remove_all(dir);
    std::ostringstream d;
    d << "cold runs byte-identical, slowest " << std::fixed << std::setprecision(2) << worst
      << " s; warm run 0 pairing recursions";
    o.note(d.str());
    return o;
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        std::function<Outcome()> run;
        double budget;  // seconds; 0 for none
    };
    const std::vector<Criterion> all{
        {"AC1", ac1, 5},   {"AC2", ac2, 60}, {"AC3", ac3, 0},   {"AC4", ac4, 0},  {"AC5", ac5, 120}, {"AC6", ac6, 0},
        {"AC7", ac7, 0},   {"AC8", ac8, 10}, {"AC9", ac9, 0},   {"AC10", ac10, 0}, {"AC11", ac11, 0},
    };
    int failures = 0;
    for (const auto& c : all) {
        const auto t0 = Clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.fail(std::string("exception: ") + e.what());
        }
        const double secs = seconds_since(t0);
        if (c.budget > 0 && secs > c.budget)
            o.fail("took " + std::to_string(secs) + " s, budget " + std::to_string(c.budget) + " s");
        if (!o.ok) ++failures;
        std::cout << (o.ok ? "PASS " : "FAIL ") << std::left << std::setw(5) << c.name << std::right << std::fixed
                  << std::setprecision(2) << std::setw(8) << secs << " s  " << o.detail << std::endl;
    }
    std::cout << (failures == 0 ? "all criteria pass" : std::to_string(failures) + " criteria fail") << std::endl;
    return failures == 0 ? 0 : 1;
}
