#include <random>

#include <gtest/gtest.h>

#include "qmpg/qpair.hpp"
#include "qmpg/twist.hpp"

using namespace qmpg;

namespace {

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

IVec random_weight(std::mt19937& rng, std::size_t n) {
    std::uniform_int_distribution<int> d(-3, 3);
    IVec v(n);
    for (auto& x : v) x = d(rng);
    return v;
}

}  // namespace

TEST(Bicharacter, TrivialAndExample) {
    const auto a2 = CartanData::from_series('A', 2);
    const auto P = Lattice::weight(a2);
    const auto triv = Bicharacter::trivial(a2, P);
    EXPECT_TRUE(triv.is_zero());
    EXPECT_EQ(triv.p({1, 0}, {0, 1}), Scalar(1));
    EXPECT_EQ(triv.phi_plus_pair({1, 0}, {1, 0}), LinExp(a2.inner({1, 0}, {1, 0})));

    const Bicharacter b(a2, P, {{LinExp(), LinExp(Rat(1))}, {LinExp(Rat(-1)), LinExp()}});
    EXPECT_EQ(b.p({1, 0}, {0, 1}), qpow(Rat(1, 2)));
    const auto g = b.cocycle_class();
    EXPECT_EQ(g[0][1], qpow(Rat(1)));
    EXPECT_EQ(g[0][0], Scalar(1));
    EXPECT_EQ(g[0][1] * g[1][0], Scalar(1));
}

TEST(Bicharacter, RejectsNonAntisymmetric) {
    const auto a2 = CartanData::from_series('A', 2);
    EXPECT_THROW(Bicharacter(a2, Lattice::weight(a2), {{LinExp(), LinExp(Rat(1))}, {LinExp(Rat(1)), LinExp()}}),
                 std::invalid_argument);
}

TEST(Bicharacter, PhiRepresentsU) {
    std::mt19937 rng(1);
    for (const char* name : {"A2", "B2", "A3"}) {
        const auto c = CartanData::from_series(name[0], name[1] - '0');
        const std::size_t n = c.rank();
        for (const Lattice& L : {Lattice::weight(c), Lattice::root(c)}) {
            for (int t = 0; t < 10; ++t) {
                const Bicharacter b(c, L, rational_u(rng, n));
                for (int s = 0; s < 10; ++s) {
                    const IVec l = random_weight(rng, n), m = random_weight(rng, n);
                    EXPECT_EQ(b.u(l, m), b.phi_pair(l, m));
                    EXPECT_EQ(b.phi_pair(l, m) + b.phi_pair(m, l), LinExp());
                    EXPECT_EQ(b.p(l, m) * b.p(m, l), Scalar(1));
                    EXPECT_EQ(b.p(l, l), Scalar(1));
                    // multiplicativity in the first slot
                    const IVec k = random_weight(rng, n);
                    EXPECT_EQ(b.p(l + k, m), b.p(l, m) * b.p(k, m));
                }
                // lattice basis reproduces U
                for (std::size_t i = 0; i < n; ++i)
                    for (std::size_t j = 0; j < n; ++j)
                        EXPECT_EQ(b.u(L.basis_vector(i), L.basis_vector(j)), b.u_lattice()[i][j]);
            }
        }
    }
}

TEST(Bicharacter, CocycleClassIsAHomomorphism) {
    std::mt19937 rng(2);
    const auto c = CartanData::from_series('A', 3);
    const auto P = Lattice::weight(c);
    for (int t = 0; t < 10; ++t) {
        const LinMat U1 = rational_u(rng, 3), U2 = rational_u(rng, 3);
        LinMat S = U1;
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j) S[i][j] += U2[i][j];
        const auto g1 = Bicharacter(c, P, U1).cocycle_class(), g2 = Bicharacter(c, P, U2).cocycle_class();
        const auto gs = Bicharacter(c, P, S).cocycle_class();
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(gs[i][j], g1[i][j] * g2[i][j]);
    }
}

TEST(Bicharacter, FormalSymbols) {
    const std::vector<std::string> names{"alpha"};
    const LinExp e = parse_linexp("1/2 + 3*alpha", names);
    EXPECT_EQ(e.c[0], Rat(1, 2));
    EXPECT_EQ(e.c[1], Rat(3));
    EXPECT_EQ(parse_linexp("-alpha", names).c[1], Rat(-1));
    EXPECT_THROW(parse_linexp("beta", names), std::invalid_argument);
    const auto a2 = CartanData::from_series('A', 2);
    const Bicharacter b(a2, Lattice::weight(a2), {{LinExp(), e}, {-e, LinExp()}});
    EXPECT_FALSE(b.p({1, 0}, {0, 1}).is_zero());
    EXPECT_EQ(b.p({1, 0}, {0, 1}) * b.p({0, 1}, {1, 0}), Scalar(1));
}

TEST(TwistedAction, FactorExamples) {
    const auto a2 = CartanData::from_series('A', 2);
    std::mt19937 rng(4);
    const Bicharacter b(a2, Lattice::weight(a2), rational_u(rng, 2));
    const IVec lam{1, 2};
    // e_i in degree (-a_i, 0): factor p(l, a_i) p(0, -a_i) = p(l, a_i) ... as p(l, d-g) p(d, g)
    const IVec a1 = a2.simple_root(0);
    EXPECT_EQ(qpow(b.action_exp({-a1, IVec{0, 0}}, lam)), b.p(lam, a1));
    // s_a in degree (-a, a): p(l, 2a) p(a, -a) = p(l, 2a); eigenvalue becomes q^{(Phi+ l, a)}
    const ExponentVec s_eig = b.action_exp({-a1, a1}, lam) + ExponentVec(a2.inner(lam, a1));
    EXPECT_EQ(s_eig, b.phi_plus_pair(lam, a1));
    // t_a in degree (a, -a): p(l, -2a) q^{(l, a)} = q^{-(Phi- l, a)}
    const ExponentVec t_eig = b.action_exp({a1, -a1}, lam) + ExponentVec(a2.inner(lam, a1));
    EXPECT_EQ(t_eig, -b.phi_minus_pair(lam, a1));
}

TEST(HopfTwist, BorelGeneratorsRandomU) {
    std::mt19937 rng(8);
    const auto a2 = CartanData::from_series('A', 2);
    const QuantumBorel B(a2);
    const auto P = Lattice::weight(a2);
    std::vector<BorelElt> sample;
    for (Side s : {Side::Plus, Side::Minus}) {
        sample.push_back(B.k(s, {1, 0}));
        sample.push_back(B.k(s, {0, -1}));
        sample.push_back(B.monomial(s, {1, -1}, {0, 1}));
    }
    sample.push_back(B.e(0));
    sample.push_back(B.e(1));
    sample.push_back(B.f(0));
    sample.push_back(B.f(1));
    for (int t = 0; t < 5; ++t) {
        const Bicharacter b(a2, P, rational_u(rng, 2));
        const auto rep = verify_hopf_twist(B, sample, as_factor(b.inverse()));
        EXPECT_TRUE(rep.ok) << rep.failure;
        // twisting by p and then by p^-1 gives back the original product
        const PairingFactor p = as_factor(b), pinv = as_factor(b.inverse());
        const PairingFactor both = [&](const IVec& l, const IVec& m) { return p(l, m) + pinv(l, m); };
        for (const auto& x : sample)
            for (const auto& y : sample)
                if (x.side == y.side) EXPECT_EQ(twist_mul(B, x, y, both), B.mul(x, y));
    }
}

TEST(HopfTwist, NonBicharacterIsCaught) {
    const auto a2 = CartanData::from_series('A', 2);
    const QuantumBorel B(a2);
    const PairingFactor bad = [](const IVec& l, const IVec& m) { return ExponentVec(Rat(l[0] + m[0])); };
    const std::vector<BorelElt> sample{B.e(0), B.e(1), B.monomial(Side::Plus, {1, 0}, {0})};
    const auto rep = verify_hopf_twist(B, sample, bad);
    EXPECT_FALSE(rep.ok);
    EXPECT_NE(rep.failure.find("coproduct"), std::string::npos) << rep.failure;
}
