#include <random>

#include <gtest/gtest.h>

#include "qmpg/double.hpp"

using namespace qmpg;

namespace {

CartanData cartan(const char* name) { return CartanData::from_series(name[0], name[1] - '0'); }

BorelMonomial random_mono(std::mt19937& rng, std::size_t n, std::size_t max_len, int torus = 1) {
    std::uniform_int_distribution<int> len(0, static_cast<int>(max_len)), gen(0, static_cast<int>(n) - 1),
        tor(-torus, torus);
    BorelMonomial m{IVec(n, 0), {}};
    for (auto& t : m.torus) t = tor(rng);
    const int L = len(rng);
    for (int k = 0; k < L; ++k) m.word.push_back(gen(rng));
    return m;
}

}  // namespace

TEST(Double, GeneratorRelations) {
    for (const char* name : {"A1", "A2", "B2"}) {
        const auto c = cartan(name);
        const QuantumBorel B(c);
        const QuantumDouble D(B);
        std::vector<IVec> sample;
        for (std::size_t i = 0; i < c.rank(); ++i) sample.push_back(c.fundamental_weight(i));
        for (const auto& r : double_relations(D, sample)) EXPECT_TRUE(r.ok) << name << " " << r.name << ": " << r.derived << " vs " << r.expected;
        for (const auto& r : quotient_check(D, sample)) EXPECT_TRUE(r.ok) << name << " " << r.name << ": " << r.derived << " vs " << r.expected;
    }
}

TEST(Double, A1CommutatorRendering) {
    const auto c = cartan("A1");
    const QuantumBorel B(c);
    const QuantumDouble D(B);
    const DoubleElt fe = D.mul(D.f(0), D.e(0));
    EXPECT_EQ(fe, D.mul(D.e(0), D.f(0)) - qhat(1) * (D.s({2}) - D.t({-2})));
    EXPECT_EQ(double_str(D.mul(D.e(0), D.f(0)) - fe), "-1/(q-q^-1)*t(-2) + 1/(q-q^-1)*s(2)");
    EXPECT_EQ(D.mul(D.one(), D.e(0)), D.e(0));
    EXPECT_EQ(D.mul(D.f(0), D.e(0) + D.one()) , fe + D.f(0));
}

TEST(Double, StrategiesAgree) {
    std::mt19937 rng(21);
    for (const char* name : {"A1", "A2", "B2"}) {
        const auto c = cartan(name);
        const QuantumBorel B(c);
        const QuantumDouble D(B);
        for (int t = 0; t < 40; ++t) {
            const BorelMonomial y = random_mono(rng, c.rank(), 3), x = random_mono(rng, c.rank(), 3);
            const DoubleElt d = D.straighten(y, x, Straightening::Direct);
            EXPECT_EQ(d, D.straighten(y, x, Straightening::LastPastFirst)) << name;
            EXPECT_EQ(d, D.straighten(y, x, Straightening::PeelLeft)) << name;
            EXPECT_TRUE(D.is_homogeneous(y, x, d));
        }
    }
}

TEST(Double, ConfluenceLongerWords) {
    std::mt19937 rng(5);
    const auto c = cartan("A2");
    const QuantumBorel B(c);
    const QuantumDouble D(B);
    for (int t = 0; t < 8; ++t) {
        BorelMonomial y = random_mono(rng, 2, 0), x = random_mono(rng, 2, 0);
        for (int k = 0; k < 4; ++k) {
            y.word.push_back(static_cast<int>(rng() % 2));
            x.word.push_back(static_cast<int>(rng() % 2));
        }
        EXPECT_EQ(D.straighten(y, x, Straightening::LastPastFirst), D.straighten(y, x, Straightening::PeelLeft));
    }
}

TEST(Double, Associativity) {
    std::mt19937 rng(9);
    const auto c = cartan("A2");
    const QuantumBorel B(c);
    const QuantumDouble D(B);
    for (int t = 0; t < 20; ++t) {
        auto rnd = [&] { return D.mono(random_mono(rng, 2, 2), random_mono(rng, 2, 2)); };
        const DoubleElt a = rnd(), b = rnd(), cc = rnd();
        EXPECT_EQ(D.mul(D.mul(a, b), cc), D.mul(a, D.mul(b, cc)));
    }
}

TEST(Double, CharactersKillCorrections) {
    std::mt19937 rng(13);
    const auto c = cartan("A2");
    const QuantumBorel B(c);
    const QuantumDouble D(B);
    for (int t = 0; t < 30; ++t) {
        const BorelMonomial y = random_mono(rng, 2, 2), x = random_mono(rng, 2, 2);
        const IVec eta{static_cast<std::int64_t>(rng() % 5) - 2, static_cast<std::int64_t>(rng() % 5) - 2};
        const Scalar lhs = D.character(D.mono(D.unit(), y), eta) * D.character(D.mono(x, D.unit()), eta);
        EXPECT_EQ(lhs, D.character(D.straighten(y, x), eta));
    }
}

TEST(Double, CapIsEnforced) {
    const auto c = cartan("A1");
    const QuantumBorel B(c);
    const QuantumDouble D(B, 2);
    EXPECT_THROW((void)D.straighten({{0}, {0, 0, 0}}, {{0}, {0}}), std::length_error);
}

TEST(TwistedDouble, RandomRationalU) {
    std::mt19937 rng(17);
    std::uniform_int_distribution<int> num(-5, 5), den(1, 4);
    for (const char* name : {"A1", "A2"}) {
        const auto c = cartan(name);
        const QuantumBorel B(c);
        const QuantumDouble D(B);
        const std::size_t n = c.rank();
        for (int t = 0; t < 3; ++t) {
            LinMat U(n, std::vector<LinExp>(n));
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = i + 1; j < n; ++j) {
                    U[i][j] = LinExp(Rat(num(rng), den(rng)));
                    U[j][i] = -U[i][j];
                }
            const Bicharacter p(c, Lattice::weight(c), U);
            for (int s = 0; s < 15; ++s) {
                const auto rep = twisted_double_check(D, p, random_mono(rng, n, 3), random_mono(rng, n, 3));
                EXPECT_TRUE(rep.ok) << rep.lhs << " | " << rep.rhs;
            }
        }
    }
}

TEST(TwistedDouble, AllGeneratorPairs) {
    const auto c = cartan("A2");
    const QuantumBorel B(c);
    const QuantumDouble D(B);
    const Bicharacter p(c, Lattice::weight(c), {{LinExp(), LinExp(Rat(2, 3))}, {LinExp(Rat(-2, 3)), LinExp()}});
    std::vector<BorelMonomial> gens{{{0, 0}, {0}}, {{0, 0}, {1}}, {{1, 0}, {}}, {{0, 1}, {}}, {{-1, 1}, {}}};
    for (const auto& y : gens)
        for (const auto& x : gens) {
            const auto rep = twisted_double_check(D, p, y, x);
            EXPECT_TRUE(rep.ok) << rep.lhs << " | " << rep.rhs;
        }
}
