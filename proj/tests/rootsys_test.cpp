#include <gtest/gtest.h>

#include "qmpg/rootsys.hpp"

using namespace qmpg;

TEST(Cartan, BasicData) {
    const auto a1 = CartanData::from_series('A', 1);
    EXPECT_EQ(a1.rank(), 1u);
    EXPECT_EQ(a1.d(0), 1);
    EXPECT_EQ(a1.inner(a1.simple_root(0), a1.simple_root(0)), Rat(2));
    EXPECT_EQ(a1.inner({1}, {1}), Rat(1, 2));
    EXPECT_EQ(a1.inner({0}, {1}), Rat(0));

    const auto a2 = CartanData::from_series('A', 2);
    EXPECT_EQ(a2.inner(a2.simple_root(0), a2.simple_root(1)), Rat(-1));

    for (const char* name : {"B2", "G2", "A3", "C3", "D4"}) {
        const auto c = CartanData::from_series(name[0], name[1] - '0');
        for (std::size_t i = 0; i < c.rank(); ++i)
            for (std::size_t j = 0; j < c.rank(); ++j) {
                EXPECT_EQ(c.root_inner(i, j), c.root_inner(j, i)) << name;
                EXPECT_EQ(c.inner(c.fundamental_weight(i), c.simple_root(j)), Rat(i == j ? c.d(i) : 0)) << name;
                EXPECT_EQ(c.inner(c.simple_root(i), c.simple_root(j)), Rat(c.root_inner(i, j))) << name;
            }
    }
}

TEST(Cartan, RejectsNonFiniteType) {
    EXPECT_THROW(CartanData::from_matrix({{2, -2}, {-2, 2}}), std::invalid_argument);
    EXPECT_THROW(CartanData::from_matrix({{2, -1}, {0, 2}}), std::invalid_argument);
    EXPECT_THROW(CartanData::from_matrix({{2, 1}, {1, 2}}), std::invalid_argument);
}

TEST(Cartan, PositiveRootCounts) {
    EXPECT_EQ(CartanData::from_series('A', 2).positive_roots().size(), 3u);
    EXPECT_EQ(CartanData::from_series('B', 2).positive_roots().size(), 4u);
    EXPECT_EQ(CartanData::from_series('G', 2).positive_roots().size(), 6u);
    EXPECT_EQ(CartanData::from_series('A', 3).positive_roots().size(), 6u);
}

TEST(Weyl, OrderAndLongestElement) {
    struct Case {
        char s;
        int r;
        std::size_t order, l0;
    };
    for (const auto& cs : {Case{'A', 1, 2, 1}, Case{'A', 2, 6, 3}, Case{'B', 2, 8, 4}, Case{'G', 2, 12, 6},
                           Case{'A', 3, 24, 6}}) {
        const auto c = CartanData::from_series(cs.s, cs.r);
        const WeylGroup W(c);
        EXPECT_EQ(W.size(), cs.order);
        EXPECT_EQ(W.longest().length(), cs.l0);
        for (const auto& w : W.elements()) EXPECT_LE(w.length(), cs.l0);
    }
}

TEST(Weyl, InvarianceAndLengths) {
    for (const char* name : {"A1", "A2", "B2", "A3", "C3"}) {
        const auto c = CartanData::from_series(name[0], name[1] - '0');
        const WeylGroup W(c);
        const std::size_t n = c.rank();
        const auto& w0 = W.longest();
        for (const auto& w : W.elements()) {
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    EXPECT_EQ(c.inner(w.act(c.fundamental_weight(i)), w.act(c.fundamental_weight(j))),
                              c.inner(c.fundamental_weight(i), c.fundamental_weight(j)));
            EXPECT_EQ(W.inverse(w).length(), w.length());
            std::vector<int> word = w0.word;
            word.insert(word.end(), w.word.begin(), w.word.end());
            EXPECT_EQ(W.from_word(word).length(), w0.length() - w.length()) << name << " " << w.str();
            // length = number of positive roots sent negative
            std::size_t neg = 0;
            for (const auto& r : c.positive_roots()) {
                const IVec img = w.act(c.from_root_coords(r));
                bool is_neg = false;
                for (const auto& r2 : c.positive_roots())
                    if (c.from_root_coords(-r2) == img) is_neg = true;
                neg += is_neg;
            }
            EXPECT_EQ(neg, w.length());
        }
    }
}

TEST(Weyl, SimpleReflectionsAreInvolutions) {
    const auto c = CartanData::from_series('B', 2);
    const WeylGroup W(c);
    for (int i = 0; i < 2; ++i) EXPECT_EQ(W.from_word({i, i}).length(), 0u);
}

TEST(Weyl, ActionExamples) {
    const auto a1 = CartanData::from_series('A', 1);
    const WeylGroup W1(a1);
    EXPECT_EQ(W1.parse("s1").act({1}), IVec{-1});
    const auto [dom, word] = a1.dominant_orbit({-1});
    EXPECT_EQ(dom, IVec{1});
    EXPECT_EQ(word, std::vector<int>{0});

    const auto a2 = CartanData::from_series('A', 2);
    const WeylGroup W2(a2);
    EXPECT_EQ(W2.longest().act({1, 0}), (IVec{0, -1}));
    EXPECT_EQ(W2.parse("e").length(), 0u);
    EXPECT_EQ(W2.parse("s1,s2").str(), "s1,s2");
    EXPECT_THROW(W2.parse("t1"), std::invalid_argument);
}

TEST(Lattice, Sandwich) {
    const auto a2 = CartanData::from_series('A', 2);
    const auto P = Lattice::weight(a2);
    const auto Q = Lattice::root(a2);
    EXPECT_TRUE(P.contains({1, 0}));
    EXPECT_FALSE(Q.contains({1, 0}));
    EXPECT_TRUE(Q.contains({2, -1}));
    EXPECT_TRUE(Q.contains({1, 1}));
    EXPECT_THROW(Lattice::custom(a2, {{2, 0}, {0, 2}}), std::invalid_argument);
}

TEST(NormCriterion, Examples) {
    const auto a1 = CartanData::from_series('A', 1);
    const WeylGroup W(a1);
    EXPECT_TRUE(norm_criterion(a1, W, {1}, {{1}, {-1}}).holds);
    EXPECT_TRUE(norm_criterion(a1, W, {2}, {{2}, {0}, {-2}}).holds);
    EXPECT_TRUE(norm_criterion(a1, W, {1}, {}).holds);
    EXPECT_FALSE(norm_criterion(a1, W, {2}, {{1}, {4}}).holds);
}
