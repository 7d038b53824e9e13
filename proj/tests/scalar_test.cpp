#include <random>

#include <gtest/gtest.h>

#include "qmpg/scalar.hpp"

using namespace qmpg;

namespace {

Scalar random_scalar(std::mt19937& rng, bool with_symbol) {
    std::uniform_int_distribution<int> nterms(1, 3), coef(-3, 3), ex(-4, 4), half(0, 1);
    auto poly = [&] {
        QPoly p;
        const int k = nterms(rng);
        for (int i = 0; i < k; ++i) {
            ExponentVec e(Rat(ex(rng), half(rng) ? 2 : 1));
            if (with_symbol && half(rng)) e.c[1] = Rat(ex(rng));
            p = p + QPoly::monomial(e, coef(rng));
        }
        return p;
    };
    QPoly n = poly(), d = poly();
    while (d.is_zero()) d = poly();
    return Scalar(n, d);
}

}  // namespace

TEST(Scalar, QpowBasics) {
    EXPECT_TRUE(qpow(Rat(0)).is_one());
    EXPECT_EQ(qpow(Rat(1, 2)) * qpow(Rat(1, 2)), qpow(Rat(1)));
    EXPECT_EQ(qpow(Rat(-2)).str(), "q^-2");
    EXPECT_EQ(qpow(Rat(3, 2)).str(), "q^(3/2)");
}

TEST(Scalar, Brackets) {
    EXPECT_TRUE(qbracket(0, 1).is_one());
    EXPECT_EQ(qbracket(1, 1).str(), "q-q^-1");
    EXPECT_EQ(qbracket(2, 1), (qpow(Rat(1)) - qpow(Rat(-1))) * (qpow(Rat(2)) - qpow(Rat(-2))));
    EXPECT_TRUE(qbinom(5, 0, 2).is_one());
    EXPECT_EQ(qbinom(2, 1, 1).str(), "q+q^-1");
    EXPECT_EQ(qbinom(3, 1, 1).str(), "q^2+1+q^-2");
    EXPECT_THROW(qbinom(2, 3, 1), std::out_of_range);
}

TEST(Scalar, GaussianPascalRule) {
    for (int d = 1; d <= 2; ++d) {
        for (int m = 1; m <= 8; ++m) {
            for (int k = 1; k < m; ++k) {
                const Scalar rhs = qpow(Rat(k * d)) * qbinom(m - 1, k, d) +
                                   qpow(Rat(-(m - k) * d)) * qbinom(m - 1, k - 1, d);
                EXPECT_EQ(qbinom(m, k, d), rhs) << m << " " << k;
                EXPECT_TRUE(qbinom(m, k, d).is_laurent());
            }
        }
    }
}

TEST(Scalar, FieldOps) {
    const Scalar b = qbracket(1, 1);
    EXPECT_TRUE((b * b.inv()).is_one());
    EXPECT_EQ((qpow(Rat(1, 2)) + qpow(Rat(1, 2))).str(), "2*q^(1/2)");
    const Scalar h = qhat(1);
    EXPECT_TRUE((qpow(Rat(1)) * h - qpow(Rat(-1)) * h).is_one());
    EXPECT_EQ((-h).str(), "-1/(q-q^-1)");
    EXPECT_THROW((void)Scalar().inv(), std::domain_error);
}

TEST(Scalar, RandomFieldAxioms) {
    std::mt19937 rng(12345);
    for (int i = 0; i < 1000; ++i) {
        const bool sym = i % 4 == 0;
        const Scalar a = random_scalar(rng, sym), b = random_scalar(rng, sym), c = random_scalar(rng, sym);
        ASSERT_EQ((a + b) + c, a + (b + c));
        ASSERT_EQ((a * b) * c, a * (b * c));
        ASSERT_EQ(a * b, b * a);
        ASSERT_EQ(a * (b + c), a * b + a * c);
        if (!c.is_zero()) {
            const Scalar x = Scalar(a.num() * c.num(), a.den() * c.num());
            ASSERT_EQ(x, a);
            ASSERT_EQ(a * c / c, a);
        }
    }
}

TEST(Scalar, NormalFormIsCanonicalUnivariate) {
    std::mt19937 rng(7);
    for (int i = 0; i < 300; ++i) {
        const Scalar a = random_scalar(rng, false), c = random_scalar(rng, false);
        if (c.is_zero()) continue;
        const Scalar x = (a * c) / c;
        ASSERT_EQ(x.str(), a.str());
        ASSERT_EQ(Scalar(x.num(), x.den()).str(), x.str());
    }
}

TEST(Scalar, ExponentAdditivity) {
    std::mt19937 rng(3);
    std::uniform_int_distribution<int> ex(-6, 6);
    for (int i = 0; i < 200; ++i) {
        ExponentVec a(Rat(ex(rng), 3)), b(Rat(ex(rng), 2));
        a.c[2] = Rat(ex(rng));
        EXPECT_EQ(qpow(a) * qpow(b), qpow(a + b));
    }
}

TEST(Scalar, RenderParseRoundTrip) {
    std::mt19937 rng(99);
    for (int i = 0; i < 500; ++i) {
        const Scalar a = random_scalar(rng, i % 3 == 0);
        const std::string s = a.str();
        const Scalar b = Scalar::parse(s);
        ASSERT_EQ(a, b) << s;
        ASSERT_EQ(b.str(), s);
    }
    EXPECT_EQ(Scalar::parse("q^(1/2+x1)").str(), "q^(1/2+x1)");
    EXPECT_EQ(Scalar::parse("-3/2*q^(-1/2)+7"), Scalar(mpq_class(7)) - Scalar(mpq_class(3, 2)) * qpow(Rat(-1, 2)));
    EXPECT_THROW(Scalar::parse("q^"), std::invalid_argument);
}
