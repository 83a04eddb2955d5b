#include <gtest/gtest.h>

#include "carnot/carnot_group.hpp"

using namespace carnot;

namespace {

GroupElement<Rational> h3(const GroupPtr& g, long x, long y, long t, long den = 1) {
    return element<Rational>(g, {Rational(x, den), Rational(y, den), Rational(t, den)});
}

} // namespace

TEST(Group, IdentityAndInverse) {
    auto g = CarnotGroup::make(2, 4);
    Rng rng = make_rng(1);
    for (int t = 0; t < 10; ++t) {
        auto a = random_element(g, rng);
        EXPECT_EQ(multiply(a, identity<Rational>(g)), a);
        EXPECT_EQ(multiply(identity<Rational>(g), a), a);
        EXPECT_TRUE(multiply(a, inverse(a)).is_identity());
        EXPECT_TRUE(multiply(inverse(a), a).is_identity());
    }
}

TEST(Group, Associativity) {
    auto g = CarnotGroup::make(3, 3);
    Rng rng = make_rng(2);
    for (int t = 0; t < 10; ++t) {
        auto a = random_element(g, rng);
        auto b = random_element(g, rng);
        auto c = random_element(g, rng);
        EXPECT_EQ(multiply(multiply(a, b), c), multiply(a, multiply(b, c)));
    }
}

TEST(Group, HeisenbergProduct) {
    auto g = CarnotGroup::heisenberg();
    auto p = multiply(h3(g, 1, 0, 0), h3(g, 0, 1, 0));
    EXPECT_EQ(p, element<Rational>(g, {Rational(1), Rational(1), Rational(1, 2)}));
}

TEST(Group, DescriptorMismatchRejected) {
    auto g1 = CarnotGroup::heisenberg();
    auto g2 = CarnotGroup::heisenberg(); // distinct descriptor instance
    EXPECT_THROW(multiply(identity<Rational>(g1), identity<Rational>(g2)), mismatch_error);
}

TEST(Dilation, IdentityFactorAndZero) {
    auto g = CarnotGroup::make(2, 3);
    Rng rng = make_rng(3);
    for (int t = 0; t < 10; ++t) {
        auto a = random_element(g, rng);
        EXPECT_EQ(dilate(Rational(1), a), a);
        EXPECT_TRUE(dilate(Rational(0), a).is_identity());
    }
}

TEST(Dilation, WeightScalingOnHeisenberg) {
    auto g = CarnotGroup::heisenberg();
    EXPECT_EQ(dilate(Rational(2), h3(g, 1, 1, 1)), h3(g, 2, 2, 4));
}

TEST(Dilation, CompositionAndAutomorphism) {
    auto g = CarnotGroup::make(2, 4);
    Rng rng = make_rng(4);
    for (int t = 0; t < 10; ++t) {
        auto a = random_element(g, rng);
        auto b = random_element(g, rng);
        Rational l = random_rational(rng, 6);
        Rational m = random_rational(rng, 6);
        EXPECT_EQ(dilate(l, dilate(m, a)), dilate(Rational(l * m), a));
        EXPECT_EQ(dilate(l, multiply(a, b)), multiply(dilate(l, a), dilate(l, b)));
    }
}

TEST(Dilation, RealFactorSwitchesScalarType) {
    auto g = CarnotGroup::heisenberg();
    GroupElement<double> d = dilate_real(0.5, h3(g, 1, 1, 1));
    EXPECT_DOUBLE_EQ(d[0], 0.5);
    EXPECT_DOUBLE_EQ(d[1], 0.5);
    EXPECT_DOUBLE_EQ(d[2], 0.25);
}

TEST(Commutator, BasicCases) {
    auto g = CarnotGroup::heisenberg();
    Rng rng = make_rng(5);
    auto a = random_element(g, rng);
    EXPECT_TRUE(commutator(a, a).is_identity());
    EXPECT_TRUE(commutator(a, identity<Rational>(g)).is_identity());
    EXPECT_EQ(commutator(h3(g, 1, 0, 0), h3(g, 0, 1, 0)), h3(g, 0, 0, 1));
}

TEST(Commutator, LandsInSecondLayer) {
    auto g = CarnotGroup::make(2, 5);
    Rng rng = make_rng(6);
    for (int t = 0; t < 5; ++t) {
        auto a = random_element(g, rng);
        auto b = random_element(g, rng);
        EXPECT_TRUE(lcs_member(commutator(a, b), 2));
    }
}

TEST(Commutator, SimpleCommutatorsOfFirstLayerLieDeep) {
    auto g = CarnotGroup::make(2, 5);
    Rng rng = make_rng(7);
    for (int k = 2; k <= 5; ++k) {
        for (int t = 0; t < 5; ++t) {
            std::vector<GroupElement<Rational>> gs;
            for (int i = 0; i < k; ++i)
                gs.push_back(random_layer_element(g, rng, 1, 1));
            EXPECT_TRUE(lcs_member(simple_commutator(gs), k));
        }
    }
}

TEST(Power, SmallCases) {
    auto g = CarnotGroup::heisenberg();
    Rng rng = make_rng(8);
    auto a = random_element(g, rng);
    EXPECT_TRUE(power(a, 0).is_identity());
    EXPECT_EQ(power(a, 1), a);
    EXPECT_EQ(power(a, -1), inverse(a));
    EXPECT_EQ(power(h3(g, 1, 1, 0), 2), h3(g, 2, 2, 0));
}

TEST(Power, MatchesRepeatedMultiplication) {
    auto g = CarnotGroup::make(2, 4);
    Rng rng = make_rng(9);
    auto a = random_element(g, rng, 5);
    auto acc = identity<Rational>(g);
    for (int n = 0; n <= 7; ++n) {
        EXPECT_EQ(power(a, n), acc);
        acc = multiply(acc, a);
    }
    EXPECT_EQ(power(a, -5), inverse(power(a, 5)));
}

TEST(LowerCentralSeries, MembershipBySupport) {
    auto g = CarnotGroup::heisenberg();
    for (int k = 1; k <= 3; ++k) EXPECT_TRUE(lcs_member(identity<Rational>(g), k));
    EXPECT_TRUE(lcs_member(h3(g, 0, 0, 1), 2));
    EXPECT_FALSE(lcs_member(h3(g, 1, 0, 0), 2));
    // top+1 only contains the identity
    EXPECT_FALSE(lcs_member(h3(g, 0, 0, 1), 3));
    EXPECT_THROW(lcs_member(h3(g, 0, 0, 1), 0), bounds_error);
    EXPECT_THROW(lcs_member(h3(g, 0, 0, 1), 4), bounds_error);
}

TEST(FirstLayer, SupportTest) {
    auto g = CarnotGroup::heisenberg();
    EXPECT_TRUE(in_first_layer(identity<Rational>(g)));
    EXPECT_TRUE(in_first_layer(h3(g, 1, 2, 0)));
    EXPECT_FALSE(in_first_layer(h3(g, 1, 0, 3)));
}

TEST(FirstLayer, OneParameterSubgroupProperty) {
    auto g = CarnotGroup::make(2, 4);
    Rng rng = make_rng(10);
    for (int trial = 0; trial < 10; ++trial) {
        auto v = random_layer_element(g, rng, 1, 1);
        ASSERT_TRUE(in_first_layer(v));
        Rational t = random_rational(rng, 8);
        Rational u = random_rational(rng, 8);
        EXPECT_EQ(multiply(dilate(t, v), dilate(u, v)), dilate(Rational(t + u), v));
    }
    // an element with higher-weight support fails the subgroup law at t = u = 1
    auto gh = CarnotGroup::heisenberg();
    auto bad = h3(gh, 1, 0, 3);
    EXPECT_NE(multiply(dilate(Rational(1), bad), dilate(Rational(1), bad)),
              dilate(Rational(2), bad));
}

TEST(Sigma, BasicValues) {
    auto g = CarnotGroup::heisenberg();
    auto z = h3(g, 0, 0, 1);
    EXPECT_EQ(sigma(Rational(1), z), z);
    EXPECT_TRUE(sigma(Rational(0), z).is_identity());
    EXPECT_EQ(sigma(Rational(3, 2), z), element<Rational>(g, {Rational(0), Rational(0), Rational(3, 2)}));
}

TEST(Sigma, RequiresTopLayer) {
    auto g = CarnotGroup::heisenberg();
    EXPECT_THROW(sigma(Rational(1, 2), h3(g, 1, 0, 1)), domain_error);
}

TEST(Sigma, VectorSpaceAxiomsSampled) {
    auto g = CarnotGroup::make(2, 3);
    Rng rng = make_rng(11);
    for (int t = 0; t < 25; ++t) {
        auto z = random_layer_element(g, rng, 3, 3);
        auto h = random_layer_element(g, rng, 3, 3);
        Rational q = random_rational(rng, 12);
        Rational p = random_rational(rng, 12);
        EXPECT_EQ(sigma(q, sigma(p, z)), sigma(Rational(q * p), z));
        EXPECT_EQ(multiply(sigma(q, z), sigma(p, z)), sigma(Rational(q + p), z));
        EXPECT_EQ(sigma(Rational(1), z), z);
        EXPECT_EQ(multiply(sigma(q, z), sigma(q, h)), sigma(q, multiply(z, h)));
    }
}
