#include <gtest/gtest.h>

#include <map>
#include <vector>

#include "carnot/algebra_vector.hpp"
#include "carnot/hall_basis.hpp"
#include "carnot/random.hpp"

using namespace carnot;

namespace {

// ---------------------------------------------------------------------------
// Independent oracle: a from-scratch truncated tensor algebra. Nothing here
// shares code with the library's structure-constant or series machinery; the
// only contact point is the Hall words' bracket trees, which are part of the
// public basis description.
// ---------------------------------------------------------------------------

using Word = std::vector<int>;
using Tensor = std::map<Word, Rational>;

Tensor tensor_mul(const Tensor& a, const Tensor& b, int max_deg) {
    Tensor out;
    for (const auto& [wa, ca] : a)
        for (const auto& [wb, cb] : b) {
            if (static_cast<int>(wa.size() + wb.size()) > max_deg) continue;
            Word w = wa;
            w.insert(w.end(), wb.begin(), wb.end());
            out[w] += ca * cb;
        }
    for (auto it = out.begin(); it != out.end();)
        it = sgn(it->second) == 0 ? out.erase(it) : std::next(it);
    return out;
}

Tensor tensor_add(Tensor a, const Tensor& b) {
    for (const auto& [w, c] : b) {
        a[w] += c;
        if (sgn(a[w]) == 0) a.erase(w);
    }
    return a;
}

Tensor tensor_scale(Tensor a, const Rational& f) {
    for (auto& [w, c] : a) c *= f;
    return a;
}

// Commutator expansion of a Hall word inside the tensor algebra.
Tensor expand_word(const HallBasis& basis, int i, int max_deg) {
    const HallWord& w = basis.word(i);
    if (w.is_generator()) return Tensor{{Word{w.right}, Rational(1)}};
    Tensor l = expand_word(basis, w.left, max_deg);
    Tensor r = expand_word(basis, w.right, max_deg);
    return tensor_add(tensor_mul(l, r, max_deg), tensor_scale(tensor_mul(r, l, max_deg), -1));
}

Tensor embed(const AlgebraVector<Rational>& v, int max_deg) {
    Tensor out;
    const HallBasis& basis = *v.basis();
    for (int i = 0; i < basis.dim(); ++i) {
        if (sgn(v[i]) == 0) continue;
        out = tensor_add(out, tensor_scale(expand_word(basis, i, max_deg), v[i]));
    }
    return out;
}

// exp of a tensor with zero constant term, truncated.
Tensor tensor_exp(const Tensor& t, int max_deg) {
    Tensor out{{Word{}, Rational(1)}};
    Tensor pw{{Word{}, Rational(1)}};
    Rational fact(1);
    for (int k = 1; k <= max_deg; ++k) {
        pw = tensor_mul(pw, t, max_deg);
        fact *= k;
        out = tensor_add(out, tensor_scale(pw, Rational(1) / fact));
    }
    return out;
}

AlgebraVector<Rational> random_vector(const std::shared_ptr<const HallBasis>& basis, Rng& rng,
                                      long magnitude = 6) {
    std::vector<Rational> c(static_cast<std::size_t>(basis->dim()));
    for (auto& x : c) x = random_rational(rng, magnitude);
    return AlgebraVector<Rational>(basis, std::move(c));
}

} // namespace

TEST(Bracket, SelfBracketVanishes) {
    auto basis = HallBasis::make(2, 3);
    Rng rng = make_rng(7);
    for (int t = 0; t < 20; ++t) {
        auto x = random_vector(basis, rng);
        EXPECT_TRUE(bracket(x, x).is_zero());
    }
}

TEST(Bracket, Antisymmetry) {
    auto basis = HallBasis::make(3, 4);
    Rng rng = make_rng(8);
    for (int t = 0; t < 20; ++t) {
        auto x = random_vector(basis, rng);
        auto y = random_vector(basis, rng);
        EXPECT_TRUE((bracket(x, y) + bracket(y, x)).is_zero());
    }
}

TEST(Bracket, Bilinearity) {
    auto basis = HallBasis::make(2, 4);
    Rng rng = make_rng(9);
    for (int t = 0; t < 10; ++t) {
        auto x = random_vector(basis, rng);
        auto y = random_vector(basis, rng);
        auto z = random_vector(basis, rng);
        Rational a = random_rational(rng, 6);
        EXPECT_EQ(bracket(a * x + y, z), a * bracket(x, z) + bracket(y, z));
    }
}

TEST(Bracket, HeisenbergGeneratorsGiveCenter) {
    auto basis = HallBasis::make(2, 2);
    auto e1 = AlgebraVector<Rational>::unit(basis, 0);
    auto e2 = AlgebraVector<Rational>::unit(basis, 1);
    auto e3 = AlgebraVector<Rational>::unit(basis, 2);
    EXPECT_EQ(bracket(e1, e2), e3);
    EXPECT_EQ(bracket(e2, e1), Rational(-1) * e3);
}

TEST(Bracket, MismatchedBasesRejected) {
    auto a = HallBasis::make(2, 2);
    auto b = HallBasis::make(2, 2); // distinct instance: distinct descriptor
    AlgebraVector<Rational> x(a), y(b);
    EXPECT_THROW(bracket(x, y), mismatch_error);
}

TEST(Bracket, BasisWordBracketsMatchTensorOracle) {
    // every pairwise bracket of basis words, checked against the oracle
    for (auto [r, s] : {std::pair{2, 4}, std::pair{3, 3}}) {
        auto basis = HallBasis::make(r, s);
        for (int i = 0; i < basis->dim(); ++i) {
            for (int j = 0; j < basis->dim(); ++j) {
                auto x = AlgebraVector<Rational>::unit(basis, i);
                auto y = AlgebraVector<Rational>::unit(basis, j);
                // degree-truncated tensor products vanish above the step, so
                // this expression is the truncated bracket for every pair
                Tensor expect =
                    tensor_add(tensor_mul(expand_word(*basis, i, s), expand_word(*basis, j, s), s),
                               tensor_scale(tensor_mul(expand_word(*basis, j, s),
                                                       expand_word(*basis, i, s), s),
                                            -1));
                EXPECT_EQ(embed(bracket(x, y), s), expect)
                    << "rank " << r << " step " << s << " pair (" << i << "," << j << ")";
            }
        }
    }
}

TEST(Bracket, JacobiIdentityExhaustive) {
    for (auto [r, s] : {std::pair{2, 5}, std::pair{3, 4}, std::pair{3, 5}}) {
        auto basis = HallBasis::make(r, s);
        int d = basis->dim();
        for (int i = 0; i < d; ++i) {
            auto ei = AlgebraVector<Rational>::unit(basis, i);
            for (int j = i; j < d; ++j) {
                auto ej = AlgebraVector<Rational>::unit(basis, j);
                for (int k = j; k < d; ++k) {
                    auto ek = AlgebraVector<Rational>::unit(basis, k);
                    auto sum = bracket(bracket(ei, ej), ek) + bracket(bracket(ej, ek), ei) +
                               bracket(bracket(ek, ei), ej);
                    ASSERT_TRUE(sum.is_zero())
                        << "Jacobi failed at (" << i << "," << j << "," << k << ") rank " << r;
                }
            }
        }
    }
}

TEST(Bch, StepTwoClosedForm) {
    auto basis = HallBasis::make(2, 2);
    auto e1 = AlgebraVector<Rational>::unit(basis, 0);
    auto e2 = AlgebraVector<Rational>::unit(basis, 1);
    auto e3 = AlgebraVector<Rational>::unit(basis, 2);
    EXPECT_EQ(bch(e1, e2), e1 + e2 + Rational(1, 2) * e3);
}

TEST(Bch, IdentityAndInverse) {
    auto basis = HallBasis::make(2, 4);
    Rng rng = make_rng(10);
    for (int t = 0; t < 10; ++t) {
        auto x = random_vector(basis, rng);
        AlgebraVector<Rational> zero(basis);
        EXPECT_EQ(bch(x, zero), x);
        EXPECT_EQ(bch(zero, x), x);
        EXPECT_TRUE(bch(x, Rational(-1) * x).is_zero());
    }
}

TEST(Bch, MatchesExponentialProductOracle) {
    // exp(bch(x,y)) must equal exp(x)exp(y) in the truncated tensor algebra
    for (auto [r, s] : {std::pair{2, 2}, std::pair{2, 3}, std::pair{2, 4}, std::pair{3, 3}}) {
        auto basis = HallBasis::make(r, s);
        Rng rng = make_rng(100 + static_cast<std::uint64_t>(10 * r + s));
        for (int t = 0; t < 6; ++t) {
            auto x = random_vector(basis, rng, 4);
            auto y = random_vector(basis, rng, 4);
            auto z = bch(x, y);
            Tensor lhs = tensor_exp(embed(z, s), s);
            Tensor rhs = tensor_mul(tensor_exp(embed(x, s), s), tensor_exp(embed(y, s), s), s);
            ASSERT_EQ(lhs, rhs) << "rank " << r << " step " << s << " trial " << t;
        }
    }
}

TEST(Bch, GradedTruncationOrder) {
    // inputs supported in weight >= j leave bch(x,y) - x - y in weight >= 2j
    auto basis = HallBasis::make(2, 6);
    Rng rng = make_rng(11);
    for (int j = 1; j <= 3; ++j) {
        for (int t = 0; t < 8; ++t) {
            std::vector<Rational> cx(static_cast<std::size_t>(basis->dim()), Rational(0));
            std::vector<Rational> cy = cx;
            for (int i = 0; i < basis->dim(); ++i) {
                if (basis->weight_of(i) >= j) {
                    cx[static_cast<std::size_t>(i)] = random_rational(rng, 5);
                    cy[static_cast<std::size_t>(i)] = random_rational(rng, 5);
                }
            }
            AlgebraVector<Rational> x(basis, cx), y(basis, cy);
            auto rem = bch(x, y) - x - y;
            EXPECT_GE(rem.min_weight(), 2 * j);
        }
    }
}
