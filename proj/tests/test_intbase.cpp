#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "rqf/intbase.hpp"

using namespace rqf;

TEST(Isqrt, Examples) {
    EXPECT_EQ(isqrt<i64>(0), 0);
    EXPECT_EQ(isqrt<i64>(69), 8);
    EXPECT_EQ(isqrt<i64>(1'000'000'000'000), 1'000'000);
    EXPECT_EQ(isqrt(Int("1000000000000000000000000")), Int("1000000000000"));
}

TEST(Isqrt, NegativeRejected) {
    EXPECT_THROW(isqrt<i64>(-1), input_error);
    EXPECT_THROW(isqrt(Int(-4)), input_error);
}

TEST(Isqrt, BracketsRandomInputs) {
    std::mt19937_64 rng(20240611);
    std::uniform_int_distribution<i64> dist(0, 1'000'000'000'000'000'000);
    for (int i = 0; i < 10'000; ++i) {
        const i64 n = dist(rng);
        const i64 r = isqrt(n);
        ASSERT_LE(static_cast<__int128>(r) * r, n);
        ASSERT_GT(static_cast<__int128>(r + 1) * (r + 1), n);
    }
}

TEST(Isqrt, NearPerfectSquares) {
    for (i64 r : {3'037'000'498LL, 1'000'000'000LL, 123'456'789LL}) {
        EXPECT_EQ(isqrt(r * r), r);
        EXPECT_EQ(isqrt(r * r - 1), r - 1);
        EXPECT_EQ(isqrt(r * r + 1), r);
    }
    EXPECT_EQ(isqrt<u64>(~u64{0}), u64{4294967295});
}

TEST(Factorize, Examples) {
    EXPECT_TRUE(factorize(i64{1}).factors.empty());
    EXPECT_EQ(factorize(i64{4}).factors, (std::vector<PrimePower>{{2, 2}}));
    EXPECT_EQ(factorize(i64{69}).factors, (std::vector<PrimePower>{{3, 1}, {23, 1}}));
}

TEST(Factorize, ErrorsAndBudget) {
    EXPECT_THROW(factorize(u64{0}), input_error);
    EXPECT_THROW(factorize(i64{-3}), input_error);
    // 1000003 * 1000033 has no factor below 1000
    EXPECT_THROW(factorize(u64{1000003} * 1000033, 1000), budget_exceeded);
    // a prime cofactor above the bound is accepted
    const auto f = factorize(u64{2} * 1000003, 1000);
    EXPECT_EQ(f.factors, (std::vector<PrimePower>{{2, 1}, {1000003, 1}}));
}

TEST(Factorize, ProductReconstructionUpTo1e5) {
    for (i64 n = 1; n <= 100'000; ++n) {
        const Factorization f = factorize(n);
        ASSERT_EQ(f.product(), static_cast<u64>(n));
        for (std::size_t i = 0; i < f.factors.size(); ++i) {
            ASSERT_TRUE(is_prime(f.factors[i].prime));
            if (i) {
                ASSERT_LT(f.factors[i - 1].prime, f.factors[i].prime);
            }
        }
    }
}

TEST(Squarefree, Examples) {
    EXPECT_FALSE(is_squarefree(45));
    EXPECT_TRUE(is_squarefree(1));
    EXPECT_TRUE(is_squarefree(69));
    EXPECT_THROW(is_squarefree(0), input_error);
}

TEST(Gcd, Examples) {
    EXPECT_EQ(gcd<i64>(0, 5), 5);
    EXPECT_EQ(gcd<i64>(12, 18), 6);
    EXPECT_EQ(gcd<i64>(1, 5), 1);
    EXPECT_EQ(gcd<i64>(0, 0), 0);
    EXPECT_EQ(gcd<i64>(-12, 18), 6);
    EXPECT_EQ(gcd(Int(-12), Int(-18)), Int(6));
}

TEST(Primality, AgreesWithSieve) {
    std::vector<bool> composite(100'001, false);
    for (i64 i = 2; i * i <= 100'000; ++i)
        if (!composite[i])
            for (i64 j = i * i; j <= 100'000; j += i)
                composite[j] = true;
    for (i64 n = 0; n <= 100'000; ++n)
        ASSERT_EQ(is_prime(n), n >= 2 && !composite[n]) << n;
}

TEST(Primality, LargeKnownValues) {
    EXPECT_TRUE(is_prime(u64{1'000'000'007}));
    EXPECT_TRUE(is_prime(u64{18446744073709551557ULL})); // largest 64-bit prime
    EXPECT_FALSE(is_prime(u64{3'215'031'751}));          // strong pseudoprime to 2,3,5,7
    EXPECT_FALSE(is_prime(u64{341'550'071'728'321}));    // strong pseudoprime to bases up to 17
}

TEST(Kronecker, Examples) {
    EXPECT_EQ(kronecker(69, 5), 1);
    EXPECT_EQ(kronecker(69, 3), 0);
    EXPECT_EQ(kronecker(5, 2), -1);
}

TEST(Kronecker, EdgeConventions) {
    EXPECT_EQ(kronecker(1, 0), 1);
    EXPECT_EQ(kronecker(-1, 0), 1);
    EXPECT_EQ(kronecker(2, 0), 0);
    EXPECT_EQ(kronecker(7, 2), 1);  // 7 = -1 mod 8
    EXPECT_EQ(kronecker(3, 2), -1); // 3 mod 8
    EXPECT_EQ(kronecker(4, 2), 0);
    EXPECT_EQ(kronecker(-1, -1), -1);
    EXPECT_EQ(kronecker(3, -1), 1);
    EXPECT_EQ(kronecker(-5, -7), -kronecker(-5, 7));
}

TEST(Kronecker, MatchesDefinition) {
    for (i64 a = -60; a <= 60; ++a)
        for (i64 n = -60; n <= 60; ++n)
            ASSERT_EQ(kronecker(a, n), oracle::kronecker_by_definition(a, n)) << a << "," << n;
}

TEST(Kronecker, CompletelyMultiplicative) {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<i64> dist(-2000, 2000);
    for (int i = 0; i < 1000; ++i) {
        const i64 a = dist(rng), b = dist(rng), n = dist(rng), k = dist(rng);
        ASSERT_EQ(kronecker(a * b, n), kronecker(a, n) * kronecker(b, n));
        ASSERT_EQ(kronecker(a, n * k), kronecker(a, n) * kronecker(a, k));
    }
}

TEST(Kronecker, QuadraticResidueCharacterization) {
    for (i64 q = 3; q <= 97; q += 2) {
        if (!is_prime(q))
            continue;
        std::vector<bool> square(q, false);
        for (i64 x = 1; x < q; ++x)
            square[x * x % q] = true;
        for (i64 a = 1; a < q; ++a)
            ASSERT_EQ(kronecker(a, q) == 1, square[a]) << a << " mod " << q;
    }
}
