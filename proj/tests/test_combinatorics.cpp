#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "seqclone/combinatorics.hpp"
#include "seqclone/mps_cloner.hpp"

using namespace seqclone;

TEST(Binom, HandValues) {
    EXPECT_EQ(binom(5, 2), 10);
    EXPECT_EQ(binom(3, 5), 0);
    EXPECT_EQ(binom(4, -1), 0);
    EXPECT_EQ(binom(0, 0), 1);
}

TEST(Binom, MatchesPascalRecurrence) {
    EXPECT_EQ(binom(30, 15), BigInt(155117520));
    for (int n = 0; n <= 40; ++n) {
        for (int k = 0; k <= n; ++k) EXPECT_EQ(binom(n, k), BigInt(oracle::pascal(n, k))) << n << " " << k;
    }
}

TEST(Binom, BeyondTableStaysExact) {
    // C(200, 100) = C(199, 99) + C(199, 100)
    EXPECT_EQ(binom(200, 100), binom(199, 99) + binom(199, 100));
    EXPECT_GT(binom(200, 100), BigInt(1) << 190);
}

TEST(Binom, NegativeNThrows) { EXPECT_THROW(binom(-1, 0), std::invalid_argument); }

TEST(Multinom, HandValues) {
    EXPECT_EQ(multinom(3, {1, 1, 1}), 6);
    EXPECT_EQ(multinom(4, {4, 0}), 1);
    EXPECT_EQ(multinom(4, {2, 2}), 6);
}

TEST(Multinom, CountsArrangements) {
    // Count strings over 3 letters of length 6 with a given occupation.
    for (const auto& occ : enumerate_occupations(6, 3)) {
        std::uint64_t hits = 0;
        for (std::size_t i = 0; i < oracle::ipow(3, 6); ++i) {
            auto c = oracle::counts_of(oracle::digits(i, 6, 3), 0, 6, 3);
            hits += std::equal(c.begin(), c.end(), occ.counts().begin()) ? 1 : 0;
        }
        EXPECT_EQ(multinom(6, occ.counts()), BigInt(hits)) << occ.str();
    }
}

TEST(Multinom, SumMismatchThrows) { EXPECT_THROW(multinom(4, {1, 2}), std::invalid_argument); }

TEST(BetaSquared, HandValues) {
    const CloneTask t12(1, 2);
    EXPECT_EQ(beta_squared(t12, 0, 0), ExactRational(2, 3));
    EXPECT_EQ(beta_squared(t12, 0, 1), ExactRational(1, 3));
    const CloneTask t13(1, 3);
    EXPECT_EQ(beta_squared(t13, 0, 0), ExactRational(1, 2));
    EXPECT_EQ(beta_squared(t13, 0, 1), ExactRational(1, 3));
    EXPECT_EQ(beta_squared(t13, 0, 2), ExactRational(1, 6));
    for (int M = 1; M <= 6; ++M) {
        for (int m = 0; m <= M; ++m) EXPECT_EQ(beta_squared(CloneTask(M, M), m, 0), 1);
    }
}

TEST(BetaSquared, OutOfRange) {
    const CloneTask t(1, 3);
    EXPECT_EQ(beta_squared(t, 0, 3), 0);
    EXPECT_EQ(beta_squared(t, 0, -1), 0);
    EXPECT_THROW(beta_squared(t, 2, 0), std::invalid_argument);
    EXPECT_THROW(beta_squared(CloneTask(1, 2, 3), 0, 0), std::invalid_argument);
}

TEST(BetaSquared, RowsSumToOneExactly) {
    for (int M = 1; M <= 10; ++M) {
        for (int N = 1; N <= M; ++N) {
            const CloneTask t(N, M);
            for (int m = 0; m <= N; ++m) {
                ExactRational s = 0;
                for (int j = 0; j <= M - N; ++j) s += beta_squared(t, m, j);
                EXPECT_EQ(s, 1) << t.str() << " m=" << m;
            }
        }
    }
}

TEST(BetaSquared, MatchesFactorialOracle) {
    for (int M = 1; M <= 8; ++M) {
        for (int N = 1; N <= M; ++N) {
            for (int m = 0; m <= N; ++m) {
                for (int j = 0; j <= M - N; ++j) {
                    const double want = oracle::beta2(N, M, 2, {N - m, m}, {M - N - j, j});
                    EXPECT_NEAR(to_double(beta_squared(CloneTask(N, M), m, j)), want, 1e-14);
                }
            }
        }
    }
}

TEST(BetaSquaredQudit, HandValues) {
    const CloneTask t(1, 2, 3);
    EXPECT_EQ(beta_squared_qudit(t, {1, 0, 0}, {1, 0, 0}), ExactRational(1, 2));
    EXPECT_EQ(beta_squared_qudit(t, {1, 0, 0}, {0, 1, 0}), ExactRational(1, 4));
    EXPECT_EQ(beta_squared_qudit(t, {1, 0, 0}, {0, 0, 1}), ExactRational(1, 4));
    EXPECT_EQ(beta_squared_qudit(CloneTask(3, 3, 4), {1, 1, 0, 1}, OccupationVector::zeros(4)), 1);
}

TEST(BetaSquaredQudit, RowsSumToOneExactly) {
    for (int d = 3; d <= 4; ++d) {
        for (int M = 1; M <= (d == 3 ? 10 : 7); ++M) {
            for (int N = 1; N <= M; ++N) {
                const CloneTask t(N, M, d);
                for (const auto& in : enumerate_occupations(N, d)) {
                    ExactRational s = 0;
                    for (const auto& j : enumerate_occupations(M - N, d)) s += beta_squared_qudit(t, in, j);
                    EXPECT_EQ(s, 1) << t.str() << " " << in.str();
                }
            }
        }
    }
}

TEST(BetaSquaredQudit, ReducesToQubit) {
    for (int M = 1; M <= 6; ++M) {
        for (int N = 1; N <= M; ++N) {
            const CloneTask t(N, M);
            for (int m = 0; m <= N; ++m) {
                for (int j = 0; j <= M - N; ++j) {
                    EXPECT_EQ(beta_squared_qudit(t, {N - m, m}, {M - N - j, j}), beta_squared(t, m, j));
                }
            }
        }
    }
}

TEST(BetaSquaredQudit, InvariantUnderLevelRelabelling) {
    std::mt19937 rng(7);
    const CloneTask t(2, 5, 3);
    for (const auto& in : enumerate_occupations(2, 3)) {
        for (const auto& j : enumerate_occupations(3, 3)) {
            std::vector<int> perm{0, 1, 2};
            std::shuffle(perm.begin(), perm.end(), rng);
            std::vector<int> a(3), b(3);
            for (int i = 0; i < 3; ++i) {
                a[perm[i]] = in[i];
                b[perm[i]] = j[i];
            }
            EXPECT_EQ(beta_squared_qudit(t, OccupationVector(a), OccupationVector(b)), beta_squared_qudit(t, in, j));
        }
    }
}

TEST(BetaSquaredQudit, BadArgumentsThrow) {
    const CloneTask t(1, 2, 3);
    EXPECT_THROW(beta_squared_qudit(t, {1, 0}, {1, 0}), std::invalid_argument);
    EXPECT_THROW(beta_squared_qudit(t, {2, 0, 0}, {1, 0, 0}), std::invalid_argument);
    EXPECT_THROW(beta_squared_qudit(t, {1, 0, 0}, {1, 1, 0}), std::invalid_argument);
}

TEST(Rational, Formatting) {
    EXPECT_EQ(to_string(ExactRational(5, 6)), "5/6");
    EXPECT_EQ(to_string(ExactRational(14, 16)), "7/8");
    EXPECT_EQ(to_string(ExactRational(3, 3)), "1");
    EXPECT_NEAR(sqrt_to_double(ExactRational(4, 5)), std::sqrt(0.8), 1e-16);
}

TEST(Occupation, CanonicalOrderAndArithmetic) {
    const auto labels = enumerate_occupations(3, 2);
    ASSERT_EQ(labels.size(), 4u);
    for (int j = 0; j < 4; ++j) EXPECT_EQ(labels[j], OccupationVector::qubit(3, j));
    EXPECT_EQ(enumerate_occupations(4, 3).size(), 15u);
    const OccupationVector a{2, 1, 0};
    EXPECT_EQ(a.with_added(2), (OccupationVector{2, 1, 1}));
    EXPECT_EQ(*a.minus({1, 1, 0}), (OccupationVector{1, 0, 0}));
    EXPECT_FALSE(a.minus({0, 0, 1}).has_value());
    EXPECT_EQ(a.reversed(), (OccupationVector{0, 1, 2}));
    EXPECT_EQ(a.str(), "(2,1,0)");
    EXPECT_THROW(OccupationVector({1, -1}), std::invalid_argument);
}

TEST(Task, Validation) {
    EXPECT_THROW(CloneTask(0, 2), std::invalid_argument);
    EXPECT_THROW(CloneTask(3, 2), std::invalid_argument);
    EXPECT_THROW(CloneTask(1, 2, 1), std::invalid_argument);
    EXPECT_THROW(CloneTask(1, kMaxCopies + 1), std::invalid_argument);
    const CloneTask t(1, 3);
    EXPECT_EQ(t.site_count(), 5);
    EXPECT_EQ(t.ancilla_sites(), 2);
    EXPECT_EQ(*t.dense_dimension(), 32u);
    EXPECT_FALSE(CloneTask(1, 9, 3).fits_dense());
    EXPECT_THROW(CloneTask(1, 9, 3).require_dense(), too_large_error);
}
