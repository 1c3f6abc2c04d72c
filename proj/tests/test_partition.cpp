#include <gtest/gtest.h>

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "eqpart/partition.hpp"
#include "eqpart/verify.hpp"

using namespace eqpart;

namespace {

constexpr Side S1 = Side::set1;
constexpr Side S2 = Side::set2;

const std::vector<std::int64_t> kSmall{1, 2, 3, 8};

PartitionState<std::int64_t> small_state(std::vector<Side> m)
{
    return make_state<std::int64_t>(kSmall, std::move(m));
}

} // namespace

TEST(MakeState, SumsAndCardinalities)
{
    const auto st = small_state({S1, S2, S1, S2});
    EXPECT_EQ(st.s1, 4);
    EXPECT_EQ(st.s2, 10);
    EXPECT_EQ(st.d, -6);
    EXPECT_EQ(st.card1, 2u);
    EXPECT_EQ(st.card2, 2u);
    EXPECT_EQ(st.larger_side(), S2);
}

TEST(SwapNewDiff, Examples)
{
    const auto st = small_state({S2, S2, S1, S1});  // SET1 = {3, 8}, d = 8
    ASSERT_EQ(st.d, 8);
    EXPECT_EQ(swap_new_diff<std::int64_t>(st, kSmall, 3, 1), 4);
    EXPECT_EQ(swap_new_diff<std::int64_t>(st, kSmall, 1, 3), 4);  // argument order is irrelevant

    const auto alt = small_state({S1, S2, S1, S2});
    EXPECT_EQ(swap_new_diff<std::int64_t>(alt, kSmall, 1, 0), 4);
}

TEST(SwapNewDiff, EqualValuesLeaveDiffUnchanged)
{
    const std::vector<std::int64_t> v{5, 5, 1, 9};
    const auto st = make_state<std::int64_t>(v, {S1, S2, S1, S1});
    EXPECT_EQ(swap_new_diff<std::int64_t>(st, v, 0, 1), st.abs_diff());
}

TEST(SwapNewDiff, SameSetIsContractViolation)
{
    const auto st = small_state({S1, S2, S1, S2});
    EXPECT_THROW(swap_new_diff<std::int64_t>(st, kSmall, 0, 2), InternalError);
}

TEST(ApplySwap, UnchangedSign)
{
    auto st = small_state({S1, S2, S1, S2});
    EXPECT_EQ(apply_swap<std::int64_t>(st, kSmall, 1, 0), SignOutcome::unchanged);
    EXPECT_EQ(st.d, -4);
    EXPECT_EQ(st.s1, 5);
    EXPECT_EQ(st.s2, 9);
    EXPECT_EQ(st.membership, (std::vector<Side>{S2, S1, S1, S2}));
    EXPECT_EQ(st.card1, 2u);
}

TEST(ApplySwap, ReachesZero)
{
    const std::vector<std::int64_t> v{1, 2, 3, 4};
    auto st = make_state<std::int64_t>(v, {S1, S2, S1, S2});
    ASSERT_EQ(st.d, -2);
    EXPECT_EQ(apply_swap<std::int64_t>(st, v, 1, 0), SignOutcome::zero);
    EXPECT_EQ(st.d, 0);
}

TEST(ApplySwap, FlipsSign)
{
    const std::vector<double> v{0.0, 2.9};
    auto st = make_state<double>(v, {S2, S1});
    st.d = 3.0;
    EXPECT_EQ(apply_swap<double>(st, v, 1, 0), SignOutcome::flipped);
    EXPECT_NEAR(st.d, -2.8, 1e-12);
}

TEST(ApplySwap, FloatToleranceCountsAsZero)
{
    const std::vector<double> v{1.0, 1.5};
    auto st = make_state<double>(v, {S2, S1});
    st.d = 1.0 + 1e-10;
    EXPECT_EQ(apply_swap<double>(st, v, 1, 0, 1e-9), SignOutcome::zero);
}

TEST(ApplySwap, SameSetIsContractViolation)
{
    auto st = small_state({S1, S2, S1, S2});
    EXPECT_THROW(apply_swap<std::int64_t>(st, kSmall, 0, 2), InternalError);
}

TEST(RecomputeSums, ExactModeMatchesAfterSwaps)
{
    std::mt19937_64 rng(7);
    std::vector<std::int64_t> v(40);
    for (auto& x : v)
        x = static_cast<std::int64_t>(rng() % 2001) - 1000;
    std::vector<Side> m(40, S2);
    std::fill_n(m.begin(), 20, S1);
    auto st = make_state<std::int64_t>(v, m);
    for (int step = 0; step < 2000; ++step) {
        std::size_t a = rng() % 40, b = rng() % 40;
        if (st.membership[a] == st.membership[b])
            continue;
        apply_swap<std::int64_t>(st, v, a, b);
        EXPECT_EQ(st.d, recomputed_diff<std::int64_t>(st, v));
    }
    EXPECT_NO_THROW(recompute_sums<std::int64_t>(st, v));
}

TEST(RecomputeSums, ExactModeMismatchIsDetected)
{
    auto st = small_state({S1, S2, S1, S2});
    st.s1 += 1;
    st.d += 1;
    EXPECT_THROW(recompute_sums<std::int64_t>(st, kSmall), InternalError);
}

TEST(RecomputeSums, EmptySetSumsToZero)
{
    const std::vector<std::int64_t> v{4, 7, 9};
    auto st = make_state<std::int64_t>(v, {S2, S2, S2});
    recompute_sums<std::int64_t>(st, v);
    EXPECT_EQ(st.card1, 0u);
    EXPECT_EQ(st.s1, 0);
    EXPECT_EQ(st.d, -20);
}

// Drift harness: 10^4 arbitrary swaps on values in [0,1), then compare the
// incrementally maintained d with a compensated recomputation.
TEST(RecomputeSums, FloatDriftStaysWithinBound)
{
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> dist(0.0, 1.0);
        const std::size_t n = 1000;
        std::vector<double> v(n);
        for (auto& x : v)
            x = dist(rng);
        std::vector<Side> m(n, S2);
        std::fill_n(m.begin(), n / 2, S1);
        std::shuffle(m.begin(), m.end(), rng);
        auto st = make_state<double>(v, m);
        int swaps = 0;
        while (swaps < 10000) {
            std::size_t a = rng() % n, b = rng() % n;
            if (st.membership[a] == st.membership[b])
                continue;
            apply_swap<double>(st, v, a, b);
            ++swaps;
        }
        const double maintained = st.d;
        const double total = magnitude_sum<double>(v);
        recompute_sums<double>(st, v);
        EXPECT_LE(std::abs(maintained - st.d), 1e-9 * total) << "seed " << seed;
    }
}

TEST(PairSwapVerifier, DetectsImprovableState)
{
    const auto st = small_state({S2, S2, S1, S1});
    const auto check = is_locally_optimal_pairswap<std::int64_t>(st, kSmall);
    EXPECT_FALSE(check.locally_optimal);
    ASSERT_TRUE(check.witness);
    EXPECT_EQ(swap_new_diff<std::int64_t>(st, kSmall, check.witness->first, check.witness->second), 4);
}

TEST(PairSwapVerifier, ZeroDiffIsOptimal)
{
    const std::vector<std::int64_t> v{1, 2, 3, 4};
    EXPECT_TRUE(is_locally_optimal_pairswap<std::int64_t>(make_state<std::int64_t>(v, {S1, S2, S2, S1}), v));
}

TEST(PairSwapVerifier, AcceptsLocalOptimum)
{
    const auto st = small_state({S2, S1, S1, S2});  // {2,3} | {1,8}
    EXPECT_TRUE(is_locally_optimal_pairswap<std::int64_t>(st, kSmall));
    EXPECT_TRUE(is_locally_optimal_pairswap_fast<std::int64_t>(st, kSmall));
}

TEST(PairSwapVerifier, ToleranceRelaxesTheCheck)
{
    const std::vector<double> v{0.0, 1.0, 1.0, 2.0 + 1e-12};
    const auto st = make_state<double>(v, {S1, S1, S2, S2});  // d = -2 - 1e-12
    EXPECT_FALSE(is_locally_optimal_pairswap<double>(st, v));
    EXPECT_TRUE(is_locally_optimal_pairswap<double>(st, v, 10.0));
}

TEST(PairSwapVerifier, FastAgreesWithExhaustive)
{
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 3000; ++trial) {
        const std::size_t n = 2 + rng() % 15;
        std::vector<std::int64_t> v(n);
        for (auto& x : v)
            x = static_cast<std::int64_t>(rng() % 9) - 2;
        std::vector<Side> m(n);
        for (auto& s : m)
            s = rng() % 2 ? S1 : S2;
        const auto st = make_state<std::int64_t>(v, m);
        const bool slow = is_locally_optimal_pairswap<std::int64_t>(st, v).locally_optimal;
        const auto fast = is_locally_optimal_pairswap_fast<std::int64_t>(st, v);
        ASSERT_EQ(slow, fast.locally_optimal) << "trial " << trial;
        if (fast.witness) {
            EXPECT_LT(swap_new_diff<std::int64_t>(st, v, fast.witness->first, fast.witness->second), st.abs_diff());
        }
    }
}
