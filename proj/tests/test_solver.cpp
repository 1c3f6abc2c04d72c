#include <gtest/gtest.h>

#include <algorithm>
#include <cstdint>
#include <future>
#include <random>
#include <vector>

#include "brute_force.hpp"
#include "eqpart/eqpart.hpp"

using namespace eqpart;

namespace {

constexpr Side S1 = Side::set1;
constexpr Side S2 = Side::set2;
using I64 = std::int64_t;

SolverConfig config_for(InitStrategy s, std::uint64_t seed = 17)
{
    SolverConfig cfg;
    cfg.init = s;
    if (s == InitStrategy::random) {
        cfg.seed = seed;
    }
    return cfg;
}

const InitStrategy kStrategies[] = {InitStrategy::alternating, InitStrategy::split_half, InitStrategy::random,
                                    InitStrategy::greedy};

/// Every per-run property that does not need the oracle.
template <Scalar T>
void check_run_properties(const SortedInstance<T>& si, const SolveReport<T>& rep, std::size_t card1)
{
    const std::size_t n = si.size();
    const auto& m = rep.metrics;
    if constexpr (is_exact_v<T>) {
        EXPECT_LE(m.traverses, n + 2);
    }
    EXPECT_LE(m.max_traverse_evaluations, 2 * n);
    EXPECT_EQ(m.sign_changes + 1, m.traverses);
    EXPECT_GE(m.swaps, m.sign_changes);
    EXPECT_EQ(rep.partition.card1, card1);
    EXPECT_EQ(rep.set1.size(), card1);
    EXPECT_EQ(rep.set2.size(), n - card1);
    EXPECT_EQ(rep.objective, abs_value(recomputed_diff<T>(rep.partition, si.values)));
    if constexpr (is_exact_v<T>) {
        EXPECT_EQ(rep.maintained_d, rep.partition.d);
    }

    T previous{};
    for (std::size_t i = 0; i < rep.trace.size(); ++i) {
        const auto& e = rep.trace[i];
        // Strict decrease, including across traverse boundaries. Float mode
        // re-sums at every traverse start, which may move |d| by rounding.
        if (i > 0) {
            if (is_exact_v<T> || e.traverse == rep.trace[i - 1].traverse)
                EXPECT_EQ(e.abs_before, previous);
            else
                EXPECT_NEAR(e.abs_before, previous, 1e-12 * (1 + magnitude_sum<T>(si.values)));
        }
        EXPECT_LT(abs_value(e.d_after), e.abs_before);
        previous = abs_value(e.d_after);
        // The larger element leaves the larger-sum set.
        EXPECT_GT(si.values[e.cursor], si.values[e.partner]);
        if (e.outcome == SignOutcome::flipped) {
            ASSERT_LT(e.gap_high, n);
            EXPECT_GT(si.values[e.gap_high], si.values[e.gap_low]);
            EXPECT_LE(abs_value(e.d_after), si.values[e.gap_high] - si.values[e.gap_low]);
        }
    }
}

} // namespace

TEST(InitPartition, Alternating)
{
    const auto si = normalize_and_sort(Instance<I64>{{1, 2, 3, 8}});
    const auto st = init_partition(si, config_for(InitStrategy::alternating));
    EXPECT_EQ(st.membership, (std::vector<Side>{S1, S2, S1, S2}));
    EXPECT_EQ(st.d, -6);
}

TEST(InitPartition, SplitHalf)
{
    const auto si = normalize_and_sort(Instance<I64>{{1, 2, 3, 8}});
    const auto st = init_partition(si, config_for(InitStrategy::split_half));
    EXPECT_EQ(st.membership, (std::vector<Side>{S1, S1, S2, S2}));
    EXPECT_EQ(st.d, -8);
}

TEST(InitPartition, Greedy)
{
    const auto si = normalize_and_sort(Instance<I64>{{1, 2, 3, 8}});
    const auto st = init_partition(si, config_for(InitStrategy::greedy));
    EXPECT_EQ(st.membership, (std::vector<Side>{S1, S2, S2, S1}));
    EXPECT_EQ(st.d, 4);
}

TEST(InitPartition, IdenticalElementsGiveZero)
{
    const auto si = normalize_and_sort(Instance<I64>{{5, 5, 5, 5}});
    for (auto s : kStrategies)
        EXPECT_EQ(init_partition(si, config_for(s)).d, 0);
}

TEST(InitPartition, RandomIsSeededAndBalanced)
{
    const auto si = normalize_and_sort(Instance<I64>{{1, 2, 3, 4, 5, 6, 7, 8, 9, 10}});
    const auto a = init_partition(si, config_for(InitStrategy::random, 3));
    const auto b = init_partition(si, config_for(InitStrategy::random, 3));
    EXPECT_EQ(a.membership, b.membership);
    EXPECT_EQ(a.card1, 5u);
    EXPECT_EQ(a.card2, 5u);
}

TEST(InitPartition, AlternatingRoundRobinForOtherCardinalities)
{
    const auto si = normalize_and_sort(Instance<I64>{{1, 2, 3, 4, 5}});
    const auto st = init_partition(si, config_for(InitStrategy::alternating), 2);
    EXPECT_EQ(st.membership, (std::vector<Side>{S1, S2, S1, S2, S2}));
    for (std::size_t k = 0; k <= 5; ++k)
        for (auto s : kStrategies)
            EXPECT_EQ(init_partition(si, config_for(s), k).card1, k);
}

TEST(InitPartition, OddNRejected)
{
    const auto si = normalize_and_sort(Instance<I64>{{1, 2, 3}});
    EXPECT_THROW(init_partition(si, config_for(InitStrategy::alternating)), ConstraintError);
}

TEST(InitPartition, SeedRequiredExactlyForRandom)
{
    const auto si = normalize_and_sort(Instance<I64>{{1, 2}});
    SolverConfig cfg;
    cfg.init = InitStrategy::random;
    EXPECT_THROW(init_partition(si, cfg), ConstraintError);
    cfg.init = InitStrategy::split_half;
    cfg.seed = 4;
    EXPECT_THROW(init_partition(si, cfg), ConstraintError);
}

TEST(FindBestSwap, NoImprovingPartner)
{
    const auto si = normalize_and_sort(Instance<I64>{{1, 2, 3, 8}});
    const auto st = make_state<I64>(si.values, {S2, S1, S1, S2});
    ASSERT_EQ(st.d, -4);
    Metrics m;
    EXPECT_FALSE(find_best_swap(si, st, 3, m));
    EXPECT_EQ(m.candidate_evaluations, 2u);
}

TEST(FindBestSwap, ImprovingPartner)
{
    const auto si = normalize_and_sort(Instance<I64>{{1, 2, 3, 8}});
    const auto st = make_state<I64>(si.values, {S1, S2, S1, S2});
    Metrics m;
    const auto hit = find_best_swap(si, st, 1, m);
    ASSERT_TRUE(hit);
    EXPECT_EQ(hit->partner, 0u);
    EXPECT_EQ(hit->new_abs_diff, 4);
    EXPECT_EQ(hit->new_d, -4);
}

TEST(FindBestSwap, SmallerSumSetIsSkipped)
{
    const auto si = normalize_and_sort(Instance<I64>{{1, 2, 3, 8}});
    const auto st = make_state<I64>(si.values, {S1, S2, S1, S2});
    Metrics m;
    EXPECT_FALSE(find_best_swap(si, st, 2, m));
    EXPECT_EQ(m.candidate_evaluations, 1u);
}

TEST(FindBestSwap, ZeroDiffHasNoSwap)
{
    const auto si = normalize_and_sort(Instance<I64>{{1, 2, 3, 4}});
    const auto st = make_state<I64>(si.values, {S1, S2, S2, S1});
    Metrics m;
    for (std::size_t n = 0; n < 4; ++n)
        EXPECT_FALSE(find_best_swap(si, st, n, m));
}

TEST(FindBestSwap, TieBreakPicksSmallestPartner)
{
    // Partners 2 and 3 both hold the value 3.
    const auto si = normalize_and_sort(Instance<I64>{{0, 1, 3, 3, 9, 10}});
    const auto st = make_state<I64>(si.values, {S2, S1, S2, S2, S1, S1});
    ASSERT_EQ(st.d, 14);
    Metrics m;
    const auto hit = find_best_swap(si, st, 4, m);
    ASSERT_TRUE(hit);
    EXPECT_EQ(hit->partner, 2u);
    EXPECT_EQ(hit->new_abs_diff, 2);
}

TEST(RunTraverse, SwapThenComplete)
{
    const auto si = normalize_and_sort(Instance<I64>{{1, 2, 3, 8}});
    auto st = init_partition(si, config_for(InitStrategy::alternating));
    Metrics m;
    std::vector<SwapEvent<I64>> trace;
    EXPECT_EQ(run_traverse(si, st, SolverConfig{}, m, &trace), TraverseOutcome::completed);
    EXPECT_EQ(st.d, -4);
    ASSERT_EQ(trace.size(), 1u);
    EXPECT_EQ(trace[0].cursor, 1u);
    EXPECT_EQ(trace[0].partner, 0u);
    EXPECT_EQ(trace[0].outcome, SignOutcome::unchanged);
    EXPECT_EQ(m.traverses, 1u);
}

TEST(RunTraverse, ZeroReached)
{
    const auto si = normalize_and_sort(Instance<I64>{{1, 2, 3, 4}});
    auto st = init_partition(si, config_for(InitStrategy::alternating));
    Metrics m;
    EXPECT_EQ(run_traverse(si, st, SolverConfig{}, m), TraverseOutcome::zero_reached);
    EXPECT_EQ(st.d, 0);
}

TEST(RunTraverse, IdenticalElements)
{
    const auto si = normalize_and_sort(Instance<I64>{{5, 5, 5, 5}});
    auto st = init_partition(si, config_for(InitStrategy::alternating));
    Metrics m;
    EXPECT_EQ(run_traverse(si, st, SolverConfig{}, m), TraverseOutcome::completed);
    EXPECT_EQ(m.swaps, 0u);
}

// With duplicate values the nearest same-set element does not bound the
// useful partners: here 6 has an empty window, yet trading it for the other
// 5 lowers |d| from 4 to 2. The solver keeps tie blocks ordered so that the
// window stays exact.
TEST(RunTraverse, DuplicateValuesDoNotHideImprovingSwaps)
{
    const auto si = normalize_and_sort(Instance<I64>{{0, 1, 1, 5, 5, 6}});
    const auto st = make_state<I64>(si.values, {S1, S2, S2, S2, S1, S1});
    ASSERT_EQ(st.d, 4);
    Metrics m;
    EXPECT_FALSE(find_best_swap(si, st, 5, m));
    EXPECT_FALSE(is_locally_optimal_pairswap<I64>(st, si.values));

    SolverConfig cfg;
    cfg.verify_window = true;
    const auto rep = solve_from(si, st, cfg);
    EXPECT_EQ(rep.objective, 2);
    EXPECT_TRUE(is_locally_optimal_pairswap<I64>(rep.partition, si.values));
}

TEST(Solve, Examples)
{
    EXPECT_EQ(solve(Instance<I64>{{1, 2, 3, 8}}).objective, 4);
    EXPECT_EQ(solve(Instance<I64>{{1, 2, 3, 4}}).objective, 0);
    EXPECT_EQ(solve(Instance<I64>{{7, -3}}).objective, 10);
    EXPECT_DOUBLE_EQ(solve(Instance<double>{{0.25, 1.5}}).objective, 1.25);
}

TEST(Solve, ReportsOriginalIndices)
{
    const auto rep = solve(Instance<I64>{{8, 3, 1, 2}});
    EXPECT_EQ(rep.objective, 4);
    // {1, 8} | {2, 3} in input positions.
    std::vector<std::size_t> a = rep.set1, b = rep.set2;
    if (a.front() != 0)
        std::swap(a, b);
    EXPECT_EQ(a, (std::vector<std::size_t>{0, 2}));
    EXPECT_EQ(b, (std::vector<std::size_t>{1, 3}));
}

TEST(Solve, RejectsOddAndEmpty)
{
    EXPECT_THROW(solve(Instance<I64>{{1, 2, 3}}), ConstraintError);
    EXPECT_THROW(solve(Instance<I64>{}), ConstraintError);
}

TEST(Solve, TwoElementsNeedOneTraverse)
{
    const auto rep = solve(Instance<I64>{{4, 9}});
    EXPECT_EQ(rep.metrics.traverses, 1u);
    EXPECT_EQ(rep.metrics.swaps, 0u);
}

// Oracle containment plus every run invariant over random small instances,
// with the full-scan window assertion switched on.
TEST(SolveProperties, SmallInstancesAgainstBruteForce)
{
    std::mt19937_64 rng(2024);
    const std::int64_t ranges[] = {3, 5, 20, 1'000'000};
    for (int trial = 0; trial < 600; ++trial) {
        const std::size_t n = 2 * (1 + rng() % 7);
        const std::int64_t hi = ranges[trial % 4];
        const auto values = brute::random_ints(rng, n, trial % 8 == 0 ? -hi : 1, hi);
        const auto truth = brute::equal_cardinality(values);
        const Instance<I64> inst{values};
        const auto si = normalize_and_sort(inst);
        for (auto s : kStrategies) {
            SolverConfig cfg = config_for(s, trial);
            cfg.verify_window = true;
            cfg.record_trace = true;
            const auto rep = solve(inst, cfg);
            check_run_properties(si, rep, n / 2);
            EXPECT_TRUE(is_locally_optimal_pairswap<I64>(rep.partition, si.values));
            EXPECT_TRUE(truth.local.count(rep.objective)) << "trial " << trial;
            EXPECT_GE(rep.objective, truth.min);
        }
    }
}

// Every sequence (not just multiset) over {1..4} with N = 6: tie order and
// membership order both vary.
TEST(SolveProperties, AllShortSequencesWithTies)
{
    std::vector<I64> v(6, 1);
    for (;;) {
        const auto truth = brute::equal_cardinality(v);
        const Instance<I64> inst{v};
        for (auto s : kStrategies) {
            SolverConfig cfg = config_for(s, 5);
            cfg.verify_window = true;
            const auto rep = solve(inst, cfg);
            ASSERT_TRUE(truth.local.count(rep.objective));
            ASSERT_TRUE(is_locally_optimal_pairswap<I64>(rep.partition, normalize_and_sort(inst).values));
        }
        std::size_t i = 0;
        while (i < v.size() && v[i] == 4)
            v[i++] = 1;
        if (i == v.size())
            break;
        ++v[i];
    }
}

TEST(SolveProperties, LargerTieHeavyInstances)
{
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = 2 * (50 + rng() % 500);
        const std::int64_t spread = trial % 3 == 0 ? 2 : (trial % 3 == 1 ? 30 : 100000);
        const Instance<I64> inst{brute::random_ints(rng, n, 1000 - spread, 1000 + spread)};
        const auto si = normalize_and_sort(inst);
        for (auto s : kStrategies) {
            SolverConfig cfg = config_for(s, trial);
            cfg.record_trace = true;
            cfg.verify_window = n <= 400;
            const auto rep = solve(inst, cfg);
            check_run_properties(si, rep, n / 2);
            EXPECT_TRUE(is_locally_optimal_pairswap_fast<I64>(rep.partition, si.values));
        }
    }
}

TEST(SolveProperties, FloatInstances)
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 2 * (1 + rng() % 200);
        Instance<double> inst;
        for (std::size_t i = 0; i < n; ++i)
            inst.values.push_back(dist(rng));
        const auto si = normalize_and_sort(inst);
        const double tol = 1e-9 * magnitude_sum<double>(si.values);
        for (auto s : kStrategies) {
            SolverConfig cfg = config_for(s, trial);
            cfg.record_trace = true;
            const auto rep = solve(inst, cfg);
            check_run_properties(si, rep, n / 2);
            EXPECT_LE(rep.metrics.traverses, 2 * n + 4);
            EXPECT_TRUE(is_locally_optimal_pairswap<double>(rep.partition, si.values, tol));
        }
    }
}

TEST(SolveProperties, AffineInvarianceForPositiveAlpha)
{
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 * (1 + rng() % 40);
        const Instance<I64> inst{brute::random_ints(rng, n, 1, trial % 2 ? 10 : 1'000'000)};
        for (auto s : kStrategies) {
            const auto cfg = config_for(s, trial);
            const auto base = solve(inst, cfg);
            for (I64 alpha : {1, 2, 3, 10})
                for (I64 beta : {-10'000, 0, 7}) {
                    const auto t = solve(affine_transform(inst, alpha, beta), cfg);
                    ASSERT_EQ(t.partition.membership, base.partition.membership);
                    ASSERT_EQ(t.objective, alpha * base.objective);
                }
        }
    }
}

TEST(SolveProperties, NegativeAlphaStillLocallyOptimal)
{
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 * (1 + rng() % 6);
        const auto values = brute::random_ints(rng, n, 1, 50);
        const auto truth = brute::equal_cardinality(values);
        for (I64 alpha : {-1, -3}) {
            const auto t = affine_transform(Instance<I64>{values}, alpha, I64{5});
            const auto rep = solve(t, config_for(InitStrategy::alternating));
            EXPECT_TRUE(is_locally_optimal_pairswap<I64>(rep.partition, normalize_and_sort(t).values));
            EXPECT_EQ(rep.objective % -alpha, 0);
            EXPECT_TRUE(truth.local.count(rep.objective / -alpha));
        }
    }
}

TEST(SolveProperties, IndependentSolvesRunInParallel)
{
    std::mt19937_64 rng(31);
    std::vector<Instance<I64>> instances;
    for (int i = 0; i < 16; ++i)
        instances.push_back({brute::random_ints(rng, 2000, 1, 1'000'000'000)});
    std::vector<std::future<SolveReport<I64>>> jobs;
    for (const auto& inst : instances)
        jobs.push_back(std::async(std::launch::async, [&inst] { return solve(inst); }));
    for (std::size_t i = 0; i < instances.size(); ++i) {
        const auto parallel = jobs[i].get();
        const auto serial = solve(instances[i]);
        EXPECT_EQ(parallel.partition.membership, serial.partition.membership);
        EXPECT_EQ(parallel.metrics.candidate_evaluations, serial.metrics.candidate_evaluations);
    }
}
