#pragma once

#include <bit>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "config.hpp"
#include "error.hpp"
#include "init.hpp"
#include "instance.hpp"
#include "partition.hpp"
#include "verify.hpp"

namespace eqpart {

inline constexpr std::size_t oracle_max_n = 24;

template <Scalar T>
struct OracleResult {
    T exact_min{};
    std::set<T> local_optima;
    std::uint64_t num_partitions_enumerated = 0;
};

namespace detail {

inline void check_oracle_size(std::size_t n, bool need_even)
{
    if (n == 0)
        throw ConstraintError("oracle: instance is empty");
    if (need_even && n % 2 != 0)
        throw ConstraintError("oracle: equal-cardinality enumeration needs even N, got N = " + std::to_string(n));
    if (n > oracle_max_n)
        throw ConstraintError("oracle: N = " + std::to_string(n) + " exceeds the enumeration cap of " +
                              std::to_string(oracle_max_n));
}

} // namespace detail

/// Calls `visit(state)` once per unordered equal-cardinality bipartition of
/// `values`. Element 0 is always in SET1, which removes the label symmetry.
/// Returns the number of partitions visited, C(N, N/2) / 2.
template <Scalar T, typename Visitor>
std::uint64_t enumerate_equal_partitions(std::span<const T> values, Visitor&& visit)
{
    const std::size_t n = values.size();
    detail::check_oracle_size(n, true);

    // Bit i of `mask` puts element i+1 in SET1; N/2 - 1 bits among N - 1.
    const unsigned free_bits = static_cast<unsigned>(n - 1);
    const unsigned pick = static_cast<unsigned>(n / 2 - 1);
    const std::uint32_t limit = std::uint32_t{1} << free_bits;
    std::uint32_t mask = (std::uint32_t{1} << pick) - 1;
    std::uint64_t count = 0;
    std::vector<Side> membership(n);
    while (mask < limit) {
        membership[0] = Side::set1;
        for (std::size_t i = 1; i < n; ++i)
            membership[i] = (mask >> (i - 1)) & 1u ? Side::set1 : Side::set2;
        visit(make_state<T>(values, membership));
        ++count;
        if (mask == 0)
            break;
        // Gosper's hack: next mask with the same popcount.
        const std::uint32_t low = mask & (~mask + 1);
        const std::uint32_t ripple = mask + low;
        mask = (((ripple ^ mask) >> 2) / low) | ripple;
    }
    return count;
}

template <Scalar T>
OracleResult<T> run_oracle(const Instance<T>& instance)
{
    check_overflow_guard<T>(instance.values);
    const std::span<const T> values{instance.values};
    OracleResult<T> result;
    bool first = true;
    result.num_partitions_enumerated = enumerate_equal_partitions<T>(values, [&](const PartitionState<T>& state) {
        const T diff = state.abs_diff();
        if (first || diff < result.exact_min)
            result.exact_min = diff;
        first = false;
        if (is_locally_optimal_pairswap(state, values))
            result.local_optima.insert(diff);
    });
    return result;
}

template <Scalar T>
T exact_min_diff(const Instance<T>& instance)
{
    check_overflow_guard<T>(instance.values);
    T best{};
    bool first = true;
    enumerate_equal_partitions<T>(instance.values, [&](const PartitionState<T>& state) {
        if (first || state.abs_diff() < best)
            best = state.abs_diff();
        first = false;
    });
    return best;
}

template <Scalar T>
std::set<T> local_optima_set(const Instance<T>& instance)
{
    return run_oracle(instance).local_optima;
}

/// Minimum |S1 - S2| over all 2^(N-1) unordered bipartitions with no
/// cardinality constraint.
template <Scalar T>
T exact_min_diff_any_cardinality(const Instance<T>& instance)
{
    const std::size_t n = instance.size();
    detail::check_oracle_size(n, false);
    check_overflow_guard<T>(instance.values);
    const std::uint32_t limit = std::uint32_t{1} << (n - 1);
    T best{};
    for (std::uint32_t mask = 0; mask < limit; ++mask) {
        CompensatedSum<T> d;
        d.add(instance.values[0]);
        for (std::size_t i = 1; i < n; ++i)
            d.add((mask >> (i - 1)) & 1u ? instance.values[i] : -instance.values[i]);
        const T diff = abs_value(d.value());
        if (mask == 0 || diff < best)
            best = diff;
    }
    return best;
}

/// Naive local search: from the configured initial partition, repeatedly
/// apply the single best improving exchange over all cross-set pairs
/// (smallest sorted indices on ties) until none is left.
template <Scalar T>
SolveReport<T> reference_local_search(const Instance<T>& instance, const SolverConfig& cfg = {})
{
    const auto start = std::chrono::steady_clock::now();
    const SortedInstance<T> si = normalize_and_sort(instance);
    PartitionState<T> state = init_partition(si, cfg);
    const std::span<const T> values{si.values};
    const std::size_t n = si.size();

    SolveReport<T> report;
    for (;;) {
        T best_abs = state.abs_diff();
        std::size_t best_a = n, best_b = n;
        for (std::size_t a = 0; a < n; ++a) {
            if (state.membership[a] != Side::set1)
                continue;
            for (std::size_t b = 0; b < n; ++b) {
                if (state.membership[b] != Side::set2)
                    continue;
                ++report.metrics.candidate_evaluations;
                const T na = abs_value(swapped_diff(state.d, values[a], values[b]));
                if (na < best_abs) {
                    best_abs = na;
                    best_a = a;
                    best_b = b;
                }
            }
        }
        if (best_a == n)
            break;
        const T before = state.d;
        apply_swap(state, values, best_a, best_b);
        ++report.metrics.swaps;
        if ((before > 0 && state.d < 0) || (before < 0 && state.d > 0))
            ++report.metrics.sign_changes;
    }

    report.maintained_d = state.d;
    recompute_sums(state, values);
    report.objective = state.abs_diff();
    for (std::size_t i = 0; i < n; ++i)
        (state.membership[i] == Side::set1 ? report.set1 : report.set2).push_back(si.perm[i]);
    std::sort(report.set1.begin(), report.set1.end());
    std::sort(report.set2.begin(), report.set2.end());
    report.partition = std::move(state);
    report.metrics.wall_time =
        std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - start);
    return report;
}

} // namespace eqpart
