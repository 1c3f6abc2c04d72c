#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "config.hpp"
#include "error.hpp"
#include "instance.hpp"
#include "partition.hpp"

namespace eqpart {

/// Initial partition with `card1` elements in SET1.
///
/// - alternating: round-robin in sorted order at ratio card1:(N-card1); for
///   card1 = N/2 this puts sorted positions 1, 3, 5, ... (1-based) in SET1.
/// - split_half: the first card1 sorted elements go to SET1.
/// - random: seeded shuffle, first card1 shuffled positions go to SET1.
/// - greedy: largest to smallest, each element joins the set with the smaller
///   sum (SET1 on ties) until that set is full. Sums are measured above the
///   instance minimum so that the rule is unaffected by translating the input.
template <Scalar T>
PartitionState<T> init_partition(const SortedInstance<T>& si, const SolverConfig& cfg, std::size_t card1)
{
    cfg.validate();
    const std::size_t n = si.size();
    if (card1 > n)
        throw ConstraintError("cardinality " + std::to_string(card1) + " exceeds N = " + std::to_string(n));

    std::vector<Side> membership(n, Side::set2);
    switch (cfg.init) {
    case InitStrategy::alternating:
        for (std::size_t i = 0; i < n; ++i) {
            // ceil((i+1)k/N) > ceil(ik/N)
            const std::size_t hi = ((i + 1) * card1 + n - 1) / n;
            const std::size_t lo = (i * card1 + n - 1) / n;
            if (hi > lo)
                membership[i] = Side::set1;
        }
        break;
    case InitStrategy::split_half:
        std::fill_n(membership.begin(), card1, Side::set1);
        break;
    case InitStrategy::random: {
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::mt19937_64 rng(*cfg.seed);
        std::shuffle(order.begin(), order.end(), rng);
        for (std::size_t i = 0; i < card1; ++i)
            membership[order[i]] = Side::set1;
        break;
    }
    case InitStrategy::greedy: {
        const T floor = si.values.front();
        T excess1{}, excess2{};
        std::size_t c1 = 0, c2 = 0;
        const std::size_t card2 = n - card1;
        for (std::size_t i = n; i-- > 0;) {
            const T x = si.values[i] - floor;
            const bool to_set1 = c2 == card2 || (c1 < card1 && excess1 <= excess2);
            if (to_set1) {
                membership[i] = Side::set1;
                excess1 += x;
                ++c1;
            } else {
                excess2 += x;
                ++c2;
            }
        }
        break;
    }
    }
    return make_state<T>(si.values, std::move(membership));
}

/// Equal-cardinality entry point.
template <Scalar T>
PartitionState<T> init_partition(const SortedInstance<T>& si, const SolverConfig& cfg)
{
    if (si.size() % 2 != 0)
        throw ConstraintError("equal-cardinality partition needs an even number of elements, got N = " +
                              std::to_string(si.size()));
    return init_partition(si, cfg, si.size() / 2);
}

} // namespace eqpart
