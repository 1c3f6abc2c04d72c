#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "numeric.hpp"
#include "partition.hpp"

namespace eqpart {

struct PairSwapCheck {
    bool locally_optimal = true;
    // (SET1 member, SET2 member) whose exchange strictly lowers |d|.
    std::optional<std::pair<std::size_t, std::size_t>> witness;

    explicit operator bool() const { return locally_optimal; }
};

/// Exhaustive O(N^2) check: no exchange of a SET1 and a SET2 element brings
/// |d| below |d| - tolerance.
template <Scalar T>
PairSwapCheck is_locally_optimal_pairswap(const PartitionState<T>& state, std::span<const T> values,
                                          T tolerance = T{})
{
    std::vector<std::size_t> in1, in2;
    for (std::size_t i = 0; i < state.size(); ++i)
        (state.membership[i] == Side::set1 ? in1 : in2).push_back(i);

    const T threshold = state.abs_diff() - tolerance;
    for (std::size_t a : in1)
        for (std::size_t b : in2)
            if (abs_value(swapped_diff(state.d, values[a], values[b])) < threshold)
                return {false, std::pair{a, b}};
    return {};
}

/// Same verdict as the exhaustive check in O(N log N): for each SET1 member
/// the best SET2 partner is the one closest in value to a - d/2.
template <Scalar T>
PairSwapCheck is_locally_optimal_pairswap_fast(const PartitionState<T>& state, std::span<const T> values,
                                               T tolerance = T{})
{
    std::vector<std::size_t> in2;
    for (std::size_t i = 0; i < state.size(); ++i)
        if (state.membership[i] == Side::set2)
            in2.push_back(i);
    std::sort(in2.begin(), in2.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

    const T threshold = state.abs_diff() - tolerance;
    for (std::size_t a = 0; a < state.size(); ++a) {
        if (state.membership[a] != Side::set1)
            continue;
        // swapped_diff is monotone in b; find where it crosses zero.
        auto it = std::partition_point(in2.begin(), in2.end(), [&](std::size_t b) {
            return swapped_diff(state.d, values[a], values[b]) < 0;
        });
        for (auto probe : {it, it == in2.begin() ? in2.end() : std::prev(it)}) {
            if (probe == in2.end())
                continue;
            if (abs_value(swapped_diff(state.d, values[a], values[*probe])) < threshold)
                return {false, std::pair{a, *probe}};
        }
    }
    return {};
}

} // namespace eqpart
