#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <utility>
#include <vector>

#include "error.hpp"
#include "numeric.hpp"

namespace eqpart {

/// The input multiset, in the order the caller supplied it.
template <Scalar T>
struct Instance {
    std::vector<T> values;

    static constexpr NumericMode mode = numeric_mode_v<T>;

    std::size_t size() const { return values.size(); }
    bool operator==(const Instance&) const = default;
};

/// Ascending view of an Instance. `perm[i]` is the original position of
/// `values[i]`. Equal values form contiguous tie blocks; `block_begin[i]` and
/// `block_end[i]` delimit the block holding sorted index i.
template <Scalar T>
struct SortedInstance {
    std::vector<T> values;
    std::vector<std::size_t> perm;
    std::vector<std::size_t> block_begin;
    std::vector<std::size_t> block_end;

    std::size_t size() const { return values.size(); }
};

/// Stable ascending sort; ties keep ascending original index.
template <Scalar T>
SortedInstance<T> normalize_and_sort(const Instance<T>& instance)
{
    if (instance.values.empty())
        throw InputError("instance is empty");
    check_overflow_guard<T>(instance.values);

    const std::size_t n = instance.size();
    SortedInstance<T> si;
    si.perm.resize(n);
    std::iota(si.perm.begin(), si.perm.end(), std::size_t{0});
    std::stable_sort(si.perm.begin(), si.perm.end(), [&](std::size_t a, std::size_t b) {
        return instance.values[a] < instance.values[b];
    });

    si.values.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        si.values[i] = instance.values[si.perm[i]];

    si.block_begin.resize(n);
    si.block_end.resize(n);
    std::size_t begin = 0;
    while (begin < n) {
        std::size_t end = begin + 1;
        while (end < n && si.values[end] == si.values[begin])
            ++end;
        for (std::size_t i = begin; i < end; ++i) {
            si.block_begin[i] = begin;
            si.block_end[i] = end;
        }
        begin = end;
    }
    return si;
}

} // namespace eqpart
