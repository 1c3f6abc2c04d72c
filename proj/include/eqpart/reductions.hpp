#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "config.hpp"
#include "error.hpp"
#include "init.hpp"
#include "instance.hpp"
#include "solver.hpp"
#include "verify.hpp"

namespace eqpart {

/// Partition with unconstrained cardinalities. Indices refer to the
/// caller's instance; dummy zeros have been removed.
template <Scalar T>
struct TraditionalResult {
    std::vector<std::size_t> part1;
    std::vector<std::size_t> part2;
    T objective{};
    SolveReport<T> extended;  // run on the padded 2N instance
};

/// Appends N zeros. Positions N..2N-1 of the result are the dummies.
template <Scalar T>
Instance<T> to_equal_cardinality(const Instance<T>& instance)
{
    if (instance.values.empty())
        throw ConstraintError("traditional partition needs at least one element");
    Instance<T> extended = instance;
    extended.values.resize(2 * instance.size(), T{});
    return extended;
}

template <Scalar T>
TraditionalResult<T> solve_traditional(const Instance<T>& instance, const SolverConfig& cfg = {})
{
    const std::size_t n = instance.size();
    TraditionalResult<T> result;
    result.extended = solve(to_equal_cardinality(instance), cfg);
    for (std::size_t i : result.extended.set1)
        if (i < n)
            result.part1.push_back(i);
    for (std::size_t i : result.extended.set2)
        if (i < n)
            result.part2.push_back(i);
    CompensatedSum<T> d;
    for (std::size_t i : result.part1)
        d.add(instance.values[i]);
    for (std::size_t i : result.part2)
        d.add(-instance.values[i]);
    result.objective = abs_value(d.value());
    return result;
}

/// True when moving any one element across does not strictly lower |d|.
template <Scalar T>
bool is_locally_optimal_transfer(std::span<const T> values, std::span<const std::size_t> part1,
                                 std::span<const std::size_t> part2, T tolerance = T{})
{
    CompensatedSum<T> acc;
    for (std::size_t i : part1)
        acc.add(values[i]);
    for (std::size_t i : part2)
        acc.add(-values[i]);
    const T d = acc.value();
    const T threshold = abs_value(d) - tolerance;
    for (std::size_t i : part1)
        if (abs_value(d - 2 * values[i]) < threshold)
            return false;
    for (std::size_t i : part2)
        if (abs_value(d + 2 * values[i]) < threshold)
            return false;
    return true;
}

template <Scalar T>
bool is_locally_optimal_transfer(const Instance<T>& instance, const TraditionalResult<T>& result, T tolerance = T{})
{
    return is_locally_optimal_transfer<T>(instance.values, result.part1, result.part2, tolerance);
}

/// Local search with |SET1| = k fixed for the whole run. N may be odd.
template <Scalar T>
SolveReport<T> solve_with_cardinality(const Instance<T>& instance, std::size_t k, const SolverConfig& cfg = {})
{
    const std::size_t n = instance.size();
    if (n < 2 || k < 1 || k > n - 1)
        throw ConstraintError("cardinality k = " + std::to_string(k) + " must lie in [1, N-1] for N = " +
                              std::to_string(n));
    const SortedInstance<T> si = normalize_and_sort(instance);
    return solve_from(si, init_partition(si, cfg, k), cfg);
}

/// Maps every x to alpha*x + beta. Exact mode checks for overflow and then
/// re-applies the magnitude guard.
template <Scalar T>
Instance<T> affine_transform(const Instance<T>& instance, T alpha, T beta)
{
    if (alpha == 0)
        throw ConstraintError("affine transform needs a nonzero alpha");
    Instance<T> out;
    out.values.reserve(instance.size());
    for (T x : instance.values) {
        T y{};
        if constexpr (is_exact_v<T>) {
            if (__builtin_mul_overflow(alpha, x, &y) || __builtin_add_overflow(y, beta, &y))
                throw InputError("affine transform overflows 64-bit integers");
        } else {
            y = alpha * x + beta;
        }
        out.values.push_back(y);
    }
    check_overflow_guard<T>(out.values);
    return out;
}

} // namespace eqpart
