#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "error.hpp"
#include "numeric.hpp"

namespace eqpart {

enum class Side : std::uint8_t { set1, set2 };

constexpr Side opposite(Side s) { return s == Side::set1 ? Side::set2 : Side::set1; }

enum class SignOutcome { unchanged, flipped, zero };

/// Membership of every element plus the maintained sums. Indices refer to
/// whatever value sequence the state was built over (sorted order inside the
/// solver, input order inside the oracle).
template <Scalar T>
struct PartitionState {
    std::vector<Side> membership;
    T s1{};
    T s2{};
    T d{};
    std::size_t card1 = 0;
    std::size_t card2 = 0;

    std::size_t size() const { return membership.size(); }
    T abs_diff() const { return abs_value(d); }

    /// Set holding the larger sum. With d == 0 this is SET1 by convention.
    Side larger_side() const { return d < 0 ? Side::set2 : Side::set1; }
};

/// Recomputes s1, s2 and d for `membership` from scratch (compensated in
/// float mode).
template <Scalar T>
PartitionState<T> make_state(std::span<const T> values, std::vector<Side> membership)
{
    if (membership.size() != values.size())
        throw InternalError("membership and value sequences differ in length");
    PartitionState<T> state;
    state.membership = std::move(membership);
    CompensatedSum<T> sum1, sum2;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (state.membership[i] == Side::set1) {
            sum1.add(values[i]);
            ++state.card1;
        } else {
            sum2.add(values[i]);
            ++state.card2;
        }
    }
    state.s1 = sum1.value();
    state.s2 = sum2.value();
    state.d = state.s1 - state.s2;
    return state;
}

/// |d| after exchanging a and b, which must sit in opposite sets. The state
/// is not modified.
template <Scalar T>
T swap_new_diff(const PartitionState<T>& state, std::span<const T> values, std::size_t a, std::size_t b)
{
    if (state.membership[a] == state.membership[b])
        throw InternalError("swap_new_diff: indices " + std::to_string(a) + " and " + std::to_string(b) +
                            " are in the same set");
    const bool a_in_set1 = state.membership[a] == Side::set1;
    const T x1 = a_in_set1 ? values[a] : values[b];
    const T x2 = a_in_set1 ? values[b] : values[a];
    return abs_value(swapped_diff(state.d, x1, x2));
}

/// Exchanges the labels of n and partner and updates the sums incrementally.
/// `tolerance` only matters in float mode: |d| <= tolerance reports zero.
template <Scalar T>
SignOutcome apply_swap(PartitionState<T>& state, std::span<const T> values, std::size_t n, std::size_t partner,
                       T tolerance = T{})
{
    if (state.membership[n] == state.membership[partner])
        throw InternalError("apply_swap: indices " + std::to_string(n) + " and " + std::to_string(partner) +
                            " are in the same set");
    const std::size_t i1 = state.membership[n] == Side::set1 ? n : partner;
    const std::size_t i2 = i1 == n ? partner : n;
    const T x1 = values[i1];
    const T x2 = values[i2];

    const T old_d = state.d;
    state.d = swapped_diff(old_d, x1, x2);
    state.s1 = state.s1 - x1 + x2;
    state.s2 = state.s2 - x2 + x1;
    state.membership[i1] = Side::set2;
    state.membership[i2] = Side::set1;

    if constexpr (is_exact_v<T>) {
        if (state.d == 0)
            return SignOutcome::zero;
    } else {
        if (abs_value(state.d) <= tolerance)
            return SignOutcome::zero;
    }
    if ((old_d > 0 && state.d < 0) || (old_d < 0 && state.d > 0))
        return SignOutcome::flipped;
    return SignOutcome::unchanged;
}

/// Signed difference recomputed from scratch.
template <Scalar T>
T recomputed_diff(const PartitionState<T>& state, std::span<const T> values)
{
    CompensatedSum<T> sum1, sum2;
    for (std::size_t i = 0; i < values.size(); ++i)
        (state.membership[i] == Side::set1 ? sum1 : sum2).add(values[i]);
    return sum1.value() - sum2.value();
}

/// Replaces the maintained sums by freshly computed ones. In exact mode a
/// mismatch means the incremental updates are wrong and throws.
template <Scalar T>
void recompute_sums(PartitionState<T>& state, std::span<const T> values)
{
    CompensatedSum<T> sum1, sum2;
    std::size_t c1 = 0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (state.membership[i] == Side::set1) {
            sum1.add(values[i]);
            ++c1;
        } else {
            sum2.add(values[i]);
        }
    }
    const T s1 = sum1.value();
    const T s2 = sum2.value();
    if constexpr (is_exact_v<T>) {
        if (s1 != state.s1 || s2 != state.s2 || s1 - s2 != state.d)
            throw InternalError("maintained sums diverged from recomputed sums in exact mode");
    }
    if (c1 != state.card1 || values.size() - c1 != state.card2)
        throw InternalError("maintained cardinalities diverged from membership");
    state.s1 = s1;
    state.s2 = s2;
    state.d = s1 - s2;
}

} // namespace eqpart
