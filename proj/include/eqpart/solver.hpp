#pragma once

#include <chrono>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"
#include "error.hpp"
#include "init.hpp"
#include "instance.hpp"
#include "partition.hpp"

namespace eqpart {

enum class TraverseOutcome { completed, sign_flipped, zero_reached };

template <Scalar T>
struct SwapCandidate {
    std::size_t partner = 0;
    T new_abs_diff{};
    T new_d{};
};

namespace detail {

template <Scalar T>
T swap_result(const PartitionState<T>& state, std::span<const T> values, std::size_t n, std::size_t q)
{
    return state.membership[n] == Side::set1 ? swapped_diff(state.d, values[n], values[q])
                                             : swapped_diff(state.d, values[q], values[n]);
}

/// Scans partners first..n-1 upward. All of them must be in the opposite set
/// to n. The signed new difference, seen from the larger set, is
/// non-decreasing in the partner's value, so the scan stops at the first
/// partner where it reaches zero or beyond. Strict improvement keeps the
/// smallest index among minimizers.
template <Scalar T>
std::optional<SwapCandidate<T>> scan_window(const SortedInstance<T>& si, const PartitionState<T>& state,
                                            std::size_t n, std::size_t first, std::uint64_t& evaluations)
{
    const std::span<const T> values{si.values};
    const bool positive = state.d > 0;
    std::optional<SwapCandidate<T>> best;
    T best_abs = state.abs_diff();
    for (std::size_t q = first; q < n; ++q) {
        ++evaluations;
        const T nd = swap_result(state, values, n, q);
        const T na = abs_value(nd);
        if (na < best_abs) {
            best_abs = na;
            best = SwapCandidate<T>{q, na, nd};
        }
        if (positive ? nd >= 0 : nd <= 0)
            break;
    }
    return best;
}

/// Lowest index of the maximal run of opposite-set elements directly below n.
template <Scalar T>
std::size_t window_begin(const PartitionState<T>& state, std::size_t n)
{
    const Side other = opposite(state.membership[n]);
    std::size_t first = n;
    while (first > 0 && state.membership[first - 1] == other)
        --first;
    return first;
}

/// Within every tie block, moves the labels of the larger-sum set to the
/// lowest indices. Sums are unchanged since the values are equal. Returns
/// the per-block count of larger-set members, indexed by block start.
template <Scalar T>
std::vector<std::size_t> canonicalize_ties(const SortedInstance<T>& si, PartitionState<T>& state)
{
    const Side lead = state.larger_side();
    std::vector<std::size_t> lead_count(si.size(), 0);
    std::size_t begin = 0;
    while (begin < si.size()) {
        const std::size_t end = si.block_end[begin];
        std::size_t count = 0;
        for (std::size_t i = begin; i < end; ++i)
            count += state.membership[i] == lead;
        for (std::size_t i = begin; i < end; ++i)
            state.membership[i] = i - begin < count ? lead : opposite(lead);
        lead_count[begin] = count;
        begin = end;
    }
    return lead_count;
}

template <Scalar T>
void check_window(const SortedInstance<T>& si, const PartitionState<T>& state, std::size_t n,
                  const std::optional<SwapCandidate<T>>& found)
{
    const std::span<const T> values{si.values};
    const T windowed = found ? found->new_abs_diff : state.abs_diff();
    for (std::size_t q = 0; q < n; ++q) {
        if (state.membership[q] == state.membership[n])
            continue;
        if (abs_value(swap_result(state, values, n, q)) < windowed)
            throw InternalError("window soundness: partner " + std::to_string(q) + " of cursor " +
                                std::to_string(n) + " beats the windowed search");
    }
}

template <Scalar T>
void check_partner_dead(const SortedInstance<T>& si, const PartitionState<T>& state, std::size_t partner)
{
    const std::span<const T> values{si.values};
    for (std::size_t q = 0; q < partner; ++q) {
        if (state.membership[q] == state.membership[partner])
            continue;
        if (abs_value(swap_result(state, values, partner, q)) < state.abs_diff())
            throw InternalError("post-swap partner " + std::to_string(partner) + " still has an improving swap with " +
                                std::to_string(q));
    }
}

} // namespace detail

/// Best improving swap for the element at sorted index n, or none.
///
/// Elements outside the larger-sum set (and every element when d == 0)
/// cannot take part in an improving swap and return none after one
/// evaluation. Otherwise the candidates are the run of opposite-set elements
/// directly below n.
template <Scalar T>
std::optional<SwapCandidate<T>> find_best_swap(const SortedInstance<T>& si, const PartitionState<T>& state,
                                               std::size_t n, Metrics& metrics)
{
    if (state.d == 0 || state.membership[n] != state.larger_side()) {
        ++metrics.candidate_evaluations;
        return std::nullopt;
    }
    return detail::scan_window(si, state, n, detail::window_begin(state, n), metrics.candidate_evaluations);
}

/// One pass of the cursor from the smallest element upward. Stops early on
/// a sign flip (the caller restarts) or when d reaches zero (terminal).
template <Scalar T>
TraverseOutcome run_traverse(const SortedInstance<T>& si, PartitionState<T>& state, const SolverConfig& cfg,
                             Metrics& metrics, std::vector<SwapEvent<T>>* trace = nullptr)
{
    const std::span<const T> values{si.values};
    const std::size_t n_total = si.size();
    ++metrics.traverses;

    recompute_sums(state, values);
    std::vector<std::size_t> lead_count = detail::canonicalize_ties(si, state);
    const Side lead = state.larger_side();
    const T tolerance = is_exact_v<T> ? T{} : static_cast<T>(cfg.float_tolerance);

    std::uint64_t evaluations = 0;
    auto finish = [&](TraverseOutcome outcome) {
        metrics.candidate_evaluations += evaluations;
        if (evaluations > metrics.max_traverse_evaluations)
            metrics.max_traverse_evaluations = evaluations;
        return outcome;
    };

    // Highest larger-set index below the cursor, plus one (0 when none).
    std::size_t window_first = 0;
    std::size_t n = 0;
    while (n < n_total) {
        if (state.d == 0 || state.membership[n] != lead) {
            ++evaluations;
            ++n;
            continue;
        }

        const auto best = detail::scan_window(si, state, n, window_first, evaluations);
        if (cfg.verify_window)
            detail::check_window(si, state, n, best);

        if (!best) {
            window_first = n + 1;
            ++n;
            continue;
        }

        const std::size_t partner = best->partner;
        const std::size_t block = si.block_begin[n];
        const std::size_t partner_block = si.block_begin[partner];
        if (n != block || partner != partner_block + lead_count[partner_block])
            throw InternalError("tie blocks lost their canonical order");

        SwapEvent<T> event;
        event.traverse = metrics.traverses;
        event.cursor = n;
        event.partner = partner;
        event.abs_before = state.abs_diff();
        event.gap_low = partner;
        event.gap_high = si.block_end[partner];

        const SignOutcome outcome = apply_swap(state, values, n, partner, tolerance);
        ++metrics.swaps;
        if (state.d != best->new_d)
            throw InternalError("applied swap disagrees with its evaluation");

        // Restore larger-set-first order inside both touched blocks.
        const std::size_t last_lead = block + lead_count[block] - 1;
        std::swap(state.membership[n], state.membership[last_lead]);
        --lead_count[block];
        ++lead_count[partner_block];

        event.d_after = state.d;
        event.outcome = outcome;
        if (trace)
            trace->push_back(event);

        if (outcome == SignOutcome::flipped)
            return finish(TraverseOutcome::sign_flipped);
        if (outcome == SignOutcome::zero)
            return finish(TraverseOutcome::zero_reached);

        if (cfg.verify_window)
            detail::check_partner_dead(si, state, partner);

        window_first = partner + 1;
        // n keeps its index when another equal value still leads there.
        if (state.membership[n] != lead)
            ++n;
    }
    return finish(TraverseOutcome::completed);
}

/// Runs traverses from `state` until one completes without a sign flip or d
/// reaches zero. Works for any cardinality split.
template <Scalar T>
SolveReport<T> solve_from(const SortedInstance<T>& si, PartitionState<T> state, const SolverConfig& cfg)
{
    cfg.validate();
    const auto start = std::chrono::steady_clock::now();
    const std::span<const T> values{si.values};
    const std::size_t guard = cfg.traverse_guard<T>(si.size());

    SolveReport<T> report;
    Metrics& metrics = report.metrics;
    auto* trace = cfg.record_trace ? &report.trace : nullptr;
    for (;;) {
        if (metrics.traverses >= guard)
            throw NonTerminationError("traverse guard of " + std::to_string(guard) + " exceeded for N = " +
                                      std::to_string(si.size()));
        const TraverseOutcome outcome = run_traverse(si, state, cfg, metrics, trace);
        if (outcome != TraverseOutcome::sign_flipped)
            break;
        ++metrics.sign_changes;
    }

    report.maintained_d = state.d;
    recompute_sums(state, values);
    report.objective = state.abs_diff();
    for (std::size_t i = 0; i < si.size(); ++i)
        (state.membership[i] == Side::set1 ? report.set1 : report.set2).push_back(si.perm[i]);
    std::sort(report.set1.begin(), report.set1.end());
    std::sort(report.set2.begin(), report.set2.end());
    report.partition = std::move(state);
    metrics.wall_time =
        std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - start);
    return report;
}

template <Scalar T>
SolveReport<T> solve_sorted(const SortedInstance<T>& si, const SolverConfig& cfg)
{
    if (si.size() < 2 || si.size() % 2 != 0)
        throw ConstraintError("equal-cardinality solving needs an even N >= 2, got N = " + std::to_string(si.size()));
    return solve_from(si, init_partition(si, cfg), cfg);
}

/// Locally optimal equal-cardinality partition of `instance`.
template <Scalar T>
SolveReport<T> solve(const Instance<T>& instance, const SolverConfig& cfg = {})
{
    if (instance.size() < 2 || instance.size() % 2 != 0)
        throw ConstraintError("equal-cardinality solving needs an even N >= 2, got N = " +
                              std::to_string(instance.size()));
    return solve_sorted(normalize_and_sort(instance), cfg);
}

} // namespace eqpart
