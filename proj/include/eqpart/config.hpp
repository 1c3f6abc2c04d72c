#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "error.hpp"
#include "numeric.hpp"
#include "partition.hpp"

namespace eqpart {

enum class InitStrategy { alternating, split_half, random, greedy };

inline std::string_view to_string(InitStrategy s)
{
    switch (s) {
    case InitStrategy::alternating: return "alternating";
    case InitStrategy::split_half: return "split";
    case InitStrategy::random: return "random";
    case InitStrategy::greedy: return "greedy";
    }
    return "?";
}

inline std::optional<InitStrategy> parse_init_strategy(std::string_view name)
{
    if (name == "alternating") return InitStrategy::alternating;
    if (name == "split" || name == "split_half") return InitStrategy::split_half;
    if (name == "random") return InitStrategy::random;
    if (name == "greedy") return InitStrategy::greedy;
    return std::nullopt;
}

struct SolverConfig {
    InitStrategy init = InitStrategy::alternating;
    std::optional<std::uint64_t> seed;    // required iff init == random
    unsigned traverse_guard_factor = 1;   // guard = factor*(N+2) exact, factor*(2N+4) float
    bool verify_window = false;           // full-scan cross-check of every windowed search
    double float_tolerance = 0.0;         // |d| <= tol counts as zero in float mode
    bool record_trace = false;

    static SolverConfig random_init(std::uint64_t seed)
    {
        SolverConfig cfg;
        cfg.init = InitStrategy::random;
        cfg.seed = seed;
        return cfg;
    }

    void validate() const
    {
        if ((init == InitStrategy::random) != seed.has_value())
            throw ConstraintError("a seed is required exactly when the init strategy is random");
        if (traverse_guard_factor == 0)
            throw ConstraintError("traverse_guard_factor must be positive");
        if (!(float_tolerance >= 0.0))
            throw ConstraintError("float_tolerance must be non-negative");
    }

    template <Scalar T>
    std::size_t traverse_guard(std::size_t n) const
    {
        const std::size_t base = is_exact_v<T> ? n + 2 : 2 * n + 4;
        return traverse_guard_factor * base;
    }
};

struct Metrics {
    std::uint64_t traverses = 0;
    std::uint64_t swaps = 0;
    std::uint64_t sign_changes = 0;
    std::uint64_t candidate_evaluations = 0;
    std::uint64_t max_traverse_evaluations = 0;  // largest per-traverse evaluation count
    std::chrono::nanoseconds wall_time{0};
};

/// One applied swap, in sorted indices. `cursor` left the larger-sum set.
/// For sign flips, [gap_low, gap_high] is the pair of adjacent distinct
/// values the sign change crossed; its width bounds the new |d|.
template <Scalar T>
struct SwapEvent {
    std::size_t traverse = 0;
    std::size_t cursor = 0;
    std::size_t partner = 0;
    T abs_before{};
    T d_after{};
    SignOutcome outcome = SignOutcome::unchanged;
    std::size_t gap_low = 0;
    std::size_t gap_high = 0;
};

template <Scalar T>
struct SolveReport {
    PartitionState<T> partition;   // over sorted order
    T objective{};                 // |s1 - s2| recomputed at emission
    Metrics metrics;
    std::vector<std::size_t> set1; // original indices, ascending
    std::vector<std::size_t> set2;
    T maintained_d{};              // incrementally maintained d before the final recompute
    std::vector<SwapEvent<T>> trace;
};

} // namespace eqpart
