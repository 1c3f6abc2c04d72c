#pragma once

#include <cmath>
#include <concepts>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "error.hpp"

namespace eqpart {

enum class NumericMode { exact_integer, float64 };

template <typename T>
concept Scalar = std::same_as<T, std::int64_t> || std::same_as<T, double>;

template <Scalar T>
inline constexpr NumericMode numeric_mode_v =
    std::same_as<T, std::int64_t> ? NumericMode::exact_integer : NumericMode::float64;

template <Scalar T>
inline constexpr bool is_exact_v = numeric_mode_v<T> == NumericMode::exact_integer;

inline std::string_view to_string(NumericMode mode)
{
    return mode == NumericMode::exact_integer ? "int" : "float";
}

/// Upper bound (exclusive) on every |x| and on sum |x| in exact mode. Keeps
/// every intermediate of d - 2a + 2b inside int64.
inline constexpr std::int64_t exact_guard = std::int64_t{1} << 62;

/// Throws InputError unless every |x| and the running sum of |x| stay
/// strictly below exact_guard. No-op in float mode apart from rejecting
/// non-finite values.
template <Scalar T>
void check_overflow_guard(std::span<const T> values)
{
    if constexpr (is_exact_v<T>) {
        std::int64_t total = 0;
        for (std::int64_t x : values) {
            if (x <= -exact_guard || x >= exact_guard)
                throw InputError("value " + std::to_string(x) + " exceeds the 2^62 magnitude guard");
            const std::int64_t mag = x < 0 ? -x : x;
            if (total >= exact_guard - mag)
                throw InputError("sum of magnitudes exceeds the 2^62 guard");
            total += mag;
        }
    } else {
        for (double x : values)
            if (!std::isfinite(x))
                throw InputError("non-finite value in instance");
    }
}

template <Scalar T>
constexpr T abs_value(T x)
{
    return x < 0 ? -x : x;
}

/// Signed difference after exchanging `from_set1` (leaving SET1) with
/// `from_set2` (leaving SET2): d - 2a + 2b. Evaluation and application both
/// go through here so that strict-decrease decisions are made on exactly the
/// value that gets stored. Floats round the element difference once, so an
/// exchange of equal values or a pure mirror (d -> -d) is never mistaken for
/// an improvement.
template <Scalar T>
constexpr T swapped_diff(T d, T from_set1, T from_set2)
{
    const T delta = from_set1 - from_set2;
    if constexpr (is_exact_v<T>)
        return (d - delta) - delta;
    else
        return d - 2.0 * delta;
}

/// Neumaier-compensated accumulator. Exact types just add.
template <Scalar T>
class CompensatedSum {
public:
    void add(T x)
    {
        if constexpr (is_exact_v<T>) {
            sum_ += x;
        } else {
            const double t = sum_ + x;
            if (std::abs(sum_) >= std::abs(x))
                comp_ += (sum_ - t) + x;
            else
                comp_ += (x - t) + sum_;
            sum_ = t;
        }
    }

    T value() const
    {
        if constexpr (is_exact_v<T>)
            return sum_;
        else
            return sum_ + comp_;
    }

private:
    T sum_{};
    T comp_{};
};

template <Scalar T>
T magnitude_sum(std::span<const T> values)
{
    CompensatedSum<T> acc;
    for (T x : values)
        acc.add(abs_value(x));
    return acc.value();
}

} // namespace eqpart
