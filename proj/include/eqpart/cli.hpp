#pragma once

#include <charconv>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <variant>
#include <vector>

#include <json.hpp>

#include "bench.hpp"
#include "config.hpp"
#include "error.hpp"
#include "instance.hpp"
#include "oracle.hpp"
#include "reductions.hpp"
#include "solver.hpp"
#include "verify.hpp"

namespace eqpart::cli {

enum ExitCode : int { exit_ok = 0, exit_input = 1, exit_constraint = 2, exit_internal = 3 };

using AnyInstance = bench::AnyInstance;

namespace detail {

struct Token {
    std::string_view text;
    std::size_t line;
    std::size_t column;
};

inline std::vector<Token> tokenize(std::string_view text)
{
    std::vector<Token> tokens;
    std::size_t line = 1;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t eol = std::min(text.find('\n', pos), text.size());
        const std::string_view row = text.substr(pos, eol - pos);
        const std::size_t first = row.find_first_not_of(" \t\r\f\v");
        if (first != std::string_view::npos && row[first] != '#') {
            std::size_t i = 0;
            while (i < row.size()) {
                while (i < row.size() && (row[i] == ',' || std::string_view(" \t\r\f\v").find(row[i]) != std::string_view::npos))
                    ++i;
                const std::size_t start = i;
                while (i < row.size() && row[i] != ',' && std::string_view(" \t\r\f\v").find(row[i]) == std::string_view::npos)
                    ++i;
                if (i > start)
                    tokens.push_back({row.substr(start, i - start), line, start + 1});
            }
        }
        pos = eol + 1;
        ++line;
    }
    return tokens;
}

inline std::string where(const Token& t)
{
    return "line " + std::to_string(t.line) + ", column " + std::to_string(t.column);
}

inline bool integer_syntax(std::string_view s)
{
    std::size_t i = s[0] == '+' || s[0] == '-' ? 1 : 0;
    if (i == s.size())
        return false;
    for (; i < s.size(); ++i)
        if (s[i] < '0' || s[i] > '9')
            return false;
    return true;
}

inline std::int64_t parse_int(const Token& t)
{
    std::string_view s = t.text;
    if (!integer_syntax(s))
        throw InputError(where(t) + ": malformed integer token '" + std::string(s) + "'");
    if (s[0] == '+')
        s.remove_prefix(1);
    std::int64_t value = 0;
    const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec == std::errc::result_out_of_range)
        throw InputError(where(t) + ": integer '" + std::string(t.text) + "' overflows 64 bits");
    if (ec != std::errc{} || end != s.data() + s.size())
        throw InputError(where(t) + ": malformed integer token '" + std::string(t.text) + "'");
    return value;
}

inline double parse_float(const Token& t)
{
    std::string_view s = t.text;
    if (s[0] == '+')
        s.remove_prefix(1);
    double value = 0;
    const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || end != s.data() + s.size() || !std::isfinite(value))
        throw InputError(where(t) + ": malformed number token '" + std::string(t.text) + "'");
    return value;
}

} // namespace detail

/// Numbers separated by whitespace, commas or newlines; lines whose first
/// non-blank character is '#' are comments. Without an explicit mode the
/// instance is exact-integer when every token is an integer, float64
/// otherwise.
inline AnyInstance parse_input(std::string_view text, std::optional<NumericMode> mode = std::nullopt)
{
    const auto tokens = detail::tokenize(text);
    if (tokens.empty())
        throw InputError("input contains no numbers");

    if (!mode) {
        mode = NumericMode::exact_integer;
        for (const auto& t : tokens)
            if (!detail::integer_syntax(t.text))
                mode = NumericMode::float64;
    }
    if (*mode == NumericMode::exact_integer) {
        Instance<std::int64_t> out;
        for (const auto& t : tokens)
            out.values.push_back(detail::parse_int(t));
        check_overflow_guard<std::int64_t>(out.values);
        return out;
    }
    Instance<double> out;
    for (const auto& t : tokens)
        out.values.push_back(detail::parse_float(t));
    return out;
}

enum class Subcommand { solve, solve_traditional, verify, oracle, bench };
enum class OutputFormat { text, json };

struct CliCommand {
    Subcommand subcommand = Subcommand::solve;
    std::optional<NumericMode> mode;
    InitStrategy init = InitStrategy::alternating;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> cardinality;
    OutputFormat format = OutputFormat::text;
    bool verify = false;
    bool oracle = false;
    bool stats = false;
    bool verify_window = false;

    // verify: original indices forming SET1; the rest form SET2.
    std::vector<std::size_t> set1;

    // bench
    std::vector<std::size_t> sizes{256, 512, 1024, 2048, 4096, 8192};
    std::string family = "uniform_int";
    std::size_t repetitions = 11;
    unsigned threads = 1;
};

struct CliResult {
    int exit_code = exit_ok;
    std::string out;
    std::string err;
};

namespace detail {

template <Scalar T>
nlohmann::json scalar_json(T x)
{
    return nlohmann::json(x);
}

template <Scalar T>
std::string format_scalar(T x)
{
    if constexpr (is_exact_v<T>) {
        return std::to_string(x);
    } else {
        char buf[64];
        const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
        return std::string(buf, end);
    }
}

template <Scalar T>
nlohmann::json members_json(const Instance<T>& inst, const std::vector<std::size_t>& idx)
{
    auto arr = nlohmann::json::array();
    for (std::size_t i : idx)
        arr.push_back({{"index", i}, {"value", inst.values[i]}});
    return arr;
}

template <Scalar T>
std::string members_text(const Instance<T>& inst, const std::vector<std::size_t>& idx)
{
    std::string s;
    for (std::size_t i : idx) {
        if (!s.empty())
            s += ' ';
        s += '[' + std::to_string(i) + "]=" + format_scalar(inst.values[i]);
    }
    return s.empty() ? "(empty)" : s;
}

inline nlohmann::json metrics_json(const Metrics& m)
{
    return {{"traverses", m.traverses},
            {"swaps", m.swaps},
            {"sign_changes", m.sign_changes},
            {"candidate_evals", m.candidate_evaluations},
            {"max_traverse_evals", m.max_traverse_evaluations},
            {"wall_time_ns", m.wall_time.count()}};
}

inline std::string metrics_text(const Metrics& m)
{
    std::ostringstream os;
    os << "stats: traverses=" << m.traverses << " swaps=" << m.swaps << " sign_changes=" << m.sign_changes
       << " candidate_evals=" << m.candidate_evaluations << " max_traverse_evals=" << m.max_traverse_evaluations
       << " wall_time_ns=" << m.wall_time.count() << '\n';
    return os.str();
}

/// Shared rendering for every subcommand that produces a partition.
template <Scalar T>
struct Rendered {
    T objective{};
    std::vector<std::size_t> set1, set2;
    std::optional<Metrics> metrics;
    std::optional<bool> verified;
    std::optional<std::string> verify_detail;
    std::optional<T> exact_min;
};

template <Scalar T>
std::string render(const CliCommand& cmd, const Instance<T>& inst, const Rendered<T>& r)
{
    if (cmd.format == OutputFormat::json) {
        nlohmann::json j;
        j["mode"] = to_string(numeric_mode_v<T>);
        j["objective"] = r.objective;
        j["set1"] = members_json(inst, r.set1);
        j["set2"] = members_json(inst, r.set2);
        j["metrics"] = r.metrics ? metrics_json(*r.metrics) : nlohmann::json::object();
        if (r.verified)
            j["verified"] = *r.verified;
        if (r.exact_min) {
            j["exact_min"] = *r.exact_min;
            j["globally_optimal"] = r.objective == *r.exact_min;
        }
        return j.dump(2) + "\n";
    }
    std::string s;
    s += "objective: " + format_scalar(r.objective) + "\n";
    s += "set1: " + members_text(inst, r.set1) + "\n";
    s += "set2: " + members_text(inst, r.set2) + "\n";
    if (r.verified) {
        s += std::string("verify: ") + (*r.verified ? "PASS" : "FAIL");
        if (r.verify_detail)
            s += " (" + *r.verify_detail + ")";
        s += "\n";
    }
    if (r.exact_min)
        s += "exact_min: " + format_scalar(*r.exact_min) +
             (r.objective == *r.exact_min ? " (globally optimal)\n" : " (not globally optimal)\n");
    if (cmd.stats && r.metrics)
        s += metrics_text(*r.metrics);
    return s;
}

inline SolverConfig make_config(const CliCommand& cmd)
{
    SolverConfig cfg;
    cfg.init = cmd.init;
    cfg.seed = cmd.init == InitStrategy::random ? cmd.seed : std::nullopt;
    cfg.verify_window = cmd.verify_window;
    cfg.validate();
    return cfg;
}

template <Scalar T>
std::string run_solve(const CliCommand& cmd, const Instance<T>& inst)
{
    const SolverConfig cfg = make_config(cmd);
    const bool equal = !cmd.cardinality || 2 * *cmd.cardinality == inst.size();
    const SolveReport<T> rep = cmd.cardinality ? solve_with_cardinality(inst, *cmd.cardinality, cfg) : solve(inst, cfg);

    Rendered<T> r;
    r.objective = rep.objective;
    r.set1 = rep.set1;
    r.set2 = rep.set2;
    r.metrics = rep.metrics;
    if (cmd.verify) {
        const auto check = is_locally_optimal_pairswap<T>(rep.partition, normalize_and_sort(inst).values);
        r.verified = check.locally_optimal;
    }
    if (cmd.oracle) {
        if (!equal)
            throw ConstraintError("--oracle only supports equal cardinalities");
        r.exact_min = exact_min_diff(inst);
    }
    return render(cmd, inst, r);
}

template <Scalar T>
std::string run_traditional(const CliCommand& cmd, const Instance<T>& inst)
{
    const TraditionalResult<T> res = solve_traditional(inst, make_config(cmd));
    Rendered<T> r;
    r.objective = res.objective;
    r.set1 = res.part1;
    r.set2 = res.part2;
    r.metrics = res.extended.metrics;
    if (cmd.verify) {
        const auto extended = normalize_and_sort(to_equal_cardinality(inst));
        const bool pair = is_locally_optimal_pairswap<T>(res.extended.partition, extended.values).locally_optimal;
        const bool transfer = is_locally_optimal_transfer(inst, res);
        r.verified = pair && transfer;
        r.verify_detail = std::string("pairswap ") + (pair ? "PASS" : "FAIL") + ", transfer " + (transfer ? "PASS" : "FAIL");
    }
    if (cmd.oracle)
        r.exact_min = exact_min_diff_any_cardinality(inst);
    return render(cmd, inst, r);
}

template <Scalar T>
std::string run_verify(const CliCommand& cmd, const Instance<T>& inst)
{
    const std::size_t n = inst.size();
    std::vector<Side> membership(n, Side::set2);
    for (std::size_t i : cmd.set1) {
        if (i >= n)
            throw ConstraintError("--set1 index " + std::to_string(i) + " out of range for N = " + std::to_string(n));
        membership[i] = Side::set1;
    }
    const auto state = make_state<T>(inst.values, std::move(membership));
    const auto check = is_locally_optimal_pairswap<T>(state, inst.values);

    Rendered<T> r;
    r.objective = state.abs_diff();
    for (std::size_t i = 0; i < n; ++i)
        (state.membership[i] == Side::set1 ? r.set1 : r.set2).push_back(i);
    r.verified = check.locally_optimal;
    if (check.witness)
        r.verify_detail = "improving swap: [" + std::to_string(check.witness->first) + "] <-> [" +
                          std::to_string(check.witness->second) + "] gives " +
                          format_scalar(swap_new_diff<T>(state, inst.values, check.witness->first, check.witness->second));
    if (cmd.oracle)
        r.exact_min = state.card1 == state.card2 ? exact_min_diff(inst) : exact_min_diff_any_cardinality(inst);
    std::string out = render(cmd, inst, r);
    if (cmd.format == OutputFormat::json && check.witness) {
        auto j = nlohmann::json::parse(out);
        j["witness"] = {check.witness->first, check.witness->second};
        out = j.dump(2) + "\n";
    }
    return out;
}

template <Scalar T>
std::string run_oracle_cmd(const CliCommand& cmd, const Instance<T>& inst)
{
    const OracleResult<T> res = run_oracle(inst);
    if (cmd.format == OutputFormat::json) {
        nlohmann::json j;
        j["mode"] = to_string(numeric_mode_v<T>);
        j["exact_min"] = res.exact_min;
        j["local_optima"] = std::vector<T>(res.local_optima.begin(), res.local_optima.end());
        j["partitions_enumerated"] = res.num_partitions_enumerated;
        return j.dump(2) + "\n";
    }
    std::string s = "exact_min: " + format_scalar(res.exact_min) + "\nlocal_optima:";
    for (T v : res.local_optima)
        s += " " + format_scalar(v);
    s += "\npartitions_enumerated: " + std::to_string(res.num_partitions_enumerated) + "\n";
    return s;
}

inline std::string run_bench(const CliCommand& cmd)
{
    bench::Family family;
    if (cmd.family == "uniform_int")
        family = bench::UniformInt{1, 1'000'000'000};
    else if (cmd.family == "uniform_float")
        family = bench::UniformFloat{0.0, 1.0};
    else if (cmd.family == "near_equal")
        family = bench::NearEqual{1'000'000, 1};
    else if (cmd.family == "geometric")
        family = bench::Geometric{1.01, 1.0};
    else
        throw ConstraintError("unknown benchmark family '" + cmd.family + "'");

    std::vector<bench::GeneratorSpec> specs;
    for (std::size_t n : cmd.sizes)
        specs.push_back({family, n, cmd.seed.value_or(1)});
    SolverConfig cfg = make_config(cmd);
    const auto report = bench::run_suite(specs, cfg, cmd.repetitions, cmd.threads);
    return bench::export_report(report, cmd.format == OutputFormat::json ? bench::ExportFormat::json
                                                                           : bench::ExportFormat::csv);
}

} // namespace detail

/// Dispatches a parsed command. `input` is the instance text (ignored by
/// bench). Errors map to exit codes 1 (input), 2 (constraint), 3 (internal).
inline CliResult run(const CliCommand& cmd, std::string_view input)
{
    CliResult result;
    try {
        if (cmd.cardinality && cmd.subcommand != Subcommand::solve)
            throw ConstraintError("--cardinality is only valid with solve");
        if (cmd.subcommand == Subcommand::bench) {
            result.out = detail::run_bench(cmd);
            return result;
        }
        const AnyInstance inst = parse_input(input, cmd.mode);
        result.out = std::visit(
            [&](const auto& instance) -> std::string {
                switch (cmd.subcommand) {
                case Subcommand::solve: return detail::run_solve(cmd, instance);
                case Subcommand::solve_traditional: return detail::run_traditional(cmd, instance);
                case Subcommand::verify: return detail::run_verify(cmd, instance);
                case Subcommand::oracle: return detail::run_oracle_cmd(cmd, instance);
                case Subcommand::bench: break;
                }
                return {};
            },
            inst);
    } catch (const InputError& e) {
        result = {exit_input, {}, std::string("error: ") + e.what() + "\n"};
    } catch (const ConstraintError& e) {
        result = {exit_constraint, {}, std::string("error: ") + e.what() + "\n"};
    } catch (const InternalError& e) {
        result = {exit_internal, {}, std::string("internal error: ") + e.what() + "\n"};
    }
    return result;
}

} // namespace eqpart::cli
