#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <future>
#include <iomanip>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "config.hpp"
#include "error.hpp"
#include "instance.hpp"
#include "solver.hpp"

namespace eqpart::bench {

struct UniformInt {
    std::int64_t lo = 1;
    std::int64_t hi = 1'000'000;
};
struct UniformFloat {
    double lo = 0.0;
    double hi = 1.0;
};
/// Integers in [base - epsilon, base + epsilon]; tie-heavy for small epsilon.
struct NearEqual {
    std::int64_t base = 1'000'000;
    std::int64_t epsilon = 1;
};
/// scale * ratio^i for i < n, shuffled.
struct Geometric {
    double ratio = 1.1;
    double scale = 1.0;
};

using Family = std::variant<UniformInt, UniformFloat, NearEqual, Geometric>;

inline std::string family_name(const Family& f)
{
    struct {
        std::string operator()(const UniformInt&) const { return "uniform_int"; }
        std::string operator()(const UniformFloat&) const { return "uniform_float"; }
        std::string operator()(const NearEqual&) const { return "near_equal"; }
        std::string operator()(const Geometric&) const { return "geometric"; }
    } visitor;
    return std::visit(visitor, f);
}

struct GeneratorSpec {
    Family family = UniformInt{};
    std::size_t n = 2;
    std::uint64_t seed = 0;
};

using AnyInstance = std::variant<Instance<std::int64_t>, Instance<double>>;

/// Deterministic instance for `spec`; the same spec always yields the same
/// values.
inline AnyInstance generate(const GeneratorSpec& spec)
{
    if (spec.n < 2)
        throw ConstraintError("generator: n must be at least 2");
    std::mt19937_64 rng(spec.seed);

    if (const auto* f = std::get_if<UniformInt>(&spec.family)) {
        if (f->lo > f->hi)
            throw ConstraintError("generator: uniform_int needs lo <= hi");
        std::uniform_int_distribution<std::int64_t> dist(f->lo, f->hi);
        Instance<std::int64_t> out;
        out.values.resize(spec.n);
        for (auto& x : out.values)
            x = dist(rng);
        return out;
    }
    if (const auto* f = std::get_if<UniformFloat>(&spec.family)) {
        if (!(f->lo < f->hi) || !std::isfinite(f->lo) || !std::isfinite(f->hi))
            throw ConstraintError("generator: uniform_float needs finite lo < hi");
        std::uniform_real_distribution<double> dist(f->lo, f->hi);
        Instance<double> out;
        out.values.resize(spec.n);
        for (auto& x : out.values)
            x = dist(rng);
        return out;
    }
    if (const auto* f = std::get_if<NearEqual>(&spec.family)) {
        if (f->epsilon < 0)
            throw ConstraintError("generator: near_equal needs epsilon >= 0");
        std::uniform_int_distribution<std::int64_t> dist(-f->epsilon, f->epsilon);
        Instance<std::int64_t> out;
        out.values.resize(spec.n);
        for (auto& x : out.values)
            x = f->base + dist(rng);
        return out;
    }
    const auto& g = std::get<Geometric>(spec.family);
    if (!(g.ratio > 0.0) || !(g.scale != 0.0) || !std::isfinite(g.ratio) || !std::isfinite(g.scale))
        throw ConstraintError("generator: geometric needs ratio > 0 and nonzero finite scale");
    Instance<double> out;
    out.values.resize(spec.n);
    for (std::size_t i = 0; i < spec.n; ++i)
        out.values[i] = g.scale * std::pow(g.ratio, static_cast<double>(i));
    std::shuffle(out.values.begin(), out.values.end(), rng);
    return out;
}

/// One benchmarked solve. Field order matches the CSV columns.
struct RunRecord {
    std::size_t n = 0;
    std::string family;
    std::uint64_t seed = 0;
    std::uint64_t traverses = 0;
    std::uint64_t swaps = 0;
    std::uint64_t candidate_evals = 0;
    std::int64_t wall_time_ns = 0;
    double objective = 0.0;

    bool operator==(const RunRecord&) const = default;
};

struct ScalingRow {
    std::size_t n = 0;
    double median_candidate_evals = 0.0;
    double median_traverses = 0.0;
    double median_swaps = 0.0;
    double median_wall_time_ns = 0.0;

    bool operator==(const ScalingRow&) const = default;
};

struct ScalingReport {
    std::vector<RunRecord> runs;
    std::vector<ScalingRow> rows;        // sorted by n
    std::optional<double> slope;         // log-log fit of evals vs n, >= 4 sizes

    bool operator==(const ScalingReport&) const = default;
};

class BenchInvariantError : public InternalError {
public:
    BenchInvariantError(const std::string& what, std::uint64_t seed)
        : InternalError(what + " (seed " + std::to_string(seed) + ")"), seed_(seed)
    {
    }
    std::uint64_t seed() const { return seed_; }

private:
    std::uint64_t seed_;
};

inline double median(std::vector<double> xs)
{
    if (xs.empty())
        return std::numeric_limits<double>::quiet_NaN();
    std::sort(xs.begin(), xs.end());
    const std::size_t mid = xs.size() / 2;
    return xs.size() % 2 ? xs[mid] : 0.5 * (xs[mid - 1] + xs[mid]);
}

/// Least-squares slope of log(y) against log(x).
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y)
{
    const std::size_t m = x.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < m; ++i) {
        const double lx = std::log(x[i]);
        const double ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

namespace detail {

template <Scalar T>
RunRecord run_one(const Instance<T>& instance, const GeneratorSpec& spec, const SolverConfig& cfg)
{
    const auto report = solve(instance, cfg);
    const auto& m = report.metrics;
    const std::size_t n = instance.size();
    if (is_exact_v<T> && m.traverses > n + 2)
        throw BenchInvariantError("traverse bound violated: " + std::to_string(m.traverses) + " > N + 2 for N = " +
                                      std::to_string(n),
                                  spec.seed);
    if (m.max_traverse_evaluations > 2 * n)
        throw BenchInvariantError("per-traverse work bound violated: " + std::to_string(m.max_traverse_evaluations) +
                                      " > 2N for N = " + std::to_string(n),
                                  spec.seed);
    if (m.swaps < m.sign_changes || m.sign_changes + 1 != m.traverses)
        throw BenchInvariantError("metric bookkeeping inconsistent", spec.seed);

    RunRecord rec;
    rec.n = n;
    rec.family = family_name(spec.family);
    rec.seed = spec.seed;
    rec.traverses = m.traverses;
    rec.swaps = m.swaps;
    rec.candidate_evals = m.candidate_evaluations;
    rec.wall_time_ns = m.wall_time.count();
    rec.objective = static_cast<double>(report.objective);
    return rec;
}

} // namespace detail

inline RunRecord run_spec(const GeneratorSpec& spec, const SolverConfig& cfg)
{
    return std::visit([&](const auto& inst) { return detail::run_one(inst, spec, cfg); }, generate(spec));
}

/// Solves every spec `repetitions` times (seed, seed+1, ...) and summarizes
/// per size. Runs may execute on up to `threads` workers; the result does
/// not depend on the thread count apart from wall times.
inline ScalingReport run_suite(const std::vector<GeneratorSpec>& specs, const SolverConfig& cfg,
                               std::size_t repetitions, unsigned threads = 1)
{
    std::vector<GeneratorSpec> jobs;
    for (const auto& spec : specs)
        for (std::size_t r = 0; r < repetitions; ++r) {
            GeneratorSpec job = spec;
            job.seed = spec.seed + r;
            jobs.push_back(job);
        }

    ScalingReport report;
    report.runs.resize(jobs.size());
    const std::size_t workers = std::max(1u, threads);
    for (std::size_t base = 0; base < jobs.size(); base += workers) {
        std::vector<std::future<RunRecord>> batch;
        const std::size_t end = std::min(jobs.size(), base + workers);
        for (std::size_t j = base; j < end; ++j)
            batch.push_back(std::async(workers > 1 ? std::launch::async : std::launch::deferred,
                                       [&, j] { return run_spec(jobs[j], cfg); }));
        for (std::size_t j = base; j < end; ++j)
            report.runs[j] = batch[j - base].get();
    }

    std::map<std::size_t, std::vector<const RunRecord*>> by_n;
    for (const auto& run : report.runs)
        by_n[run.n].push_back(&run);
    std::vector<double> xs, ys;
    for (const auto& [n, runs] : by_n) {
        std::vector<double> evals, travs, swaps, times;
        for (const RunRecord* r : runs) {
            evals.push_back(static_cast<double>(r->candidate_evals));
            travs.push_back(static_cast<double>(r->traverses));
            swaps.push_back(static_cast<double>(r->swaps));
            times.push_back(static_cast<double>(r->wall_time_ns));
        }
        ScalingRow row{n, median(evals), median(travs), median(swaps), median(times)};
        report.rows.push_back(row);
        xs.push_back(static_cast<double>(n));
        ys.push_back(row.median_candidate_evals);
    }
    if (xs.size() >= 4)
        report.slope = loglog_slope(xs, ys);
    return report;
}

enum class ExportFormat { csv, json };

inline constexpr const char* csv_header = "n,family,seed,traverses,swaps,candidate_evals,wall_time_ns,objective";

inline void to_json(nlohmann::json& j, const RunRecord& r)
{
    j = nlohmann::json{{"n", r.n},
                       {"family", r.family},
                       {"seed", r.seed},
                       {"traverses", r.traverses},
                       {"swaps", r.swaps},
                       {"candidate_evals", r.candidate_evals},
                       {"wall_time_ns", r.wall_time_ns},
                       {"objective", r.objective}};
}

inline void from_json(const nlohmann::json& j, RunRecord& r)
{
    j.at("n").get_to(r.n);
    j.at("family").get_to(r.family);
    j.at("seed").get_to(r.seed);
    j.at("traverses").get_to(r.traverses);
    j.at("swaps").get_to(r.swaps);
    j.at("candidate_evals").get_to(r.candidate_evals);
    j.at("wall_time_ns").get_to(r.wall_time_ns);
    j.at("objective").get_to(r.objective);
}

inline void to_json(nlohmann::json& j, const ScalingRow& r)
{
    j = nlohmann::json{{"n", r.n},
                       {"median_candidate_evals", r.median_candidate_evals},
                       {"median_traverses", r.median_traverses},
                       {"median_swaps", r.median_swaps},
                       {"median_wall_time_ns", r.median_wall_time_ns}};
}

inline void from_json(const nlohmann::json& j, ScalingRow& r)
{
    j.at("n").get_to(r.n);
    j.at("median_candidate_evals").get_to(r.median_candidate_evals);
    j.at("median_traverses").get_to(r.median_traverses);
    j.at("median_swaps").get_to(r.median_swaps);
    j.at("median_wall_time_ns").get_to(r.median_wall_time_ns);
}

/// CSV holds the per-run records only (header row `csv_header`); JSON holds
/// runs, per-size rows and the slope.
inline std::string export_report(const ScalingReport& report, ExportFormat format)
{
    if (format == ExportFormat::json) {
        nlohmann::json j;
        j["runs"] = report.runs;
        j["rows"] = report.rows;
        j["slope"] = report.slope ? nlohmann::json(*report.slope) : nlohmann::json(nullptr);
        return j.dump(2) + "\n";
    }
    std::ostringstream out;
    out << csv_header << '\n';
    out << std::setprecision(std::numeric_limits<double>::max_digits10);
    for (const auto& r : report.runs)
        out << r.n << ',' << r.family << ',' << r.seed << ',' << r.traverses << ',' << r.swaps << ','
            << r.candidate_evals << ',' << r.wall_time_ns << ',' << r.objective << '\n';
    return out.str();
}

inline ScalingReport import_report_json(const std::string& text)
{
    const auto j = nlohmann::json::parse(text);
    ScalingReport report;
    j.at("runs").get_to(report.runs);
    j.at("rows").get_to(report.rows);
    if (!j.at("slope").is_null())
        report.slope = j.at("slope").get<double>();
    return report;
}

inline std::vector<RunRecord> import_runs_csv(const std::string& text)
{
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != csv_header)
        throw InputError("benchmark CSV: missing or unexpected header");
    std::vector<RunRecord> runs;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ','))
            cells.push_back(cell);
        if (cells.size() != 8)
            throw InputError("benchmark CSV: expected 8 columns in \"" + line + "\"");
        RunRecord r;
        r.n = std::stoull(cells[0]);
        r.family = cells[1];
        r.seed = std::stoull(cells[2]);
        r.traverses = std::stoull(cells[3]);
        r.swaps = std::stoull(cells[4]);
        r.candidate_evals = std::stoull(cells[5]);
        r.wall_time_ns = std::stoll(cells[6]);
        r.objective = std::stod(cells[7]);
        runs.push_back(std::move(r));
    }
    return runs;
}

inline void write_report(const ScalingReport& report, ExportFormat format, const std::string& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open " + path + " for writing");
    out << export_report(report, format);
    out.flush();
    if (!out)
        throw std::runtime_error("write failed for " + path);
}

} // namespace eqpart::bench
