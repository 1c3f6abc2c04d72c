#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "eqpart/cli.hpp"

namespace {

bool read_all(const std::string& path, std::string& text, std::string& error)
{
    if (path == "-") {
        text.assign(std::istreambuf_iterator<char>(std::cin), {});
        return true;
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        error = "cannot open " + path;
        return false;
    }
    text.assign(std::istreambuf_iterator<char>(in), {});
    return true;
}

void add_common(CLI::App* sub, eqpart::cli::CliCommand& cmd, std::string& input, std::string& mode,
                std::string& init, std::string& format)
{
    sub->add_option("--input", input, "instance file, or - for stdin")->capture_default_str();
    sub->add_option("--mode", mode, "numeric mode")->check(CLI::IsMember({"int", "float"}));
    sub->add_option("--init", init, "initial partition")
        ->check(CLI::IsMember({"alternating", "split", "random", "greedy"}))
        ->capture_default_str();
    sub->add_option("--seed", cmd.seed, "seed for --init random");
    sub->add_option("--format", format, "output format")->check(CLI::IsMember({"text", "json"}))->capture_default_str();
    sub->add_flag("--stats", cmd.stats, "print solver metrics");
}

} // namespace

int main(int argc, char** argv)
{
    using namespace eqpart::cli;

    CLI::App app{"Locally optimal equal-cardinality set partitioning"};
    app.require_subcommand(1);

    CliCommand cmd;
    std::string input = "-";
    std::string mode;
    std::string init = "alternating";
    std::string format = "text";
    std::string out_path;

    auto* solve = app.add_subcommand("solve", "equal-cardinality (or --cardinality K) local search");
    add_common(solve, cmd, input, mode, init, format);
    solve->add_option("--cardinality", cmd.cardinality, "size of the first set");
    solve->add_flag("--verify", cmd.verify, "check pair-swap local optimality");
    solve->add_flag("--oracle", cmd.oracle, "compare with the exhaustive optimum (N <= 24)");

    auto* trad = app.add_subcommand("solve-traditional", "free-cardinality partition via dummy zeros");
    add_common(trad, cmd, input, mode, init, format);
    trad->add_flag("--verify", cmd.verify, "check pair-swap and single-transfer local optimality");
    trad->add_flag("--oracle", cmd.oracle, "compare with the exhaustive optimum (N <= 24)");

    auto* verify = app.add_subcommand("verify", "check a given partition for pair-swap local optimality");
    add_common(verify, cmd, input, mode, init, format);
    verify->add_option("--set1", cmd.set1, "0-based input positions forming the first set")
        ->delimiter(',')
        ->required();
    verify->add_flag("--oracle", cmd.oracle, "compare with the exhaustive optimum (N <= 24)");

    auto* oracle = app.add_subcommand("oracle", "exhaustive optimum and local-optimum values (N <= 24)");
    add_common(oracle, cmd, input, mode, init, format);

    auto* bench = app.add_subcommand("bench", "scaling benchmark; text format is CSV");
    add_common(bench, cmd, input, mode, init, format);
    bench->add_option("--sizes", cmd.sizes, "instance sizes")->delimiter(',');
    bench->add_option("--family", cmd.family, "generator family")
        ->check(CLI::IsMember({"uniform_int", "uniform_float", "near_equal", "geometric"}))
        ->capture_default_str();
    bench->add_option("--reps", cmd.repetitions, "seeds per size")->capture_default_str();
    bench->add_option("--threads", cmd.threads, "parallel workers")->capture_default_str();
    bench->add_option("--out", out_path, "write the report here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_input;
    }

    if (app.got_subcommand(solve)) cmd.subcommand = Subcommand::solve;
    else if (app.got_subcommand(trad)) cmd.subcommand = Subcommand::solve_traditional;
    else if (app.got_subcommand(verify)) cmd.subcommand = Subcommand::verify;
    else if (app.got_subcommand(oracle)) cmd.subcommand = Subcommand::oracle;
    else cmd.subcommand = Subcommand::bench;

    if (!mode.empty())
        cmd.mode = mode == "int" ? eqpart::NumericMode::exact_integer : eqpart::NumericMode::float64;
    cmd.init = *eqpart::parse_init_strategy(init);
    cmd.format = format == "json" ? OutputFormat::json : OutputFormat::text;
    if (const char* env = std::getenv("EQPART_VERIFY_WINDOW"); env && std::string(env) == "1")
        cmd.verify_window = true;

    std::string text;
    if (cmd.subcommand != Subcommand::bench) {
        std::string error;
        if (!read_all(input, text, error)) {
            std::cerr << "error: " << error << '\n';
            return exit_input;
        }
    }

    const CliResult result = run(cmd, text);
    std::cerr << result.err;
    if (result.exit_code == exit_ok && !out_path.empty()) {
        std::ofstream out(out_path, std::ios::binary);
        if (!(out << result.out)) {
            std::cerr << "error: cannot write " << out_path << '\n';
            return exit_input;
        }
        return exit_ok;
    }
    std::cout << result.out;
    return result.exit_code;
}
