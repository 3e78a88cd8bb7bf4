#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "cli.hpp"

namespace {

namespace fs = std::filesystem;
using namespace hcip;
using namespace hcip::cli;

enum ExitCode { ok = 0, verification_failed = 1, config_error = 2, numerical_failure = 3 };

void setup_logging()
{
    auto logger = spdlog::stderr_color_mt("helmholtz_cip");
    logger->set_pattern("[%l] %v");
    spdlog::set_default_logger(logger);
    spdlog::set_level(spdlog::level::err);
    if (const char* env = std::getenv("HELMHOLTZ_CIP_LOG")) {
        const std::string level = env;
        if (level == "debug")
            spdlog::set_level(spdlog::level::debug);
        else if (level == "info")
            spdlog::set_level(spdlog::level::info);
        else if (level != "error")
            spdlog::warn("unknown HELMHOLTZ_CIP_LOG value '{}', using error", level);
    }
}

struct RawOptions {
    std::string k, t, n, constraint, rhs = "neg-one", out, report, format = "csv", spacing = "lin";
    std::vector<std::string> gamma;
    int points = 10;
    int samples = 0;
    int jobs = 1;
    std::uint64_t seed = 20240611;
    bool dof_scan = false;
    bool no_boundary_penalty = false;
    bool inject_fault = false;
};

std::ofstream open_output(const fs::path& path)
{
    std::ofstream f(path);
    if (!f)
        throw InvalidArgument("cannot open output file " + path.string());
    return f;
}

void emit(const Table& table, const RawOptions& raw, Format format)
{
    if (raw.out.empty()) {
        table.write(std::cout, format);
        return;
    }
    auto f = open_output(raw.out);
    table.write(f, format);
}

RunConfig build_config(const RawOptions& raw, const std::vector<std::string>& default_gamma)
{
    RunConfig c;
    const Spacing spacing = raw.spacing == "log" ? Spacing::log : Spacing::lin;
    if (!raw.k.empty())
        c.k = parse_real_list(raw.k, raw.points, spacing);
    if (!raw.t.empty())
        c.t = parse_real_list(raw.t, raw.points, spacing);
    if (!raw.n.empty())
        c.n = parse_int_list(raw.n);
    if (!raw.constraint.empty())
        c.constraint = parse_constraint(raw.constraint);
    for (const auto& g : raw.gamma.empty() ? default_gamma : raw.gamma)
        c.gamma.push_back(parse_gamma(g));
    c.rhs = raw.rhs;
    parse_rhs(c.rhs);
    c.dof_scan = raw.dof_scan;
    c.samples = raw.samples;
    c.boundary_penalty = !raw.no_boundary_penalty;
    c.jobs = raw.jobs;
    c.seed = raw.seed;
    c.inject_fault = raw.inject_fault;
    c.format = raw.format == "tsv" ? Format::tsv : Format::csv;
    return c;
}

void add_common(CLI::App* app, RawOptions& raw)
{
    app->add_option("--format", raw.format, "Output format")->check(CLI::IsMember({"csv", "tsv"}));
    app->add_option("--out", raw.out, "Output file (default: standard output)");
    app->add_flag("--no-boundary-penalty", raw.no_boundary_penalty,
                  "Drop the least-squares penalty on the Robin residual at x = 1");
    app->add_option("--rhs", raw.rhs, "Source term: neg-one, or an expression in x such as 'exp(i*3*x)'");
}

void add_k(CLI::App* app, RawOptions& raw, bool required)
{
    auto* opt = app->add_option("--k", raw.k, "Wavenumbers: list '10,100' or range '1..1000'");
    if (required)
        opt->required();
    app->add_option("--points", raw.points, "Values per range")->check(CLI::PositiveNumber);
    app->add_option("--spacing", raw.spacing, "Range spacing")->check(CLI::IsMember({"lin", "log"}));
}

} // namespace

int main(int argc, char** argv)
{
    setup_logging();

    CLI::App app{"CIP finite elements for the 1D Helmholtz problem u'' + k^2 u = -f on (0,1),\n"
                 "u(0) = 0, u'(1) - i k u(1) = 0."};
    app.require_subcommand(1);
    app.footer("Exit codes: 0 ok, 1 verification failure, 2 configuration error, 3 numerical failure.\n"
               "Set HELMHOLTZ_CIP_LOG=error|info|debug for diagnostics on standard error.");
    RawOptions raw;

    auto* solve = app.add_subcommand("solve", "Solve one problem; write nodal values next to the exact solution");
    add_k(solve, raw, true);
    solve->add_option("--n", raw.n, "Number of elements");
    solve->add_option("--constraint", raw.constraint, "Mesh from kh=c or k3h2=c");
    solve->add_option("--gamma", raw.gamma, "Penalty: number, p/q, complex literal like -0.1i, or gamma_o");
    solve->add_option("--samples", raw.samples, "Evaluate on this many uniform intervals instead of the nodes")
        ->check(CLI::NonNegativeNumber);
    solve->add_option("--report", raw.report, "Error report file (default: <out>.report.<ext>)");
    add_common(solve, raw);
    solve->footer("Recipes:\n"
                  "  solve --k 10 --n 10 --gamma gamma_o --samples 400\n"
                  "      pollution-free solution at k = 10, n = 10: no phase error against the exact solution\n"
                  "  solve --k 10 --n 10 --gamma 0 --samples 400\n"
                  "      standard linear FEM on the same mesh, showing the phase lag");

    auto* disp = app.add_subcommand("dispersion", "Tabulate cos t_h^- against cos t with cutoff markers");
    disp->add_option("--t", raw.t, "Values of t = kh (list or range)")->default_val("0.01..4");
    disp->add_option("--points", raw.points, "Values per range")->default_val(400)->check(CLI::PositiveNumber);
    disp->add_option("--spacing", raw.spacing, "Range spacing")->check(CLI::IsMember({"lin", "log"}));
    disp->add_option("--gamma", raw.gamma, "Penalties (repeatable); default gamma_o, -1/12, 0");
    disp->add_option("--format", raw.format, "Output format")->check(CLI::IsMember({"csv", "tsv"}));
    disp->add_option("--out", raw.out, "Output file (default: standard output)");
    disp->footer("Recipes:\n"
                 "  dispersion --gamma gamma_o --gamma -1/12 --gamma 0 --t 0.01..4\n"
                 "      discrete against exact wavenumber; the curves leave [-1,1] at t_c = sqrt(8) and sqrt(12)\n"
                 "  dispersion --gamma gamma_o --t 0.001..1 --points 1000\n"
                 "      the optimal penalty parameter versus t <= 1 (gamma column)");

    auto* sweep = app.add_subcommand("sweep", "Error reports over k, one CSV row per run, ordered by k");
    add_k(sweep, raw, true);
    sweep->add_option("--n", raw.n, "Element counts: list or integer range '2..200'");
    sweep->add_option("--constraint", raw.constraint, "Mesh from kh=c or k3h2=c");
    sweep->add_flag("--dof-scan", raw.dof_scan, "Scan n = 2, 3, ... (or --n) for each k");
    sweep->add_option("--gamma", raw.gamma, "Penalties (repeatable)");
    sweep->add_option("--jobs", raw.jobs, "Worker threads")->check(CLI::PositiveNumber);
    add_common(sweep, raw);
    sweep->footer("Recipes:\n"
                  "  sweep --dof-scan --k 100 --gamma gamma_o      (also k = 10, 40, 1000)\n"
                  "      best-approximation and CIP relative H1 errors against n, critical DOF about k/pi\n"
                  "  sweep --dof-scan --k 100 --gamma -1/12        (also k = 40, 400)\n"
                  "      relative H1 error against n with the predicted critical DOF (k^5/720)^(1/4)\n"
                  "  sweep --constraint k3h2=1 --gamma -0.08 --k 1..1000 --points 30 --spacing log\n"
                  "  sweep --constraint k3h2=1 --gamma -0.1i --k 1..1000 --points 30 --spacing log\n"
                  "      relative H1 error on meshes with k^3 h^2 = 1 for a real and an imaginary penalty\n"
                  "  sweep --constraint kh=1 --gamma -0.08 --k 1..1000 --points 30 --spacing log\n"
                  "  sweep --constraint kh=1 --gamma -0.1i --k 1..1000 --points 30 --spacing log\n"
                  "      error ratio e_c/e_ba growing with k (pollution) under kh = 1\n"
                  "  sweep --constraint kh=1 --gamma gamma_o --k 1..1000 --points 30 --spacing log\n"
                  "      error ratio staying flat with the optimal penalty under kh = 1");

    auto* verify = app.add_subcommand("verify", "Run the invariant and oracle checks; exit 1 on any failure");
    verify->add_option("--seed", raw.seed, "Seed for the randomized checks");
    verify->add_flag("--inject-fault", raw.inject_fault, "Perturb one assembled entry (self-test of the checks)")
        ->group("");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : config_error;
    }

    try {
        if (solve->parsed()) {
            const RunConfig c = build_config(raw, {"gamma_o"});
            const SolveOutput out = cmd_solve(c);
            if (raw.out.empty()) {
                out.solution.write(std::cout, c.format);
                std::cout << "\n\n";
                out.report.write(std::cout, c.format);
            } else {
                emit(out.solution, raw, c.format);
                fs::path report = raw.report;
                if (report.empty()) {
                    const fs::path p = raw.out;
                    report = p.parent_path() / (p.stem().string() + ".report" + p.extension().string());
                }
                auto f = open_output(report);
                out.report.write(f, c.format);
            }
        } else if (disp->parsed()) {
            const RunConfig c = build_config(raw, {"gamma_o", "-1/12", "0"});
            emit(cmd_dispersion(c), raw, c.format);
        } else if (sweep->parsed()) {
            const RunConfig c = build_config(raw, {"gamma_o"});
            emit(cmd_sweep(c), raw, c.format);
        } else if (verify->parsed()) {
            const RunConfig c = build_config(raw, {});
            return cmd_verify(c, std::cout) ? ok : verification_failed;
        }
    } catch (const NumericalError& e) {
        spdlog::error("{}", e.what());
        std::cerr << "numerical failure: " << e.what() << '\n';
        return numerical_failure;
    } catch (const std::invalid_argument& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return config_error;
    } catch (const std::domain_error& e) {
        std::cerr << "unsupported configuration: " << e.what() << '\n';
        return config_error;
    }
    return ok;
}
