#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "helmholtz_cip/problem.hpp"

namespace hcip::cli {

enum class Spacing { lin, log };

/// Comma-separated numbers and ranges "a..b"; each range expands to `points` values.
std::vector<double> parse_real_list(const std::string& spec, int points, Spacing spacing);

/// Comma-separated integers and inclusive integer ranges "a..b".
std::vector<int> parse_int_list(const std::string& spec);

/// Number, fraction "p/q", complex literal ("-0.1i", "0.1-0.2i", "(0.1,-0.2)") or "gamma_o".
struct GammaSpec {
    bool optimal = false;
    cplx value{};
    std::string text;

    /// Penalty for a run at t = k h; gamma_o is resolved per run.
    cplx resolve(double t) const;
};
GammaSpec parse_gamma(const std::string& spec);

/// Mesh constraint kh = c or k^3 h^2 = c, resolved to the smallest n that satisfies it.
struct Constraint {
    enum class Kind { kh, k3h2 } kind;
    double c;

    int resolve_n(double k) const;
};
Constraint parse_constraint(const std::string& spec);

/// Complex-valued expression in x: + - * / ^, parentheses, i, pi,
/// and sin cos tan exp log sqrt abs sinh cosh.
std::function<cplx(double)> compile_expression(const std::string& text);

/// "neg-one" or an expression in x.
RhsSpec parse_rhs(const std::string& spec);

/// 17 significant digits, scientific.
std::string format_real(double v);

enum class Format { csv, tsv };

class Table {
public:
    explicit Table(std::vector<std::string> header) : header_(std::move(header)) {}

    void add_row(std::vector<std::string> row);
    std::size_t rows() const { return rows_.size(); }
    const std::vector<std::string>& header() const { return header_; }
    /// Cell text by row index and column name.
    const std::string& cell(std::size_t row, const std::string& column) const;
    void write(std::ostream& out, Format format) const;

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

struct RunConfig {
    std::vector<double> k;
    std::vector<double> t;
    std::vector<int> n;
    std::optional<Constraint> constraint;
    std::vector<GammaSpec> gamma;
    std::string rhs = "neg-one";
    bool dof_scan = false;
    int samples = 0;
    bool boundary_penalty = true;
    int jobs = 1;
    std::uint64_t seed = 20240611;
    bool inject_fault = false;
    Format format = Format::csv;
};

/// Nodal (or sampled) solution table and the error report table.
struct SolveOutput {
    Table solution;
    Table report;
};
SolveOutput cmd_solve(const RunConfig& config);

Table cmd_dispersion(const RunConfig& config);

Table cmd_sweep(const RunConfig& config);

/// Prints the check table; returns true when every check passed.
bool cmd_verify(const RunConfig& config, std::ostream& out);

} // namespace hcip::cli
