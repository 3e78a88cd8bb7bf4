#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>
#include <ostream>
#include <thread>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "helmholtz_cip/dispersion.hpp"
#include "helmholtz_cip/error_analysis.hpp"
#include "helmholtz_cip/verification.hpp"

namespace hcip::cli {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos)
        return {};
    return s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> parts;
    std::size_t start = 0;
    for (;;) {
        const auto pos = s.find(sep, start);
        parts.push_back(trim(s.substr(start, pos - start)));
        if (pos == std::string::npos)
            return parts;
        start = pos + 1;
    }
}

double parse_double(const std::string& text)
{
    const std::string s = trim(text);
    std::size_t used = 0;
    double v = 0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw InvalidArgument(fmt::format("'{}' is not a number", text));
    }
    if (used != s.size())
        throw InvalidArgument(fmt::format("'{}' is not a number", text));
    return v;
}

int parse_int(const std::string& text)
{
    const double v = parse_double(text);
    if (v != std::floor(v) || std::abs(v) > 1e9)
        throw InvalidArgument(fmt::format("'{}' is not an integer", text));
    return static_cast<int>(v);
}

// Signed number where a bare sign stands for one, as in "i" or "-i".
double parse_coefficient(const std::string& s)
{
    if (s.empty() || s == "+")
        return 1;
    if (s == "-")
        return -1;
    return parse_double(s);
}

class ExpressionParser {
public:
    using Node = std::function<cplx(double)>;

    explicit ExpressionParser(std::string text) : s_(std::move(text)) {}

    Node parse()
    {
        Node n = expr();
        skip();
        if (pos_ != s_.size())
            fail("unexpected trailing input");
        return n;
    }

private:
    [[noreturn]] void fail(const std::string& what) const
    {
        throw InvalidArgument(fmt::format("bad expression '{}' at column {}: {}", s_, pos_ + 1, what));
    }

    void skip()
    {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
            ++pos_;
    }

    bool accept(char c)
    {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Node expr()
    {
        Node lhs = term();
        for (;;) {
            if (accept('+'))
                lhs = [a = lhs, b = term()](double x) { return a(x) + b(x); };
            else if (accept('-'))
                lhs = [a = lhs, b = term()](double x) { return a(x) - b(x); };
            else
                return lhs;
        }
    }

    Node term()
    {
        Node lhs = unary();
        for (;;) {
            if (accept('*'))
                lhs = [a = lhs, b = unary()](double x) { return a(x) * b(x); };
            else if (accept('/'))
                lhs = [a = lhs, b = unary()](double x) { return a(x) / b(x); };
            else
                return lhs;
        }
    }

    Node unary()
    {
        if (accept('-'))
            return [a = unary()](double x) { return -a(x); };
        if (accept('+'))
            return unary();
        return power();
    }

    Node power()
    {
        Node base = primary();
        if (accept('^'))
            return [a = base, b = unary()](double x) {
                const cplx e = b(x);
                if (e.imag() == 0 && e.real() == std::round(e.real()) && std::abs(e.real()) <= 64)
                    return std::pow(a(x), static_cast<int>(e.real()));
                return std::pow(a(x), e);
            };
        return base;
    }

    Node primary()
    {
        skip();
        if (pos_ >= s_.size())
            fail("unexpected end of input");
        if (accept('(')) {
            Node inner = expr();
            if (!accept(')'))
                fail("missing ')'");
            return inner;
        }
        const char c = s_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            std::size_t used = 0;
            const double v = std::stod(s_.substr(pos_), &used);
            pos_ += used;
            return [v](double) { return cplx(v); };
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            const std::size_t start = pos_;
            while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
                ++pos_;
            const std::string name = s_.substr(start, pos_ - start);
            if (name == "x")
                return [](double x) { return cplx(x); };
            if (name == "i")
                return [](double) { return cplx(0, 1); };
            if (name == "pi")
                return [](double) { return cplx(std::numbers::pi); };
            using Fn = cplx (*)(const cplx&);
            Fn fn = nullptr;
            if (name == "sin")
                fn = [](const cplx& z) { return std::sin(z); };
            else if (name == "cos")
                fn = [](const cplx& z) { return std::cos(z); };
            else if (name == "tan")
                fn = [](const cplx& z) { return std::tan(z); };
            else if (name == "exp")
                fn = [](const cplx& z) { return std::exp(z); };
            else if (name == "log")
                fn = [](const cplx& z) { return std::log(z); };
            else if (name == "sqrt")
                fn = [](const cplx& z) { return std::sqrt(z); };
            else if (name == "abs")
                fn = [](const cplx& z) { return cplx(std::abs(z)); };
            else if (name == "sinh")
                fn = [](const cplx& z) { return std::sinh(z); };
            else if (name == "cosh")
                fn = [](const cplx& z) { return std::cosh(z); };
            else
                fail(fmt::format("unknown name '{}'", name));
            if (!accept('('))
                fail("expected '(' after function name");
            Node arg = expr();
            if (!accept(')'))
                fail("missing ')'");
            return [fn, arg](double x) { return fn(arg(x)); };
        }
        fail(fmt::format("unexpected character '{}'", c));
    }

    std::string s_;
    std::size_t pos_ = 0;
};

template <class F>
void parallel_for(std::size_t count, int jobs, F&& body)
{
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < count; i = next++)
            body(i);
    };
    const auto threads = static_cast<std::size_t>(std::clamp(jobs, 1, 256));
    if (threads == 1 || count < 2) {
        worker();
        return;
    }
    std::vector<std::jthread> pool;
    for (std::size_t j = 0; j < std::min(threads, count); ++j)
        pool.emplace_back(worker);
}

double predicted_critical_dof(const GammaSpec& g, double k)
{
    if (g.optimal)
        return std::floor(k / std::numbers::pi);
    if (g.value.imag() != 0)
        return nan;
    return critical_dof(k, g.value.real());
}

std::string format_optional(const std::optional<double>& v)
{
    return format_real(v.value_or(nan));
}

} // namespace

std::vector<double> parse_real_list(const std::string& spec, int points, Spacing spacing)
{
    std::vector<double> out;
    for (const std::string& item : split(spec, ',')) {
        const auto dots = item.find("..");
        if (dots == std::string::npos) {
            out.push_back(parse_double(item));
            continue;
        }
        const double a = parse_double(item.substr(0, dots)), b = parse_double(item.substr(dots + 2));
        if (points < 1)
            throw InvalidArgument(fmt::format("--points must be positive, got {}", points));
        if (points == 1) {
            out.push_back(a);
            continue;
        }
        if (spacing == Spacing::log && !(a > 0 && b > 0))
            throw InvalidArgument(fmt::format("log spacing needs a positive range, got '{}'", item));
        for (int i = 0; i < points; ++i) {
            const double s = static_cast<double>(i) / (points - 1);
            double v = spacing == Spacing::lin ? a + (b - a) * s : std::exp(std::log(a) + (std::log(b) - std::log(a)) * s);
            if (i == points - 1)
                v = b;
            out.push_back(v);
        }
    }
    return out;
}

std::vector<int> parse_int_list(const std::string& spec)
{
    std::vector<int> out;
    for (const std::string& item : split(spec, ',')) {
        const auto dots = item.find("..");
        if (dots == std::string::npos) {
            out.push_back(parse_int(item));
            continue;
        }
        const int a = parse_int(item.substr(0, dots)), b = parse_int(item.substr(dots + 2));
        if (b < a)
            throw InvalidArgument(fmt::format("empty integer range '{}'", item));
        for (int v = a; v <= b; ++v)
            out.push_back(v);
    }
    return out;
}

cplx GammaSpec::resolve(double t) const
{
    return optimal ? cplx(optimal_gamma(t)) : value;
}

GammaSpec parse_gamma(const std::string& spec)
{
    std::string s;
    for (const char c : spec)
        if (!std::isspace(static_cast<unsigned char>(c)))
            s += c;
    GammaSpec g;
    g.text = s;
    if (s == "gamma_o") {
        g.optimal = true;
        return g;
    }
    if (s.empty())
        throw InvalidArgument("empty gamma");
    if (s.front() == '(' && s.back() == ')') {
        const auto parts = split(s.substr(1, s.size() - 2), ',');
        if (parts.size() != 2)
            throw InvalidArgument(fmt::format("bad complex gamma '{}'", spec));
        g.value = {parse_double(parts[0]), parse_double(parts[1])};
        return g;
    }
    if (s.back() == 'i') {
        const std::string body = s.substr(0, s.size() - 1);
        std::size_t cut = std::string::npos;
        for (std::size_t p = body.size(); p-- > 1;) {
            if ((body[p] == '+' || body[p] == '-') && body[p - 1] != 'e' && body[p - 1] != 'E') {
                cut = p;
                break;
            }
        }
        if (cut == std::string::npos)
            g.value = {0, parse_coefficient(body)};
        else
            g.value = {parse_double(body.substr(0, cut)), parse_coefficient(body.substr(cut))};
        return g;
    }
    if (const auto slash = s.find('/'); slash != std::string::npos) {
        const double q = parse_double(s.substr(slash + 1));
        if (q == 0)
            throw InvalidArgument(fmt::format("zero denominator in gamma '{}'", spec));
        g.value = parse_double(s.substr(0, slash)) / q;
        return g;
    }
    g.value = parse_double(s);
    return g;
}

int Constraint::resolve_n(double k) const
{
    const double x = kind == Kind::kh ? k / c : std::sqrt(k * k * k / c);
    const double n = std::ceil(x * (1 - 1e-12));
    if (!(n < 1e8))
        throw InvalidArgument(fmt::format("constraint gives an unreasonable mesh for k = {}", k));
    return std::max(2, static_cast<int>(n));
}

Constraint parse_constraint(const std::string& spec)
{
    std::string s;
    for (const char c : spec)
        if (!std::isspace(static_cast<unsigned char>(c)) && c != '^')
            s += c;
    const auto eq = s.find('=');
    if (eq == std::string::npos)
        throw InvalidArgument(fmt::format("constraint '{}' must look like kh=c or k3h2=c", spec));
    const std::string lhs = s.substr(0, eq);
    Constraint out{};
    if (lhs == "kh")
        out.kind = Constraint::Kind::kh;
    else if (lhs == "k3h2")
        out.kind = Constraint::Kind::k3h2;
    else
        throw InvalidArgument(fmt::format("unknown constraint '{}'", lhs));
    out.c = parse_double(s.substr(eq + 1));
    if (!(out.c > 0) || !std::isfinite(out.c))
        throw InvalidArgument(fmt::format("constraint value must be positive, got '{}'", s.substr(eq + 1)));
    return out;
}

std::function<cplx(double)> compile_expression(const std::string& text)
{
    return ExpressionParser(text).parse();
}

RhsSpec parse_rhs(const std::string& spec)
{
    if (trim(spec) == "neg-one")
        return RhsSpec::constant_neg_one();
    return RhsSpec::function(compile_expression(spec), trim(spec));
}

std::string format_real(double v)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    if (v == 0)
        v = 0; // no "-0" in tables
    return fmt::format("{:.16e}", v);
}

void Table::add_row(std::vector<std::string> row)
{
    if (row.size() != header_.size())
        throw std::logic_error("table row width does not match header");
    rows_.push_back(std::move(row));
}

const std::string& Table::cell(std::size_t row, const std::string& column) const
{
    const auto it = std::find(header_.begin(), header_.end(), column);
    if (it == header_.end())
        throw std::out_of_range("no column " + column);
    return rows_.at(row)[static_cast<std::size_t>(it - header_.begin())];
}

void Table::write(std::ostream& out, Format format) const
{
    const char sep = format == Format::csv ? ',' : '\t';
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i)
                out << sep;
            out << cells[i];
        }
        out << '\n';
    };
    line(header_);
    for (const auto& r : rows_)
        line(r);
}

SolveOutput cmd_solve(const RunConfig& config)
{
    if (config.k.size() != 1)
        throw InvalidArgument("solve takes exactly one wavenumber");
    if (config.gamma.size() != 1)
        throw InvalidArgument("solve takes exactly one gamma");
    if (config.constraint && !config.n.empty())
        throw InvalidArgument("--n and --constraint are mutually exclusive");
    const double k = config.k.front();
    int n = 0;
    if (config.constraint)
        n = config.constraint->resolve_n(k);
    else if (config.n.size() == 1)
        n = config.n.front();
    else
        throw InvalidArgument("solve needs one --n or a --constraint");
    if (!(k > 0))
        throw InvalidArgument(fmt::format("wavenumber must be positive, got {}", k));
    if (n < 2)
        throw InvalidArgument(fmt::format("need at least 2 elements, got {}", n));

    const cplx gamma = config.gamma.front().resolve(k / n);
    const Problem p = Problem::make(k, n, gamma, parse_rhs(config.rhs), config.boundary_penalty);
    spdlog::info("solve k={} n={} gamma=({}, {}) rhs={}", k, n, gamma.real(), gamma.imag(), p.rhs().label());

    const DiscreteSolution uh = solve_cip(p);
    const ExactSolution u(p);
    const ErrorReport r = error_report(p, u, uh);

    SolveOutput out{Table({"x", "re_uh", "im_uh", "re_u", "im_u"}),
                    Table({"k", "n", "t", "gamma_re", "gamma_im", "l2_error", "h1_error", "jump_term", "norm_1h_error",
                           "best_h1_error", "exact_h1", "rhs_norm", "e_ba", "e_c", "ratio", "solution_norm_1h"})};
    auto add = [&](double x, cplx vh) {
        const cplx ve = u.u(x);
        out.solution.add_row({format_real(x), format_real(vh.real()), format_real(vh.imag()), format_real(ve.real()),
                              format_real(ve.imag())});
    };
    if (config.samples > 0) {
        for (int s = 0; s <= config.samples; ++s) {
            const double x = static_cast<double>(s) / config.samples;
            add(x, uh(x));
        }
    } else {
        for (int j = 0; j <= n; ++j)
            add(p.mesh().node(j), uh.node(j));
    }
    out.report.add_row({format_real(k), std::to_string(n), format_real(p.t()), format_real(gamma.real()),
                        format_real(gamma.imag()), format_real(r.l2_error), format_real(r.h1_semi_error),
                        format_real(r.jump_term), format_real(r.norm_1h_error), format_real(r.best_h1_error),
                        format_real(r.exact_h1), format_real(r.rhs_norm), format_real(r.e_ba), format_real(r.e_c),
                        format_optional(r.ratio), format_real(r.solution_norm_1h)});
    spdlog::info("e_ba={:.3e} e_c={:.3e}", r.e_ba, r.e_c);
    return out;
}

Table cmd_dispersion(const RunConfig& config)
{
    if (config.t.empty())
        throw InvalidArgument("dispersion needs at least one t");
    Table table({"gamma_spec", "t", "gamma", "cos_t", "cos_th_minus", "cos_th_plus", "t_h_minus", "rel_phase_error",
                 "propagating", "t_c"});
    for (const GammaSpec& spec : config.gamma) {
        for (const double t : config.t) {
            if (!(t > 0))
                throw InvalidArgument(fmt::format("t must be positive, got {}", t));
            const cplx gc = spec.resolve(t);
            if (gc.imag() != 0)
                throw InvalidArgument(fmt::format("dispersion needs a real gamma, got '{}'", spec.text));
            const double g = gc.real();
            const double tc = g >= -0.25 ? cutoff_frequency(g) : nan;
            std::vector<std::string> row{spec.text, format_real(t), format_real(g), format_real(std::cos(t))};
            try {
                const DispersionResult d = dispersion_roots(t, g);
                row.insert(row.end(), {format_real(d.cos_minus), format_real(d.cos_plus.value_or(nan)),
                                       format_real(d.t_h_minus), format_real(std::abs(d.t_h_minus - t) / t),
                                       d.propagating ? "1" : "0", format_real(tc)});
            } catch (const Unsupported& e) {
                spdlog::debug("no real roots at t={} gamma={}: {}", t, g, e.what());
                row.insert(row.end(), {"nan", "nan", "nan", "nan", "0", format_real(tc)});
            }
            table.add_row(std::move(row));
        }
    }
    return table;
}

Table cmd_sweep(const RunConfig& config)
{
    if (config.k.empty())
        throw InvalidArgument("sweep needs at least one wavenumber");
    if (config.gamma.empty())
        throw InvalidArgument("sweep needs a gamma");
    if (config.constraint && !config.n.empty())
        throw InvalidArgument("--n and --constraint are mutually exclusive");
    if (config.dof_scan && config.constraint)
        throw InvalidArgument("--dof-scan and --constraint are mutually exclusive");
    if (!config.dof_scan && !config.constraint && config.n.empty())
        throw InvalidArgument("sweep needs --constraint, --n or --dof-scan");

    struct Point {
        std::size_t gamma_index;
        double k;
        int n;
    };
    std::vector<double> ks = config.k;
    std::sort(ks.begin(), ks.end());
    std::vector<Point> points;
    for (std::size_t gi = 0; gi < config.gamma.size(); ++gi) {
        for (const double k : ks) {
            if (!(k > 0))
                throw InvalidArgument(fmt::format("wavenumber must be positive, got {}", k));
            std::vector<int> ns;
            if (config.constraint) {
                ns.push_back(config.constraint->resolve_n(k));
            } else if (!config.n.empty()) {
                ns = config.n;
            } else {
                const double nc = predicted_critical_dof(config.gamma[gi], k);
                const int top = static_cast<int>(std::ceil(std::max(20.0, std::isfinite(nc) ? 3 * nc : 4 * k)));
                for (int n = 2; n <= top; ++n)
                    ns.push_back(n);
            }
            std::sort(ns.begin(), ns.end());
            for (const int n : ns) {
                if (n < 2)
                    throw InvalidArgument(fmt::format("need at least 2 elements, got {}", n));
                points.push_back({gi, k, n});
            }
        }
    }

    const RhsSpec rhs = parse_rhs(config.rhs);
    std::vector<std::vector<std::string>> rows(points.size());
    std::vector<std::exception_ptr> errors(points.size());
    parallel_for(points.size(), config.jobs, [&](std::size_t i) {
        const Point& pt = points[i];
        const GammaSpec& spec = config.gamma[pt.gamma_index];
        try {
            const cplx g = spec.resolve(pt.k / pt.n);
            const Problem p = Problem::make(pt.k, pt.n, g, rhs, config.boundary_penalty);
            const ErrorReport r = full_report(p);
            spdlog::debug("k={} n={} e_c={:.3e}", pt.k, pt.n, r.e_c);
            rows[i] = {spec.text,
                       format_real(pt.k),
                       std::to_string(pt.n),
                       format_real(p.t()),
                       format_real(g.real()),
                       format_real(g.imag()),
                       format_real(r.e_ba),
                       format_real(r.e_c),
                       format_optional(r.ratio),
                       format_real(r.h1_semi_error),
                       format_real(r.norm_1h_error),
                       format_real(r.solution_norm_1h),
                       format_real(r.rhs_norm),
                       format_real(predicted_critical_dof(spec, pt.k))};
        } catch (...) {
            errors[i] = std::current_exception();
        }
    });
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (errors[i]) {
            spdlog::error("sweep point k={} n={} failed", points[i].k, points[i].n);
            std::rethrow_exception(errors[i]);
        }
    }

    Table table({"gamma_spec", "k", "n", "t", "gamma_re", "gamma_im", "e_ba", "e_c", "ratio", "h1_error",
                 "norm_1h_error", "solution_norm_1h", "rhs_norm", "n_c"});
    for (auto& r : rows)
        table.add_row(std::move(r));
    spdlog::info("sweep finished: {} points", points.size());
    return table;
}

bool cmd_verify(const RunConfig& config, std::ostream& out)
{
    VerificationOptions opts;
    opts.seed = config.seed;
    opts.perturb_assembly = config.inject_fault;
    const auto results = run_verification(opts);
    bool all = true;
    for (const CheckResult& r : results) {
        out << fmt::format("{:<4}  {:<46}  {}\n", r.passed ? "PASS" : "FAIL", r.name, r.detail);
        all = all && r.passed;
    }
    out << fmt::format("{} of {} checks passed\n",
                       std::count_if(results.begin(), results.end(), [](const CheckResult& r) { return r.passed; }),
                       results.size());
    return all;
}

} // namespace hcip::cli
