#include "helmholtz_cip/verification.hpp"

#include <cmath>
#include <functional>
#include <random>
#include <fmt/format.h>

#include "helmholtz_cip/assembly.hpp"
#include "helmholtz_cip/banded_solver.hpp"
#include "helmholtz_cip/discrete_greens.hpp"
#include "helmholtz_cip/dispersion.hpp"
#include "helmholtz_cip/error_analysis.hpp"
#include "helmholtz_cip/exact.hpp"

namespace hcip {

namespace {

using Rng = std::mt19937_64;

double uniform(Rng& rng, double a, double b)
{
    return std::uniform_real_distribution<double>(a, b)(rng);
}

std::vector<cplx> random_vector(Rng& rng, int n)
{
    std::vector<cplx> v(static_cast<std::size_t>(n));
    for (cplx& x : v)
        x = {uniform(rng, -1, 1), uniform(rng, -1, 1)};
    return v;
}

CheckResult check(std::string name, const std::function<std::string()>& body)
{
    try {
        std::string failure = body();
        return {std::move(name), failure.empty(), failure.empty() ? "ok" : failure};
    } catch (const std::exception& e) {
        return {std::move(name), false, fmt::format("exception: {}", e.what())};
    }
}

std::string mesh_nodes_check()
{
    for (int n : {2, 3, 10, 257}) {
        const auto x = mesh_nodes(n);
        if (static_cast<int>(x.size()) != n + 1 || x.front() != 0.0 || x.back() != 1.0)
            return fmt::format("bad endpoints for n = {}", n);
        for (int j = 1; j <= n; ++j)
            if (!(x[j] > x[j - 1]) || std::abs(x[j] - x[j - 1] - 1.0 / n) > 1e-15)
                return fmt::format("bad spacing for n = {} at j = {}", n, j);
    }
    return {};
}

std::string exact_boundary_check()
{
    for (double k : {1.0, 2.0, 5.0, 10.0, 50.0, 100.0, 1000.0}) {
        const ExactValue a = exact_constant_f(k, 0.0), b = exact_constant_f(k, 1.0);
        if (std::abs(a.u) != 0.0)
            return fmt::format("u(0) != 0 for k = {}", k);
        if (std::abs(b.du - cplx(0, k) * b.u) > 1e-10 * (1 + std::abs(b.u)))
            return fmt::format("Robin residual too large for k = {}", k);
    }
    return {};
}

std::string closed_vs_quadrature_check(Rng& rng)
{
    for (double k : {1.0, 10.0, 100.0}) {
        const Problem p = Problem::make(k, 10, 0.0);
        for (int s = 0; s < 10; ++s) {
            const double x = uniform(rng, 0, 1);
            const ExactValue a = exact_constant_f(k, x), b = exact_by_quadrature(p, x);
            const double err = std::max(std::abs(a.u - b.u), std::abs(a.du - b.du));
            if (err > 1e-9)
                return fmt::format("k = {}, x = {}: difference {:.3e}", k, x, err);
        }
    }
    return {};
}

std::string regularity_check()
{
    for (double k : {1.0, 2.0, 5.0, 10.0, 50.0, 100.0}) {
        const RegularityReport r = check_regularity_bounds(Problem::make(k, 10, 0.0));
        if (!r.holds(1e-8))
            return fmt::format("k = {}: ratios {:.6f} {:.6f} {:.6f}", k, r.l2_ratio, r.h1_ratio, r.h2_ratio);
    }
    return {};
}

std::string assembly_oracle_check(Rng& rng, bool perturb)
{
    for (int c = 0; c < 20; ++c) {
        const int n = 2 + static_cast<int>(rng() % 40);
        const double k = uniform(rng, 0.5, 50);
        const cplx g{uniform(rng, -0.2, 0.2), uniform(rng, -0.2, 0.2)};
        for (bool flag : {true, false}) {
            const Problem p = Problem::make(k, n, g, RhsSpec::constant_neg_one(), flag);
            Eigen::MatrixXcd banded = assemble_matrix(p).to_dense();
            if (perturb && c == 0)
                banded(0, 0) += 1e-6;
            const double err = (banded - assemble_dense_by_quadrature(p)).cwiseAbs().maxCoeff();
            if (err > 1e-13)
                return fmt::format("n = {}, k = {:.3f}, flag = {}: max difference {:.3e}", n, k, flag, err);
        }
    }
    return {};
}

std::string gamma_linearity_check(Rng& rng)
{
    for (int c = 0; c < 10; ++c) {
        const int n = 5 + static_cast<int>(rng() % 30);
        const double k = uniform(rng, 1, 30);
        const cplx g{uniform(rng, -0.2, 0.2), uniform(rng, -0.2, 0.2)};
        for (bool flag : {true, false}) {
            auto mat = [&](cplx gg) {
                return assemble_matrix(Problem::make(k, n, gg, RhsSpec::constant_neg_one(), flag)).to_dense();
            };
            const Eigen::MatrixXcd d1 = mat(g) - mat(0.0), d2 = mat(2.0 * g) - mat(0.0);
            const double err = (d2 - 2.0 * d1).cwiseAbs().maxCoeff();
            if (err > 1e-13)
                return fmt::format("nonlinear gamma dependence {:.3e}", err);
        }
    }
    return {};
}

std::string jstab_check(Rng& rng)
{
    const Problem p = Problem::make(10, 20, cplx(0, -0.1));
    for (int c = 0; c < 20; ++c) {
        const auto v = random_vector(rng, p.n());
        double vn = 0;
        for (const cplx x : v)
            vn += std::norm(x);
        const double res = jstab_identity_residual(p, v);
        if (res > 1e-12 * vn)
            return fmt::format("residual {:.3e} for |v|^2 = {:.3e}", res, vn);
    }
    return {};
}

std::string solver_oracle_check(Rng& rng)
{
    for (int c = 0; c < 20; ++c) {
        const int n = 1 + static_cast<int>(rng() % 120);
        BandedMatrix a(n);
        for (int i = 0; i < n; ++i)
            for (int j = std::max(0, i - 2); j <= std::min(n - 1, i + 2); ++j)
                a.set(i, j, {uniform(rng, -1, 1), uniform(rng, -1, 1)});
        const auto b = random_vector(rng, n);
        const auto x = BandedFactorization::factor(a).solve(b);
        const Eigen::VectorXcd ref = a.to_dense().partialPivLu().solve(
            Eigen::Map<const Eigen::VectorXcd>(b.data(), n));
        double err = 0, scale = 0;
        for (int i = 0; i < n; ++i) {
            err = std::max(err, std::abs(x[i] - ref(i)));
            scale = std::max(scale, std::abs(ref(i)));
        }
        const auto ax = a.multiply(x);
        double res = 0, xn = 0, bn = 0;
        for (int i = 0; i < n; ++i) {
            res = std::max(res, std::abs(ax[i] - b[i]));
            xn = std::max(xn, std::abs(x[i]));
            bn = std::max(bn, std::abs(b[i]));
        }
        if (res > 1e-10 * (a.norm_inf() * xn + bn))
            return fmt::format("residual bound violated at n = {}", n);
        if (err > 1e-8 * scale)
            return fmt::format("dense oracle mismatch {:.3e} at n = {}", err / scale, n);
    }
    return {};
}

std::string dispersion_check()
{
    for (int it = 1; it <= 10; ++it) {
        const double t = 0.1 * it;
        for (double g : {-1.0 / 6, -1.0 / 12, -0.05, 0.0, 0.05, 1.0 / 12, 1.0 / 6}) {
            const DispersionResult d = dispersion_roots(t, g);
            if (std::abs(d.cos_minus - 1 + t * t / 2) > std::pow(t, 4) / 6)
                return fmt::format("cos bound fails at t = {}, gamma = {}", t, g);
            if (g == 0.0)
                continue;
            const double a = 1 + t * t / 6;
            const double sum = (4 * g + a) / (2 * g), prod = (2 * g + 1 - t * t / 3) / (2 * g);
            if (std::abs(d.cos_minus + *d.cos_plus - sum) > 1e-12 * std::abs(sum)
                || std::abs(d.cos_minus * *d.cos_plus - prod) > 1e-12 * std::abs(prod))
                return fmt::format("Vieta relations fail at t = {}, gamma = {}", t, g);
        }
    }
    for (int i = 1; i <= 100; ++i) {
        const double t = 0.01 * i;
        const double go = optimal_gamma(t);
        if (std::abs(dispersion_roots(t, go).cos_minus - std::cos(t)) > 1e-13)
            return fmt::format("gamma_o defining property fails at t = {}", t);
    }
    if (std::abs(cutoff_frequency(-1.0 / 12) - std::sqrt(8.0)) > 1e-14
        || std::abs(cutoff_frequency(0.0) - std::sqrt(12.0)) > 1e-14)
        return "cutoff frequencies";
    return {};
}

std::string greens_check()
{
    for (int n : {10, 40}) {
        for (double t : {0.5, 1.0}) {
            for (double g : {-1.0 / 12, -0.08, 1.0 / 12}) {
                const Problem p = Problem::make(n * t, n, g, RhsSpec::constant_neg_one(), false);
                const auto lu = BandedFactorization::factor(assemble_matrix(p));
                const DiscreteGreensFunction gh(t, g, n);
                for (int i = 0; i < 4; ++i)
                    if (characteristic_residual(gh.system(), i) > 1e-10)
                        return fmt::format("root {} residual at t = {}, gamma = {}", i + 1, t, g);
                for (int m = 1; m <= n; ++m) {
                    const auto col = lu.inverse_column(m - 1);
                    double err = 0, scale = 0;
                    for (int j = 1; j <= n; ++j) {
                        err = std::max(err, std::abs(gh.G(j, m) - col[j - 1]));
                        scale = std::max(scale, std::abs(col[j - 1]));
                    }
                    if (err > 1e-8 * scale)
                        return fmt::format("column {} mismatch {:.3e} (n = {}, t = {}, gamma = {})", m, err / scale, n,
                                           t, g);
                }
            }
        }
    }
    return {};
}

std::string report_identity_check()
{
    for (double g : {0.0, -1.0 / 12, 0.1}) {
        const ErrorReport r = full_report(Problem::make(10, 20, g));
        const double lhs = r.norm_1h_error * r.norm_1h_error;
        const double rhs = r.h1_semi_error * r.h1_semi_error + r.jump_term * r.jump_term;
        if (std::abs(lhs - rhs) > 1e-12 * rhs)
            return "norm_1h^2 != h1^2 + jump^2";
        if (r.e_ba > r.e_c * (1 + 1e-12))
            return "interpolant is not the best approximation";
    }
    return {};
}

} // namespace

std::vector<CheckResult> run_verification(const VerificationOptions& options)
{
    Rng rng(options.seed);
    std::vector<CheckResult> out;
    out.push_back(check("core_model: mesh nodes", mesh_nodes_check));
    out.push_back(check("exact_reference: boundary conditions", exact_boundary_check));
    out.push_back(check("exact_reference: closed form vs quadrature", [&] { return closed_vs_quadrature_check(rng); }));
    out.push_back(check("exact_reference: a priori bounds", regularity_check));
    out.push_back(check("cip_assembly: banded vs dense oracle",
                        [&] { return assembly_oracle_check(rng, options.perturb_assembly); }));
    out.push_back(check("cip_assembly: gamma linearity", [&] { return gamma_linearity_check(rng); }));
    out.push_back(check("cip_assembly: Jstab identity", [&] { return jstab_check(rng); }));
    out.push_back(check("banded_solver: dense oracle and residual", [&] { return solver_oracle_check(rng); }));
    out.push_back(check("dispersion: roots, gamma_o, cutoff", dispersion_check));
    out.push_back(check("discrete_greens: roots and inverse columns", greens_check));
    out.push_back(check("error_analysis: report identities", report_identity_check));
    return out;
}

} // namespace hcip
