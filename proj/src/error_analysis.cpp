#include "helmholtz_cip/error_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>

#include "helmholtz_cip/assembly.hpp"
#include "helmholtz_cip/banded_solver.hpp"
#include "helmholtz_cip/quadrature.hpp"

namespace hcip {

namespace {

template <class F>
double element_integral(F&& f, double a, double b, QuadratureLevel level)
{
    if (level == QuadratureLevel::refined)
        return quad::gauss<20>(f, a, b);
    return quad::gauss<10>(f, a, b);
}

void require_imaginary_negative(const Problem& problem)
{
    const cplx g = problem.gamma();
    if (std::abs(g.real()) > 1e-14 || !(g.imag() < 0))
        throw Unsupported(fmt::format("identity requires gamma = i*gamma_Im with gamma_Im < 0, got ({}, {})",
                                      g.real(), g.imag()));
}

double jstab_lhs(const Problem& problem, std::span<const cplx> v)
{
    const double k = problem.k();
    return std::abs(penalty_form(problem, v, v)) + k * std::norm(v.back());
}

} // namespace

DiscreteSolution::DiscreteSolution(std::vector<cplx> values, double h) : values_(std::move(values)), h_(h)
{
    if (values_.empty())
        throw InvalidArgument("discrete solution needs at least one nodal value");
}

std::vector<cplx> DiscreteSolution::slopes() const
{
    std::vector<cplx> s(values_.size());
    for (int j = 1; j <= n(); ++j)
        s[static_cast<std::size_t>(j - 1)] = slope(j);
    return s;
}

cplx DiscreteSolution::operator()(double x) const
{
    const int j = std::clamp(static_cast<int>(std::ceil(x / h_)), 1, n());
    const double x0 = (j - 1) * h_;
    return node(j - 1) + slope(j) * (x - x0);
}

DiscreteSolution nodal_interpolant(const ExactSolution& exact, const UniformMesh& mesh)
{
    std::vector<cplx> u(static_cast<std::size_t>(mesh.elements()));
    for (int j = 1; j <= mesh.elements(); ++j)
        u[static_cast<std::size_t>(j - 1)] = exact.u(mesh.node(j));
    return DiscreteSolution(std::move(u), mesh.h());
}

double h1_semi_error(const ExactSolution& exact, const DiscreteSolution& uh, QuadratureLevel level)
{
    double sum = 0;
    for (int j = 1; j <= uh.n(); ++j) {
        const cplx s = uh.slope(j);
        sum += element_integral([&](double x) { return std::norm(exact.du(x) - s); }, (j - 1) * uh.h(), j * uh.h(),
                                level);
    }
    return std::sqrt(sum);
}

double l2_error(const ExactSolution& exact, const DiscreteSolution& uh, QuadratureLevel level)
{
    double sum = 0;
    for (int j = 1; j <= uh.n(); ++j) {
        const double x0 = (j - 1) * uh.h();
        const cplx u0 = uh.node(j - 1), s = uh.slope(j);
        sum += element_integral([&](double x) { return std::norm(exact.u(x) - (u0 + s * (x - x0))); }, x0, j * uh.h(),
                                level);
    }
    return std::sqrt(sum);
}

double exact_h1_semi(const ExactSolution& exact, const UniformMesh& mesh)
{
    double sum = 0;
    for (int j = 1; j <= mesh.elements(); ++j)
        sum += quad::gauss10([&](double x) { return std::norm(exact.du(x)); }, mesh.node(j - 1), mesh.node(j));
    return std::sqrt(sum);
}

double jump_term_squared(std::span<const cplx> slopes, double h, cplx gamma)
{
    double sum = 0;
    for (std::size_t j = 0; j + 1 < slopes.size(); ++j)
        sum += std::abs(gamma) * h * std::norm(slopes[j] - slopes[j + 1]);
    return sum;
}

double norm_1h(std::span<const cplx> slopes, double h, cplx gamma)
{
    double grad = 0;
    for (const cplx s : slopes)
        grad += h * std::norm(s);
    return std::sqrt(grad + jump_term_squared(slopes, h, gamma));
}

JstabSides jstab_sides(const Problem& problem, std::span<const cplx> v)
{
    require_imaginary_negative(problem);
    const Eigen::MatrixXcd L = assemble_dense_by_quadrature(problem);
    const Eigen::Map<const Eigen::VectorXcd> x(v.data(), static_cast<Eigen::Index>(v.size()));
    if (x.size() != L.rows())
        throw InvalidArgument("coefficient vector length does not match n");
    // L_{ij} = h a_h(phi_j, phi_i), so a_h(v, v) = v^H L v / h.
    const cplx a = x.dot(L * x) / problem.h();
    return {jstab_lhs(problem, v), -a.imag()};
}

double jstab_identity_residual(const Problem& problem, std::span<const cplx> v)
{
    return jstab_sides(problem, v).residual();
}

JstabSides jstab_solution_sides(const Problem& problem, std::span<const cplx> uh)
{
    require_imaginary_negative(problem);
    const std::vector<cplx> F = assemble_load(problem);
    if (F.size() != uh.size())
        throw InvalidArgument("solution length does not match n");
    cplx f_uh{};
    for (std::size_t i = 0; i < F.size(); ++i)
        f_uh += F[i] * std::conj(uh[i]);
    return {jstab_lhs(problem, uh), -f_uh.imag()};
}

double exact_penalty_functional(const ExactSolution& exact)
{
    const Problem& p = exact.problem();
    const auto& mesh = p.mesh();
    const double k = p.k();
    double sum = 0;
    for (int j = 1; j < mesh.elements(); ++j) {
        const double x = mesh.node(j);
        const cplx jump = exact.du(std::nextafter(x, 0.0)) - exact.du(std::nextafter(x, 1.0));
        sum += p.h() * std::norm(jump);
    }
    if (p.include_boundary_penalty()) {
        const ExactValue at1 = exact.eval(1.0);
        sum += p.h() * std::norm(at1.du - cplx(0, k) * at1.u);
    }
    return std::abs(p.gamma()) * sum;
}

DiscreteSolution solve_cip(const Problem& problem)
{
    const BandedMatrix L = assemble_matrix(problem);
    std::vector<cplx> rhs = assemble_load(problem);
    for (cplx& v : rhs)
        v *= problem.h();
    const BandedFactorization lu = BandedFactorization::factor(L);
    return DiscreteSolution(lu.solve(rhs), problem.h());
}

ErrorReport error_report(const Problem& problem, const ExactSolution& exact, const DiscreteSolution& uh)
{
    ErrorReport r{};
    const DiscreteSolution ui = nodal_interpolant(exact, problem.mesh());
    const std::vector<cplx> slopes = uh.slopes();
    r.l2_error = l2_error(exact, uh);
    r.h1_semi_error = h1_semi_error(exact, uh);
    // u' is continuous, so [(u - u_h)']_j = -[u_h']_j.
    r.jump_term = std::sqrt(jump_term_squared(slopes, problem.h(), problem.gamma()));
    r.norm_1h_error = std::hypot(r.h1_semi_error, r.jump_term);
    r.best_h1_error = h1_semi_error(exact, ui);
    r.exact_h1 = exact_h1_semi(exact, problem.mesh());
    r.rhs_norm = rhs_l2_norm(problem);
    r.e_ba = r.best_h1_error / r.exact_h1;
    r.e_c = r.h1_semi_error / r.exact_h1;
    if (r.e_ba >= 1e-15)
        r.ratio = r.e_c / r.e_ba;
    r.solution_norm_1h = norm_1h(slopes, problem.h(), problem.gamma());
    return r;
}

ErrorReport full_report(const Problem& problem)
{
    const ExactSolution exact(problem);
    return error_report(problem, exact, solve_cip(problem));
}

} // namespace hcip
