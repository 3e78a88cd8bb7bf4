#include "helmholtz_cip/exact.hpp"

#include <cmath>
#include <fmt/format.h>

#include "helmholtz_cip/quadrature.hpp"

namespace hcip {

namespace {

constexpr cplx I{0.0, 1.0};

void require_positive_k(double k)
{
    if (!(k > 0))
        throw InvalidArgument(fmt::format("wavenumber must be positive, got {}", k));
}

ExactValue integrate_green(const Problem& p, double x, int panels)
{
    const double k = p.k();
    const auto& f = p.rhs();
    // The kernels switch branch at s = x; integrate each side separately.
    auto gu_left = [&](double s) { return greens_kernel(x, s, k) * f(s); };
    auto gd_left = [&](double s) { return derivative_kernel(x, s, k, Side::right) * f(s); };
    auto gd_right = [&](double s) { return derivative_kernel(x, s, k, Side::left) * f(s); };
    const cplx u = quad::composite_gauss10(gu_left, 0.0, x, panels) + quad::composite_gauss10(gu_left, x, 1.0, panels);
    const cplx du = quad::composite_gauss10(gd_left, 0.0, x, panels) + quad::composite_gauss10(gd_right, x, 1.0, panels);
    return {u, du};
}

} // namespace

cplx greens_kernel(double x, double s, double k)
{
    require_positive_k(k);
    if (x <= s)
        return std::sin(k * x) * std::exp(I * (k * s)) / k;
    return std::sin(k * s) * std::exp(I * (k * x)) / k;
}

cplx derivative_kernel(double x, double s, double k)
{
    if (x == s)
        throw InvalidArgument("derivative kernel is discontinuous at x = s; specify a side");
    return derivative_kernel(x, s, k, x < s ? Side::left : Side::right);
}

// Side::left evaluates the limit x -> s^- (the x < s branch).
cplx derivative_kernel(double x, double s, double k, Side side)
{
    require_positive_k(k);
    if (side == Side::left)
        return std::cos(k * x) * std::exp(I * (k * s));
    return I * std::sin(k * s) * std::exp(I * (k * x));
}

int default_quadrature_panels(double k)
{
    return std::max(64, static_cast<int>(std::ceil(8.0 * k)));
}

ExactValue exact_by_quadrature(const Problem& problem, double x, std::optional<int> panels)
{
    if (x < 0 || x > 1)
        throw InvalidArgument(fmt::format("x = {} outside [0,1]", x));
    if (panels)
        return integrate_green(problem, x, *panels);

    int p = default_quadrature_panels(problem.k());
    ExactValue coarse = integrate_green(problem, x, p);
    for (int level = 0; level < 6; ++level) {
        p *= 2;
        ExactValue fine = integrate_green(problem, x, p);
        const double scale = 1.0 + std::abs(fine.u) + std::abs(fine.du);
        if (std::abs(fine.u - coarse.u) + std::abs(fine.du - coarse.du) <= 1e-12 * scale)
            return fine;
        coarse = fine;
    }
    throw NumericalError(fmt::format("quadrature of the Green's representation did not converge at x = {}", x));
}

ExactValue exact_constant_f(double k, double x)
{
    require_positive_k(k);
    const double k2 = k * k;
    const cplx a = I * (std::exp(I * k) - 1.0) / k2;
    const double c = std::cos(k * x);
    const double s = std::sin(k * x);
    return {(1.0 - c) / k2 + a * s, s / k + a * k * c};
}

ExactSolution::ExactSolution(const Problem& problem)
    : ExactSolution(problem, problem.rhs().is_constant_neg_one() ? Source::closed_form : Source::quadrature)
{
}

ExactSolution::ExactSolution(const Problem& problem, Source source) : problem_(problem), source_(source)
{
    if (source == Source::closed_form && !problem.rhs().is_constant_neg_one())
        throw InvalidArgument("closed-form reference is only available for f == -1");
}

ExactValue ExactSolution::eval(double x) const
{
    if (source_ == Source::closed_form)
        return exact_constant_f(problem_.k(), x);
    return exact_by_quadrature(problem_, x, default_quadrature_panels(problem_.k()));
}

cplx ExactSolution::d2u(double x) const
{
    const double k = problem_.k();
    return -problem_.rhs()(x) - k * k * u(x);
}

double rhs_l2_norm(const Problem& problem)
{
    if (problem.rhs().is_constant_neg_one())
        return 1.0;
    const auto& mesh = problem.mesh();
    double sum = 0;
    for (int j = 1; j <= mesh.elements(); ++j)
        sum += quad::gauss10([&](double s) { return std::norm(problem.rhs()(s)); }, mesh.node(j - 1), mesh.node(j));
    return std::sqrt(sum);
}

RegularityReport check_regularity_bounds(const Problem& problem)
{
    const ExactSolution exact(problem);
    const double k = problem.k();
    const int panels = default_quadrature_panels(k);

    double l2 = 0, h1 = 0, h2 = 0;
    for (int p = 0; p < panels; ++p) {
        const double a = static_cast<double>(p) / panels;
        const double b = static_cast<double>(p + 1) / panels;
        l2 += quad::gauss10([&](double x) { return std::norm(exact.u(x)); }, a, b);
        h1 += quad::gauss10([&](double x) { return std::norm(exact.du(x)); }, a, b);
        h2 += quad::gauss10([&](double x) { return std::norm(exact.d2u(x)); }, a, b);
    }
    RegularityReport r{};
    r.l2_norm = std::sqrt(l2);
    r.h1_semi = std::sqrt(h1);
    r.h2_semi = std::sqrt(h2);
    r.rhs_norm = rhs_l2_norm(problem);
    r.l2_ratio = k * r.l2_norm / r.rhs_norm;
    r.h1_ratio = r.h1_semi / r.rhs_norm;
    r.h2_ratio = r.h2_semi / ((1 + k) * r.rhs_norm);
    return r;
}

} // namespace hcip
