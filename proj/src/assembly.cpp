#include "helmholtz_cip/assembly.hpp"

#include <cmath>
#include <fmt/format.h>

#include "helmholtz_cip/quadrature.hpp"

namespace hcip {

namespace {

constexpr cplx I{0.0, 1.0};

void require_order(std::span<const cplx> u, int n)
{
    if (static_cast<int>(u.size()) != n)
        throw InvalidArgument(fmt::format("coefficient vector has length {}, expected {}", u.size(), n));
}

// Nodal value j (0..n) of the piecewise-linear function with coefficients u_1..u_n.
cplx nodal(std::span<const cplx> u, int j)
{
    return j == 0 ? cplx{} : u[static_cast<std::size_t>(j - 1)];
}

} // namespace

StencilCoeffs stencil_coeffs(double t, cplx gamma)
{
    const double t2 = t * t;
    return {t, -1.0 - 4.0 * gamma - t2 / 6.0, 1.0 + 3.0 * gamma - t2 / 3.0};
}

BandedMatrix::BandedMatrix(int order) : n_(order), diag_(static_cast<std::size_t>(order) * 5)
{
    if (order < 1)
        throw InvalidArgument("banded matrix order must be positive");
}

cplx BandedMatrix::operator()(int i, int j) const
{
    if (i < 0 || j < 0 || i >= n_ || j >= n_ || std::abs(i - j) > bandwidth)
        return {};
    return diag_[static_cast<std::size_t>(i * 5 + (j - i + 2))];
}

cplx& BandedMatrix::slot(int i, int j)
{
    if (i < 0 || j < 0 || i >= n_ || j >= n_ || std::abs(i - j) > bandwidth)
        throw InvalidArgument(fmt::format("entry ({}, {}) outside the pentadiagonal band", i, j));
    return diag_[static_cast<std::size_t>(i * 5 + (j - i + 2))];
}

void BandedMatrix::set(int i, int j, cplx value)
{
    slot(i, j) = value;
}

void BandedMatrix::add(int i, int j, cplx value)
{
    slot(i, j) += value;
}

std::vector<cplx> BandedMatrix::multiply(std::span<const cplx> x) const
{
    require_order(x, n_);
    std::vector<cplx> y(static_cast<std::size_t>(n_));
    for (int i = 0; i < n_; ++i) {
        cplx sum{};
        for (int j = std::max(0, i - 2); j <= std::min(n_ - 1, i + 2); ++j)
            sum += (*this)(i, j) * x[static_cast<std::size_t>(j)];
        y[static_cast<std::size_t>(i)] = sum;
    }
    return y;
}

double BandedMatrix::norm_inf() const
{
    double best = 0;
    for (int i = 0; i < n_; ++i) {
        double row = 0;
        for (int j = i - 2; j <= i + 2; ++j)
            row += std::abs((*this)(i, j));
        best = std::max(best, row);
    }
    return best;
}

Eigen::MatrixXcd BandedMatrix::to_dense() const
{
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n_, n_);
    for (int i = 0; i < n_; ++i)
        for (int j = std::max(0, i - 2); j <= std::min(n_ - 1, i + 2); ++j)
            a(i, j) = (*this)(i, j);
    return a;
}

BandedMatrix BandedMatrix::from_dense(const Eigen::MatrixXcd& a)
{
    const int n = static_cast<int>(a.rows());
    BandedMatrix b(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (std::abs(i - j) <= bandwidth)
                b.set(i, j, a(i, j));
            else if (a(i, j) != cplx{})
                throw InvalidArgument(fmt::format("dense entry ({}, {}) lies outside the pentadiagonal band", i, j));
        }
    return b;
}

BandedMatrix assemble_matrix(const Problem& problem)
{
    const int n = problem.n();
    // The boundary rows overlap for n < 5; the form itself is the reference there.
    if (n < 5)
        return BandedMatrix::from_dense(assemble_dense_by_quadrature(problem));

    const cplx g = problem.gamma();
    const double t = problem.t();
    const auto [tt, R, S] = stencil_coeffs(t, g);

    BandedMatrix L(n);
    for (int i = 0; i < n; ++i) {
        L.set(i, i, 2.0 * S);
        if (i + 1 < n) {
            L.set(i, i + 1, R);
            L.set(i + 1, i, R);
        }
        if (i + 2 < n) {
            L.set(i, i + 2, g);
            L.set(i + 2, i, g);
        }
    }
    // Node 0 carries no jump; node n is not an interior node.
    L.set(0, 0, 2.0 * S - g);
    L.set(n - 2, n - 2, 2.0 * S - g);
    L.set(n - 2, n - 1, R + 2.0 * g);
    L.set(n - 1, n - 2, R + 2.0 * g);
    L.set(n - 1, n - 1, S - 2.0 * g - I * t);

    if (problem.include_boundary_penalty()) {
        // h * gamma h (phi_j'(1) - i k phi_j(1)) conj(phi_i'(1) - i k phi_i(1))
        L.add(n - 1, n - 1, g * (1.0 + t * t));
        L.add(n - 2, n - 1, -g * (1.0 - I * t));
        L.add(n - 1, n - 2, -g * (1.0 + I * t));
        L.add(n - 2, n - 2, g);
    }
    return L;
}

cplx penalty_form(const Problem& problem, std::span<const cplx> u, std::span<const cplx> v)
{
    const int n = problem.n();
    require_order(u, n);
    require_order(v, n);
    const double h = problem.h();
    const double k = problem.k();
    auto slope = [&](std::span<const cplx> w, int e) { return (nodal(w, e) - nodal(w, e - 1)) / h; };

    cplx sum{};
    for (int j = 1; j <= n - 1; ++j) {
        // [w']_j = w'(x_j^-) - w'(x_j^+)
        const cplx ju = slope(u, j) - slope(u, j + 1);
        const cplx jv = slope(v, j) - slope(v, j + 1);
        sum += problem.gamma() * h * ju * std::conj(jv);
    }
    if (problem.include_boundary_penalty()) {
        const cplx ru = slope(u, n) - I * k * nodal(u, n);
        const cplx rv = slope(v, n) - I * k * nodal(v, n);
        sum += problem.gamma() * h * ru * std::conj(rv);
    }
    return sum;
}

cplx sesquilinear_form(const Problem& problem, std::span<const cplx> u, std::span<const cplx> v)
{
    const int n = problem.n();
    require_order(u, n);
    require_order(v, n);
    const double h = problem.h();
    const double k = problem.k();

    cplx stiffness{}, mass{};
    for (int e = 1; e <= n; ++e) {
        const cplx u0 = nodal(u, e - 1), u1 = nodal(u, e);
        const cplx v0 = std::conj(nodal(v, e - 1)), v1 = std::conj(nodal(v, e));
        stiffness += (u1 - u0) * (v1 - v0) / h;
        // Exact integral of the product of two linear functions over the element.
        mass += h / 6.0 * (2.0 * u0 * v0 + u0 * v1 + u1 * v0 + 2.0 * u1 * v1);
    }
    const cplx boundary = -I * k * nodal(u, n) * std::conj(nodal(v, n));
    return stiffness - k * k * mass + boundary + penalty_form(problem, u, v);
}

Eigen::MatrixXcd assemble_dense_by_quadrature(const Problem& problem)
{
    const int n = problem.n();
    Eigen::MatrixXcd a(n, n);
    std::vector<cplx> ej(static_cast<std::size_t>(n)), ei(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        std::fill(ej.begin(), ej.end(), cplx{});
        ej[static_cast<std::size_t>(j)] = 1.0;
        for (int i = 0; i < n; ++i) {
            std::fill(ei.begin(), ei.end(), cplx{});
            ei[static_cast<std::size_t>(i)] = 1.0;
            a(i, j) = problem.h() * sesquilinear_form(problem, ej, ei);
        }
    }
    return a;
}

std::vector<cplx> assemble_load(const Problem& problem)
{
    const int n = problem.n();
    const double h = problem.h();
    std::vector<cplx> F(static_cast<std::size_t>(n));
    if (problem.rhs().is_constant_neg_one()) {
        std::fill(F.begin(), F.end(), cplx(-h));
        F.back() = -h / 2.0;
        return F;
    }
    const auto& mesh = problem.mesh();
    const auto& f = problem.rhs();
    for (int e = 1; e <= n; ++e) {
        const double a = mesh.node(e - 1), b = mesh.node(e);
        // Contributions to the hats at the left and right ends of K_e.
        if (e >= 2)
            F[static_cast<std::size_t>(e - 2)] += quad::gauss10([&](double x) { return f(x) * (b - x) / h; }, a, b);
        F[static_cast<std::size_t>(e - 1)] += quad::gauss10([&](double x) { return f(x) * (x - a) / h; }, a, b);
    }
    return F;
}

} // namespace hcip
