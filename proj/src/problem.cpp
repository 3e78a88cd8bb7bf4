#include "helmholtz_cip/problem.hpp"

#include <cmath>
#include <fmt/format.h>

namespace hcip {

RhsSpec RhsSpec::constant_neg_one()
{
    return RhsSpec{};
}

RhsSpec RhsSpec::function(Function f, std::string label)
{
    if (!f)
        throw InvalidArgument("rhs function is empty");
    RhsSpec r;
    r.f_ = std::move(f);
    r.label_ = std::move(label);
    return r;
}

UniformMesh::UniformMesh(int n) : n_(n), h_(1.0 / n), nodes_(mesh_nodes(n)) {}

std::vector<double> mesh_nodes(int n)
{
    if (n < 1)
        throw InvalidArgument(fmt::format("mesh needs at least one element, got {}", n));
    std::vector<double> x(static_cast<std::size_t>(n) + 1);
    for (int j = 0; j <= n; ++j)
        x[static_cast<std::size_t>(j)] = static_cast<double>(j) / n;
    return x;
}

Problem::Problem(double k, cplx gamma, RhsSpec rhs, bool bp, std::shared_ptr<const UniformMesh> mesh)
    : k_(k), t_(k * mesh->h()), gamma_(gamma), rhs_(std::move(rhs)), include_boundary_penalty_(bp),
      mesh_(std::move(mesh))
{
}

Problem Problem::make(double k, int n, cplx gamma, RhsSpec rhs, bool include_boundary_penalty)
{
    if (!std::isfinite(k) || k <= 0)
        throw InvalidArgument(fmt::format("wavenumber must be positive and finite, got {}", k));
    if (n < 2)
        throw InvalidArgument(fmt::format("element count must be >= 2, got {}", n));
    if (!std::isfinite(gamma.real()) || !std::isfinite(gamma.imag()))
        throw InvalidArgument("penalty parameter must be finite");
    return Problem(k, gamma, std::move(rhs), include_boundary_penalty, std::make_shared<const UniformMesh>(n));
}

double Problem::real_gamma() const
{
    if (std::abs(gamma_.imag()) > 1e-14)
        throw Unsupported(fmt::format("analysis requires a real penalty, got Im gamma = {}", gamma_.imag()));
    return gamma_.real();
}

Problem Problem::with_boundary_penalty(bool flag) const
{
    Problem p = *this;
    p.include_boundary_penalty_ = flag;
    return p;
}

bool in_analysis_regime(double t, double gamma)
{
    return t > 0 && t <= 1 && std::abs(gamma) <= 1.0 / 6.0;
}

} // namespace hcip
