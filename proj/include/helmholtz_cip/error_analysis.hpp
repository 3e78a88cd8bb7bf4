#pragma once

#include <optional>
#include <span>
#include <vector>

#include "helmholtz_cip/exact.hpp"

namespace hcip {

/// Continuous piecewise-linear function with u(0) = 0 and nodal values U_1..U_n.
class DiscreteSolution {
public:
    DiscreteSolution(std::vector<cplx> values, double h);

    int n() const { return static_cast<int>(values_.size()); }
    double h() const { return h_; }
    const std::vector<cplx>& values() const { return values_; }

    /// U_j for 0 <= j <= n, U_0 = 0.
    cplx node(int j) const { return j == 0 ? cplx{} : values_[static_cast<std::size_t>(j - 1)]; }
    /// Slope on K_j, 1 <= j <= n.
    cplx slope(int j) const { return (node(j) - node(j - 1)) / h_; }
    std::vector<cplx> slopes() const;
    cplx operator()(double x) const;

private:
    std::vector<cplx> values_;
    double h_;
};

enum class QuadratureLevel { standard, refined };

DiscreteSolution nodal_interpolant(const ExactSolution& exact, const UniformMesh& mesh);

/// |u - u_h|_1 by Gauss-Legendre per element (10 points; 20 when refined).
double h1_semi_error(const ExactSolution& exact, const DiscreteSolution& uh,
                     QuadratureLevel level = QuadratureLevel::standard);
double l2_error(const ExactSolution& exact, const DiscreteSolution& uh,
                QuadratureLevel level = QuadratureLevel::standard);
/// |u|_1 on the mesh of `mesh`.
double exact_h1_semi(const ExactSolution& exact, const UniformMesh& mesh);

/// sum_{j=1}^{n-1} |gamma| h |s_j - s_{j+1}|^2 for per-element slopes s.
double jump_term_squared(std::span<const cplx> slopes, double h, cplx gamma);

/// (||v'||^2 + sum |gamma| h |[v']_j|^2)^{1/2} for a piecewise-linear v.
double norm_1h(std::span<const cplx> slopes, double h, cplx gamma);

struct JstabSides {
    double lhs; ///< |J(v,v)| + k |v(1)|^2
    double rhs; ///< -Im a_h(v,v), or -Im (f, v) for a discrete solution
    double residual() const { return std::abs(lhs - rhs); }
};

/// Requires gamma = i gamma_Im with gamma_Im < 0.
JstabSides jstab_sides(const Problem& problem, std::span<const cplx> v);
double jstab_identity_residual(const Problem& problem, std::span<const cplx> v);
/// Solution form: |J(u_h,u_h)| + k|u_h(1)|^2 against -Im (f, u_h).
JstabSides jstab_solution_sides(const Problem& problem, std::span<const cplx> uh);

/// J(u,u) for the exact solution: derivative jumps at interior nodes and the Robin residual.
double exact_penalty_functional(const ExactSolution& exact);

struct ErrorReport {
    double l2_error;
    double h1_semi_error;      ///< |u - u_h|_1
    double jump_term;          ///< (sum |gamma| h |[u_h']_j|^2)^{1/2}
    double norm_1h_error;      ///< ||u - u_h||_{1,h}
    double best_h1_error;      ///< |u - u_I|_1
    double exact_h1;           ///< |u|_1
    double rhs_norm;           ///< ||f||
    double e_ba;               ///< |u - u_I|_1 / |u|_1
    double e_c;                ///< |u - u_h|_1 / |u|_1
    std::optional<double> ratio; ///< e_c / e_ba, absent if e_ba < 1e-15
    double solution_norm_1h;   ///< ||u_h||_{1,h}
};

/// Discrete CIP solution through the banded solver.
DiscreteSolution solve_cip(const Problem& problem);

ErrorReport full_report(const Problem& problem);
ErrorReport error_report(const Problem& problem, const ExactSolution& exact, const DiscreteSolution& uh);

} // namespace hcip
