#pragma once

#include <optional>

#include "helmholtz_cip/problem.hpp"

namespace hcip {

/// Green's function G(x,s) of u'' + k^2 u = -f, u(0)=0, u'(1) - i k u(1) = 0.
cplx greens_kernel(double x, double s, double k);

enum class Side { left, right };

/// H(x,s) = d/dx G(x,s). Jumps by -1 across x = s, so x == s throws unless a side is given.
cplx derivative_kernel(double x, double s, double k);
cplx derivative_kernel(double x, double s, double k, Side side);

struct ExactValue {
    cplx u;
    cplx du;
};

/// Panels per side of the split at s = x used by default: max(64, ceil(8k)).
int default_quadrature_panels(double k);

/// u(x), u'(x) by composite Gauss-Legendre on the Green's representation.
/// With `panels` unset, refines from the default until two levels agree to 1e-12
/// and throws NumericalError after 6 doublings.
ExactValue exact_by_quadrature(const Problem& problem, double x, std::optional<int> panels = std::nullopt);

/// Closed form for f == -1: u = (1 - cos kx)/k^2 + A sin kx, A = i (e^{ik} - 1)/k^2.
ExactValue exact_constant_f(double k, double x);

/// Reference solution for a problem; closed form when f == -1, quadrature otherwise.
class ExactSolution {
public:
    enum class Source { closed_form, quadrature };

    explicit ExactSolution(const Problem& problem);
    ExactSolution(const Problem& problem, Source source);

    ExactValue eval(double x) const;
    cplx u(double x) const { return eval(x).u; }
    cplx du(double x) const { return eval(x).du; }
    /// From the ODE: u'' = -f - k^2 u.
    cplx d2u(double x) const;

    Source source() const { return source_; }
    double k() const { return problem_.k(); }
    const Problem& problem() const { return problem_; }

private:
    Problem problem_;
    Source source_;
};

struct RegularityReport {
    double l2_norm;     ///< ||u||
    double h1_semi;     ///< |u|_1
    double h2_semi;     ///< |u|_2
    double rhs_norm;    ///< ||f||
    double l2_ratio;    ///< k ||u|| / ||f||
    double h1_ratio;    ///< |u|_1 / ||f||
    double h2_ratio;    ///< |u|_2 / ((1+k) ||f||)

    bool holds(double tol = 1e-8) const
    {
        return l2_ratio <= 1 + tol && h1_ratio <= 1 + tol && h2_ratio <= 1 + tol;
    }
};

/// L2 norm of f by 10-point Gauss per element on the problem mesh (exactly 1 for f == -1).
double rhs_l2_norm(const Problem& problem);

/// Evaluates the a priori bounds ||u|| <= ||f||/k, |u|_1 <= ||f||, |u|_2 <= (1+k)||f||.
RegularityReport check_regularity_bounds(const Problem& problem);

} // namespace hcip
