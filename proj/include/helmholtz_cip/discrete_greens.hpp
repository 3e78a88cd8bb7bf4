#pragma once

#include <array>
#include <vector>

#include "helmholtz_cip/types.hpp"

namespace hcip {

/// Roots eta_1..eta_4 of gamma e^-2 + R e^-1 + 2S + R e + gamma e^2 = 0:
/// eta_{1,2} = e^{-/+ i t_h^-}, eta_3 = 1/eta_4, |eta_4| > 1.
struct FundamentalSystem {
    double t;
    double gamma;
    double cos_minus;
    double cos_plus;
    double t_h_minus;
    std::array<cplx, 4> eta;
};

/// Requires 0 < |gamma| <= 1/6 and 0 < t <= 1; throws Unsupported otherwise.
FundamentalSystem fundamental_roots(double t, double gamma);

/// Residual of the characteristic polynomial at eta_i, relative to the magnitude of its terms.
double characteristic_residual(const FundamentalSystem& fs, int i);

struct BoundaryCoefficients {
    std::array<cplx, 4> a;
    std::array<cplx, 4> b;
};

/// a_i = (eta^-1 - 2 + eta) eta^n, b_i = (1 - t^2/3 - (1 + t^2/6) eta^-1 + gamma (1 - eta^-1)^2 - i t) eta^n.
/// Throws NumericalError when |eta_4|^n would overflow.
BoundaryCoefficients boundary_coefficients(const FundamentalSystem& fs, int n);

/// det(V_1 + V_2) computed directly and through the factorized closed form.
struct DeterminantCheck {
    cplx direct;
    cplx factored;
};
DeterminantCheck boundary_determinant(const FundamentalSystem& fs, int n);

/// Column m of G_h in the fundamental system. Coefficients are stored anchored:
/// A_i = scaled_a[i] * eta_i^{-anchor_a[i]}, B_i = scaled_b[i] * eta_i^{-anchor_b[i]},
/// which keeps every stored number bounded for any n.
class GreensColumn {
public:
    int m() const { return m_; }
    int n() const { return n_; }

    cplx A(int i) const;
    cplx B(int i) const;
    const std::array<cplx, 4>& scaled_a() const { return scaled_a_; }
    const std::array<cplx, 4>& scaled_b() const { return scaled_b_; }

    /// G_h[j, m] for 0 <= j <= n; G_h[0, m] = 0.
    cplx entry(const FundamentalSystem& fs, int j) const;

    /// sum_i (B_i - A_i) eta_i^{m-1}, and sum_i gamma A_i. Both vanish for a consistent column.
    cplx continuity_residual(const FundamentalSystem& fs) const;
    cplx a_sum_residual(const FundamentalSystem& fs) const;

private:
    friend GreensColumn greens_column(const FundamentalSystem&, int, int);

    int m_ = 0;
    int n_ = 0;
    std::array<cplx, 4> eta_{};
    std::array<cplx, 4> scaled_a_{};
    std::array<cplx, 4> scaled_b_{};
    std::array<int, 4> anchor_a_{};
    std::array<int, 4> anchor_b_{};
};

/// Solves the 8x8 boundary system for column m (1-based), or the 4x4 system for m = 1.
GreensColumn greens_column(const FundamentalSystem& fs, int m, int n);

cplx greens_entry(const GreensColumn& col, const FundamentalSystem& fs, int j);

/// Dense G_h and H_h built column by column (1-based j, m).
class DiscreteGreensFunction {
public:
    DiscreteGreensFunction(double t, double gamma, int n);

    int n() const { return n_; }
    const FundamentalSystem& system() const { return fs_; }
    const GreensColumn& column(int m) const { return columns_[static_cast<std::size_t>(m - 1)]; }

    /// G_h[j, m], 0 <= j <= n, 1 <= m <= n.
    cplx G(int j, int m) const;
    /// H_h[j, m] = G_h[j, m] - G_h[j-1, m], 1 <= j, m <= n.
    cplx H(int j, int m) const;

    /// u_{h,j} = h sum_m G_h[j,m] F_m, j = 1..n.
    std::vector<cplx> solve(const std::vector<cplx>& load) const;
    /// Slope of u_h on K_j: sum_m H_h[j,m] F_m, j = 1..n.
    std::vector<cplx> slopes(const std::vector<cplx>& load) const;

private:
    int n_;
    double h_;
    FundamentalSystem fs_;
    std::vector<GreensColumn> columns_;
};

/// Leading term of H_h[j,m]: cos(j t_h) e^{i m t_h} for j < m, i sin(m t_h) e^{i j t_h} otherwise.
cplx derivative_leading_term(const FundamentalSystem& fs, int j, int m);

} // namespace hcip
