#pragma once

#include <array>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "helmholtz_cip/problem.hpp"

namespace hcip {

struct StencilCoeffs {
    double t;
    cplx R; ///< -1 - 4 gamma - t^2/6
    cplx S; ///< 1 + 3 gamma - t^2/3
};

StencilCoeffs stencil_coeffs(double t, cplx gamma);

/// Square complex matrix with bandwidth 2 on both sides, stored by diagonal.
/// Indices are 0-based; entries outside the band read as zero.
class BandedMatrix {
public:
    static constexpr int bandwidth = 2;

    explicit BandedMatrix(int order);

    int order() const { return n_; }

    cplx operator()(int i, int j) const;
    void set(int i, int j, cplx value);
    void add(int i, int j, cplx value);

    std::vector<cplx> multiply(std::span<const cplx> x) const;
    double norm_inf() const;
    Eigen::MatrixXcd to_dense() const;
    static BandedMatrix from_dense(const Eigen::MatrixXcd& a);

private:
    cplx& slot(int i, int j);
    int n_;
    std::vector<cplx> diag_; // diag_[i * 5 + (j - i + 2)]
};

/// L_h = h (a_h(phi_j, phi_i))_{i,j}; row i is tested against phi_{i+1}.
BandedMatrix assemble_matrix(const Problem& problem);

/// Independent dense evaluation of L_h from element integrals and explicit jumps.
Eigen::MatrixXcd assemble_dense_by_quadrature(const Problem& problem);

/// a_h(u, v) for nodal coefficient vectors (node 1..n, u(0) = 0).
cplx sesquilinear_form(const Problem& problem, std::span<const cplx> u, std::span<const cplx> v);

/// J(u, v): interior derivative jumps plus, when enabled, the boundary least-squares term.
cplx penalty_form(const Problem& problem, std::span<const cplx> u, std::span<const cplx> v);

/// F_m = (f, phi_m), m = 1..n.
std::vector<cplx> assemble_load(const Problem& problem);

} // namespace hcip
