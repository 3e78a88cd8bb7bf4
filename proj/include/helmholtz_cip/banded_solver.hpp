#pragma once

#include <array>
#include <span>
#include <vector>

#include "helmholtz_cip/assembly.hpp"

namespace hcip {

/// Banded LU with row partial pivoting: P A = L U, lower bandwidth 2,
/// upper bandwidth widened to 4 for pivoting fill.
class BandedFactorization {
public:
    static constexpr double singular_threshold = 1e-300;

    /// Throws SingularMatrix if a pivot magnitude falls below singular_threshold.
    static BandedFactorization factor(const BandedMatrix& a);

    int order() const { return n_; }

    std::vector<cplx> solve(std::span<const cplx> rhs) const;
    /// Column m (0-based) of the inverse.
    std::vector<cplx> inverse_column(int m) const;
    /// Computes P^T L U x from the stored factors.
    std::vector<cplx> apply(std::span<const cplx> x) const;

private:
    explicit BandedFactorization(int n) : n_(n), upper_(n), lower_(n), pivot_(n) {}

    int n_;
    std::vector<std::array<cplx, 5>> upper_; // U(i, i..i+4)
    std::vector<std::array<cplx, 2>> lower_; // multipliers for rows i+1, i+2
    std::vector<int> pivot_;
};

} // namespace hcip
