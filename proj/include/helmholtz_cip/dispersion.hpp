#pragma once

#include <optional>

#include "helmholtz_cip/types.hpp"

namespace hcip {

/// Roots of 2 gamma c^2 - (4 gamma + 1 + t^2/6) c + 2 gamma + 1 - t^2/3 = 0, c = cos t_h.
struct DispersionResult {
    double t;
    double gamma;
    double cos_minus;                 ///< propagating-branch root, continuous from t = 0
    std::optional<double> cos_plus;   ///< absent for gamma == 0
    double one_minus_cos_minus;       ///< 1 - cos_minus, evaluated without cancellation
    double t_h_minus;                 ///< arccos(cos_minus) in [0, pi]; NaN if |cos_minus| > 1
    bool propagating;                 ///< |cos_minus| < 1

    /// k_h^- = t_h^- / h = k t_h^- / t.
    double k_h_minus(double k) const { return k * t_h_minus / t; }
};

/// Throws Unsupported when (1 + t^2/6)^2 + 4 gamma t^2 < 0 (no real roots).
DispersionResult dispersion_roots(double t, double gamma);

/// Penalty gamma_o(t) with cos t_h^-(gamma_o) = cos t. Requires t > 0.
double optimal_gamma(double t);

/// t_c = sqrt(48 gamma + 12). Requires gamma >= -1/4.
double cutoff_frequency(double gamma);

/// |k_h^- - k|.
double phase_error(double k, double h, double gamma);

/// Predicted number of elements where the relative H1 error leaves its plateau.
double critical_dof(double k, double gamma);

} // namespace hcip
