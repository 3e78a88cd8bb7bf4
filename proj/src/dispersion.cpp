#include "helmholtz_cip/dispersion.hpp"

#include <cmath>
#include <limits>
#include <fmt/format.h>

namespace hcip {

DispersionResult dispersion_roots(double t, double gamma)
{
    if (!(t > 0))
        throw InvalidArgument(fmt::format("t must be positive, got {}", t));
    const double t2 = t * t;
    const double a = 1.0 + t2 / 6.0;
    const double disc = a * a + 4.0 * gamma * t2;
    if (disc < 0)
        throw Unsupported(fmt::format("no real dispersion roots for t = {}, gamma = {}", t, gamma));

    DispersionResult r{};
    r.t = t;
    r.gamma = gamma;
    // 1 - cos t_h^- = t^2 / (1 + t^2/6 + sqrt(D)): the -sqrt(D) root without cancellation.
    // For gamma = 0 this reduces to cos t_h = (1 - t^2/3) / (1 + t^2/6).
    r.one_minus_cos_minus = t2 / (a + std::sqrt(disc));
    r.cos_minus = 1.0 - r.one_minus_cos_minus;
    if (gamma != 0.0)
        r.cos_plus = (4.0 * gamma + a) / (2.0 * gamma) - r.cos_minus;

    r.propagating = std::abs(r.cos_minus) < 1.0;
    if (std::abs(r.cos_minus) <= 1.0)
        r.t_h_minus = 2.0 * std::asin(std::min(1.0, std::sqrt(r.one_minus_cos_minus / 2.0)));
    else
        r.t_h_minus = std::numeric_limits<double>::quiet_NaN();
    return r;
}

double optimal_gamma(double t)
{
    if (!(t > 0))
        throw InvalidArgument(fmt::format("t must be positive, got {}", t));
    // 1 - cos t written as 2 sin^2(t/2); the numerator is 3 d - t^2 w with
    // d = t^2 - 2w = (t - 2 sin(t/2)) (t + 2 sin(t/2)), both O(t^4).
    const double u = t / 2.0;
    const double s = std::sin(u);
    const double w = 2.0 * s * s;
    const double t2 = t * t;
    double u_minus_sin = u - s;
    if (u < 0.5) {
        // u - sin u by its alternating series, which converges fast and does not cancel.
        double term = u * u * u / 6.0, sum = 0.0;
        for (int j = 1; std::abs(term) > 1e-18 * std::abs(sum); ++j) {
            sum += term;
            term *= -u * u / ((2.0 * j + 2.0) * (2.0 * j + 3.0));
        }
        u_minus_sin = sum;
    }
    const double d = 2.0 * u_minus_sin * (t + 2.0 * s);
    return (3.0 * d - t2 * w) / (12.0 * w * w);
}

double cutoff_frequency(double gamma)
{
    if (gamma < -0.25)
        throw Unsupported(fmt::format("no real cutoff frequency for gamma = {} < -1/4", gamma));
    return std::sqrt(48.0 * gamma + 12.0);
}

double phase_error(double k, double h, double gamma)
{
    const DispersionResult r = dispersion_roots(k * h, gamma);
    return std::abs(r.t_h_minus / h - k);
}

double critical_dof(double k, double gamma)
{
    if (!(k > 0))
        throw InvalidArgument(fmt::format("wavenumber must be positive, got {}", k));
    if (std::abs(gamma + 1.0 / 12.0) <= 1e-14)
        return std::pow(std::pow(k, 5) / 720.0, 0.25);
    return std::sqrt(std::abs(12.0 * gamma + 1.0) / 24.0 * k * k * k);
}

} // namespace hcip
