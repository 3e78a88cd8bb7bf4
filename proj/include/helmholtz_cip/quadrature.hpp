#pragma once

#include <boost/math/quadrature/gauss.hpp>

namespace hcip::quad {

// Gauss-Legendre on [a,b]. The integrand may return real or complex values.
template <unsigned Points, class F>
auto gauss(F&& f, double a, double b)
{
    return boost::math::quadrature::gauss<double, Points>::integrate(std::forward<F>(f), a, b);
}

template <class F>
auto gauss10(F&& f, double a, double b)
{
    return gauss<10>(std::forward<F>(f), a, b);
}

/// Composite 10-point rule on `panels` equal panels of [a,b].
template <class F>
auto composite_gauss10(F&& f, double a, double b, int panels)
{
    using R = decltype(f(a));
    R sum{};
    if (b <= a)
        return sum;
    const double w = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const double lo = a + p * w;
        const double hi = (p + 1 == panels) ? b : lo + w;
        sum += gauss10(f, lo, hi);
    }
    return sum;
}

} // namespace hcip::quad
