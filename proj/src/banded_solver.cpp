#include "helmholtz_cip/banded_solver.hpp"

#include <fmt/format.h>

namespace hcip {

namespace {

// Working row: columns i-2 .. i+4, slot c - i + 2.
using WorkRow = std::array<cplx, 7>;

cplx& at(std::vector<WorkRow>& w, int r, int c)
{
    return w[static_cast<std::size_t>(r)][static_cast<std::size_t>(c - r + 2)];
}

void require_length(std::size_t got, int n)
{
    if (static_cast<int>(got) != n)
        throw InvalidArgument(fmt::format("vector length {} does not match matrix order {}", got, n));
}

} // namespace

BandedFactorization BandedFactorization::factor(const BandedMatrix& a)
{
    const int n = a.order();
    std::vector<WorkRow> w(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        for (int j = std::max(0, i - 2); j <= std::min(n - 1, i + 2); ++j)
            at(w, i, j) = a(i, j);

    BandedFactorization f(n);
    for (int k = 0; k < n; ++k) {
        const int last = std::min(k + 2, n - 1);
        int p = k;
        for (int r = k + 1; r <= last; ++r)
            if (std::abs(at(w, r, k)) > std::abs(at(w, p, k)))
                p = r;
        if (std::abs(at(w, p, k)) < singular_threshold)
            throw SingularMatrix(fmt::format("zero pivot in column {} of {}", k, n));

        f.pivot_[static_cast<std::size_t>(k)] = p;
        const int cmax = std::min(k + 4, n - 1);
        if (p != k)
            for (int c = k; c <= cmax; ++c)
                std::swap(at(w, k, c), at(w, p, c));

        const cplx pivot = at(w, k, k);
        for (int r = k + 1; r <= last; ++r) {
            const cplx l = at(w, r, k) / pivot;
            f.lower_[static_cast<std::size_t>(k)][static_cast<std::size_t>(r - k - 1)] = l;
            at(w, r, k) = 0.0;
            if (l == cplx{})
                continue;
            for (int c = k + 1; c <= cmax; ++c)
                at(w, r, c) -= l * at(w, k, c);
        }
        for (int c = k; c <= cmax; ++c)
            f.upper_[static_cast<std::size_t>(k)][static_cast<std::size_t>(c - k)] = at(w, k, c);
    }
    return f;
}

std::vector<cplx> BandedFactorization::solve(std::span<const cplx> rhs) const
{
    require_length(rhs.size(), n_);
    std::vector<cplx> x(rhs.begin(), rhs.end());
    for (int k = 0; k < n_; ++k) {
        const auto uk = static_cast<std::size_t>(k);
        std::swap(x[uk], x[static_cast<std::size_t>(pivot_[uk])]);
        for (int r = k + 1; r <= std::min(k + 2, n_ - 1); ++r)
            x[static_cast<std::size_t>(r)] -= lower_[uk][static_cast<std::size_t>(r - k - 1)] * x[uk];
    }
    for (int i = n_ - 1; i >= 0; --i) {
        const auto ui = static_cast<std::size_t>(i);
        cplx sum = x[ui];
        for (int c = i + 1; c <= std::min(i + 4, n_ - 1); ++c)
            sum -= upper_[ui][static_cast<std::size_t>(c - i)] * x[static_cast<std::size_t>(c)];
        x[ui] = sum / upper_[ui][0];
    }
    return x;
}

std::vector<cplx> BandedFactorization::inverse_column(int m) const
{
    if (m < 0 || m >= n_)
        throw InvalidArgument(fmt::format("column {} outside 0..{}", m, n_ - 1));
    std::vector<cplx> e(static_cast<std::size_t>(n_));
    e[static_cast<std::size_t>(m)] = 1.0;
    return solve(e);
}

std::vector<cplx> BandedFactorization::apply(std::span<const cplx> x) const
{
    require_length(x.size(), n_);
    std::vector<cplx> y(static_cast<std::size_t>(n_));
    for (int i = 0; i < n_; ++i) {
        cplx sum{};
        for (int c = i; c <= std::min(i + 4, n_ - 1); ++c)
            sum += upper_[static_cast<std::size_t>(i)][static_cast<std::size_t>(c - i)] * x[static_cast<std::size_t>(c)];
        y[static_cast<std::size_t>(i)] = sum;
    }
    for (int k = n_ - 1; k >= 0; --k) {
        const auto uk = static_cast<std::size_t>(k);
        for (int r = k + 1; r <= std::min(k + 2, n_ - 1); ++r)
            y[static_cast<std::size_t>(r)] += lower_[uk][static_cast<std::size_t>(r - k - 1)] * y[uk];
        std::swap(y[uk], y[static_cast<std::size_t>(pivot_[uk])]);
    }
    return y;
}

} // namespace hcip
