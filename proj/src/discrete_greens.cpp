#include "helmholtz_cip/discrete_greens.hpp"

#include <cmath>
#include <Eigen/Dense>
#include <fmt/format.h>

#include "helmholtz_cip/assembly.hpp"
#include "helmholtz_cip/dispersion.hpp"

namespace hcip {

namespace {

constexpr cplx I{0.0, 1.0};
constexpr double regime_slack = 1e-14;

// z^p through modulus and argument; stays accurate on the unit circle for large |p|.
cplx power(cplx z, int p)
{
    if (p == 0)
        return 1.0;
    return std::polar(std::pow(std::abs(z), p), p * std::arg(z));
}

// a_i and b_i without their eta^n factor.
cplx a_factor(cplx eta)
{
    return 1.0 / eta - 2.0 + eta;
}

cplx b_factor(const FundamentalSystem& fs, cplx eta)
{
    const double t2 = fs.t * fs.t;
    const cplx inv = 1.0 / eta;
    return 1.0 - t2 / 3.0 - (1.0 + t2 / 6.0) * inv + fs.gamma * (1.0 - inv) * (1.0 - inv) - I * fs.t;
}

// Row and column equilibration followed by LU with partial pivoting.
Eigen::VectorXcd solve_equilibrated(Eigen::MatrixXcd a, Eigen::VectorXcd rhs)
{
    const Eigen::Index n = a.rows();
    Eigen::VectorXd col_scale = Eigen::VectorXd::Ones(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double s = a.row(i).cwiseAbs().maxCoeff();
        if (s == 0)
            throw SingularMatrix("zero row in the Green's coefficient system");
        a.row(i) /= s;
        rhs(i) /= s;
    }
    for (Eigen::Index j = 0; j < n; ++j) {
        const double s = a.col(j).cwiseAbs().maxCoeff();
        if (s == 0)
            throw SingularMatrix("zero column in the Green's coefficient system");
        a.col(j) /= s;
        col_scale(j) = s;
    }
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(a);
    if (!(lu.rcond() > 1e-15))
        throw SingularMatrix(fmt::format("Green's coefficient system is singular (rcond {:.3e})", lu.rcond()));
    Eigen::VectorXcd x = lu.solve(rhs);
    for (Eigen::Index j = 0; j < n; ++j)
        x(j) /= col_scale(j);
    if (!x.allFinite())
        throw SingularMatrix("non-finite Green's coefficients");
    return x;
}

} // namespace

FundamentalSystem fundamental_roots(double t, double gamma)
{
    if (gamma == 0.0 || std::abs(gamma) > 1.0 / 6.0 + regime_slack)
        throw Unsupported(fmt::format("fundamental system needs 0 < |gamma| <= 1/6, got {}", gamma));
    if (!(t > 0) || t > 1.0 + regime_slack)
        throw Unsupported(fmt::format("fundamental system needs 0 < t <= 1, got {}", t));

    const DispersionResult d = dispersion_roots(t, gamma);
    FundamentalSystem fs{};
    fs.t = t;
    fs.gamma = gamma;
    fs.cos_minus = d.cos_minus;
    fs.cos_plus = *d.cos_plus;
    fs.t_h_minus = d.t_h_minus;
    fs.eta[0] = std::polar(1.0, -d.t_h_minus);
    fs.eta[1] = std::polar(1.0, d.t_h_minus);
    // mu^2 - 2c mu + 1 = 0 with |c| > 1: the larger root avoids cancellation, the smaller is its inverse.
    const double c = fs.cos_plus;
    const double big = c < 0 ? c - std::sqrt(c * c - 1.0) : c + std::sqrt(c * c - 1.0);
    fs.eta[3] = big;
    fs.eta[2] = 1.0 / big;
    return fs;
}

double characteristic_residual(const FundamentalSystem& fs, int i)
{
    const StencilCoeffs sc = stencil_coeffs(fs.t, fs.gamma);
    const cplx R = sc.R, S = sc.S;
    const cplx e = fs.eta[static_cast<std::size_t>(i)];
    const cplx g = fs.gamma;
    const cplx value = g / (e * e) + R / e + 2.0 * S + R * e + g * e * e;
    const double scale = std::abs(g) / std::norm(e) + std::abs(R) / std::abs(e) + 2.0 * std::abs(S)
                         + std::abs(R) * std::abs(e) + std::abs(g) * std::norm(e);
    return std::abs(value) / scale;
}

BoundaryCoefficients boundary_coefficients(const FundamentalSystem& fs, int n)
{
    if (n * std::log(std::abs(fs.eta[3])) > 700.0)
        throw NumericalError(fmt::format("eta_4^n overflows for n = {}; use the anchored column form", n));
    BoundaryCoefficients c{};
    for (std::size_t i = 0; i < 4; ++i) {
        const cplx en = power(fs.eta[i], n);
        c.a[i] = a_factor(fs.eta[i]) * en;
        c.b[i] = b_factor(fs, fs.eta[i]) * en;
    }
    return c;
}

DeterminantCheck boundary_determinant(const FundamentalSystem& fs, int n)
{
    const BoundaryCoefficients c = boundary_coefficients(fs, n);
    Eigen::Matrix4cd v;
    for (int i = 0; i < 4; ++i) {
        const cplx e = fs.eta[static_cast<std::size_t>(i)];
        v(0, i) = 1.0 / e + e;
        v(1, i) = 1.0;
        v(2, i) = c.a[static_cast<std::size_t>(i)];
        v(3, i) = c.b[static_cast<std::size_t>(i)];
    }
    const auto& a = c.a;
    const auto& b = c.b;
    const cplx factored = ((fs.eta[2] + fs.eta[3]) - (fs.eta[0] + fs.eta[1]))
                          * ((a[1] - a[0]) * (b[3] - b[2]) - (b[1] - b[0]) * (a[3] - a[2]));
    return {v.determinant(), factored};
}

cplx GreensColumn::A(int i) const
{
    const auto u = static_cast<std::size_t>(i);
    return scaled_a_[u] * power(eta_[u], -anchor_a_[u]);
}

cplx GreensColumn::B(int i) const
{
    const auto u = static_cast<std::size_t>(i);
    return scaled_b_[u] * power(eta_[u], -anchor_b_[u]);
}

cplx GreensColumn::entry(const FundamentalSystem& fs, int j) const
{
    if (j < 0 || j > n_)
        throw InvalidArgument(fmt::format("row {} outside 0..{}", j, n_));
    if (j == 0)
        return {};
    cplx sum{};
    for (std::size_t i = 0; i < 4; ++i) {
        if (j < m_)
            sum += scaled_a_[i] * power(fs.eta[i], j - anchor_a_[i]);
        else
            sum += scaled_b_[i] * power(fs.eta[i], j - anchor_b_[i]);
    }
    return sum;
}

cplx GreensColumn::continuity_residual(const FundamentalSystem& fs) const
{
    cplx sum{};
    for (std::size_t i = 0; i < 4; ++i)
        sum += scaled_b_[i] * power(fs.eta[i], m_ - 1 - anchor_b_[i])
               - scaled_a_[i] * power(fs.eta[i], m_ - 1 - anchor_a_[i]);
    return sum;
}

cplx GreensColumn::a_sum_residual(const FundamentalSystem& fs) const
{
    cplx sum{};
    for (std::size_t i = 0; i < 4; ++i)
        sum += scaled_a_[i] * power(fs.eta[i], -anchor_a_[i]);
    return fs.gamma * sum;
}

GreensColumn greens_column(const FundamentalSystem& fs, int m, int n)
{
    if (m < 1 || m > n)
        throw InvalidArgument(fmt::format("column {} outside 1..{}", m, n));

    GreensColumn col;
    col.m_ = m;
    col.n_ = n;
    col.eta_ = fs.eta;
    // A_i anchored at row m except the decaying mode eta_3, anchored at row 0;
    // B_i anchored at row m except the growing mode eta_4, anchored at row n.
    col.anchor_a_ = {m, m, 0, m};
    col.anchor_b_ = {m, m, m, n};

    std::array<cplx, 4> ahat{}, bhat{};
    for (std::size_t i = 0; i < 4; ++i) {
        ahat[i] = a_factor(fs.eta[i]) * power(fs.eta[i], n - col.anchor_b_[i]);
        bhat[i] = b_factor(fs, fs.eta[i]) * power(fs.eta[i], n - col.anchor_b_[i]);
    }

    if (m == 1) {
        // (V_1 + V_2) B_1 = z, A_1 = 0.
        Eigen::Matrix4cd v;
        for (int i = 0; i < 4; ++i) {
            const auto u = static_cast<std::size_t>(i);
            const cplx e = fs.eta[u];
            const cplx s = power(e, -col.anchor_b_[u]);
            v(0, i) = (1.0 / e + e) * s;
            v(1, i) = s;
            v(2, i) = ahat[u];
            v(3, i) = bhat[u];
        }
        Eigen::Vector4cd z = Eigen::Vector4cd::Zero();
        z(0) = -1.0 / fs.gamma;
        const Eigen::VectorXcd x = solve_equilibrated(v, z);
        for (std::size_t i = 0; i < 4; ++i)
            col.scaled_b_[i] = x(static_cast<Eigen::Index>(i));
        return col;
    }

    // [-U_m U_m; V_1 V_2] [A; B] = [z; 0]
    Eigen::Matrix<cplx, 8, 8> sys = Eigen::Matrix<cplx, 8, 8>::Zero();
    for (int i = 0; i < 4; ++i) {
        const auto u = static_cast<std::size_t>(i);
        const cplx e = fs.eta[u];
        for (int r = 0; r < 4; ++r) {
            sys(r, i) = -power(e, m + r - 2 - col.anchor_a_[u]);
            sys(r, 4 + i) = power(e, m + r - 2 - col.anchor_b_[u]);
        }
        const cplx sa = power(e, -col.anchor_a_[u]);
        sys(4, i) = (1.0 / e + e) * sa;
        sys(5, i) = sa;
        sys(6, 4 + i) = ahat[u];
        sys(7, 4 + i) = bhat[u];
    }
    Eigen::Matrix<cplx, 8, 1> rhs = Eigen::Matrix<cplx, 8, 1>::Zero();
    rhs(0) = -1.0 / fs.gamma;
    const Eigen::VectorXcd x = solve_equilibrated(sys, rhs);
    for (std::size_t i = 0; i < 4; ++i) {
        col.scaled_a_[i] = x(static_cast<Eigen::Index>(i));
        col.scaled_b_[i] = x(static_cast<Eigen::Index>(4 + i));
    }
    return col;
}

cplx greens_entry(const GreensColumn& col, const FundamentalSystem& fs, int j)
{
    return col.entry(fs, j);
}

DiscreteGreensFunction::DiscreteGreensFunction(double t, double gamma, int n)
    : n_(n), h_(1.0 / n), fs_(fundamental_roots(t, gamma))
{
    columns_.reserve(static_cast<std::size_t>(n));
    for (int m = 1; m <= n; ++m)
        columns_.push_back(greens_column(fs_, m, n));
}

cplx DiscreteGreensFunction::G(int j, int m) const
{
    return column(m).entry(fs_, j);
}

cplx DiscreteGreensFunction::H(int j, int m) const
{
    if (j < 1 || j > n_)
        throw InvalidArgument(fmt::format("row {} outside 1..{}", j, n_));
    return G(j, m) - G(j - 1, m);
}

std::vector<cplx> DiscreteGreensFunction::solve(const std::vector<cplx>& load) const
{
    if (static_cast<int>(load.size()) != n_)
        throw InvalidArgument("load vector length does not match n");
    std::vector<cplx> u(static_cast<std::size_t>(n_));
    for (int j = 1; j <= n_; ++j) {
        cplx sum{};
        for (int m = 1; m <= n_; ++m)
            sum += G(j, m) * load[static_cast<std::size_t>(m - 1)];
        u[static_cast<std::size_t>(j - 1)] = h_ * sum;
    }
    return u;
}

std::vector<cplx> DiscreteGreensFunction::slopes(const std::vector<cplx>& load) const
{
    if (static_cast<int>(load.size()) != n_)
        throw InvalidArgument("load vector length does not match n");
    std::vector<cplx> s(static_cast<std::size_t>(n_));
    for (int j = 1; j <= n_; ++j) {
        cplx sum{};
        for (int m = 1; m <= n_; ++m)
            sum += H(j, m) * load[static_cast<std::size_t>(m - 1)];
        s[static_cast<std::size_t>(j - 1)] = sum;
    }
    return s;
}

cplx derivative_leading_term(const FundamentalSystem& fs, int j, int m)
{
    const double th = fs.t_h_minus;
    if (j < m)
        return std::cos(j * th) * std::exp(I * (m * th));
    return I * std::sin(m * th) * std::exp(I * (j * th));
}

} // namespace hcip
