#include <doctest.h>

#include <cmath>
#include <random>

#include "helmholtz_cip/assembly.hpp"
#include "helmholtz_cip/error_analysis.hpp"
#include "oracles.hpp"

using namespace hcip;

namespace {

constexpr cplx I{0, 1};

double max_diff(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b)
{
    return (a - b).cwiseAbs().maxCoeff();
}

// Hat function phi_j and its derivative on the uniform mesh, evaluated pointwise.
double hat(int j, int n, double x)
{
    const double h = 1.0 / n, xj = j * h;
    return std::max(0.0, 1.0 - std::abs(x - xj) / h);
}

double hat_slope(int j, int n, int element)
{
    if (element == j)
        return n;
    if (element == j + 1 && j < n)
        return -n;
    return 0;
}

} // namespace

TEST_CASE("stencil coefficients")
{
    const StencilCoeffs a = stencil_coeffs(1, 0.0);
    CHECK(std::abs(a.R - (-7.0 / 6)) < 1e-15);
    CHECK(std::abs(a.S - 2.0 / 3) < 1e-15);

    const StencilCoeffs b = stencil_coeffs(1, -1.0 / 12);
    CHECK(std::abs(b.R - (-5.0 / 6)) < 1e-15);
    CHECK(std::abs(b.S - 5.0 / 12) < 1e-15);

    const StencilCoeffs c = stencil_coeffs(0.5, cplx(0, -0.1));
    CHECK(std::abs(c.R.real() - (-1 - 0.25 / 6)) < 1e-15);
    CHECK(std::abs(c.R.imag() - 0.4) < 1e-15);
    CHECK(std::abs(c.S.imag() - (-0.3)) < 1e-15);
}

TEST_CASE("standard FEM limit is tridiagonal")
{
    for (bool flag : {true, false}) {
        const Problem p = Problem::make(7, 12, 0.0, RhsSpec::constant_neg_one(), flag);
        const BandedMatrix L = assemble_matrix(p);
        const auto [t, R, S] = stencil_coeffs(p.t(), 0.0);
        for (int i = 0; i < 12; ++i) {
            CHECK(L(i, i + 2) == cplx{});
            CHECK(L(i + 2, i) == cplx{});
            if (i + 1 < 12)
                CHECK(L(i, i + 1) == R);
            if (i < 11)
                CHECK(L(i, i) == 2.0 * S);
        }
        CHECK(std::abs(L(11, 11) - (S - I * t)) < 1e-15);
    }
}

TEST_CASE("interior stencil at t = 1, gamma = -1/12")
{
    const BandedMatrix L = assemble_matrix(Problem::make(10, 10, -1.0 / 12));
    const cplx expect[5] = {-1.0 / 12, -5.0 / 6, 5.0 / 6, -5.0 / 6, -1.0 / 12};
    for (int i = 2; i <= 7; ++i)
        for (int d = -2; d <= 2; ++d)
            CHECK(std::abs(L(i, i + d) - expect[d + 2]) < 1e-15);
}

TEST_CASE("without the boundary term the matrix is the displayed pentadiagonal matrix")
{
    const double k = 13, g = 0.07;
    const int n = 9;
    const Problem p = Problem::make(k, n, g, RhsSpec::constant_neg_one(), false);
    const BandedMatrix L = assemble_matrix(p);
    const auto [t, R, S] = stencil_coeffs(p.t(), g);
    CHECK(std::abs(L(0, 0) - (2.0 * S - g)) < 1e-15);
    CHECK(std::abs(L(1, 1) - 2.0 * S) < 1e-15);
    CHECK(std::abs(L(n - 2, n - 2) - (2.0 * S - g)) < 1e-15);
    CHECK(std::abs(L(n - 2, n - 1) - (R + 2.0 * g)) < 1e-15);
    CHECK(std::abs(L(n - 1, n - 2) - (R + 2.0 * g)) < 1e-15);
    CHECK(std::abs(L(n - 1, n - 1) - (S - 2.0 * g - I * t)) < 1e-15);
    CHECK(std::abs(L(n - 1, n - 3) - g) < 1e-15);
    CHECK(max_diff(L.to_dense(), L.to_dense().transpose()) == 0.0);
}

TEST_CASE("boundary least-squares term on the last two rows")
{
    const double k = 13, g = 0.07;
    const int n = 9;
    const Problem with = Problem::make(k, n, g);
    const Problem without = with.with_boundary_penalty(false);
    Eigen::MatrixXcd d = assemble_matrix(with).to_dense() - assemble_matrix(without).to_dense();
    const double t = with.t();
    CHECK(std::abs(d(n - 1, n - 1) - g * (1 + t * t)) < 1e-14);
    CHECK(std::abs(d(n - 2, n - 1) + g * (1.0 - I * t)) < 1e-14);
    CHECK(std::abs(d(n - 1, n - 2) + g * (1.0 + I * t)) < 1e-14);
    CHECK(std::abs(d(n - 2, n - 2) - g) < 1e-14);
    d(n - 1, n - 1) = d(n - 2, n - 1) = d(n - 1, n - 2) = d(n - 2, n - 2) = 0;
    CHECK(d.cwiseAbs().maxCoeff() == 0.0);

    // gamma = 0 removes the term entirely, so both flags give a complex-symmetric matrix.
    const Eigen::MatrixXcd z = assemble_matrix(Problem::make(k, n, 0.0)).to_dense();
    CHECK(max_diff(z, z.transpose()) == 0.0);
}

TEST_CASE("dense oracle agrees with banded assembly")
{
    const Problem p = Problem::make(3, 6, 0.05);
    CHECK(max_diff(assemble_matrix(p).to_dense(), assemble_dense_by_quadrature(p)) < 1e-13);

    const Eigen::MatrixXcd d0 = assemble_dense_by_quadrature(Problem::make(3, 6, 0.0));
    for (int i = 0; i + 2 < 6; ++i) {
        CHECK(d0(i, i + 2) == cplx{});
        CHECK(d0(i + 2, i) == cplx{});
    }

    const Problem q = Problem::make(2, 5, -1.0 / 12, RhsSpec::constant_neg_one(), false);
    const auto [t, R, S] = stencil_coeffs(q.t(), -1.0 / 12);
    CHECK(std::abs(assemble_dense_by_quadrature(q)(4, 4) - (S + 2.0 / 12 - I * t)) < 1e-14);

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> uk(0.1, 50), ug(-0.25, 0.25);
    for (int c = 0; c < 40; ++c) {
        const int n = 2 + static_cast<int>(rng() % 49);
        const double k = uk(rng);
        const cplx g{ug(rng), ug(rng)};
        for (bool flag : {true, false}) {
            const Problem r = Problem::make(k, n, g, RhsSpec::constant_neg_one(), flag);
            CHECK(max_diff(assemble_matrix(r).to_dense(), assemble_dense_by_quadrature(r)) < 1e-13);
        }
    }
}

TEST_CASE("dense oracle matches pointwise integration of hat functions")
{
    const int n = 6;
    const double k = 4.5;
    const cplx g{0.03, -0.05};
    const Problem p = Problem::make(k, n, g);
    const Eigen::MatrixXcd L = assemble_dense_by_quadrature(p);
    const double h = 1.0 / n;
    for (int i = 1; i <= n; ++i) {
        for (int j = 1; j <= n; ++j) {
            cplx a = 0;
            for (int e = 1; e <= n; ++e) {
                const double lo = (e - 1) * h, hi = e * h;
                a += hat_slope(j, n, e) * hat_slope(i, n, e) * h;
                a -= k * k * oracle::simpson([&](double x) { return hat(j, n, x) * hat(i, n, x); }, lo, hi, 8);
            }
            a -= I * k * hat(j, n, 1.0) * hat(i, n, 1.0);
            for (int node = 1; node < n; ++node) {
                const double jj = hat_slope(j, n, node) - hat_slope(j, n, node + 1);
                const double ji = hat_slope(i, n, node) - hat_slope(i, n, node + 1);
                a += g * h * jj * ji;
            }
            const cplx rj = hat_slope(j, n, n) - I * k * hat(j, n, 1.0);
            const cplx ri = hat_slope(i, n, n) - I * k * hat(i, n, 1.0);
            a += g * h * rj * std::conj(ri);
            CHECK(std::abs(h * a - L(i - 1, j - 1)) < 1e-13);
        }
    }
}

TEST_CASE("small meshes fall back to the dense form")
{
    for (int n : {2, 3, 4}) {
        for (bool flag : {true, false}) {
            const Problem p = Problem::make(3.3, n, cplx(-0.05, -0.02), RhsSpec::constant_neg_one(), flag);
            CHECK(max_diff(assemble_matrix(p).to_dense(), assemble_dense_by_quadrature(p)) < 1e-14);
        }
    }
}

TEST_CASE("matrix depends linearly on gamma")
{
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-0.2, 0.2);
    for (int c = 0; c < 10; ++c) {
        const cplx g{u(rng), u(rng)};
        for (bool flag : {true, false}) {
            auto mat = [&](cplx gg) {
                return assemble_matrix(Problem::make(11, 15, gg, RhsSpec::constant_neg_one(), flag)).to_dense();
            };
            const Eigen::MatrixXcd d1 = mat(g) - mat(0.0), d2 = mat(2.0 * g) - mat(0.0);
            CHECK(max_diff(d2, 2.0 * d1) < 1e-14);
        }
    }
}

TEST_CASE("load vector")
{
    const auto f4 = assemble_load(Problem::make(1, 4, 0.0));
    REQUIRE(f4.size() == 4);
    for (int i = 0; i < 3; ++i)
        CHECK(f4[i] == cplx(-0.25));
    CHECK(f4[3] == cplx(-0.125));

    const auto f2 = assemble_load(Problem::make(1, 2, 0.0));
    CHECK(f2[0] == cplx(-0.5));
    CHECK(f2[1] == cplx(-0.25));

    // f = x: interior hats integrate to h x_m, the last one to h (1/2 - h/6).
    const auto fx = assemble_load(Problem::make(1, 4, 0.0, RhsSpec::function([](double x) { return cplx(x); })));
    for (int m = 1; m <= 3; ++m)
        CHECK(std::abs(fx[m - 1] - 0.25 * m * 0.25) < 1e-15);
    CHECK(std::abs(fx[3] - 11.0 / 96) < 1e-15);

    // Smooth oscillatory f against a Simpson oracle.
    const int n = 7;
    auto f = [](double x) { return std::exp(cplx(0, 3 * x)) * (1 + x * x); };
    const auto fe = assemble_load(Problem::make(1, n, 0.0, RhsSpec::function(f)));
    for (int m = 1; m <= n; ++m) {
        const cplx ref = oracle::simpson([&](double x) { return f(x) * hat(m, n, x); }, 0, 1, 7 * 400);
        CHECK(std::abs(fe[m - 1] - ref) < 1e-11);
    }
}

TEST_CASE("Jstab identity for imaginary penalty")
{
    std::mt19937_64 rng(23);
    for (bool flag : {true, false}) {
        const Problem p = Problem::make(10, 20, cplx(0, -0.1), RhsSpec::constant_neg_one(), flag);
        for (int c = 0; c < 25; ++c) {
            const auto v = oracle::random_vector(rng, 20);
            double vn = 0;
            for (const cplx x : v)
                vn += std::norm(x);
            CHECK(jstab_identity_residual(p, v) <= 1e-12 * vn);
        }
    }
    const std::vector<cplx> zero(20);
    CHECK(jstab_identity_residual(Problem::make(10, 20, cplx(0, -0.1)), zero) == 0.0);
    CHECK_THROWS_AS(jstab_identity_residual(Problem::make(10, 20, cplx(0.1, -0.1)), zero), Unsupported);
    CHECK_THROWS_AS(jstab_identity_residual(Problem::make(10, 20, cplx(0, 0.1)), zero), Unsupported);
}

TEST_CASE("banded matrix storage")
{
    BandedMatrix a(4);
    a.set(0, 2, 3.0);
    a.add(0, 2, 1.0);
    CHECK(a(0, 2) == cplx(4.0));
    CHECK(a(0, 3) == cplx{});
    CHECK_THROWS_AS(a.set(0, 3, 1.0), InvalidArgument);
    Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(4, 4);
    d(3, 0) = 1.0;
    CHECK_THROWS_AS(BandedMatrix::from_dense(d), InvalidArgument);
    CHECK_THROWS_AS(BandedMatrix(0), InvalidArgument);
}
