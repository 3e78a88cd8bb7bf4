#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "helmholtz_cip/types.hpp"

namespace hcip {

/// Right-hand side f of u'' + k^2 u = -f.
class RhsSpec {
public:
    using Function = std::function<cplx(double)>;

    static RhsSpec constant_neg_one();
    static RhsSpec function(Function f, std::string label = "custom");

    bool is_constant_neg_one() const { return !f_; }
    cplx operator()(double x) const { return f_ ? f_(x) : cplx(-1.0, 0.0); }
    const std::string& label() const { return label_; }

private:
    RhsSpec() = default;
    Function f_;
    std::string label_ = "neg-one";
};

/// Uniform partition x_j = j/n of [0,1].
class UniformMesh {
public:
    explicit UniformMesh(int n);

    int elements() const { return n_; }
    double h() const { return h_; }
    double node(int j) const { return nodes_[static_cast<std::size_t>(j)]; }
    const std::vector<double>& nodes() const { return nodes_; }

private:
    int n_;
    double h_;
    std::vector<double> nodes_;
};

std::vector<double> mesh_nodes(int n);

/// Validated 1D Helmholtz problem with a CIP penalty parameter.
/// Immutable; t = k h is computed once at construction.
class Problem {
public:
    static Problem make(double k, int n, cplx gamma, RhsSpec rhs = RhsSpec::constant_neg_one(),
                        bool include_boundary_penalty = true);

    double k() const { return k_; }
    int n() const { return mesh_->elements(); }
    double h() const { return mesh_->h(); }
    double t() const { return t_; }
    cplx gamma() const { return gamma_; }
    const RhsSpec& rhs() const { return rhs_; }
    bool include_boundary_penalty() const { return include_boundary_penalty_; }
    const UniformMesh& mesh() const { return *mesh_; }

    /// Real part of gamma; throws Unsupported if |Im gamma| > 1e-14.
    double real_gamma() const;

    Problem with_boundary_penalty(bool flag) const;

private:
    Problem(double k, cplx gamma, RhsSpec rhs, bool bp, std::shared_ptr<const UniformMesh> mesh);

    double k_;
    double t_;
    cplx gamma_;
    RhsSpec rhs_;
    bool include_boundary_penalty_;
    std::shared_ptr<const UniformMesh> mesh_;
};

/// Preconditions for dispersion / discrete-Green analysis: t <= 1 and |gamma| <= 1/6.
bool in_analysis_regime(double t, double gamma);

} // namespace hcip
