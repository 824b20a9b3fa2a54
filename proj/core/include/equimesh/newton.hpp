#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "equimesh/error.hpp"

namespace equimesh {

/// Square dense matrix, row-major.
class DenseMatrix {
public:
    DenseMatrix() = default;
    explicit DenseMatrix(int n) : n_(n), a_(static_cast<std::size_t>(n) * n, 0.0) {}

    int size() const noexcept { return n_; }
    double& operator()(int r, int c) noexcept { return a_[static_cast<std::size_t>(r) * n_ + c]; }
    double operator()(int r, int c) const noexcept {
        return a_[static_cast<std::size_t>(r) * n_ + c];
    }
    std::span<const double> values() const noexcept { return a_; }

    /// Max absolute row sum.
    double norm_inf() const noexcept;

    friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

private:
    int n_ = 0;
    std::vector<double> a_;
};

/// Gaussian elimination with partial pivoting. Throws SingularMatrixError when a
/// pivot falls below 1e-14 ||A||inf.
std::vector<double> lu_solve(DenseMatrix a, std::span<const double> b);

double max_norm(std::span<const double> v) noexcept;

/// residual(state, out): out.size() == state.size().
using ResidualFn = std::function<void(std::span<const double>, std::span<double>)>;

/// Groups of columns that touch disjoint rows (greedy colouring).
/// rows_of_col[c] lists the rows that may depend on unknown c.
std::vector<std::vector<int>> color_columns(const std::vector<std::vector<int>>& rows_of_col);

/// Forward-difference Jacobian, eps_c = fd_eps * max(1, |v_c|). With a pattern,
/// columns are perturbed a colour group at a time and only listed rows are
/// filled; the result matches the column-by-column evaluation exactly when the
/// pattern is a superset of the true dependencies.
DenseMatrix jacobian_fd(const ResidualFn& residual, std::span<const double> state,
                        std::span<const double> r0, double fd_eps,
                        const std::vector<std::vector<int>>* rows_of_col = nullptr);

struct NewtonConfig {
    double tol = 1e-10;
    int max_iter = 50;
    double fd_eps = 1e-7;
    double damping = 0.5;
    int max_halvings = 8;

    void validate() const;
};

struct NewtonStats {
    int iterations = 0;
    double residual = 0.0;
    int damped_steps = 0;
    std::vector<double> history;  // ||R||inf before each step and at exit
};

struct NewtonResult {
    std::vector<double> state;
    NewtonStats stats;
};

/// Damped Newton with a finite-difference Jacobian and dense LU.
/// A step is halved until ||R||inf decreases; if max_halvings do not help, or
/// max_iter is hit, NonConvergenceError is thrown with the best state seen.
NewtonResult newton_solve(const ResidualFn& residual, std::vector<double> initial,
                          const NewtonConfig& config,
                          const std::vector<std::vector<int>>* rows_of_col = nullptr);

}  // namespace equimesh
