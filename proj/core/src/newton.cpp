#include "equimesh/newton.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace equimesh {

void NewtonConfig::validate() const {
    if (!(tol > 0.0)) throw ConfigError("newton tol must be positive");
    if (max_iter < 1) throw ConfigError("newton max_iter must be at least 1");
    if (!(fd_eps > 0.0)) throw ConfigError("newton fd_eps must be positive");
    if (!(damping > 0.0 && damping < 1.0)) throw ConfigError("newton damping must lie in (0, 1)");
    if (max_halvings < 0) throw ConfigError("newton max_halvings must be >= 0");
}

std::vector<std::vector<int>> color_columns(const std::vector<std::vector<int>>& rows_of_col) {
    int n_rows = 0;
    for (const auto& rows : rows_of_col) {
        for (int r : rows) n_rows = std::max(n_rows, r + 1);
    }
    // row_used[r][k]: colour k already has a column touching row r.
    std::vector<std::vector<bool>> row_used(n_rows);
    std::vector<std::vector<int>> groups;
    for (int c = 0; c < static_cast<int>(rows_of_col.size()); ++c) {
        int color = 0;
        for (;; ++color) {
            bool clash = false;
            for (int r : rows_of_col[c]) {
                if (color < static_cast<int>(row_used[r].size()) && row_used[r][color]) {
                    clash = true;
                    break;
                }
            }
            if (!clash) break;
        }
        if (color == static_cast<int>(groups.size())) groups.emplace_back();
        groups[color].push_back(c);
        for (int r : rows_of_col[c]) {
            if (static_cast<int>(row_used[r].size()) <= color) row_used[r].resize(color + 1, false);
            row_used[r][color] = true;
        }
    }
    return groups;
}

namespace {

void eval_at(const ResidualFn& residual, std::span<const double> v, std::span<double> out,
             int column) {
    try {
        residual(v, out);
    } catch (const Error& e) {
        throw Error("residual failed while perturbing unknown " + std::to_string(column) + ": " +
                    e.what());
    }
}

}  // namespace

DenseMatrix jacobian_fd(const ResidualFn& residual, std::span<const double> state,
                        std::span<const double> r0, double fd_eps,
                        const std::vector<std::vector<int>>* rows_of_col) {
    const int n = static_cast<int>(state.size());
    DenseMatrix jac(n);
    std::vector<double> v(state.begin(), state.end());
    std::vector<double> r(n);
    auto step = [&](int c) { return fd_eps * std::max(1.0, std::abs(state[c])); };

    if (rows_of_col == nullptr) {
        for (int c = 0; c < n; ++c) {
            v[c] = state[c] + step(c);
            const double hc = v[c] - state[c];
            eval_at(residual, v, r, c);
            for (int row = 0; row < n; ++row) jac(row, c) = (r[row] - r0[row]) / hc;
            v[c] = state[c];
        }
        return jac;
    }

    if (static_cast<int>(rows_of_col->size()) != n) {
        throw ConfigError("jacobian pattern size does not match the state");
    }
    for (const auto& group : color_columns(*rows_of_col)) {
        for (int c : group) v[c] = state[c] + step(c);
        eval_at(residual, v, r, group.front());
        for (int c : group) {
            const double hc = v[c] - state[c];
            for (int row : (*rows_of_col)[c]) jac(row, c) = (r[row] - r0[row]) / hc;
        }
        for (int c : group) v[c] = state[c];
    }
    return jac;
}

NewtonResult newton_solve(const ResidualFn& residual, std::vector<double> initial,
                          const NewtonConfig& config,
                          const std::vector<std::vector<int>>* rows_of_col) {
    config.validate();
    const std::size_t n = initial.size();
    NewtonResult out;
    out.state = std::move(initial);
    std::vector<double> r(n);
    residual(out.state, r);
    double norm = max_norm(r);
    if (!std::isfinite(norm)) throw Error("newton: non-finite residual at the initial state");
    out.stats.history.push_back(norm);

    std::vector<double> trial(n);
    std::vector<double> r_trial(n);
    while (norm > config.tol) {
        if (out.stats.iterations >= config.max_iter) {
            throw NonConvergenceError("newton: no convergence in " +
                                          std::to_string(config.max_iter) +
                                          " iterations, ||R||inf = " + std::to_string(norm),
                                      out.state, out.stats.history);
        }
        const DenseMatrix jac = jacobian_fd(residual, out.state, r, config.fd_eps, rows_of_col);
        const std::vector<double> delta = lu_solve(jac, r);

        double lambda = 1.0;
        bool accepted = false;
        double trial_norm = norm;
        for (int halving = 0; halving <= config.max_halvings; ++halving) {
            for (std::size_t k = 0; k < n; ++k) trial[k] = out.state[k] - lambda * delta[k];
            try {
                residual(trial, r_trial);
                trial_norm = max_norm(r_trial);
            } catch (const Error&) {
                trial_norm = HUGE_VAL;  // geometric failure: shorten the step
            }
            if (std::isfinite(trial_norm) && trial_norm < norm) {
                accepted = true;
                break;
            }
            lambda *= config.damping;
        }
        if (!accepted) {
            throw NonConvergenceError("newton: line search failed to reduce ||R||inf = " +
                                          std::to_string(norm),
                                      out.state, out.stats.history);
        }
        if (lambda < 1.0) ++out.stats.damped_steps;
        out.state.swap(trial);
        r.swap(r_trial);
        norm = trial_norm;
        ++out.stats.iterations;
        out.stats.history.push_back(norm);
    }
    out.stats.residual = norm;
    return out;
}

}  // namespace equimesh
