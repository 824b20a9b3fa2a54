#include "equimesh/monitor.hpp"

#include <cassert>
#include <cmath>
#include <numbers>

namespace equimesh {

void MonitorParams::validate() const {
    if (!(a >= 0.0 && a <= 1.0)) {
        throw ConfigError("relaxation parameter a must lie in [0, 1], got " + std::to_string(a));
    }
    if (!(b >= 0.0) || !std::isfinite(b)) {
        throw ConfigError("regularisation b must be finite and >= 0, got " + std::to_string(b));
    }
}

TestProblem exp_sine_problem() {
    return {"exp-sine", [](double x, double y) {
                return (1.0 - std::exp(15.0 * (x - 1.0))) * std::sin(std::numbers::pi * y);
            }};
}

TestProblem constant_problem() {
    return {"constant", [](double, double) { return 1.0; }};
}

std::vector<std::string> problem_names() { return {"exp-sine", "constant"}; }

TestProblem problem_by_name(const std::string& name) {
    if (name == "exp-sine") return exp_sine_problem();
    if (name == "constant") return constant_problem();
    throw ConfigError("unknown test problem '" + name + "' (known: exp-sine, constant)");
}

double eval_u(const TestProblem& problem, double x, double y) { return problem.u(x, y); }

double k_factor(Vec2 w, const MonitorParams& params) noexcept {
    return params.a * params.a / (1.0 + params.b * (w.x * w.x + w.y * w.y));
}

MonitorMatrix monitor_matrix(Vec2 w, const MonitorParams& params) noexcept {
    const double k = k_factor(w, params);
    return {k * w.x * w.x + 1.0, k * w.x * w.y, k * w.y * w.y + 1.0};
}

Vec2 physical_gradient(double u_xi, double u_eta, double x_xi, double x_eta, double y_xi,
                       double y_eta, NodeIndex node) {
    const double jac = x_xi * y_eta - x_eta * y_xi;
    if (!(std::abs(jac) > kJacobianFloor)) {
        throw DegenerateJacobianError(node, jac);
    }
    return {(u_xi * y_eta - u_eta * y_xi) / jac, (-u_xi * x_eta + u_eta * x_xi) / jac};
}

double s_form(Vec2 d, const MonitorMatrix& m) {
    const double q = m.m11 * d.x * d.x + 2.0 * m.m12 * d.x * d.y + m.m22 * d.y * d.y;
    assert(q >= -1e-14 && "monitor matrix must be positive definite");
    return std::sqrt(std::max(q, 0.0));
}

namespace {

// Second-order derivative of f along one index at position k of n samples.
template <class F>
double diff(F f, int k, int n, double h) {
    if (k > 0 && k < n - 1) return (f(k + 1) - f(k - 1)) / (2.0 * h);
    if (k == 0) return (-3.0 * f(0) + 4.0 * f(1) - f(2)) / (2.0 * h);
    return (3.0 * f(n - 1) - 4.0 * f(n - 2) + f(n - 3)) / (2.0 * h);
}

}  // namespace

NodalMonitor nodal_monitor(const Field2D& x, const Field2D& y, int first_column, int begin,
                           int end, double d_xi, double d_eta, const MonitorParams& params,
                           const TestProblem& problem) {
    const int cols = x.cols();
    const int rows = x.rows();
    Field2D u(cols, rows);
    for (int c = 0; c < cols; ++c) {
        for (int j = 0; j < rows; ++j) u(c, j) = problem.u(x(c, j), y(c, j));
    }

    NodalMonitor out{Field2D(end - begin, rows), Field2D(end - begin, rows),
                     Field2D(end - begin, rows)};
    for (int c = begin; c < end; ++c) {
        for (int j = 0; j < rows; ++j) {
            auto along_xi = [&](const Field2D& f) {
                return diff([&](int k) { return f(k, j); }, c, cols, d_xi);
            };
            auto along_eta = [&](const Field2D& f) {
                return diff([&](int k) { return f(c, k); }, j, rows, d_eta);
            };
            const Vec2 w = physical_gradient(along_xi(u), along_eta(u), along_xi(x),
                                             along_eta(x), along_xi(y), along_eta(y),
                                             {first_column + c, j});
            const MonitorMatrix m = monitor_matrix(w, params);
            out.m11(c - begin, j) = m.m11;
            out.m12(c - begin, j) = m.m12;
            out.m22(c - begin, j) = m.m22;
        }
    }
    return out;
}

NodalMonitor nodal_monitor(const PhysicalMesh& mesh, const MonitorParams& params,
                           const TestProblem& problem) {
    return nodal_monitor(mesh.x, mesh.y, 0, 0, mesh.grid.n_xi(), mesh.grid.d_xi(),
                         mesh.grid.d_eta(), params, problem);
}

}  // namespace equimesh
