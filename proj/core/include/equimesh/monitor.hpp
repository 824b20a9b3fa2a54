#pragma once

#include <functional>
#include <string>
#include <vector>

#include "equimesh/grid.hpp"

namespace equimesh {

/// Relaxation a in [0,1] and regularisation b >= 0 of the arc-length monitor.
struct MonitorParams {
    double a = 0.7;
    double b = 0.05;

    void validate() const;
};

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

/// Symmetric 2x2 monitor matrix.
struct MonitorMatrix {
    double m11 = 1.0;
    double m12 = 0.0;
    double m22 = 1.0;

    double det() const noexcept { return m11 * m22 - m12 * m12; }

    static MonitorMatrix identity() noexcept { return {}; }
    static MonitorMatrix average(const MonitorMatrix& p, const MonitorMatrix& q) noexcept {
        return {0.5 * (p.m11 + q.m11), 0.5 * (p.m12 + q.m12), 0.5 * (p.m22 + q.m22)};
    }
};

/// Scalar field whose arc length the mesh equidistributes.
struct TestProblem {
    std::string name;
    std::function<double(double, double)> u;
};

/// u(x,y) = (1 - exp(15 (x - 1))) sin(pi y).
TestProblem exp_sine_problem();
/// u = 1 everywhere; the equidistributed mesh is uniform.
TestProblem constant_problem();
/// Registry lookup by name ("exp-sine", "constant").
TestProblem problem_by_name(const std::string& name);
std::vector<std::string> problem_names();

double eval_u(const TestProblem& problem, double x, double y);

/// k = a^2 / (1 + b |w|^2).
double k_factor(Vec2 w, const MonitorParams& params) noexcept;

/// M = k w w^T + I.
MonitorMatrix monitor_matrix(Vec2 w, const MonitorParams& params) noexcept;

inline constexpr double kJacobianFloor = 1e-12;

/// Physical gradient (u_x, u_y) from computational derivatives by the chain rule.
/// Throws DegenerateJacobianError (tagged with `node`) when
/// |x_xi y_eta - x_eta y_xi| <= kJacobianFloor.
Vec2 physical_gradient(double u_xi, double u_eta, double x_xi, double x_eta, double y_xi,
                       double y_eta, NodeIndex node = {});

/// sqrt(d^T M d); used for both the xi-direction (S1) and eta-direction (S2) forms.
double s_form(Vec2 d, const MonitorMatrix& m);

/// Nodal monitor matrices over a block of columns.
///
/// `x` and `y` hold `cols` columns with global indices first_column ..; derivatives
/// are centered where both neighbours exist in the block and three-point one-sided
/// otherwise. u is sampled at the nodes. Only columns [begin, end) of the block
/// are evaluated; the returned field has end - begin columns.
struct NodalMonitor {
    Field2D m11;
    Field2D m12;
    Field2D m22;

    MonitorMatrix at(int c, int j) const noexcept { return {m11(c, j), m12(c, j), m22(c, j)}; }
};

NodalMonitor nodal_monitor(const Field2D& x, const Field2D& y, int first_column, int begin,
                           int end, double d_xi, double d_eta, const MonitorParams& params,
                           const TestProblem& problem);

/// Nodal monitor of a full mesh.
NodalMonitor nodal_monitor(const PhysicalMesh& mesh, const MonitorParams& params,
                           const TestProblem& problem);

}  // namespace equimesh
