#include "equimesh/quality.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace equimesh {

double cell_area(const PhysicalMesh& mesh, int i, int j) noexcept {
    const double xs[4] = {mesh.x(i, j), mesh.x(i + 1, j), mesh.x(i + 1, j + 1), mesh.x(i, j + 1)};
    const double ys[4] = {mesh.y(i, j), mesh.y(i + 1, j), mesh.y(i + 1, j + 1), mesh.y(i, j + 1)};
    double s = 0.0;
    for (int k = 0; k < 4; ++k) {
        const int n = (k + 1) % 4;
        s += xs[k] * ys[n] - xs[n] * ys[k];
    }
    return 0.5 * s;
}

QualityReport q_eq_from_density(const PhysicalMesh& mesh, const Field2D& rho) {
    const auto& g = mesh.grid;
    if (rho.cols() != g.n_xi() || rho.rows() != g.n_eta()) {
        throw ConfigError("density field does not match the mesh");
    }
    const int cx = g.n_xi() - 1;
    const int cy = g.n_eta() - 1;
    QualityReport rep;
    rep.q = Field2D(cx, cy);
    for (int i = 0; i < cx; ++i) {
        for (int j = 0; j < cy; ++j) {
            const double area = cell_area(mesh, i, j);
            if (!(area > 0.0)) {
                throw TangledMeshError({i, j}, "cell (" + std::to_string(i) + ", " +
                                                   std::to_string(j) +
                                                   ") has non-positive area");
            }
            const double r = 0.25 * (rho(i, j) + rho(i + 1, j) + rho(i + 1, j + 1) + rho(i, j + 1));
            rep.q(i, j) = r * area;
            rep.sigma += rep.q(i, j);
        }
    }
    const double scale = static_cast<double>(cx) * cy / rep.sigma;
    for (int i = 0; i < cx; ++i) {
        for (int j = 0; j < cy; ++j) {
            rep.q(i, j) *= scale;
            rep.q_max = std::max(rep.q_max, rep.q(i, j));
        }
    }
    return rep;
}

QualityReport q_eq(const PhysicalMesh& mesh, const MonitorParams& params,
                   const TestProblem& problem) {
    const auto& g = mesh.grid;
    for (int i = 0; i < g.n_xi() - 1; ++i) {
        for (int j = 0; j < g.n_eta() - 1; ++j) {
            if (!(cell_area(mesh, i, j) > 0.0)) {
                throw TangledMeshError({i, j}, "cell (" + std::to_string(i) + ", " +
                                                   std::to_string(j) +
                                                   ") has non-positive area");
            }
        }
    }
    const NodalMonitor m = nodal_monitor(mesh, params, problem);
    Field2D rho(g.n_xi(), g.n_eta());
    for (int i = 0; i < g.n_xi(); ++i) {
        for (int j = 0; j < g.n_eta(); ++j) rho(i, j) = std::sqrt(m.at(i, j).det());
    }
    return q_eq_from_density(mesh, rho);
}

}  // namespace equimesh
