#pragma once

#include "equimesh/grid.hpp"
#include "equimesh/monitor.hpp"

namespace equimesh {

/// Equidistribution quality per cell.
struct QualityReport {
    Field2D q;          // (n_xi-1) x (n_eta-1) cells, cell (i,j) has lower-left node (i,j)
    double q_max = 0.0;
    double sigma = 0.0; // sum of rho_K |K|
};

/// Q_eq(K) = N rho_K |K| / sum rho |K| with rho_K the mean of sqrt(det M) over the
/// four corner nodes (nodal M from the full-mesh monitor) and |K| the shoelace area.
/// Throws TangledMeshError on a cell of non-positive area.
QualityReport q_eq(const PhysicalMesh& mesh, const MonitorParams& params,
                   const TestProblem& problem);

/// Same measure from a given nodal density field rho (n_xi x n_eta).
QualityReport q_eq_from_density(const PhysicalMesh& mesh, const Field2D& rho);

/// Signed shoelace area of the quadrilateral with lower-left node (i, j).
double cell_area(const PhysicalMesh& mesh, int i, int j) noexcept;

}  // namespace equimesh
