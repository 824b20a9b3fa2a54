#pragma once

#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "equimesh/grid.hpp"
#include "equimesh/monitor.hpp"

namespace equimesh {

/// How x on the bottom/top edges and y on the left/right edges are determined.
enum class BoundaryMode { OneDimEP, Orthogonality };

const char* to_string(BoundaryMode mode) noexcept;
BoundaryMode boundary_mode_from_string(const std::string& name);

enum class Side { Left, Right };

/// Unknown columns of a strip solve.
///
/// A Robin interface adds one ghost column of unknowns beyond the interface
/// column; a Dirichlet interface or a physical edge adds none. Unknowns are
/// node-major with j fastest and x before y at each node.
class StripLayout {
public:
    StripLayout(const SubdomainSpec& spec, const ComputationalGrid& grid);

    int first_column() const noexcept { return first_; }
    int last_column() const noexcept { return last_; }
    int columns() const noexcept { return last_ - first_ + 1; }
    int n_eta() const noexcept { return n_eta_; }
    std::size_t size() const noexcept { return 2u * columns() * n_eta_; }

    /// Position of component comp (0 = x, 1 = y) of node (local column c, row j).
    std::size_t index(int c, int j, int comp) const noexcept {
        return 2u * (static_cast<std::size_t>(c) * n_eta_ + j) + comp;
    }

private:
    int first_;
    int last_;
    int n_eta_;
};

/// Everything a strip residual depends on besides the unknowns themselves.
struct StripSystem {
    ComputationalGrid grid;
    SubdomainSpec spec;
    BoundaryMode mode = BoundaryMode::OneDimEP;
    MonitorParams params;
    TestProblem problem;
    std::optional<InterfaceTrace> left_trace;
    std::optional<InterfaceTrace> right_trace;
};

/// Local-EP residual (r1, r2) at an interior node (i, j) of a full mesh:
/// r1 = S1(i+1/2, j) - S1(i-1/2, j), r2 = S2(i, j+1/2) - S2(i, j-1/2), with the
/// half-point monitor the average of the two nodal matrices.
std::pair<double, double> interior_residual(const PhysicalMesh& mesh, int i, int j,
                                            const MonitorParams& params,
                                            const TestProblem& problem);

/// Same stencil from precomputed nodal monitors: x, y and m cover columns c-1..c+1.
std::pair<double, double> interior_residual(const Field2D& x, const Field2D& y,
                                            const NodalMonitor& m, int cx, int cm, int j,
                                            double d_xi, double d_eta);

/// Half-cell monitor of the 1D edge equidistribution, sqrt(1 + k s^2) with
/// s the slope of u between the two nodes. Throws TangledMeshError on coincident nodes.
double edge_monitor(double s0, double s1, double u0, double u1, const MonitorParams& params,
                    NodeIndex where = {});

/// 1D equidistribution residual M(k+1/2)(s(k+1)-s(k)) - M(k-1/2)(s(k)-s(k-1)) at
/// the interior nodes of an edge, with a caller-supplied half-cell monitor.
std::vector<double> edge_residual_1dep(std::span<const double> s,
                                       const std::function<double(int cell)>& cell_monitor);

/// 1D EP residual along an edge using the arc-length monitor of u restricted to it.
std::vector<double> edge_residual_1dep(std::span<const double> s, std::span<const double> u,
                                       const MonitorParams& params);

/// Second-order one-sided Neumann row: (-3 f0 + 4 f1 - f2) / (2h), where f0 is
/// on the boundary and f1, f2 step inward.
double edge_residual_orthogonality(double f0, double f1, double f2, double h) noexcept;

/// Node values across an interface at one row: column inside the strip,
/// interface column, and the column beyond it (ghost for Robin).
struct InterfaceColumns {
    Vec2 inner;
    Vec2 iface;
    Vec2 outer;
};

/// Transmission rows (r_x, r_y) at one row of an artificial interface. Robin kinds
/// use the centered xi-difference (outer - inner) across the interface column, with
/// +p on a right interface and -p on a left one; the nonlinear kind replaces the x
/// derivative by S1 with the nodal monitor at the interface.
Vec2 transmission_residual(TransmissionKind kind, Side side, const InterfaceColumns& v,
                           const MonitorMatrix& m_iface, double d_xi, Vec2 g);

/// Interface data a strip receives on `side` from its neighbour's previous iterate.
/// For Dirichlet the data is the neighbour's column; for Robin it is B evaluated
/// with centered differences and the neighbour's nodal monitor. The halo is taken
/// one column past the receiving strip's last unknown column.
InterfaceTrace compute_interface_data(TransmissionKind kind, Side side,
                                      const StripMesh& neighbour, int interface_column,
                                      const ComputationalGrid& grid,
                                      const MonitorParams& params, const TestProblem& problem);

/// Residual of the full strip system at `state` (length layout.size()).
void assemble(const StripSystem& system, std::span<const double> state,
              std::span<double> residual);
std::vector<double> assemble(const StripSystem& system, std::span<const double> state);

/// Structural dependency pattern of the strip residual: rows touched by each unknown.
std::vector<std::vector<int>> strip_jacobian_pattern(const StripLayout& layout);

std::vector<double> pack_state(const StripLayout& layout, const StripMesh& mesh);
StripMesh unpack_state(const StripLayout& layout, std::span<const double> state);

/// Initial unknowns for a strip taken from a global mesh (ghost columns included).
std::vector<double> state_from_mesh(const StripLayout& layout, const PhysicalMesh& mesh);

}  // namespace equimesh
