#include "equimesh/assembly.hpp"

#include <cmath>
#include <string>

namespace equimesh {

const char* to_string(BoundaryMode mode) noexcept {
    return mode == BoundaryMode::OneDimEP ? "1d-ep" : "orthogonality";
}

BoundaryMode boundary_mode_from_string(const std::string& name) {
    if (name == "1d-ep") return BoundaryMode::OneDimEP;
    if (name == "orthogonality") return BoundaryMode::Orthogonality;
    throw ConfigError("unknown boundary mode '" + name + "' (known: 1d-ep, orthogonality)");
}

StripLayout::StripLayout(const SubdomainSpec& spec, const ComputationalGrid& grid)
    : first_(spec.i_lo - (spec.left.is_robin() ? 1 : 0)),
      last_(spec.i_hi + (spec.right.is_robin() ? 1 : 0)),
      n_eta_(grid.n_eta()) {
    if (spec.i_lo < 0 || spec.i_hi >= grid.n_xi() || spec.columns() < 3) {
        throw PartitionError("strip [" + std::to_string(spec.i_lo) + ".." +
                             std::to_string(spec.i_hi) + "] invalid for a grid of " +
                             std::to_string(grid.n_xi()) + " columns");
    }
    if ((spec.i_lo == 0) == spec.left.is_artificial() ||
        (spec.i_hi == grid.n_xi() - 1) == spec.right.is_artificial()) {
        throw PartitionError("strip ends must be physical exactly at the domain boundary");
    }
}

namespace {

double s_half(Vec2 d, const MonitorMatrix& a, const MonitorMatrix& b) {
    return s_form(d, MonitorMatrix::average(a, b));
}

}  // namespace

std::pair<double, double> interior_residual(const Field2D& x, const Field2D& y,
                                            const NodalMonitor& m, int cx, int cm, int j,
                                            double d_xi, double d_eta) {
    const MonitorMatrix mc = m.at(cm, j);
    const double s1p = s_half({(x(cx + 1, j) - x(cx, j)) / d_xi, (y(cx + 1, j) - y(cx, j)) / d_xi},
                              mc, m.at(cm + 1, j));
    const double s1m = s_half({(x(cx, j) - x(cx - 1, j)) / d_xi, (y(cx, j) - y(cx - 1, j)) / d_xi},
                              m.at(cm - 1, j), mc);
    const double s2p = s_half({(x(cx, j + 1) - x(cx, j)) / d_eta, (y(cx, j + 1) - y(cx, j)) / d_eta},
                              mc, m.at(cm, j + 1));
    const double s2m = s_half({(x(cx, j) - x(cx, j - 1)) / d_eta, (y(cx, j) - y(cx, j - 1)) / d_eta},
                              m.at(cm, j - 1), mc);
    return {s1p - s1m, s2p - s2m};
}

std::pair<double, double> interior_residual(const PhysicalMesh& mesh, int i, int j,
                                            const MonitorParams& params,
                                            const TestProblem& problem) {
    const auto& g = mesh.grid;
    if (i < 1 || i > g.n_xi() - 2 || j < 1 || j > g.n_eta() - 2) {
        throw ConfigError("interior_residual: node (" + std::to_string(i) + ", " +
                          std::to_string(j) + ") is not interior");
    }
    const NodalMonitor m = nodal_monitor(mesh.x, mesh.y, 0, i - 1, i + 2, g.d_xi(), g.d_eta(),
                                         params, problem);
    return interior_residual(mesh.x, mesh.y, m, i, 1, j, g.d_xi(), g.d_eta());
}

double edge_monitor(double s0, double s1, double u0, double u1, const MonitorParams& params,
                    NodeIndex where) {
    const double ds = s1 - s0;
    if (ds == 0.0) {
        throw TangledMeshError(where, "edge equidistribution: coincident nodes at (" +
                                          std::to_string(where.i) + ", " +
                                          std::to_string(where.j) + ")");
    }
    const double slope = (u1 - u0) / ds;
    const double k = params.a * params.a / (1.0 + params.b * slope * slope);
    return std::sqrt(1.0 + k * slope * slope);
}

std::vector<double> edge_residual_1dep(std::span<const double> s,
                                       const std::function<double(int cell)>& cell_monitor) {
    const int n = static_cast<int>(s.size());
    std::vector<double> r(n > 2 ? n - 2 : 0);
    for (int k = 1; k < n - 1; ++k) {
        r[k - 1] = cell_monitor(k) * (s[k + 1] - s[k]) - cell_monitor(k - 1) * (s[k] - s[k - 1]);
    }
    return r;
}

std::vector<double> edge_residual_1dep(std::span<const double> s, std::span<const double> u,
                                       const MonitorParams& params) {
    return edge_residual_1dep(s, [&](int cell) {
        return edge_monitor(s[cell], s[cell + 1], u[cell], u[cell + 1], params, {cell, 0});
    });
}

double edge_residual_orthogonality(double f0, double f1, double f2, double h) noexcept {
    return (-3.0 * f0 + 4.0 * f1 - f2) / (2.0 * h);
}

Vec2 transmission_residual(TransmissionKind kind, Side side, const InterfaceColumns& v,
                           const MonitorMatrix& m_iface, double d_xi, Vec2 g) {
    using T = TransmissionKind::Type;
    if (kind.type == T::Physical) {
        throw PartitionError("transmission residual requested on a physical boundary");
    }
    if (kind.type == T::Dirichlet) {
        return {v.iface.x - g.x, v.iface.y - g.y};
    }
    const double sign = side == Side::Right ? 1.0 : -1.0;
    // Centered derivative toward increasing xi.
    const Vec2 d{sign * (v.outer.x - v.inner.x) / (2.0 * d_xi),
                 sign * (v.outer.y - v.inner.y) / (2.0 * d_xi)};
    const double bx = kind.type == T::LinearRobin ? d.x : s_form(d, m_iface);
    return {bx + sign * kind.p * v.iface.x - g.x, d.y + sign * kind.p * v.iface.y - g.y};
}

InterfaceTrace compute_interface_data(TransmissionKind kind, Side side,
                                      const StripMesh& neighbour, int interface_column,
                                      const ComputationalGrid& grid,
                                      const MonitorParams& params, const TestProblem& problem) {
    if (!kind.is_artificial()) {
        throw PartitionError("interface data requested for a physical boundary");
    }
    const int outward = side == Side::Right ? 1 : -1;
    const int halo_column = interface_column + outward * (kind.is_robin() ? 2 : 1);
    const int c = interface_column - neighbour.i_lo;
    const int h = halo_column - neighbour.i_lo;
    if (c < 1 || c > neighbour.columns() - 2) {
        throw PartitionError("interface column " + std::to_string(interface_column) +
                             " is not interior to the neighbouring strip");
    }
    if (h < 0 || h >= neighbour.columns()) {
        throw PartitionError("neighbouring strip does not reach halo column " +
                             std::to_string(halo_column) + "; widen the strips");
    }
    for (double v : neighbour.x.values()) {
        if (!std::isfinite(v)) throw Error("non-finite coordinate in neighbouring strip");
    }

    InterfaceTrace t;
    t.column = interface_column;
    t.halo_column = halo_column;
    const int n_eta = grid.n_eta();
    const auto hx = neighbour.x.column(h);
    const auto hy = neighbour.y.column(h);
    t.halo_x.assign(hx.begin(), hx.end());
    t.halo_y.assign(hy.begin(), hy.end());

    if (kind.type == TransmissionKind::Type::Dirichlet) {
        const auto cx = neighbour.x.column(c);
        const auto cy = neighbour.y.column(c);
        t.g_x.assign(cx.begin(), cx.end());
        t.g_y.assign(cy.begin(), cy.end());
        return t;
    }

    NodalMonitor m;
    if (kind.type == TransmissionKind::Type::NonlinearRobin) {
        m = nodal_monitor(neighbour.x, neighbour.y, neighbour.i_lo, c, c + 1, grid.d_xi(),
                          grid.d_eta(), params, problem);
    }
    t.g_x.resize(n_eta);
    t.g_y.resize(n_eta);
    for (int j = 0; j < n_eta; ++j) {
        // The receiving strip sees this column as its boundary; from the
        // neighbour it is interior, so both sides are available.
        const Vec2 lo{neighbour.x(c - 1, j), neighbour.y(c - 1, j)};
        const Vec2 hi{neighbour.x(c + 1, j), neighbour.y(c + 1, j)};
        const InterfaceColumns cols{side == Side::Right ? lo : hi,
                                    {neighbour.x(c, j), neighbour.y(c, j)},
                                    side == Side::Right ? hi : lo};
        const MonitorMatrix mi =
            kind.type == TransmissionKind::Type::NonlinearRobin ? m.at(0, j) : MonitorMatrix{};
        const Vec2 b = transmission_residual(kind, side, cols, mi, grid.d_xi(), {0.0, 0.0});
        t.g_x[j] = b.x;
        t.g_y[j] = b.y;
    }
    return t;
}

namespace {

void check_trace(const std::optional<InterfaceTrace>& trace, TransmissionKind kind,
                 int expected_column, int expected_halo, int n_eta, const char* side) {
    const std::string where = std::string(side) + " interface";
    if (!trace) throw PartitionError("missing interface data on the " + where);
    if (trace->column != expected_column || trace->halo_column != expected_halo) {
        throw PartitionError("interface data on the " + where + " refers to the wrong column");
    }
    if (static_cast<int>(trace->g_x.size()) != n_eta ||
        static_cast<int>(trace->g_y.size()) != n_eta ||
        static_cast<int>(trace->halo_x.size()) != n_eta ||
        static_cast<int>(trace->halo_y.size()) != n_eta) {
        throw PartitionError("interface data on the " + where + " has the wrong length");
    }
    for (int j = 0; j < n_eta; ++j) {
        if (!std::isfinite(trace->g_x[j]) || !std::isfinite(trace->g_y[j]) ||
            !std::isfinite(trace->halo_x[j]) || !std::isfinite(trace->halo_y[j])) {
            throw Error("non-finite interface data on the " + where);
        }
    }
    (void)kind;
}

}  // namespace

void assemble(const StripSystem& sys, std::span<const double> state,
              std::span<double> residual) {
    const StripLayout layout(sys.spec, sys.grid);
    if (state.size() != layout.size() || residual.size() != layout.size()) {
        throw ConfigError("strip state has length " + std::to_string(state.size()) +
                          ", expected " + std::to_string(layout.size()));
    }
    const auto& grid = sys.grid;
    const int n_eta = grid.n_eta();
    const int n_xi = grid.n_xi();
    const int ncols = layout.columns();
    const double hx = grid.d_xi();
    const double hy = grid.d_eta();
    const auto& spec = sys.spec;

    const bool left_art = spec.left.is_artificial();
    const bool right_art = spec.right.is_artificial();
    if (left_art) {
        check_trace(sys.left_trace, spec.left, spec.i_lo, layout.first_column() - 1, n_eta, "left");
    }
    if (right_art) {
        check_trace(sys.right_trace, spec.right, spec.i_hi, layout.last_column() + 1, n_eta,
                    "right");
    }

    // Extended block: [left halo] unknown columns [right halo].
    const int off = left_art ? 1 : 0;
    const int ext_cols = ncols + off + (right_art ? 1 : 0);
    Field2D x(ext_cols, n_eta);
    Field2D y(ext_cols, n_eta);
    for (int c = 0; c < ncols; ++c) {
        for (int j = 0; j < n_eta; ++j) {
            x(c + off, j) = state[layout.index(c, j, 0)];
            y(c + off, j) = state[layout.index(c, j, 1)];
        }
    }
    if (left_art) {
        for (int j = 0; j < n_eta; ++j) {
            x(0, j) = sys.left_trace->halo_x[j];
            y(0, j) = sys.left_trace->halo_y[j];
        }
    }
    if (right_art) {
        for (int j = 0; j < n_eta; ++j) {
            x(ext_cols - 1, j) = sys.right_trace->halo_x[j];
            y(ext_cols - 1, j) = sys.right_trace->halo_y[j];
        }
    }
    const int first_ext = layout.first_column() - off;
    const NodalMonitor m =
        nodal_monitor(x, y, first_ext, off, off + ncols, hx, hy, sys.params, sys.problem);

    Field2D u(ext_cols, n_eta);
    for (int c = 0; c < ext_cols; ++c) {
        for (int j = 0; j < n_eta; ++j) u(c, j) = sys.problem.u(x(c, j), y(c, j));
    }

    auto put = [&](int c, int j, double rx, double ry) {
        residual[layout.index(c, j, 0)] = rx;
        residual[layout.index(c, j, 1)] = ry;
    };

    // 1D EP flux difference along xi on a horizontal edge row j at extended column e.
    auto edge_xi = [&](int e, int j) {
        const int gi = first_ext + e;
        const double ml = edge_monitor(x(e - 1, j), x(e, j), u(e - 1, j), u(e, j), sys.params,
                                       {gi - 1, j});
        const double mr = edge_monitor(x(e, j), x(e + 1, j), u(e, j), u(e + 1, j), sys.params,
                                       {gi, j});
        return mr * (x(e + 1, j) - x(e, j)) - ml * (x(e, j) - x(e - 1, j));
    };
    auto edge_eta = [&](int e, int j) {
        const int gi = first_ext + e;
        const double mb = edge_monitor(y(e, j - 1), y(e, j), u(e, j - 1), u(e, j), sys.params,
                                       {gi, j - 1});
        const double mt = edge_monitor(y(e, j), y(e, j + 1), u(e, j), u(e, j + 1), sys.params,
                                       {gi, j});
        return mt * (y(e, j + 1) - y(e, j)) - mb * (y(e, j) - y(e, j - 1));
    };

    const double y_bottom = grid.eta(0);
    const double y_top = grid.eta(n_eta - 1);

    for (int c = 0; c < ncols; ++c) {
        const int gi = layout.first_column() + c;
        const int e = c + off;
        const bool ghost_left = spec.left.is_robin() && gi == spec.i_lo - 1;
        const bool ghost_right = spec.right.is_robin() && gi == spec.i_hi + 1;

        for (int j = 0; j < n_eta; ++j) {
            const bool bottom = j == 0;
            const bool top = j == n_eta - 1;
            const double y_edge = bottom ? y_bottom : y_top;

            if (ghost_left || ghost_right) {
                const Side side = ghost_right ? Side::Right : Side::Left;
                const auto& trace = ghost_right ? *sys.right_trace : *sys.left_trace;
                const TransmissionKind kind = ghost_right ? spec.right : spec.left;
                const int step = ghost_right ? -1 : 1;  // toward the strip
                const int ce = e + step;                // interface column
                const InterfaceColumns cols{{x(ce + step, j), y(ce + step, j)},
                                            {x(ce, j), y(ce, j)},
                                            {x(e, j), y(e, j)}};
                const Vec2 r = transmission_residual(kind, side, cols, m.at(ce - off, j), hx,
                                                     {trace.g_x[j], trace.g_y[j]});
                put(c, j, r.x, (bottom || top) ? y(e, j) - y_edge : r.y);
                continue;
            }

            const bool dirichlet_left = spec.left.type == TransmissionKind::Type::Dirichlet &&
                                        gi == spec.i_lo;
            const bool dirichlet_right = spec.right.type == TransmissionKind::Type::Dirichlet &&
                                         gi == spec.i_hi;
            if (dirichlet_left || dirichlet_right) {
                const auto& trace = dirichlet_right ? *sys.right_trace : *sys.left_trace;
                put(c, j, x(e, j) - trace.g_x[j],
                    (bottom || top) ? y(e, j) - y_edge : y(e, j) - trace.g_y[j]);
                continue;
            }

            if (gi == 0 || gi == n_xi - 1) {
                const double x_edge = gi == 0 ? grid.xi(0) : grid.xi(n_xi - 1);
                double ry = 0.0;
                if (bottom || top) {
                    ry = y(e, j) - y_edge;
                } else if (sys.mode == BoundaryMode::OneDimEP) {
                    ry = edge_eta(e, j);
                } else {
                    const int in = gi == 0 ? 1 : -1;
                    ry = edge_residual_orthogonality(y(e, j), y(e + in, j), y(e + 2 * in, j), hx);
                }
                put(c, j, x(e, j) - x_edge, ry);
                continue;
            }

            if (bottom || top) {
                double rx = 0.0;
                if (sys.mode == BoundaryMode::OneDimEP) {
                    rx = edge_xi(e, j);
                } else {
                    const int in = bottom ? 1 : -1;
                    rx = edge_residual_orthogonality(x(e, j), x(e, j + in), x(e, j + 2 * in), hy);
                }
                put(c, j, rx, y(e, j) - y_edge);
                continue;
            }

            const auto [r1, r2] = interior_residual(x, y, m, e, c, j, hx, hy);
            put(c, j, r1, r2);
        }
    }
}

std::vector<double> assemble(const StripSystem& system, std::span<const double> state) {
    std::vector<double> r(state.size());
    assemble(system, state, r);
    return r;
}

std::vector<std::vector<int>> strip_jacobian_pattern(const StripLayout& layout) {
    // Every residual row reads unknowns within two nodes in each index direction.
    constexpr int kRadius = 2;
    const int ncols = layout.columns();
    const int n_eta = layout.n_eta();
    std::vector<std::vector<int>> rows_of_col(layout.size());
    for (int c = 0; c < ncols; ++c) {
        for (int j = 0; j < n_eta; ++j) {
            std::vector<int> rows;
            for (int cc = std::max(0, c - kRadius); cc <= std::min(ncols - 1, c + kRadius); ++cc) {
                for (int jj = std::max(0, j - kRadius); jj <= std::min(n_eta - 1, j + kRadius);
                     ++jj) {
                    rows.push_back(static_cast<int>(layout.index(cc, jj, 0)));
                    rows.push_back(static_cast<int>(layout.index(cc, jj, 1)));
                }
            }
            rows_of_col[layout.index(c, j, 0)] = rows;
            rows_of_col[layout.index(c, j, 1)] = std::move(rows);
        }
    }
    return rows_of_col;
}

std::vector<double> pack_state(const StripLayout& layout, const StripMesh& mesh) {
    if (mesh.i_lo != layout.first_column() || mesh.columns() != layout.columns()) {
        throw PartitionError("strip mesh does not match the strip layout");
    }
    std::vector<double> v(layout.size());
    for (int c = 0; c < layout.columns(); ++c) {
        for (int j = 0; j < layout.n_eta(); ++j) {
            v[layout.index(c, j, 0)] = mesh.x(c, j);
            v[layout.index(c, j, 1)] = mesh.y(c, j);
        }
    }
    return v;
}

StripMesh unpack_state(const StripLayout& layout, std::span<const double> state) {
    StripMesh mesh{layout.first_column(), Field2D(layout.columns(), layout.n_eta()),
                   Field2D(layout.columns(), layout.n_eta())};
    for (int c = 0; c < layout.columns(); ++c) {
        for (int j = 0; j < layout.n_eta(); ++j) {
            mesh.x(c, j) = state[layout.index(c, j, 0)];
            mesh.y(c, j) = state[layout.index(c, j, 1)];
        }
    }
    return mesh;
}

std::vector<double> state_from_mesh(const StripLayout& layout, const PhysicalMesh& mesh) {
    return pack_state(layout,
                      restrict_columns(mesh, layout.first_column(), layout.last_column()));
}

}  // namespace equimesh
