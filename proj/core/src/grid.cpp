#include "equimesh/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace equimesh {

ComputationalGrid::ComputationalGrid(int n_xi, int n_eta) : n_xi_(n_xi), n_eta_(n_eta) {
    if (n_xi < 3 || n_eta < 3) {
        throw ConfigError("computational grid needs at least 3 nodes per direction, got " +
                          std::to_string(n_xi) + " x " + std::to_string(n_eta));
    }
}

TransmissionKind TransmissionKind::linear_robin(double p) {
    if (!std::isfinite(p) || p <= 0.0) {
        throw ConfigError("Robin parameter p must be finite and positive");
    }
    return {Type::LinearRobin, p};
}

TransmissionKind TransmissionKind::nonlinear_robin(double p) {
    if (!std::isfinite(p) || p <= 0.0) {
        throw ConfigError("Robin parameter p must be finite and positive");
    }
    return {Type::NonlinearRobin, p};
}

const char* to_string(TransmissionKind::Type type) noexcept {
    switch (type) {
        case TransmissionKind::Type::Physical: return "physical";
        case TransmissionKind::Type::Dirichlet: return "dirichlet";
        case TransmissionKind::Type::LinearRobin: return "linear-robin";
        case TransmissionKind::Type::NonlinearRobin: return "nonlinear-robin";
    }
    return "unknown";
}

PhysicalMesh make_uniform_mesh(const ComputationalGrid& grid) {
    PhysicalMesh mesh(grid);
    for (int i = 0; i < grid.n_xi(); ++i) {
        for (int j = 0; j < grid.n_eta(); ++j) {
            mesh.x(i, j) = grid.xi(i);
            mesh.y(i, j) = grid.eta(j);
        }
    }
    return mesh;
}

std::vector<SubdomainSpec> partition_strips(const ComputationalGrid& grid, int n_sub,
                                            int overlap_points) {
    const int n = grid.n_xi();
    if (n_sub < 1) {
        throw PartitionError("number of subdomains must be at least 1");
    }
    if (n_sub == 1) {
        return {SubdomainSpec{0, n - 1, TransmissionKind::physical(),
                              TransmissionKind::physical()}};
    }
    if (overlap_points < 2) {
        throw PartitionError("overlap must be at least 2 shared columns, got " +
                             std::to_string(overlap_points));
    }

    // Widths sum to n plus the doubly counted overlap columns.
    const int total = n + (n_sub - 1) * overlap_points;
    const int base = total / n_sub;
    const int remainder = total % n_sub;

    std::vector<SubdomainSpec> strips;
    strips.reserve(n_sub);
    int lo = 0;
    for (int s = 0; s < n_sub; ++s) {
        const int width = base + (s < remainder ? 1 : 0);
        const bool interior_strip = s > 0 && s < n_sub - 1;
        if (width < 3 || width <= overlap_points ||
            (interior_strip && width < 2 * overlap_points)) {
            throw PartitionError("cannot split " + std::to_string(n) + " columns into " +
                                 std::to_string(n_sub) + " strips with " +
                                 std::to_string(overlap_points) +
                                 " shared columns: strip width " + std::to_string(width) +
                                 " too small");
        }
        SubdomainSpec spec;
        spec.i_lo = lo;
        spec.i_hi = lo + width - 1;
        spec.left = s == 0 ? TransmissionKind::physical() : TransmissionKind::dirichlet();
        spec.right = s == n_sub - 1 ? TransmissionKind::physical() : TransmissionKind::dirichlet();
        strips.push_back(spec);
        lo = spec.i_hi - overlap_points + 1;
    }
    return strips;
}

std::vector<SubdomainSpec> with_transmission(std::vector<SubdomainSpec> strips,
                                             TransmissionKind kind) {
    for (auto& s : strips) {
        if (s.left.is_artificial()) s.left = kind;
        if (s.right.is_artificial()) s.right = kind;
    }
    return strips;
}

InterfaceTrace extract_trace(const PhysicalMesh& mesh, int i) {
    if (i < 0 || i >= mesh.grid.n_xi()) {
        throw ConfigError("trace column " + std::to_string(i) + " outside [0, " +
                          std::to_string(mesh.grid.n_xi() - 1) + "]");
    }
    InterfaceTrace trace;
    trace.column = i;
    const auto cx = mesh.x.column(i);
    const auto cy = mesh.y.column(i);
    trace.g_x.assign(cx.begin(), cx.end());
    trace.g_y.assign(cy.begin(), cy.end());
    return trace;
}

int owner_of_column(std::span<const SubdomainSpec> specs, int i) {
    int owner = -1;
    double best = std::numeric_limits<double>::infinity();
    for (int s = 0; s < static_cast<int>(specs.size()); ++s) {
        if (i < specs[s].i_lo || i > specs[s].i_hi) continue;
        const double d = std::abs(i - specs[s].center());
        if (d < best) {
            best = d;
            owner = s;
        }
    }
    if (owner < 0) {
        throw PartitionError("column " + std::to_string(i) + " not covered by any strip");
    }
    return owner;
}

PhysicalMesh glue(std::span<const StripMesh> strip_meshes,
                  std::span<const SubdomainSpec> specs, const ComputationalGrid& grid) {
    if (strip_meshes.size() != specs.size()) {
        throw PartitionError("glue: one mesh per strip required");
    }
    PhysicalMesh out(grid);
    for (int i = 0; i < grid.n_xi(); ++i) {
        const int s = owner_of_column(specs, i);
        const StripMesh& m = strip_meshes[s];
        const int local = i - m.i_lo;
        if (local < 0 || local >= m.columns()) {
            throw PartitionError("glue: strip mesh does not cover its owned column");
        }
        std::ranges::copy(m.x.column(local), out.x.column(i).begin());
        std::ranges::copy(m.y.column(local), out.y.column(i).begin());
    }
    return out;
}

StripMesh restrict_columns(const PhysicalMesh& mesh, int i_lo, int i_hi) {
    if (i_lo < 0 || i_hi >= mesh.grid.n_xi() || i_lo > i_hi) {
        throw PartitionError("column range outside the grid");
    }
    StripMesh strip{i_lo, Field2D(i_hi - i_lo + 1, mesh.grid.n_eta()),
                    Field2D(i_hi - i_lo + 1, mesh.grid.n_eta())};
    for (int i = i_lo; i <= i_hi; ++i) {
        std::ranges::copy(mesh.x.column(i), strip.x.column(i - i_lo).begin());
        std::ranges::copy(mesh.y.column(i), strip.y.column(i - i_lo).begin());
    }
    return strip;
}

double min_interior_jacobian(const PhysicalMesh& mesh) {
    const auto& g = mesh.grid;
    const double hx = g.d_xi();
    const double hy = g.d_eta();
    double jmin = std::numeric_limits<double>::infinity();
    for (int i = 1; i < g.n_xi() - 1; ++i) {
        for (int j = 1; j < g.n_eta() - 1; ++j) {
            const double x_xi = (mesh.x(i + 1, j) - mesh.x(i - 1, j)) / (2 * hx);
            const double y_xi = (mesh.y(i + 1, j) - mesh.y(i - 1, j)) / (2 * hx);
            const double x_eta = (mesh.x(i, j + 1) - mesh.x(i, j - 1)) / (2 * hy);
            const double y_eta = (mesh.y(i, j + 1) - mesh.y(i, j - 1)) / (2 * hy);
            jmin = std::min(jmin, x_xi * y_eta - x_eta * y_xi);
        }
    }
    return jmin;
}

}  // namespace equimesh
