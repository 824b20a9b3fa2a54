#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "equimesh/error.hpp"

namespace equimesh {

/// Uniform (xi, eta) lattice on the unit square.
class ComputationalGrid {
public:
    ComputationalGrid(int n_xi, int n_eta);

    int n_xi() const noexcept { return n_xi_; }
    int n_eta() const noexcept { return n_eta_; }
    double d_xi() const noexcept { return 1.0 / (n_xi_ - 1); }
    double d_eta() const noexcept { return 1.0 / (n_eta_ - 1); }
    double xi(int i) const noexcept { return static_cast<double>(i) / (n_xi_ - 1); }
    double eta(int j) const noexcept { return static_cast<double>(j) / (n_eta_ - 1); }

    friend bool operator==(const ComputationalGrid&, const ComputationalGrid&) = default;

private:
    int n_xi_;
    int n_eta_;
};

/// Dense node-centred field over a block of columns, j fastest.
class Field2D {
public:
    Field2D() = default;
    Field2D(int cols, int rows, double value = 0.0)
        : cols_(cols), rows_(rows), data_(static_cast<std::size_t>(cols) * rows, value) {}

    int cols() const noexcept { return cols_; }
    int rows() const noexcept { return rows_; }

    double& operator()(int i, int j) noexcept { return data_[index(i, j)]; }
    double operator()(int i, int j) const noexcept { return data_[index(i, j)]; }

    std::span<const double> column(int i) const noexcept {
        return {data_.data() + index(i, 0), static_cast<std::size_t>(rows_)};
    }
    std::span<double> column(int i) noexcept {
        return {data_.data() + index(i, 0), static_cast<std::size_t>(rows_)};
    }
    std::span<const double> values() const noexcept { return data_; }

    friend bool operator==(const Field2D&, const Field2D&) = default;

private:
    std::size_t index(int i, int j) const noexcept {
        return static_cast<std::size_t>(i) * rows_ + j;
    }

    int cols_ = 0;
    int rows_ = 0;
    std::vector<double> data_;
};

/// Physical node coordinates x(i,j), y(i,j) over the full computational grid.
struct PhysicalMesh {
    explicit PhysicalMesh(const ComputationalGrid& g)
        : grid(g), x(g.n_xi(), g.n_eta()), y(g.n_xi(), g.n_eta()) {}

    ComputationalGrid grid;
    Field2D x;
    Field2D y;

    friend bool operator==(const PhysicalMesh&, const PhysicalMesh&) = default;
};

/// Coordinates of a contiguous block of columns, global columns i_lo .. i_lo + cols - 1.
struct StripMesh {
    int i_lo = 0;
    Field2D x;
    Field2D y;

    int columns() const noexcept { return x.cols(); }
    int i_hi() const noexcept { return i_lo + x.cols() - 1; }
};

/// Condition imposed at one end of a strip.
struct TransmissionKind {
    enum class Type { Physical, Dirichlet, LinearRobin, NonlinearRobin };

    Type type = Type::Physical;
    double p = 0.0;

    static TransmissionKind physical() { return {Type::Physical, 0.0}; }
    static TransmissionKind dirichlet() { return {Type::Dirichlet, 0.0}; }
    static TransmissionKind linear_robin(double p);
    static TransmissionKind nonlinear_robin(double p);

    bool is_artificial() const noexcept { return type != Type::Physical; }
    bool is_robin() const noexcept {
        return type == Type::LinearRobin || type == Type::NonlinearRobin;
    }

    friend bool operator==(const TransmissionKind&, const TransmissionKind&) = default;
};

const char* to_string(TransmissionKind::Type type) noexcept;

/// One strip of the xi-direction decomposition: inclusive column range.
struct SubdomainSpec {
    int i_lo = 0;
    int i_hi = 0;
    TransmissionKind left;
    TransmissionKind right;

    int columns() const noexcept { return i_hi - i_lo + 1; }
    double center() const noexcept { return 0.5 * (i_lo + i_hi); }
};

/// Data sent across an artificial interface at global column `column`.
/// g_x / g_y are Dirichlet values or Robin right-hand sides. halo_x / halo_y are
/// the neighbour's coordinates at `halo_column`, one column past the receiving
/// strip's last unknown column; they close the centered monitor stencil there.
struct InterfaceTrace {
    int column = -1;
    std::vector<double> g_x;
    std::vector<double> g_y;
    int halo_column = -1;
    std::vector<double> halo_x;
    std::vector<double> halo_y;
};

PhysicalMesh make_uniform_mesh(const ComputationalGrid& grid);

/// Balanced strips sharing exactly `overlap_points` columns; interfaces are
/// marked Dirichlet and the two outer ends Physical.
std::vector<SubdomainSpec> partition_strips(const ComputationalGrid& grid, int n_sub,
                                            int overlap_points);

/// Copy of strips with every artificial interface set to `kind`.
std::vector<SubdomainSpec> with_transmission(std::vector<SubdomainSpec> strips,
                                             TransmissionKind kind);

InterfaceTrace extract_trace(const PhysicalMesh& mesh, int i);

/// Strip index that owns global column i (nearest center, ties to the lower strip).
int owner_of_column(std::span<const SubdomainSpec> specs, int i);

/// Assemble one global mesh from per-strip meshes; strip s must cover specs[s].
PhysicalMesh glue(std::span<const StripMesh> strip_meshes,
                  std::span<const SubdomainSpec> specs, const ComputationalGrid& grid);

StripMesh restrict_columns(const PhysicalMesh& mesh, int i_lo, int i_hi);

/// Minimum over interior nodes of the centered discrete Jacobian x_xi y_eta - x_eta y_xi.
double min_interior_jacobian(const PhysicalMesh& mesh);

}  // namespace equimesh
