#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace equimesh {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid user-supplied configuration (grid size, parameters, names).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Strip decomposition cannot be built or used for the requested transmission.
class PartitionError : public Error {
public:
    using Error::Error;
};

/// Node index attached to a geometric failure (global i, j).
struct NodeIndex {
    int i = -1;
    int j = -1;
};

/// Jacobian of the mesh map vanished (or nearly) at a node.
class DegenerateJacobianError : public Error {
public:
    DegenerateJacobianError(NodeIndex node, double jacobian);
    NodeIndex node() const noexcept { return node_; }
    double jacobian() const noexcept { return jacobian_; }

private:
    NodeIndex node_;
    double jacobian_;
};

/// A mesh cell (or edge segment) has non-positive measure.
class TangledMeshError : public Error {
public:
    TangledMeshError(NodeIndex cell, const std::string& what);
    NodeIndex cell() const noexcept { return cell_; }

private:
    NodeIndex cell_;
};

class SingularMatrixError : public Error {
public:
    SingularMatrixError(int pivot_row, double pivot);
    int pivot_row() const noexcept { return pivot_row_; }

private:
    int pivot_row_;
};

/// Newton (or an outer iteration built on it) did not reach its tolerance.
/// Carries the best iterate seen and the residual history.
class NonConvergenceError : public Error {
public:
    NonConvergenceError(const std::string& what, std::vector<double> best_state,
                        std::vector<double> residual_history);
    const std::vector<double>& best_state() const noexcept { return best_state_; }
    const std::vector<double>& residual_history() const noexcept { return history_; }

private:
    std::vector<double> best_state_;
    std::vector<double> history_;
};

}  // namespace equimesh
