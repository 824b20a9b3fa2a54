#include "equimesh/error.hpp"

#include <sstream>
#include <utility>

namespace equimesh {

namespace {

std::string node_message(const char* prefix, NodeIndex node, double value) {
    std::ostringstream os;
    os << prefix << " at node (" << node.i << ", " << node.j << "): " << value;
    return os.str();
}

}  // namespace

DegenerateJacobianError::DegenerateJacobianError(NodeIndex node, double jacobian)
    : Error(node_message("degenerate mesh Jacobian", node, jacobian)),
      node_(node),
      jacobian_(jacobian) {}

TangledMeshError::TangledMeshError(NodeIndex cell, const std::string& what)
    : Error(what), cell_(cell) {}

SingularMatrixError::SingularMatrixError(int pivot_row, double pivot)
    : Error("singular matrix: pivot " + std::to_string(pivot) + " in row " +
            std::to_string(pivot_row)),
      pivot_row_(pivot_row) {}

NonConvergenceError::NonConvergenceError(const std::string& what,
                                         std::vector<double> best_state,
                                         std::vector<double> residual_history)
    : Error(what), best_state_(std::move(best_state)), history_(std::move(residual_history)) {}

}  // namespace equimesh
