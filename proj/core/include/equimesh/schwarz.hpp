#pragma once

#include <optional>
#include <string>
#include <vector>

#include "equimesh/assembly.hpp"
#include "equimesh/grid.hpp"
#include "equimesh/monitor.hpp"
#include "equimesh/newton.hpp"

namespace equimesh {

/// Outer stopping rule: max error against a single-domain reference, or max
/// change of the exchanged interface data between two rounds.
enum class StopRule { Reference, Increment };

struct SchwarzConfig {
    ComputationalGrid grid{12, 12};
    MonitorParams params;
    std::string problem = "exp-sine";
    BoundaryMode mode = BoundaryMode::OneDimEP;
    int n_sub = 2;
    int overlap = 2;
    TransmissionKind kind = TransmissionKind::dirichlet();
    int max_outer = 50;
    double outer_tol = 1e-8;
    StopRule stop = StopRule::Reference;
    NewtonConfig newton;
    bool concurrent = true;
    bool record_quality = true;

    /// Throws ConfigError / PartitionError when the run cannot be set up.
    void validate() const;
};

struct IterationRecord {
    int n = 0;
    std::vector<double> err_x;  // per subdomain, vs reference; empty without one
    std::vector<double> err_y;
    double q_eq = 0.0;          // NaN when not recorded or the glued mesh is tangled
    double increment = 0.0;     // max change of interface data vs previous round (NaN at n=1)
    std::vector<int> newton_iters;
};

struct ConvergenceHistory {
    double q_initial = 0.0;  // q_eq of the starting mesh (iteration 0)
    std::vector<IterationRecord> iterations;
    bool converged = false;

    /// Largest error over subdomains of one component at iteration record k.
    double max_err_x(std::size_t k) const;
    double max_err_y(std::size_t k) const;
};

struct SchwarzResult {
    PhysicalMesh mesh;
    ConvergenceHistory history;
    std::vector<StripMesh> strips;  // strip columns only, no ghosts
};

/// Strip system for spec with interface data already attached.
StripSystem make_strip_system(const SchwarzConfig& config, const SubdomainSpec& spec);

/// Newton on one strip; if it fails, retries by ramping a through 0.25a .. a.
NewtonResult solve_strip(const StripSystem& system, std::vector<double> initial,
                         const NewtonConfig& newton);

/// Full-domain solve from the uniform mesh.
PhysicalMesh solve_single_domain(const ComputationalGrid& grid, const MonitorParams& params,
                                 const TestProblem& problem, BoundaryMode mode,
                                 const NewtonConfig& newton, NewtonStats* stats = nullptr);
PhysicalMesh solve_single_domain(const SchwarzConfig& config, NewtonStats* stats = nullptr);

/// Additive Schwarz over strips. Every subdomain solves from the previous round's
/// data; the starting iterate is `seed` (uniform mesh if null). With
/// StopRule::Reference and no reference given, the single-domain solution is
/// computed first.
SchwarzResult schwarz_iterate(const SchwarzConfig& config,
                              const PhysicalMesh* reference = nullptr,
                              const PhysicalMesh* seed = nullptr);

struct SweepEntry {
    std::string label;
    SchwarzConfig config;
    std::optional<ConvergenceHistory> history;
    std::string error;  // non-empty when the run failed
    bool partition_error = false;
};

std::vector<SweepEntry> run_overlap_sweep(const SchwarzConfig& base,
                                          const std::vector<int>& overlaps,
                                          const PhysicalMesh* reference = nullptr);

std::vector<SweepEntry> run_p_sweep(const SchwarzConfig& base,
                                    const std::vector<TransmissionKind>& kinds,
                                    const PhysicalMesh* reference = nullptr);

std::string kind_label(TransmissionKind kind);

}  // namespace equimesh
