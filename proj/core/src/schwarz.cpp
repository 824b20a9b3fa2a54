#include "equimesh/schwarz.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <sstream>
#include <thread>

#include "equimesh/quality.hpp"

namespace equimesh {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double column_max(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, x);
    return m;
}

}  // namespace

double ConvergenceHistory::max_err_x(std::size_t k) const { return column_max(iterations.at(k).err_x); }
double ConvergenceHistory::max_err_y(std::size_t k) const { return column_max(iterations.at(k).err_y); }

void SchwarzConfig::validate() const {
    params.validate();
    newton.validate();
    (void)problem_by_name(problem);
    if (max_outer < 1) throw ConfigError("max_outer must be at least 1");
    if (!(outer_tol > 0.0)) throw ConfigError("outer_tol must be positive");
    if (n_sub > 1 && !kind.is_artificial()) {
        throw ConfigError("transmission kind must be dirichlet or robin");
    }
    const auto specs = with_transmission(partition_strips(grid, n_sub, overlap), kind);
    if (kind.is_robin()) {
        // The ghost column and halo need the neighbour two columns past the interface.
        for (std::size_t s = 0; s + 1 < specs.size(); ++s) {
            if (specs[s].i_hi + 2 > specs[s + 1].i_hi || specs[s + 1].i_lo - 2 < specs[s].i_lo) {
                throw PartitionError("robin transmission needs each neighbour to extend two "
                                     "columns past the interface");
            }
        }
    }
}

std::string kind_label(TransmissionKind kind) {
    std::ostringstream os;
    os << to_string(kind.type);
    if (kind.is_robin()) os << "-p" << kind.p;
    return os.str();
}

StripSystem make_strip_system(const SchwarzConfig& config, const SubdomainSpec& spec) {
    return StripSystem{config.grid, spec,   config.mode, config.params,
                       problem_by_name(config.problem), std::nullopt, std::nullopt};
}

NewtonResult solve_strip(const StripSystem& system, std::vector<double> initial,
                         const NewtonConfig& newton) {
    const StripLayout layout(system.spec, system.grid);
    const auto pattern = strip_jacobian_pattern(layout);
    auto run = [&](const StripSystem& sys, std::vector<double> start) {
        ResidualFn fn = [&sys](std::span<const double> v, std::span<double> r) {
            assemble(sys, v, r);
        };
        return newton_solve(fn, std::move(start), newton, &pattern);
    };
    try {
        return run(system, initial);
    } catch (const NonConvergenceError&) {
    } catch (const SingularMatrixError&) {
    }
    // Continuation in a.
    StripSystem staged = system;
    std::vector<double> state = std::move(initial);
    NewtonResult res;
    int total = 0;
    for (int stage = 1; stage <= 4; ++stage) {
        staged.params.a = system.params.a * stage / 4.0;
        res = run(staged, std::move(state));
        total += res.stats.iterations;
        state = res.state;
    }
    res.stats.iterations = total;
    return res;
}

PhysicalMesh solve_single_domain(const ComputationalGrid& grid, const MonitorParams& params,
                                 const TestProblem& problem, BoundaryMode mode,
                                 const NewtonConfig& newton, NewtonStats* stats) {
    params.validate();
    const SubdomainSpec spec{0, grid.n_xi() - 1, TransmissionKind::physical(),
                             TransmissionKind::physical()};
    const StripSystem sys{grid, spec, mode, params, problem, std::nullopt, std::nullopt};
    const StripLayout layout(spec, grid);
    NewtonResult res = solve_strip(sys, state_from_mesh(layout, make_uniform_mesh(grid)), newton);
    if (stats) *stats = res.stats;
    const StripMesh strip = unpack_state(layout, res.state);
    PhysicalMesh mesh(grid);
    mesh.x = strip.x;
    mesh.y = strip.y;
    return mesh;
}

PhysicalMesh solve_single_domain(const SchwarzConfig& config, NewtonStats* stats) {
    return solve_single_domain(config.grid, config.params, problem_by_name(config.problem),
                               config.mode, config.newton, stats);
}

namespace {

double safe_q(const PhysicalMesh& mesh, const MonitorParams& params, const TestProblem& problem) {
    try {
        return q_eq(mesh, params, problem).q_max;
    } catch (const Error&) {
        return kNaN;
    }
}

double trace_change(const InterfaceTrace& a, const InterfaceTrace& b) {
    double m = 0.0;
    for (std::size_t j = 0; j < a.g_x.size(); ++j) {
        m = std::max({m, std::abs(a.g_x[j] - b.g_x[j]), std::abs(a.g_y[j] - b.g_y[j]),
                      std::abs(a.halo_x[j] - b.halo_x[j]), std::abs(a.halo_y[j] - b.halo_y[j])});
    }
    return m;
}

}  // namespace

SchwarzResult schwarz_iterate(const SchwarzConfig& config, const PhysicalMesh* reference,
                              const PhysicalMesh* seed) {
    config.validate();
    const auto& grid = config.grid;
    const TestProblem problem = problem_by_name(config.problem);
    if (seed && !(seed->grid == grid)) throw ConfigError("seed mesh grid does not match config");
    if (reference && !(reference->grid == grid)) {
        throw ConfigError("reference mesh grid does not match config");
    }

    std::optional<PhysicalMesh> own_reference;
    if (!reference && config.stop == StopRule::Reference) {
        own_reference = solve_single_domain(config);
        reference = &*own_reference;
    }

    const auto specs = with_transmission(partition_strips(grid, config.n_sub, config.overlap),
                                         config.kind);
    const int S = static_cast<int>(specs.size());
    const PhysicalMesh start = seed ? *seed : make_uniform_mesh(grid);

    std::vector<StripLayout> layouts;
    std::vector<std::vector<double>> states;
    std::vector<StripMesh> meshes;  // strip columns of the latest iterate
    for (const auto& spec : specs) {
        layouts.emplace_back(spec, grid);
        states.push_back(state_from_mesh(layouts.back(), start));
        meshes.push_back(restrict_columns(start, spec.i_lo, spec.i_hi));
    }

    SchwarzResult result{start, {}, meshes};
    result.history.q_initial =
        config.record_quality ? safe_q(start, config.params, problem) : kNaN;

    std::vector<InterfaceTrace> prev_traces;
    for (int n = 1; n <= config.max_outer; ++n) {
        // Snapshot of round n-1 data for every strip.
        std::vector<StripSystem> systems;
        std::vector<InterfaceTrace> traces;
        for (int s = 0; s < S; ++s) {
            StripSystem sys = make_strip_system(config, specs[s]);
            if (specs[s].left.is_artificial()) {
                sys.left_trace = compute_interface_data(specs[s].left, Side::Left, meshes[s - 1],
                                                        specs[s].i_lo, grid, config.params,
                                                        problem);
                traces.push_back(*sys.left_trace);
            }
            if (specs[s].right.is_artificial()) {
                sys.right_trace = compute_interface_data(specs[s].right, Side::Right,
                                                         meshes[s + 1], specs[s].i_hi, grid,
                                                         config.params, problem);
                traces.push_back(*sys.right_trace);
            }
            systems.push_back(std::move(sys));
        }

        std::vector<NewtonResult> solved(S);
        std::vector<std::exception_ptr> failures(S);
        auto work = [&](int s) {
            try {
                solved[s] = solve_strip(systems[s], states[s], config.newton);
            } catch (...) {
                failures[s] = std::current_exception();
            }
        };
        if (config.concurrent && S > 1) {
            std::vector<std::jthread> pool;
            for (int s = 0; s < S; ++s) pool.emplace_back(work, s);
        } else {
            for (int s = 0; s < S; ++s) work(s);
        }
        for (int s = 0; s < S; ++s) {
            if (!failures[s]) continue;
            try {
                std::rethrow_exception(failures[s]);
            } catch (const NonConvergenceError& e) {
                throw NonConvergenceError("subdomain " + std::to_string(s) + ", outer iteration " +
                                              std::to_string(n) + ": " + e.what(),
                                          e.best_state(), e.residual_history());
            } catch (const PartitionError&) {
                throw;
            } catch (const ConfigError&) {
                throw;
            } catch (const Error& e) {
                throw Error("subdomain " + std::to_string(s) + ", outer iteration " +
                            std::to_string(n) + ": " + e.what());
            }
        }

        IterationRecord rec;
        rec.n = n;
        for (int s = 0; s < S; ++s) {
            states[s] = std::move(solved[s].state);
            rec.newton_iters.push_back(solved[s].stats.iterations);
            const StripMesh full = unpack_state(layouts[s], states[s]);
            const int off = specs[s].i_lo - full.i_lo;
            StripMesh own{specs[s].i_lo, Field2D(specs[s].columns(), grid.n_eta()),
                          Field2D(specs[s].columns(), grid.n_eta())};
            for (int c = 0; c < specs[s].columns(); ++c) {
                std::ranges::copy(full.x.column(c + off), own.x.column(c).begin());
                std::ranges::copy(full.y.column(c + off), own.y.column(c).begin());
            }
            meshes[s] = std::move(own);
        }
        if (reference) {
            for (int s = 0; s < S; ++s) {
                double ex = 0.0;
                double ey = 0.0;
                for (int c = 0; c < specs[s].columns(); ++c) {
                    const int i = specs[s].i_lo + c;
                    for (int j = 0; j < grid.n_eta(); ++j) {
                        ex = std::max(ex, std::abs(meshes[s].x(c, j) - reference->x(i, j)));
                        ey = std::max(ey, std::abs(meshes[s].y(c, j) - reference->y(i, j)));
                    }
                }
                rec.err_x.push_back(ex);
                rec.err_y.push_back(ey);
            }
        }
        rec.increment = kNaN;
        if (!prev_traces.empty()) {
            rec.increment = 0.0;
            for (std::size_t t = 0; t < traces.size(); ++t) {
                rec.increment = std::max(rec.increment, trace_change(traces[t], prev_traces[t]));
            }
        }
        prev_traces = std::move(traces);

        result.mesh = glue(meshes, specs, grid);
        rec.q_eq = config.record_quality ? safe_q(result.mesh, config.params, problem) : kNaN;
        result.history.iterations.push_back(rec);

        bool done = false;
        if (S == 1) {
            done = true;
        } else if (config.stop == StopRule::Reference) {
            done = std::max(column_max(rec.err_x), column_max(rec.err_y)) <= config.outer_tol;
        } else {
            done = std::isfinite(rec.increment) && rec.increment <= config.outer_tol;
        }
        if (done) {
            result.history.converged = true;
            break;
        }
    }
    result.strips = meshes;
    return result;
}

namespace {

std::vector<SweepEntry> run_all(std::vector<SweepEntry> entries, const PhysicalMesh* reference) {
    std::optional<PhysicalMesh> own;
    if (!reference && !entries.empty() && entries.front().config.stop == StopRule::Reference) {
        own = solve_single_domain(entries.front().config);
        reference = &*own;
    }
    for (auto& e : entries) {
        try {
            e.history = schwarz_iterate(e.config, reference).history;
        } catch (const PartitionError& err) {
            e.error = err.what();
            e.partition_error = true;
        } catch (const Error& err) {
            e.error = err.what();
        }
    }
    return entries;
}

}  // namespace

std::vector<SweepEntry> run_overlap_sweep(const SchwarzConfig& base,
                                          const std::vector<int>& overlaps,
                                          const PhysicalMesh* reference) {
    std::vector<SweepEntry> entries;
    for (int ov : overlaps) {
        SchwarzConfig c = base;
        c.overlap = ov;
        entries.push_back({"overlap-" + std::to_string(ov), c, std::nullopt, {}});
    }
    return run_all(std::move(entries), reference);
}

std::vector<SweepEntry> run_p_sweep(const SchwarzConfig& base,
                                    const std::vector<TransmissionKind>& kinds,
                                    const PhysicalMesh* reference) {
    std::vector<SweepEntry> entries;
    for (const auto& k : kinds) {
        SchwarzConfig c = base;
        c.kind = k;
        entries.push_back({kind_label(k), c, std::nullopt, {}});
    }
    return run_all(std::move(entries), reference);
}

}  // namespace equimesh
