#include "cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include <equimesh/io.hpp>
#include <equimesh/quality.hpp>

namespace equimesh::cli {

namespace fs = std::filesystem;

SchwarzConfig RunConfig::to_schwarz() const {
    SchwarzConfig c;
    if (n_xi < 3) throw ConfigError("n_xi: need at least 3 nodes, got " + std::to_string(n_xi));
    if (n_eta < 3) throw ConfigError("n_eta: need at least 3 nodes, got " + std::to_string(n_eta));
    c.grid = ComputationalGrid(n_xi, n_eta);
    c.params = {a, b};
    if (!(a >= 0.0 && a <= 1.0)) throw ConfigError("a: must lie in [0, 1]");
    if (!(b >= 0.0) || !std::isfinite(b)) throw ConfigError("b: must be finite and >= 0");
    try {
        (void)problem_by_name(problem);
    } catch (const ConfigError& e) {
        throw ConfigError(std::string("problem: ") + e.what());
    }
    c.problem = problem;
    try {
        c.mode = boundary_mode_from_string(boundary);
    } catch (const ConfigError& e) {
        throw ConfigError(std::string("boundary: ") + e.what());
    }

    if (method == "single") {
        c.n_sub = 1;
        c.kind = TransmissionKind::dirichlet();
    } else if (method == "classical") {
        c.kind = TransmissionKind::dirichlet();
    } else if (method == "linear-robin" || method == "nonlinear-robin") {
        if (!p) throw ConfigError("p: required for robin methods");
        if (!std::isfinite(*p) || *p <= 0.0) throw ConfigError("p: must be finite and positive");
        c.kind = method == "linear-robin" ? TransmissionKind::linear_robin(*p)
                                          : TransmissionKind::nonlinear_robin(*p);
    } else {
        throw ConfigError("method: unknown '" + method +
                          "' (single, classical, linear-robin, nonlinear-robin)");
    }
    if (method != "single") {
        if (n_sub < 1) throw ConfigError("n_sub: must be at least 1");
        c.n_sub = n_sub;
    }
    c.overlap = overlap;
    if (max_outer < 1) throw ConfigError("max_outer: must be at least 1");
    c.max_outer = max_outer;
    if (!(outer_tol > 0.0)) throw ConfigError("outer_tol: must be positive");
    c.outer_tol = outer_tol;
    if (stop == "reference") {
        c.stop = StopRule::Reference;
    } else if (stop == "increment") {
        c.stop = StopRule::Increment;
    } else {
        throw ConfigError("stop: unknown '" + stop + "' (reference, increment)");
    }
    if (!(newton_tol > 0.0)) throw ConfigError("newton_tol: must be positive");
    if (newton_max_iter < 1) throw ConfigError("newton_max_iter: must be at least 1");
    c.newton.tol = newton_tol;
    c.newton.max_iter = newton_max_iter;
    c.concurrent = concurrent;
    c.validate();
    return c;
}

void apply_json(RunConfig& cfg, const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config: top level must be an object");
    for (const auto& [key, v] : j.items()) {
        try {
            if (key == "problem") cfg.problem = v.get<std::string>();
            else if (key == "n") cfg.n_xi = cfg.n_eta = v.get<int>();
            else if (key == "n_xi") cfg.n_xi = v.get<int>();
            else if (key == "n_eta") cfg.n_eta = v.get<int>();
            else if (key == "a") cfg.a = v.get<double>();
            else if (key == "b") cfg.b = v.get<double>();
            else if (key == "boundary") cfg.boundary = v.get<std::string>();
            else if (key == "method") cfg.method = v.get<std::string>();
            else if (key == "n_sub") cfg.n_sub = v.get<int>();
            else if (key == "overlap") cfg.overlap = v.get<int>();
            else if (key == "p") cfg.p = v.get<double>();
            else if (key == "max_outer") cfg.max_outer = v.get<int>();
            else if (key == "outer_tol") cfg.outer_tol = v.get<double>();
            else if (key == "stop") cfg.stop = v.get<std::string>();
            else if (key == "newton_tol") cfg.newton_tol = v.get<double>();
            else if (key == "newton_max_iter") cfg.newton_max_iter = v.get<int>();
            else if (key == "concurrent") cfg.concurrent = v.get<bool>();
            else if (key == "out") cfg.out = v.get<std::string>();
            else throw ConfigError(key + ": unknown config key");
        } catch (const nlohmann::json::exception&) {
            throw ConfigError(key + ": wrong type in config file");
        }
    }
}

namespace {

struct Flags {
    std::string config_file;
    RunConfig cfg;
    int n = 0;
    double p = 0.0;
    bool serial = false;
};

// Registers the run flags; values land in f and are applied after --config.
void add_run_flags(CLI::App& app, Flags& f) {
    app.add_option("--config", f.config_file, "JSON config file (flags win)");
    app.add_option("--out", f.cfg.out, "Output directory");
    app.add_option("--problem", f.cfg.problem, "Test problem (exp-sine, constant)");
    app.add_option("--n", f.n, "Grid nodes per direction");
    app.add_option("--n-xi", f.cfg.n_xi, "Nodes in xi");
    app.add_option("--n-eta", f.cfg.n_eta, "Nodes in eta");
    app.add_option("--a", f.cfg.a, "Relaxation parameter a");
    app.add_option("--b", f.cfg.b, "Regularisation b");
    app.add_option("--boundary", f.cfg.boundary, "Boundary mode (1d-ep, orthogonality)");
    app.add_option("--method", f.cfg.method,
                   "single, classical, linear-robin or nonlinear-robin");
    app.add_option("--n-sub", f.cfg.n_sub, "Number of strips");
    app.add_option("--overlap", f.cfg.overlap, "Shared grid columns between strips");
    app.add_option("--p", f.p, "Robin parameter");
    app.add_option("--max-outer", f.cfg.max_outer, "Maximum Schwarz iterations");
    app.add_option("--outer-tol", f.cfg.outer_tol, "Schwarz stopping tolerance");
    app.add_option("--stop", f.cfg.stop, "Stopping rule (reference, increment)");
    app.add_option("--newton-tol", f.cfg.newton_tol, "Newton residual tolerance");
    app.add_option("--newton-max-iter", f.cfg.newton_max_iter, "Newton iteration limit");
    app.add_flag("--serial", f.serial, "Solve subdomains one after another");
}

// Config file first, then every flag given on the command line on top.
RunConfig resolve(const CLI::App& app, const Flags& f) {
    RunConfig cfg;
    if (!f.config_file.empty()) {
        std::ifstream is(f.config_file);
        if (!is) throw ConfigError("config: cannot open '" + f.config_file + "'");
        std::stringstream ss;
        ss << is.rdbuf();
        apply_json(cfg, ss.str());
    }
    auto given = [&](const char* name) { return app.count(name) > 0; };
    if (given("--out")) cfg.out = f.cfg.out;
    if (given("--problem")) cfg.problem = f.cfg.problem;
    if (given("--n")) cfg.n_xi = cfg.n_eta = f.n;
    if (given("--n-xi")) cfg.n_xi = f.cfg.n_xi;
    if (given("--n-eta")) cfg.n_eta = f.cfg.n_eta;
    if (given("--a")) cfg.a = f.cfg.a;
    if (given("--b")) cfg.b = f.cfg.b;
    if (given("--boundary")) cfg.boundary = f.cfg.boundary;
    if (given("--method")) cfg.method = f.cfg.method;
    if (given("--n-sub")) cfg.n_sub = f.cfg.n_sub;
    if (given("--overlap")) cfg.overlap = f.cfg.overlap;
    if (given("--p")) cfg.p = f.p;
    if (given("--max-outer")) cfg.max_outer = f.cfg.max_outer;
    if (given("--outer-tol")) cfg.outer_tol = f.cfg.outer_tol;
    if (given("--stop")) cfg.stop = f.cfg.stop;
    if (given("--newton-tol")) cfg.newton_tol = f.cfg.newton_tol;
    if (given("--newton-max-iter")) cfg.newton_max_iter = f.cfg.newton_max_iter;
    if (given("--serial")) cfg.concurrent = !f.serial;
    return cfg;
}

fs::path prepare_dir(const std::string& dir) {
    fs::path p(dir);
    std::error_code ec;
    fs::create_directories(p, ec);
    if (ec) throw ConfigError("out: cannot create '" + dir + "': " + ec.message());
    return p;
}

std::string fixed4(double v) {
    if (!std::isfinite(v)) return "nan";
    std::ostringstream os;
    os << std::fixed << std::setprecision(4) << v;
    return os.str();
}

std::string sci(double v) {
    std::ostringstream os;
    os << std::scientific << std::setprecision(3) << v;
    return os.str();
}

void write_history_files(const fs::path& dir, const SchwarzConfig& sc,
                         const ConvergenceHistory& h) {
    write_text(dir / "history.json", history_to_json(sc, h));
    std::ofstream csv(dir / "history.csv");
    if (!csv) throw Error("cannot write '" + (dir / "history.csv").string() + "'");
    write_history_csv(csv, h);
}

int cmd_solve(const RunConfig& cfg, std::ostream& out) {
    const SchwarzConfig sc = cfg.to_schwarz();
    const fs::path dir = prepare_dir(cfg.out);
    const TestProblem problem = problem_by_name(sc.problem);
    const double q0 = q_eq(make_uniform_mesh(sc.grid), sc.params, problem).q_max;

    if (sc.n_sub == 1) {
        NewtonStats stats;
        const PhysicalMesh mesh = solve_single_domain(sc, &stats);
        const double q = q_eq(mesh, sc.params, problem).q_max;
        write_mesh_csv(dir / "mesh.csv", mesh);
        std::ofstream qcsv(dir / "quality.csv");
        write_quality_csv(qcsv, {{"0", "single", q0}, {"inf", "single", q}});
        out << "q_max = " << fixed4(q) << "\n"
            << "newton iterations = " << stats.iterations << "\n"
            << "residual = " << sci(stats.residual) << "\n";
        return kOk;
    }

    const SchwarzResult res = schwarz_iterate(sc);
    write_mesh_csv(dir / "mesh.csv", res.mesh);
    write_history_files(dir, sc, res.history);
    std::vector<QualityRow> rows{{"0", cfg.method, res.history.q_initial}};
    for (const auto& rec : res.history.iterations) {
        rows.push_back({std::to_string(rec.n), cfg.method, rec.q_eq});
    }
    std::ofstream qcsv(dir / "quality.csv");
    write_quality_csv(qcsv, rows);

    const auto& last = res.history.iterations.back();
    out << "q_max = " << fixed4(last.q_eq) << "\n"
        << "outer iterations = " << last.n << "\n";
    if (!last.err_x.empty()) {
        out << "error = " << sci(std::max(res.history.max_err_x(res.history.iterations.size() - 1),
                                          res.history.max_err_y(res.history.iterations.size() - 1)))
            << "\n";
    }
    if (!res.history.converged) {
        throw NonConvergenceError("schwarz: outer tolerance not reached in " +
                                      std::to_string(sc.max_outer) + " iterations",
                                  {}, {});
    }
    return kOk;
}

int cmd_table1(const RunConfig& base, std::ostream& out) {
    RunConfig cfg = base;
    cfg.problem = "exp-sine";
    cfg.n_xi = cfg.n_eta = 12;
    cfg.a = 0.7;
    cfg.b = 0.05;
    cfg.n_sub = 2;
    cfg.overlap = 2;
    cfg.p = 2.0;
    cfg.max_outer = 5;
    cfg.outer_tol = std::numeric_limits<double>::min();  // always run all five
    cfg.method = "single";
    const SchwarzConfig single = cfg.to_schwarz();
    const fs::path dir = prepare_dir(cfg.out);
    const TestProblem problem = problem_by_name(single.problem);

    const PhysicalMesh ref = solve_single_domain(single);
    const double q_inf = q_eq(ref, single.params, problem).q_max;

    std::vector<QualityRow> rows;
    out << std::left << std::setw(16) << "method";
    for (int n = 0; n <= 5; ++n) out << std::setw(8) << n;
    out << "inf\n";
    for (const char* method : {"classical", "linear-robin", "nonlinear-robin"}) {
        cfg.method = method;
        const SchwarzResult res = schwarz_iterate(cfg.to_schwarz(), &ref);
        std::vector<double> q{res.history.q_initial};
        for (const auto& rec : res.history.iterations) q.push_back(rec.q_eq);
        out << std::setw(16) << method;
        for (std::size_t n = 0; n < q.size(); ++n) {
            rows.push_back({std::to_string(n), method, q[n]});
            out << std::setw(8) << fixed4(q[n]);
        }
        rows.push_back({"inf", method, q_inf});
        out << fixed4(q_inf) << "\n";
    }
    std::ofstream qcsv(dir / "table1.csv");
    write_quality_csv(qcsv, rows);
    return kOk;
}

std::vector<std::string> split(const std::string& s) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) parts.push_back(item);
    }
    return parts;
}

int cmd_sweep(const RunConfig& cfg, const std::string& axis, const std::string& values,
              const std::string& kinds, std::ostream& out, std::ostream& err) {
    RunConfig base_cfg = cfg;
    if (axis == "p") {
        if (!base_cfg.p) base_cfg.p = 1.0;  // placeholder; each run sets its own p
        if (base_cfg.method != "linear-robin" && base_cfg.method != "nonlinear-robin") {
            base_cfg.method = "linear-robin";
        }
    } else if (axis == "overlap") {
        if (base_cfg.method == "single") base_cfg.method = "classical";
    } else {
        throw ConfigError("axis: unknown '" + axis + "' (overlap, p)");
    }
    const SchwarzConfig base = base_cfg.to_schwarz();
    const fs::path dir = prepare_dir(cfg.out);

    std::vector<SweepEntry> entries;
    const auto vals = split(values);
    if (vals.empty()) throw ConfigError("values: empty list");
    try {
        if (axis == "overlap") {
            std::vector<int> overlaps;
            for (const auto& v : vals) overlaps.push_back(std::stoi(v));
            entries = run_overlap_sweep(base, overlaps);
        } else {
            std::vector<TransmissionKind> ks;
            for (const auto& k : split(kinds)) {
                for (const auto& v : vals) {
                    const double p = std::stod(v);
                    if (k == "linear-robin") ks.push_back(TransmissionKind::linear_robin(p));
                    else if (k == "nonlinear-robin") ks.push_back(TransmissionKind::nonlinear_robin(p));
                    else throw ConfigError("kinds: unknown '" + k + "'");
                }
            }
            entries = run_p_sweep(base, ks);
        }
    } catch (const std::invalid_argument&) {
        throw ConfigError("values: not a number list '" + values + "'");
    }

    std::vector<ManifestEntry> manifest;
    std::ofstream combined(dir / "combined.csv");
    combined << "series,n,subdomain,err_x,err_y\n";
    int failures = 0;
    bool partition_only = true;
    for (const auto& e : entries) {
        if (!e.history) {
            ++failures;
            partition_only = partition_only && e.partition_error;
            manifest.push_back({e.label, "", false, e.error});
            err << e.label << ": " << e.error << "\n";
            continue;
        }
        const fs::path sub = prepare_dir((dir / e.label).string());
        write_history_files(sub, e.config, *e.history);
        write_history_csv(combined, *e.history, e.label);
        manifest.push_back({e.label, (fs::path(e.label) / "history.json").string(), true, {}});
        const auto& h = *e.history;
        out << std::left << std::setw(24) << e.label << " iterations " << std::setw(4)
            << h.iterations.size() << " err_x(1) " << sci(h.iterations.back().err_x.front())
            << "\n";
    }
    write_text(dir / "manifest.json", manifest_to_json(manifest));
    if (failures == 0) return kOk;
    return partition_only ? kPartitionError : kNonConvergence;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Adaptive mesh generation by local equidistribution with Schwarz solvers"};
    app.require_subcommand(1);

    Flags solve_flags;
    auto* solve = app.add_subcommand("solve", "Single-domain or Schwarz solve");
    add_run_flags(*solve, solve_flags);

    Flags table_flags;
    auto* table1 = app.add_subcommand("table1", "Mesh-quality table for the three methods");
    table1->add_option("--out", table_flags.cfg.out, "Output directory");
    table1->add_flag("--serial", table_flags.serial, "Solve subdomains one after another");

    Flags sweep_flags;
    std::string axis;
    std::string values;
    std::string kinds = "linear-robin,nonlinear-robin";
    auto* sweep = app.add_subcommand("sweep", "Overlap or Robin-parameter sweep");
    add_run_flags(*sweep, sweep_flags);
    sweep->add_option("--axis", axis, "overlap or p")->required();
    sweep->add_option("--values", values, "Comma-separated values, e.g. 2,4,6,8")->required();
    sweep->add_option("--kinds", kinds, "Robin kinds for a p sweep");

    std::vector<std::string> rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        std::ostringstream o;
        std::ostringstream x;
        const int code = app.exit(e, o, x);
        out << o.str();
        err << x.str();
        return code == 0 ? kOk : kConfigError;
    }

    try {
        if (*solve) return cmd_solve(resolve(*solve, solve_flags), out);
        if (*table1) {
            RunConfig cfg;
            cfg.out = table_flags.cfg.out;
            cfg.concurrent = !table_flags.serial;
            return cmd_table1(cfg, out);
        }
        return cmd_sweep(resolve(*sweep, sweep_flags), axis, values, kinds, out, err);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const PartitionError& e) {
        err << "partition error: " << e.what() << "\n";
        return kPartitionError;
    } catch (const Error& e) {
        err << "solver failure: " << e.what() << "\n";
        return kNonConvergence;
    }
}

}  // namespace equimesh::cli
