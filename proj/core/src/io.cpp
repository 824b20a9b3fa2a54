#include "equimesh/io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <tuple>

#include <json.hpp>

namespace equimesh {

namespace {

using nlohmann::ordered_json;

std::string fmt(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

// NaN has no JSON representation; it becomes null.
ordered_json num(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); }

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream os(path);
    if (!os) throw Error("cannot open '" + path.string() + "' for writing");
    return os;
}

}  // namespace

void write_mesh_csv(std::ostream& os, const PhysicalMesh& mesh) {
    const auto& g = mesh.grid;
    os << "i,j,xi,eta,x,y\n";
    for (int j = 0; j < g.n_eta(); ++j) {
        for (int i = 0; i < g.n_xi(); ++i) {
            os << i << ',' << j << ',' << fmt(g.xi(i)) << ',' << fmt(g.eta(j)) << ','
               << fmt(mesh.x(i, j)) << ',' << fmt(mesh.y(i, j)) << '\n';
        }
    }
}

void write_mesh_csv(const std::filesystem::path& path, const PhysicalMesh& mesh) {
    auto os = open_out(path);
    write_mesh_csv(os, mesh);
}

PhysicalMesh read_mesh_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line != "i,j,xi,eta,x,y") {
        throw ConfigError("mesh CSV: missing header 'i,j,xi,eta,x,y'");
    }
    std::map<std::pair<int, int>, std::pair<double, double>> nodes;
    int ni = 0;
    int nj = 0;
    int lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ls(line);
        int i = 0;
        int j = 0;
        double xi = 0;
        double eta = 0;
        double x = 0;
        double y = 0;
        char c1, c2, c3, c4, c5;
        if (!(ls >> i >> c1 >> j >> c2 >> xi >> c3 >> eta >> c4 >> x >> c5 >> y) || i < 0 || j < 0) {
            throw ConfigError("mesh CSV: malformed line " + std::to_string(lineno));
        }
        nodes[{i, j}] = {x, y};
        ni = std::max(ni, i + 1);
        nj = std::max(nj, j + 1);
    }
    if (static_cast<std::size_t>(ni) * nj != nodes.size()) {
        throw ConfigError("mesh CSV: node set is not a full lattice");
    }
    PhysicalMesh mesh(ComputationalGrid(ni, nj));
    for (const auto& [ij, xy] : nodes) {
        mesh.x(ij.first, ij.second) = xy.first;
        mesh.y(ij.first, ij.second) = xy.second;
    }
    return mesh;
}

PhysicalMesh read_mesh_csv(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open mesh file '" + path.string() + "'");
    return read_mesh_csv(is);
}

namespace {

ordered_json config_json(const SchwarzConfig& c) {
    ordered_json j;
    j["problem"] = c.problem;
    j["n_xi"] = c.grid.n_xi();
    j["n_eta"] = c.grid.n_eta();
    j["a"] = c.params.a;
    j["b"] = c.params.b;
    j["boundary"] = to_string(c.mode);
    j["method"] = c.n_sub == 1 ? "single" : to_string(c.kind.type);
    j["n_sub"] = c.n_sub;
    j["overlap"] = c.overlap;
    if (c.kind.is_robin()) j["p"] = c.kind.p;
    j["max_outer"] = c.max_outer;
    j["outer_tol"] = c.outer_tol;
    j["stop"] = c.stop == StopRule::Reference ? "reference" : "increment";
    j["newton_tol"] = c.newton.tol;
    j["newton_max_iter"] = c.newton.max_iter;
    return j;
}

}  // namespace

std::string config_to_json(const SchwarzConfig& config) { return config_json(config).dump(2); }

std::string history_to_json(const SchwarzConfig& config, const ConvergenceHistory& history) {
    ordered_json j;
    j["config"] = config_json(config);
    j["q_initial"] = num(history.q_initial);
    j["converged"] = history.converged;
    ordered_json its = ordered_json::array();
    for (const auto& rec : history.iterations) {
        ordered_json r;
        r["n"] = rec.n;
        ordered_json ex = ordered_json::array();
        ordered_json ey = ordered_json::array();
        for (double v : rec.err_x) ex.push_back(num(v));
        for (double v : rec.err_y) ey.push_back(num(v));
        r["err_x"] = ex;
        r["err_y"] = ey;
        r["q_eq"] = num(rec.q_eq);
        r["increment"] = num(rec.increment);
        r["newton_iters"] = rec.newton_iters;
        its.push_back(r);
    }
    j["iterations"] = its;
    return j.dump(2);
}

void write_history_csv(std::ostream& os, const ConvergenceHistory& history,
                       const std::string& series) {
    if (series.empty()) {
        os << "n,subdomain,err_x,err_y\n";
    }
    for (const auto& rec : history.iterations) {
        for (std::size_t s = 0; s < rec.err_x.size(); ++s) {
            if (!series.empty()) os << series << ',';
            os << rec.n << ',' << s << ',' << fmt(rec.err_x[s]) << ',' << fmt(rec.err_y[s])
               << '\n';
        }
    }
}

void write_quality_csv(std::ostream& os, const std::vector<QualityRow>& rows) {
    os << "iteration,method,q_max\n";
    for (const auto& r : rows) {
        os << r.iteration << ',' << r.method << ',' << std::fixed << std::setprecision(4)
           << r.q_max << std::defaultfloat << '\n';
    }
}

std::string manifest_to_json(const std::vector<ManifestEntry>& entries) {
    ordered_json runs = ordered_json::array();
    for (const auto& e : entries) {
        ordered_json r;
        r["label"] = e.label;
        r["file"] = e.file;
        r["ok"] = e.ok;
        if (!e.ok) r["error"] = e.error;
        runs.push_back(r);
    }
    ordered_json j;
    j["runs"] = runs;
    return j.dump(2);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    auto os = open_out(path);
    os << text;
    if (!text.empty() && text.back() != '\n') os << '\n';
}

}  // namespace equimesh
