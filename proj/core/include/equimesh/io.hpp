#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "equimesh/grid.hpp"
#include "equimesh/schwarz.hpp"

namespace equimesh {

/// Mesh CSV: header `i,j,xi,eta,x,y`, j outer, i inner, 17 significant digits.
void write_mesh_csv(std::ostream& os, const PhysicalMesh& mesh);
void write_mesh_csv(const std::filesystem::path& path, const PhysicalMesh& mesh);
PhysicalMesh read_mesh_csv(std::istream& is);
PhysicalMesh read_mesh_csv(const std::filesystem::path& path);

/// JSON object describing a run configuration.
std::string config_to_json(const SchwarzConfig& config);

/// {config, q_initial, converged, iterations: [{n, err_x, err_y, q_eq, newton_iters}]}.
std::string history_to_json(const SchwarzConfig& config, const ConvergenceHistory& history);

/// CSV `n,subdomain,err_x,err_y`, one line per outer iteration and subdomain.
void write_history_csv(std::ostream& os, const ConvergenceHistory& history,
                       const std::string& series = {});

/// One Table-1 style entry: iteration label ("0".."5" or "inf"), method name, q_max.
struct QualityRow {
    std::string iteration;
    std::string method;
    double q_max = 0.0;
};

/// CSV `iteration,method,q_max`.
void write_quality_csv(std::ostream& os, const std::vector<QualityRow>& rows);

/// Manifest of a sweep: {runs: [{label, file, ok, error}]}.
struct ManifestEntry {
    std::string label;
    std::string file;
    bool ok = true;
    std::string error;
};
std::string manifest_to_json(const std::vector<ManifestEntry>& entries);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace equimesh
