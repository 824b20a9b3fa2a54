#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <equimesh/schwarz.hpp>

namespace equimesh::cli {

/// Everything one run needs; mirrors the JSON accepted by --config.
struct RunConfig {
    std::string problem = "exp-sine";
    int n_xi = 12;
    int n_eta = 12;
    double a = 0.7;
    double b = 0.05;
    std::string boundary = "1d-ep";
    std::string method = "single";  // single | classical | linear-robin | nonlinear-robin
    int n_sub = 2;
    int overlap = 2;
    std::optional<double> p;
    int max_outer = 50;
    double outer_tol = 1e-8;
    std::string stop = "reference";
    double newton_tol = 1e-10;
    int newton_max_iter = 50;
    bool concurrent = true;
    std::string out = ".";

    /// Validated solver configuration; throws ConfigError naming the bad field.
    SchwarzConfig to_schwarz() const;
};

/// Apply a JSON object to cfg; unknown keys are rejected.
void apply_json(RunConfig& cfg, const std::string& json_text);

/// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kConfigError = 2;
inline constexpr int kNonConvergence = 3;
inline constexpr int kPartitionError = 4;

/// Entry point shared by the executable and the tests. args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace equimesh::cli
