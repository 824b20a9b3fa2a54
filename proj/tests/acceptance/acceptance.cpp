// Acceptance suite: one PASS/FAIL line per criterion.
//   acceptance            run all criteria
//   acceptance --only N   run criterion N

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <equimesh/equimesh.hpp>

using namespace equimesh;

namespace {

constexpr double kTable1Uniform = 1.6375;
constexpr double kTable1Converged = 1.1979;
constexpr double kTable1ClassicalIter1 = 1.3630;
constexpr double kTableTol = 0.02;
constexpr double kRobinPlateauTol = 1e-3;
constexpr double kResidualTol = 1e-10;
constexpr double kUniformTol = 1e-10;
constexpr double kStationaryFactor = 10.0;
constexpr double kMinOrder = 1.9;
constexpr double kMeanTol = 1e-12;
constexpr double kStepNodeTol = 1e-8;
constexpr double kComponentRatio = 3.0;
constexpr int kMaxRatioViolations = 1;
constexpr double kNoEarlyStop = std::numeric_limits<double>::min();

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

SchwarzConfig paper_config() {
    SchwarzConfig c;
    c.grid = ComputationalGrid(12, 12);
    c.params = {0.7, 0.05};
    c.problem = "exp-sine";
    c.n_sub = 2;
    c.overlap = 2;
    return c;
}

const PhysicalMesh& reference12() {
    static const PhysicalMesh ref = solve_single_domain(paper_config());
    return ref;
}

double sub1_err_x(const ConvergenceHistory& h, int n) { return h.iterations.at(n - 1).err_x.at(0); }

Outcome criterion1() {
    const auto c = paper_config();
    const double q = q_eq(make_uniform_mesh(c.grid), c.params, exp_sine_problem()).q_max;
    return {std::abs(q - kTable1Uniform) <= kTableTol,
            "uniform 12x12 q_max " + fmt("%.4f", q) + " (target 1.6375 +- 0.02)"};
}

Outcome criterion2() {
    const auto c = paper_config();
    const auto& ref = reference12();
    const double q = q_eq(ref, c.params, exp_sine_problem()).q_max;
    const SubdomainSpec whole{0, 11, TransmissionKind::physical(), TransmissionKind::physical()};
    const StripSystem sys{c.grid, whole, c.mode, c.params, exp_sine_problem(), std::nullopt,
                          std::nullopt};
    const double res = max_norm(assemble(sys, state_from_mesh(StripLayout(whole, c.grid), ref)));
    return {std::abs(q - kTable1Converged) <= kTableTol && res <= kResidualTol,
            "single-domain q_max " + fmt("%.4f", q) + " (target 1.1979 +- 0.02), residual " +
                fmt("%.2e", res)};
}

Outcome criterion3() {
    const auto& ref = reference12();
    auto c = paper_config();
    const double q_inf = q_eq(ref, c.params, exp_sine_problem()).q_max;
    c.max_outer = 5;
    c.outer_tol = kNoEarlyStop;

    std::ostringstream os;
    bool pass = true;
    c.kind = TransmissionKind::dirichlet();
    const auto cl = schwarz_iterate(c, &ref).history;
    const double q1 = cl.iterations.at(0).q_eq;
    const bool cl_ok = std::abs(q1 - kTable1ClassicalIter1) <= kTableTol;
    pass = pass && cl_ok;
    os << "classical n=1 q " << fmt("%.4f", q1) << (cl_ok ? " ok" : " MISS") << ";";
    for (auto k : {TransmissionKind::linear_robin(2), TransmissionKind::nonlinear_robin(2)}) {
        c.kind = k;
        const auto h = schwarz_iterate(c, &ref).history;
        os << " " << to_string(k.type) << " n=2..5 q";
        bool ok = true;
        for (int n = 2; n <= 5; ++n) {
            const double q = h.iterations.at(n - 1).q_eq;
            os << " " << fmt("%.4f", q);
            ok = ok && std::abs(q - q_inf) <= kRobinPlateauTol;
        }
        os << (ok ? " ok" : " MISS") << ";";
        pass = pass && ok;
    }
    os << " q_inf " << fmt("%.4f", q_inf);
    return {pass, os.str()};
}

Outcome criterion4() {
    auto c = paper_config();
    c.max_outer = 10;
    c.outer_tol = kNoEarlyStop;
    const auto runs = run_overlap_sweep(c, {2, 4, 6, 8}, &reference12());
    std::ostringstream os;
    os << "classical err_x1 at n=10:";
    bool pass = true;
    double prev = std::numeric_limits<double>::infinity();
    for (const auto& r : runs) {
        if (!r.history) return {false, r.label + " failed: " + r.error};
        const double e = sub1_err_x(*r.history, 10);
        os << " " << r.label << " " << fmt("%.3e", e);
        pass = pass && e < prev;
        prev = e;
    }
    return {pass, os.str()};
}

Outcome criterion5() {
    const auto c = paper_config();
    std::vector<TransmissionKind> kinds;
    for (double p : {1.0, 2.0, 3.0}) kinds.push_back(TransmissionKind::linear_robin(p));
    for (double p : {1.0, 2.0, 3.0}) kinds.push_back(TransmissionKind::nonlinear_robin(p));
    const auto runs = run_p_sweep(c, kinds, &reference12());
    int common = std::numeric_limits<int>::max();
    for (const auto& r : runs) {
        if (!r.history) return {false, r.label + " failed: " + r.error};
        common = std::min(common, static_cast<int>(r.history->iterations.size()));
    }
    std::ostringstream os;
    os << "final common iteration " << common << ":";
    bool pass = true;
    for (int kind = 0; kind < 2; ++kind) {
        int best = -1;
        double best_err = std::numeric_limits<double>::infinity();
        for (int k = 0; k < 3; ++k) {
            const auto& r = runs[3 * kind + k];
            const double e = sub1_err_x(*r.history, common);
            os << " " << r.label << " " << fmt("%.3e", e);
            if (e < best_err) {
                best_err = e;
                best = k + 1;
            }
        }
        os << " (argmin p=" << best << ");";
        pass = pass && best == 2;
    }
    return {pass, os.str()};
}

Outcome criterion6() {
    auto c = paper_config();
    c.max_outer = 5;
    c.outer_tol = kNoEarlyStop;
    const auto runs = run_p_sweep(c,
                                  {TransmissionKind::dirichlet(), TransmissionKind::linear_robin(2),
                                   TransmissionKind::nonlinear_robin(2)},
                                  &reference12());
    for (const auto& r : runs) {
        if (!r.history) return {false, r.label + " failed: " + r.error};
    }
    const double d = sub1_err_x(*runs[0].history, 5);
    const double l = sub1_err_x(*runs[1].history, 5);
    const double n = sub1_err_x(*runs[2].history, 5);
    return {n <= l && l < d, "err_x1 at n=5: nonlinear " + fmt("%.3e", n) + " <= linear " +
                                 fmt("%.3e", l) + " < classical " + fmt("%.3e", d)};
}

Outcome criterion7() {
    auto c = paper_config();
    c.overlap = 4;
    const auto h = schwarz_iterate(c, &reference12()).history;
    int violations = 0;
    double worst = 0.0;
    const int N = static_cast<int>(h.iterations.size());
    for (const auto& rec : h.iterations) {
        const double e[4] = {rec.err_x[0], rec.err_x[1], rec.err_y[0], rec.err_y[1]};
        double lo = e[0];
        double hi = e[0];
        for (double v : e) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        const double ratio = hi / lo;
        worst = std::max(worst, ratio);
        if (ratio >= kComponentRatio) ++violations;
    }
    // Informational: mean contraction factor per component over the run.
    std::ostringstream rates;
    const char* names[4] = {"x1", "x2", "y1", "y2"};
    for (int comp = 0; comp < 4; ++comp) {
        auto at = [&](int k) {
            const auto& r = h.iterations.at(k);
            return comp < 2 ? r.err_x[comp] : r.err_y[comp - 2];
        };
        const int first = std::min(1, N - 1);
        const double rate = N - 1 > first ? std::pow(at(N - 1) / at(first), 1.0 / (N - 1 - first)) : 0.0;
        rates << " " << names[comp] << " " << fmt("%.3f", rate);
    }
    return {violations <= kMaxRatioViolations,
            "classical overlap 4, " + std::to_string(N) + " iterations: component error ratio >= 3 in " +
                std::to_string(violations) + " iterations (max ratio " + fmt("%.1f", worst) +
                "); mean contraction" + rates.str()};
}

double smooth_x(double s, double t) {
    return s + 0.1 * std::sin(std::numbers::pi * s) * std::sin(std::numbers::pi * t);
}
double smooth_y(double s, double t) {
    return t + 0.05 * std::sin(2 * std::numbers::pi * s) * std::sin(std::numbers::pi * t);
}

// Continuous S1 of the smooth map with exact derivatives and gradient.
double s1_exact(const MonitorParams& p, double s, double t) {
    const double pi = std::numbers::pi;
    const double xs = 1 + 0.1 * pi * std::cos(pi * s) * std::sin(pi * t);
    const double ys = 0.1 * pi * std::cos(2 * pi * s) * std::sin(pi * t);
    const double x = smooth_x(s, t);
    const double y = smooth_y(s, t);
    const double e = std::exp(15.0 * (x - 1.0));
    const Vec2 w{-15.0 * e * std::sin(pi * y), pi * (1.0 - e) * std::cos(pi * y)};
    return s_form({xs, ys}, monitor_matrix(w, p));
}

double stencil_order() {
    const MonitorParams p{0.7, 0.05};
    auto central = [&](double h) {
        return (s1_exact(p, 0.25 + h, 0.25) - s1_exact(p, 0.25 - h, 0.25)) / (2 * h);
    };
    const double exact = (4.0 * central(5e-4) - central(1e-3)) / 3.0;
    std::vector<double> lh, le;
    for (int n : {9, 17, 33, 65}) {
        const ComputationalGrid g(n, n);
        PhysicalMesh m(g);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                m.x(i, j) = smooth_x(g.xi(i), g.eta(j));
                m.y(i, j) = smooth_y(g.xi(i), g.eta(j));
            }
        }
        const int k = (n - 1) / 4;
        const double r1 = interior_residual(m, k, k, p, exp_sine_problem()).first;
        lh.push_back(std::log(g.d_xi()));
        le.push_back(std::log(std::abs(r1 / g.d_xi() - exact)));
    }
    const int n = static_cast<int>(lh.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int k = 0; k < n; ++k) {
        sx += lh[k];
        sy += le[k];
        sxx += lh[k] * lh[k];
        sxy += lh[k] * le[k];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double max_diff(const PhysicalMesh& a, const PhysicalMesh& b) {
    double m = 0.0;
    for (std::size_t k = 0; k < a.x.values().size(); ++k) {
        m = std::max({m, std::abs(a.x.values()[k] - b.x.values()[k]),
                      std::abs(a.y.values()[k] - b.y.values()[k])});
    }
    return m;
}

Outcome criterion8() {
    std::ostringstream os;
    bool pass = true;
    const std::vector<TransmissionKind> kinds{TransmissionKind::dirichlet(),
                                              TransmissionKind::linear_robin(2),
                                              TransmissionKind::nonlinear_robin(2)};

    // (a)
    double dev = 0.0;
    for (int variant = 0; variant < 2; ++variant) {
        for (auto mode : {BoundaryMode::OneDimEP, BoundaryMode::Orthogonality}) {
            auto c = paper_config();
            c.mode = mode;
            if (variant == 0) c.params.a = 0.0;
            else c.problem = "constant";
            const auto uni = make_uniform_mesh(c.grid);
            dev = std::max(dev, max_diff(solve_single_domain(c), uni));
            for (auto k : kinds) {
                c.kind = k;
                dev = std::max(dev, max_diff(schwarz_iterate(c).mesh, uni));
            }
        }
    }
    const bool a_ok = dev <= kUniformTol;
    os << "(a) uniform dev " << fmt("%.1e", dev) << (a_ok ? "" : " FAIL");

    // (b)
    const auto& ref = reference12();
    double stationary = 0.0;
    for (auto k : kinds) {
        auto c = paper_config();
        c.kind = k;
        c.max_outer = 2;
        const auto h = schwarz_iterate(c, &ref, &ref).history;
        stationary = std::max({stationary, h.max_err_x(0), h.max_err_y(0)});
    }
    const bool b_ok = stationary <= kStationaryFactor * NewtonConfig{}.tol;
    os << "; (b) seeded err " << fmt("%.1e", stationary) << (b_ok ? "" : " FAIL");

    // (c)
    const double order = stencil_order();
    const bool c_ok = order >= kMinOrder;
    os << "; (c) order " << fmt("%.2f", order) << (c_ok ? "" : " FAIL");

    // (d)
    bool identical = true;
    for (auto k : kinds) {
        auto c = paper_config();
        c.kind = k;
        c.max_outer = 6;
        c.concurrent = true;
        const auto a = schwarz_iterate(c, &ref);
        c.concurrent = false;
        const auto b = schwarz_iterate(c, &ref);
        identical = identical && a.mesh == b.mesh &&
                    a.history.iterations.size() == b.history.iterations.size();
        for (std::size_t n = 0; identical && n < a.history.iterations.size(); ++n) {
            identical = a.history.iterations[n].err_x == b.history.iterations[n].err_x &&
                        a.history.iterations[n].err_y == b.history.iterations[n].err_y;
        }
    }
    os << "; (d) concurrent==serial " << (identical ? "yes" : "no FAIL");

    // (e)
    double mean_dev = 0.0;
    for (const PhysicalMesh* m : {&ref}) {
        for (const auto& mesh : {make_uniform_mesh(m->grid), *m}) {
            const auto rep = q_eq(mesh, paper_config().params, exp_sine_problem());
            double s = 0.0;
            for (double v : rep.q.values()) s += v;
            mean_dev = std::max(mean_dev, std::abs(s / rep.q.values().size() - 1.0));
        }
    }
    const bool e_ok = mean_dev <= kMeanTol;
    os << "; (e) mean Q dev " << fmt("%.1e", mean_dev) << (e_ok ? "" : " FAIL");

    // (f)
    auto step = [](int cell) { return cell == 0 ? 1.0 : 2.0; };
    ResidualFn fn = [&](std::span<const double> v, std::span<double> r) {
        const std::vector<double> s{0.0, v[0], 1.0};
        r[0] = edge_residual_1dep(s, step)[0];
    };
    const double node = newton_solve(fn, {0.5}, NewtonConfig{}).state[0];
    const bool f_ok = std::abs(node - 2.0 / 3.0) <= kStepNodeTol;
    os << "; (f) step node " << fmt("%.10f", node) << (f_ok ? "" : " FAIL");

    pass = a_ok && b_ok && c_ok && identical && e_ok && f_ok;
    return {pass, os.str()};
}

Outcome criterion9() {
    SchwarzConfig c;
    c.grid = ComputationalGrid(18, 18);
    c.params = {0.7, 0.05};
    c.n_sub = 2;
    c.overlap = 4;
    c.kind = TransmissionKind::linear_robin(2.3);
    const auto r = schwarz_iterate(c);
    const double jmin = min_interior_jacobian(r.mesh);
    bool areas = true;
    for (int i = 0; i < 17; ++i) {
        for (int j = 0; j < 17; ++j) areas = areas && cell_area(r.mesh, i, j) > 0.0;
    }
    const auto& last = r.history.iterations.back();
    return {r.history.converged && jmin > 0.0 && areas,
            "18x18 linear robin p=2.3 overlap 4: " +
                std::string(r.history.converged ? "converged" : "NOT converged") + " in " +
                std::to_string(last.n) + " iterations, err " +
                fmt("%.1e", std::max(r.history.max_err_x(r.history.iterations.size() - 1),
                                     r.history.max_err_y(r.history.iterations.size() - 1))) +
                ", min interior jacobian " + fmt("%.3f", jmin) + ", q_max " +
                fmt("%.4f", last.q_eq)};
}

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int k = 1; k < argc; ++k) {
        if (std::strcmp(argv[k], "--only") == 0 && k + 1 < argc) only = std::atoi(argv[++k]);
    }
    const std::vector<std::function<Outcome()>> criteria{
        criterion1, criterion2, criterion3, criterion4, criterion5,
        criterion6, criterion7, criterion8, criterion9};
    int failed = 0;
    for (int k = 1; k <= static_cast<int>(criteria.size()); ++k) {
        if (only != 0 && only != k) continue;
        Outcome o;
        try {
            o = criteria[k - 1]();
        } catch (const std::exception& e) {
            o = {false, std::string("error: ") + e.what()};
        }
        std::printf("%s criterion %d: %s\n", o.pass ? "PASS" : "FAIL", k, o.detail.c_str());
        if (!o.pass) ++failed;
    }
    return failed == 0 ? 0 : 1;
}
