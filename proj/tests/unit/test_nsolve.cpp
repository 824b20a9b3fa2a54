#include <doctest.h>

#include <equimesh/newton.hpp>
#include <equimesh/schwarz.hpp>

#include <cmath>
#include <random>

using namespace equimesh;

namespace {

DenseMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    DenseMatrix a(static_cast<int>(rows.size()));
    int r = 0;
    for (const auto& row : rows) {
        int c = 0;
        for (double v : row) a(r, c++) = v;
        ++r;
    }
    return a;
}

}  // namespace

TEST_CASE("lu_solve small systems") {
    DenseMatrix id(3);
    for (int k = 0; k < 3; ++k) id(k, k) = 1.0;
    const std::vector<double> b{1.5, -2.0, 3.25};
    CHECK(lu_solve(id, b) == b);
    const auto v = lu_solve(from_rows({{2, 0}, {0, 4}}), std::vector<double>{2, 8});
    CHECK(v[0] == doctest::Approx(1.0));
    CHECK(v[1] == doctest::Approx(2.0));
    // Needs a row swap.
    const auto w = lu_solve(from_rows({{0, 1}, {1, 0}}), std::vector<double>{3, 4});
    CHECK(w[0] == 4.0);
    CHECK(w[1] == 3.0);
}

TEST_CASE("lu_solve random systems pass the residual substitution check") {
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 10;
        DenseMatrix a(n);
        std::vector<double> b(n);
        for (int r = 0; r < n; ++r) {
            for (int c = 0; c < n; ++c) a(r, c) = d(rng);
            a(r, r) += 4.0;
            b[r] = d(rng);
        }
        const auto v = lu_solve(a, b);
        double res = 0.0;
        for (int r = 0; r < n; ++r) {
            double s = -b[r];
            for (int c = 0; c < n; ++c) s += a(r, c) * v[c];
            res = std::max(res, std::abs(s));
        }
        CHECK(res <= 1e-8 * (a.norm_inf() * max_norm(v) + max_norm(b)));
    }
}

TEST_CASE("lu_solve reports singular matrices") {
    CHECK_THROWS_AS(lu_solve(from_rows({{1, 2}, {2, 4}}), std::vector<double>{1, 2}),
                    SingularMatrixError);
    CHECK_THROWS_AS(lu_solve(DenseMatrix(3), std::vector<double>{1, 2, 3}), SingularMatrixError);
    CHECK_THROWS_AS(lu_solve(DenseMatrix(2), std::vector<double>{1}), ConfigError);
}

TEST_CASE("finite-difference jacobian of linear maps") {
    ResidualFn ident = [](std::span<const double> v, std::span<double> r) {
        std::copy(v.begin(), v.end(), r.begin());
    };
    const std::vector<double> x{0.3, -2.0, 5.0};
    std::vector<double> r0(3);
    ident(x, r0);
    const auto j = jacobian_fd(ident, x, r0, 1e-7);
    for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) CHECK(j(r, c) == doctest::Approx(r == c ? 1.0 : 0.0).epsilon(1e-7));
    }

    const DenseMatrix a = from_rows({{1, 2, 0}, {-3, 4, 5}, {0, 0.5, 7}});
    ResidualFn lin = [&](std::span<const double> v, std::span<double> r) {
        for (int i = 0; i < 3; ++i) {
            r[i] = 0;
            for (int k = 0; k < 3; ++k) r[i] += a(i, k) * v[k];
        }
    };
    lin(x, r0);
    const auto ja = jacobian_fd(lin, x, r0, 1e-7);
    for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) CHECK(ja(r, c) == doctest::Approx(a(r, c)).epsilon(1e-7).scale(1.0));
    }
}

TEST_CASE("column colouring keeps groups row-disjoint") {
    const std::vector<std::vector<int>> pattern{{0, 1}, {0, 1, 2}, {1, 2, 3}, {2, 3}, {4}};
    const auto groups = color_columns(pattern);
    std::vector<int> seen(5, 0);
    for (const auto& grp : groups) {
        std::vector<int> rows(5, 0);
        for (int c : grp) {
            ++seen[c];
            for (int r : pattern[c]) CHECK(++rows[r] == 1);
        }
    }
    for (int s : seen) CHECK(s == 1);
}

TEST_CASE("newton on a scalar equation") {
    ResidualFn f = [](std::span<const double> v, std::span<double> r) { r[0] = v[0] * v[0] - 4.0; };
    const auto res = newton_solve(f, {3.0}, NewtonConfig{});
    CHECK(res.state[0] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(res.stats.iterations <= 6);
    CHECK(res.stats.residual <= 1e-10);

    const auto same = newton_solve(f, {2.0}, NewtonConfig{});
    CHECK(same.stats.iterations == 0);
    CHECK(same.state[0] == 2.0);
}

TEST_CASE("newton failures carry the best state and history") {
    ResidualFn none = [](std::span<const double> v, std::span<double> r) { r[0] = v[0] * v[0] + 1.0; };
    try {
        (void)newton_solve(none, {0.7}, NewtonConfig{});
        FAIL("expected NonConvergenceError");
    } catch (const NonConvergenceError& e) {
        CHECK(e.best_state().size() == 1);
        CHECK(!e.residual_history().empty());
    }
    ResidualFn slow = [](std::span<const double> v, std::span<double> r) { r[0] = std::atan(v[0]); };
    NewtonConfig one;
    one.max_iter = 1;
    CHECK_THROWS_AS(newton_solve(slow, {0.5}, one), NonConvergenceError);
    NewtonConfig bad;
    bad.tol = 0.0;
    CHECK_THROWS_AS(newton_solve(slow, {0.5}, bad), ConfigError);
}

TEST_CASE("damped newton never increases the residual") {
    // atan from far away overshoots without damping.
    ResidualFn f = [](std::span<const double> v, std::span<double> r) { r[0] = std::atan(v[0]); };
    const auto res = newton_solve(f, {3.0}, NewtonConfig{});
    CHECK(res.stats.damped_steps > 0);
    for (std::size_t k = 1; k < res.stats.history.size(); ++k) {
        CHECK(res.stats.history[k] < res.stats.history[k - 1]);
    }
    CHECK(std::abs(res.state[0]) <= 1e-10);
}

TEST_CASE("single-domain paper problem converges quadratically from uniform") {
    NewtonStats stats;
    SchwarzConfig cfg;
    (void)solve_single_domain(cfg, &stats);
    CHECK(stats.residual <= 1e-10);
    REQUIRE(stats.history.size() >= 2);
    const auto& h = stats.history;
    const double before = h[h.size() - 2];
    if (before > 1e-7) CHECK(h.back() <= before / 1e3);
    for (std::size_t k = 1; k < h.size(); ++k) CHECK(h[k] < h[k - 1]);
}
