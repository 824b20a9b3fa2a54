#include <doctest.h>

#include <equimesh/io.hpp>
#include <equimesh/quality.hpp>

#include <json.hpp>

#include <set>
#include <sstream>

using namespace equimesh;

TEST_CASE("mesh CSV layout") {
    const auto m = make_uniform_mesh(ComputationalGrid(3, 3));
    std::ostringstream os;
    write_mesh_csv(os, m);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    CHECK(line == "i,j,xi,eta,x,y");
    std::getline(is, line);
    CHECK(line == "0,0,0,0,0,0");
    std::getline(is, line);
    CHECK(line == "1,0,0.5,0,0.5,0");
    std::getline(is, line);
    std::getline(is, line);
    CHECK(line == "0,1,0,0.5,0,0.5");
}

TEST_CASE("mesh CSV round trip preserves coordinates and q") {
    SchwarzConfig c;
    c.max_outer = 2;
    const auto r = schwarz_iterate(c);
    std::stringstream ss;
    write_mesh_csv(ss, r.mesh);
    const auto back = read_mesh_csv(ss);
    CHECK(back == r.mesh);
    CHECK(q_eq(back, c.params, exp_sine_problem()).q_max ==
          q_eq(r.mesh, c.params, exp_sine_problem()).q_max);
}

TEST_CASE("mesh CSV reader rejects bad input") {
    std::istringstream no_header("1,2,3\n");
    CHECK_THROWS_AS(read_mesh_csv(no_header), ConfigError);
    std::istringstream holes("i,j,xi,eta,x,y\n0,0,0,0,0,0\n1,1,1,1,1,1\n");
    CHECK_THROWS_AS(read_mesh_csv(holes), ConfigError);
    std::istringstream junk("i,j,xi,eta,x,y\n0,0,zero,0,0,0\n");
    CHECK_THROWS_AS(read_mesh_csv(junk), ConfigError);
}

TEST_CASE("history JSON and CSV") {
    SchwarzConfig c;
    c.kind = TransmissionKind::linear_robin(2);
    c.max_outer = 3;
    const auto r = schwarz_iterate(c);
    const auto j = nlohmann::json::parse(history_to_json(c, r.history));
    CHECK(j["config"]["method"] == "linear-robin");
    CHECK(j["config"]["p"] == 2.0);
    CHECK(j["config"]["overlap"] == 2);
    REQUIRE(j["iterations"].size() == 3);
    const auto& it = j["iterations"][0];
    CHECK(it["n"] == 1);
    CHECK(it["err_x"].size() == 2);
    CHECK(it["err_y"].size() == 2);
    CHECK(it["newton_iters"].size() == 2);
    CHECK(it["q_eq"].is_number());
    CHECK(it["increment"].is_null());

    std::ostringstream os;
    write_history_csv(os, r.history);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    CHECK(line == "n,subdomain,err_x,err_y");
    int rows = 0;
    while (std::getline(is, line)) ++rows;
    CHECK(rows == 6);

    std::ostringstream tagged;
    write_history_csv(tagged, r.history, "run-a");
    CHECK(tagged.str().rfind("run-a,1,0,", 0) == 0);
}

TEST_CASE("quality CSV and manifest") {
    std::ostringstream os;
    write_quality_csv(os, {{"0", "classical", 1.62861}, {"inf", "classical", 1.2117}});
    CHECK(os.str() == "iteration,method,q_max\n0,classical,1.6286\ninf,classical,1.2117\n");
    const auto j = nlohmann::json::parse(
        manifest_to_json({{"a", "a/history.json", true, ""}, {"b", "", false, "too wide"}}));
    REQUIRE(j["runs"].size() == 2);
    CHECK(j["runs"][1]["ok"] == false);
    CHECK(j["runs"][1]["error"] == "too wide");
    const auto cfg = nlohmann::json::parse(config_to_json(SchwarzConfig{}));
    CHECK(cfg["n_xi"] == 12);
    CHECK(cfg["method"] == "dirichlet");
}
