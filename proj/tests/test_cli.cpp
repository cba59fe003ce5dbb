#include "common.hpp"

#include "swimmer/cli.hpp"

#include <json.hpp>

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr double pi = std::numbers::pi;

struct Run {
    int code = 0;
    std::string out;
    std::string err;

    json result() const { return json::parse(out); }
    json error() const { return json::parse(err); }
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "swimmer");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = swimmer::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

class TempDir {
public:
    TempDir() {
        static int counter = 0;
        path_ = fs::temp_directory_path() / ("swimmer_cli_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path_, ec);
    }
    std::string config(const json& j, const std::string& name = "config.json") const {
        const fs::path p = path_ / name;
        std::ofstream(p) << j.dump();
        return p.string();
    }
    fs::path operator/(const std::string& s) const { return path_ / s; }

private:
    fs::path path_;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("simulate an octagon and its reverse") {
    TempDir tmp;
    const json cfg = {{"design", {{"ratio", 0.719}, {"c", 4.0}}}, {"bounds", {{"a", pi / 20}, {"b", 1.0}}}};
    const Run fwd = run({"simulate", "--config", tmp.config(cfg), "--out", (tmp / "fwd").string()});
    REQUIRE(fwd.code == 0);
    const double dx = fwd.result()["dx"].get<double>();
    CHECK(testing::rel_diff(dx, 7.73e-3) < 0.03);
    CHECK(fwd.result()["stroke"]["family"] == "octagon");
    CHECK(fs::exists(tmp / "fwd" / "trajectory.csv"));
    CHECK(json::parse(slurp(tmp / "fwd" / "summary.json"))["dx"] == fwd.result()["dx"]);
    CHECK(slurp(tmp / "fwd" / "trajectory.csv").rfind("t,beta1,beta3,x,y,theta\n", 0) == 0);

    json rev = cfg;
    rev["reverse"] = true;
    const Run back = run({"simulate", "--config", tmp.config(rev, "rev.json")});
    REQUIRE(back.code == 0);
    CHECK(std::abs(back.result()["dx"].get<double>() + dx) < 1e-8);
}

TEST_CASE("simulate a zero-rate schedule and the steps override") {
    TempDir tmp;
    const json cfg = {{"schedule", {{"segments", {{1.0, 0.0, 0.0}}}}}, {"start", {0.1, -0.1}}};
    const Run r = run({"simulate", "--config", tmp.config(cfg), "--steps", "10"});
    REQUIRE(r.code == 0);
    CHECK(r.result()["dx"].get<double>() == 0.0);
    CHECK(r.result()["steps"] == 10);
}

TEST_CASE("simulate from a polygon with RK4") {
    TempDir tmp;
    const json cfg = {{"polygon", {{"vertices", {{-0.1, 0.1}, {-0.1, -0.1}, {0.1, -0.1}, {0.1, 0.1}}}, {"orientation", 1}}},
                      {"rate", 1.0},
                      {"scheme", "rk4"}};
    const Run r = run({"simulate", "--config", tmp.config(cfg)});
    REQUIRE(r.code == 0);
    CHECK(r.result()["dx"].get<double>() > 0.0);
    CHECK(r.result()["scheme"] == "rk4");
}

TEST_CASE("bracket command") {
    TempDir tmp;
    Run r = run({"bracket", "--out", tmp.operator/("b").string()});
    REQUIRE(r.code == 0);
    json j = r.result();
    CHECK(j["analytic_x"].get<double>() == doctest::Approx(0.0546875));
    CHECK(j["rel_error"].get<double>() < 1e-6);
    CHECK(j["optimal"]["bracket_x"].get<double>() == doctest::Approx(0.0858808).epsilon(1e-4));
    CHECK(fs::exists(tmp / "b" / "bracket.json"));

    r = run({"bracket", "--config", tmp.config({{"drag", {{"xi", 1.0}, {"eta", 1.0}}}})});
    REQUIRE(r.code == 0);
    CHECK(r.result()["analytic_x"].get<double>() == 0.0);
    CHECK(std::abs(r.result()["numeric"][2].get<double>()) < 1e-9);
}

TEST_CASE("sweep command") {
    TempDir tmp;
    const json cfg = {{"bounds", {{"a", pi / 20}, {"b", 1.0}}}, {"sweep", {{"points", 9}, {"ratio_min", 0.5}, {"ratio_max", 1.0}}}};
    const Run r = run({"sweep", "--config", tmp.config(cfg), "--steps", "300", "--out", (tmp / "s").string()});
    REQUIRE(r.code == 0);
    const double best = r.result()["best_ratio"].get<double>();
    CHECK(best > 0.70);
    CHECK(best < 0.74);
    CHECK(r.result()["grid"].size() == 9);
    CHECK(fs::exists(tmp / "s" / "sweep.csv"));
}

TEST_CASE("ocp command is deterministic") {
    TempDir tmp;
    const json cfg = {{"problem", {{"a", pi / 20}, {"b", 1.0}, {"N", 60}}}, {"solver", {{"multistart", 2}}}};
    const std::string path = tmp.config(cfg);
    const Run r1 = run({"ocp", "--config", path, "--seed", "3", "--out", (tmp / "o1").string()});
    const Run r2 = run({"ocp", "--config", path, "--seed", "3", "--out", (tmp / "o2").string()});
    REQUIRE(r1.code == 0);
    REQUIRE(r2.code == 0);
    CHECK(r1.out == r2.out);
    for (const char* f : {"solution.json", "trajectory.csv", "phase_portrait.csv"}) {
        CHECK(slurp(tmp / "o1" / f) == slurp(tmp / "o2" / f));
    }
    const json j = r1.result();
    CHECK(!j.contains("variables"));
    CHECK(json::parse(slurp(tmp / "o1" / "solution.json")).contains("variables"));
    CHECK(j["kkt"]["max_violation"].get<double>() < 1e-8);
    CHECK(j["seed"].get<unsigned>() >= 3);
    CHECK(j["spec"]["N"] == 60);
    CHECK(slurp(tmp / "o1" / "phase_portrait.csv").rfind("t,beta1,beta3,u1,u3\n", 0) == 0);

    const Run r3 = run({"ocp", "--config", path, "--steps", "40"});
    REQUIRE(r3.code == 0);
    CHECK(r3.result()["spec"]["N"] == 40);
}

TEST_CASE("table commands on row subsets") {
    TempDir tmp;
    Run r = run({"table1", "--config", tmp.config({{"rows", {pi / 5}}}), "--steps", "400", "--out", (tmp / "t").string()});
    REQUIRE(r.code == 0);
    json row = r.result()["rows"][0];
    CHECK(std::abs(row["rel_deviation"].get<double>()) < 0.03);
    CHECK(fs::exists(tmp / "t" / "table1.json"));

    r = run({"table2", "--config", tmp.config({{"rows", {2 * pi / 3}}}, "t2.json"), "--steps", "400"});
    REQUIRE(r.code == 0);
    row = r.result()["rows"][0];
    CHECK(std::abs(row["gain"].get<double>() - 0.60) < 0.10);
}

TEST_CASE("errors and exit codes") {
    TempDir tmp;
    Run r = run({"simulate", "--config", (tmp / "missing.json").string()});
    CHECK(r.code == 4);
    CHECK(r.error()["error"]["kind"] == "io");

    r = run({"simulate", "--config", tmp.config({{"bounds", {{"a", 0.1}, {"b", 1.0}}}, {"colour", 1}})});
    CHECK(r.code == 2);
    CHECK(r.error()["error"]["kind"] == "validation");
    CHECK(r.error()["error"]["message"].get<std::string>().find("colour") != std::string::npos);

    {
        std::ofstream(tmp / "broken.json") << "{ not json";
    }
    r = run({"bracket", "--config", (tmp / "broken.json").string()});
    CHECK(r.code == 2);

    r = run({"ocp", "--config", tmp.config({{"problem", {{"a", 0.1}, {"b", 1.0}, {"N", 3}}}}, "n.json")});
    CHECK(r.code == 2);

    r = run({"ocp", "--config",
             tmp.config({{"problem", {{"a", pi / 20}, {"b", 1.0}, {"N", 30}}}, {"solver", {{"multistart", 1}, {"max_iterations", 1}}}},
                        "it.json")});
    CHECK(r.code == 3);
    CHECK(r.error()["error"]["kind"] == "solver");

    r = run({"simulate", "--steps", "0", "--config", tmp.config({{"bounds", {{"a", 0.1}, {"b", 1.0}}}}, "s.json")});
    CHECK(r.code == 2);

    r = run({"frobnicate"});
    CHECK(r.code == 2);
    r = run({});
    CHECK(r.code == 2);
    r = run({"simulate", "--steps", "many"});
    CHECK(r.code == 2);

    r = run({"--help"});
    CHECK(r.code == 0);
    CHECK(r.out.find("simulate") != std::string::npos);

    // output directory that cannot be created
    {
        std::ofstream(tmp / "file") << "x";
    }
    r = run({"bracket", "--out", (tmp / "file" / "sub").string()});
    CHECK(r.code == 4);
}

}  // TEST_SUITE
