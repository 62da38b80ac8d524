#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "ndslab/scenario.hpp"

using namespace ndslab;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// All artifact bytes of a run directory, keyed by filename, summary excluded.
std::map<std::string, std::string> artifact_bytes(const fs::path& dir) {
    std::map<std::string, std::string> out;
    for (const auto& entry : fs::recursive_directory_iterator(dir)) {
        if (!entry.is_regular_file())
            continue;
        if (entry.path().filename() == "summary.json")
            continue;
        out[fs::relative(entry.path(), dir).string()] = slurp(entry.path());
    }
    return out;
}

fs::path fresh_dir(const std::string& tag) {
    const fs::path dir = fs::temp_directory_path() / ("ndslab_test_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

} // namespace

TEST_CASE("minimal scenario parses") {
    const std::string text = R"({
        "name": "mini",
        "space": {"kind": "interval", "lo": 0.0, "hi": 1.0},
        "sequence": {"rule": "family", "family": "constant_harmonic"},
        "tasks": [{"task": "trajectory", "x0": [0.5], "steps": 3}]
    })";
    const Scenario s = parse_scenario(text);
    CHECK(s.name == "mini");
    REQUIRE(s.tasks.size() == 1);
    CHECK(s.tasks[0].kind == TaskKind::Trajectory);
}

TEST_CASE("non-increasing gamma is rejected with its path") {
    const std::string text = R"({
        "name": "bad",
        "space": {"kind": "interval", "lo": 0.0, "hi": 1.0},
        "sequence": {"rule": "family", "family": "constant_harmonic"},
        "tasks": [{"task": "induced", "gamma": {"kind": "list", "values": [3, 2]}}]
    })";
    try {
        parse_scenario(text);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        const std::string what = e.what();
        CHECK(what.find("gamma not increasing") != std::string::npos);
        CHECK(what.find("tasks[0]") != std::string::npos);
    }
}

TEST_CASE("unknown tasks and malformed maps are rejected") {
    const std::string unknown = R"({
        "name": "bad",
        "space": {"kind": "interval", "lo": 0.0, "hi": 1.0},
        "sequence": {"rule": "family", "family": "constant_harmonic"},
        "tasks": [{"task": "frobnicate"}]
    })";
    CHECK_THROWS_AS(parse_scenario(unknown), ConfigError);

    const std::string badmap = R"({
        "name": "bad",
        "space": {"kind": "interval", "lo": 0.0, "hi": 1.0},
        "sequence": {"rule": "explicit", "maps": [{"form": "catalog", "name": "nosuch"}]},
        "tasks": []
    })";
    CHECK_THROWS_AS(parse_scenario(badmap), ConfigError);

    CHECK_THROWS_AS(parse_scenario("not json at all"), ConfigError);

    const std::string badwindow = R"({
        "name": "bad",
        "space": {"kind": "interval", "lo": 0.0, "hi": 1.0},
        "sequence": {"rule": "family", "family": "power"},
        "tasks": [{"task": "limit_profile", "N": 4, "window": 9}]
    })";
    CHECK_THROWS_AS(parse_scenario(badwindow), ConfigError);

    const std::string badsplit = R"({
        "name": "bad",
        "space": {"kind": "interval", "lo": 0.0, "hi": 1.0},
        "sequence": {"rule": "family", "family": "power"},
        "tasks": [{"task": "split", "k_max": 12, "n_max": 4}]
    })";
    CHECK_THROWS_AS(parse_scenario(badsplit), ConfigError);
}

TEST_CASE("explicit sequences accept a family-formula tail in JSON") {
    const std::string text = R"({
        "name": "prefixed",
        "space": {"kind": "interval", "lo": 0.0, "hi": 1.0},
        "sequence": {"rule": "explicit",
                     "maps": [{"form": "catalog", "name": "constant", "params": [0.9]}],
                     "tail": {"family": "constant_harmonic"}},
        "tasks": []
    })";
    const Scenario s = parse_scenario(text);
    const System sys = s.make_system();
    CHECK(sys.nth_map(1).eval_raw(0.5) == 0.9);
    CHECK(sys.nth_map(3).eval_raw(0.5) == 0.25);
    CHECK(sys.limit().has_value());
}

TEST_CASE("shifted and induced sequence rules build transformed systems") {
    const std::string text = R"({
        "name": "transformed",
        "space": {"kind": "interval", "lo": 0.0, "hi": 1.0},
        "sequence": {"rule": "shifted",
                     "base": {"rule": "family", "family": "constant_harmonic"},
                     "k": 3},
        "tasks": []
    })";
    const System shifted = parse_scenario(text).make_system();
    CHECK(shifted.nth_map(1).eval_raw(0.5) == 0.25); // f_3 = 1/4

    const std::string induced_text = R"({
        "name": "induced",
        "space": {"kind": "interval", "lo": 0.0, "hi": 1.0},
        "sequence": {"rule": "induced",
                     "base": {"rule": "family", "family": "example3"},
                     "gamma": {"kind": "linear", "coef": 2}},
        "tasks": []
    })";
    const System doubled = parse_scenario(induced_text).make_system();
    // One induced step is two base steps.
    CHECK(iterate(doubled, Point(1.0), 1).x() == 1.0 / 3.0);
    CHECK(iterate(doubled, Point(1.0), 3).x() == 1.0 / 7.0);
}

TEST_CASE("shipped example3 fixture parses and lists three tasks") {
    const FixtureInfo* f = find_fixture("example3");
    REQUIRE(f != nullptr);
    const Scenario s = parse_scenario(f->json_text);
    CHECK(s.name == "example3");
    CHECK(s.tasks.size() == 3);
    CHECK(s.make_system().limit().has_value()); // family provides the plateau limit
}

TEST_CASE("fixture catalog covers the shipped systems") {
    const auto& fixtures = shipped_fixtures();
    CHECK(fixtures.size() >= 9);
    for (const char* name :
         {"example3", "power_family", "constant_family", "contraction", "kempf_contraction",
          "rotation_golden", "periodic_block", "identities", "induced_gamma2n",
          "conjugate_pair", "negative"}) {
        CAPTURE(name);
        CHECK(find_fixture(name) != nullptr);
    }
    for (const auto& f : fixtures) {
        CAPTURE(f.name);
        CHECK_FALSE(f.description.empty());
        CHECK_NOTHROW(parse_scenario(f.json_text));
    }
}

TEST_CASE("identities fixture passes every exact check") {
    const Scenario s = parse_scenario(find_fixture("identities")->json_text);
    RunOptions opt;
    opt.out_dir = fresh_dir("identities").string();
    const RunSummary summary = run_scenario(s, opt);
    CHECK(summary.all_checks_passed);
    for (const auto& t : summary.tasks)
        CHECK(t.status == "passed");

    // Every report records defect 0 at tolerance 0.
    for (const auto& t : summary.tasks) {
        REQUIRE(!t.artifacts.empty());
        const fs::path report = fs::path(opt.out_dir) / s.name / t.artifacts.back();
        const nlohmann::json doc = nlohmann::json::parse(slurp(report));
        CHECK(doc["passed"].get<bool>());
        CHECK(doc["max_defect"].get<double>() == 0.0);
        CHECK(doc["tolerance"].get<double>() == 0.0);
    }
}

TEST_CASE("negative fixture records its failure") {
    const Scenario s = parse_scenario(find_fixture("negative")->json_text);
    RunOptions opt;
    opt.out_dir = fresh_dir("negative").string();
    const RunSummary summary = run_scenario(s, opt);
    CHECK_FALSE(summary.all_checks_passed);
    REQUIRE(summary.tasks.size() == 1);
    CHECK(summary.tasks[0].status == "failed");
}

TEST_CASE("kempf_contraction fixture reports defect exactly zero") {
    const Scenario s = parse_scenario(find_fixture("kempf_contraction")->json_text);
    RunOptions opt;
    opt.out_dir = fresh_dir("kempf").string();
    const RunSummary summary = run_scenario(s, opt);
    CHECK(summary.all_checks_passed);
    const fs::path report = fs::path(opt.out_dir) / s.name / "01_kempf.json";
    const nlohmann::json doc = nlohmann::json::parse(slurp(report));
    CHECK(doc["check"] == "kempf");
    CHECK(doc["passed"].get<bool>());
    CHECK(doc["max_defect"].get<double>() == 0.0);
}

TEST_CASE("task errors abort the task but not the run") {
    // The uniap task needs a declared limit; the tent system has none.
    const std::string text = R"({
        "name": "erroring",
        "space": {"kind": "interval", "lo": 0.0, "hi": 1.0},
        "sequence": {"rule": "explicit", "maps": [{"form": "catalog", "name": "tent"}], "tail": "repeat_last"},
        "tasks": [
            {"task": "uniap", "grid": 9, "N": 10, "eps": 0.01, "tail_start": 5},
            {"task": "trajectory", "x0": [0.3], "steps": 5}
        ]
    })";
    const Scenario s = parse_scenario(text);
    RunOptions opt;
    opt.out_dir = fresh_dir("erroring").string();
    const RunSummary summary = run_scenario(s, opt);
    REQUIRE(summary.tasks.size() == 2);
    CHECK(summary.tasks[0].status == "error");
    CHECK(!summary.tasks[0].message.empty());
    CHECK(summary.tasks[1].status == "report-only");
    CHECK_FALSE(summary.all_checks_passed);
}

TEST_CASE("report bodies are byte-identical across runs and thread counts") {
    const Scenario s = parse_scenario(find_fixture("identities")->json_text);
    const fs::path d1 = fresh_dir("det1"), d2 = fresh_dir("det2"), d3 = fresh_dir("det3");
    RunOptions opt;
    opt.out_dir = d1.string();
    opt.threads = 1;
    run_scenario(s, opt);
    opt.out_dir = d2.string();
    run_scenario(s, opt);
    opt.out_dir = d3.string();
    opt.threads = 8;
    run_scenario(s, opt);
    const auto a = artifact_bytes(d1), b = artifact_bytes(d2), c = artifact_bytes(d3);
    CHECK(a.size() > 0);
    CHECK(a == b);
    CHECK(a == c);
}

TEST_CASE("trajectory CSV carries the orbit with full precision") {
    const Scenario s = parse_scenario(find_fixture("periodic_block")->json_text);
    RunOptions opt;
    opt.out_dir = fresh_dir("traj").string();
    run_scenario(s, opt);
    const std::string csv = slurp(fs::path(opt.out_dir) / s.name / "00_trajectory_trajectory.csv");
    CHECK(csv.rfind("n,x0\n0,0.29999999999999999\n", 0) == 0);
}
