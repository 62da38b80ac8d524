#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ndslab/verify.hpp"

namespace ndslab {

enum class TaskKind {
    Trajectory,
    Omega,
    LimitProfile,
    Asymptotic,
    UniformLimit,
    Equicontinuity,
    Split,
    Periodic,
    Induced,
    Uniap,
    Action,
    Kempf,
    FixedPoint,
    PeriodicPoint,
    Conjugacy,
};

bool task_is_check(TaskKind kind);
std::string task_name(TaskKind kind);

// One resolved task entry. Fields not used by a given kind keep their
// defaults; explicit flags record whether a tolerance came from the file
// (the CLI --tol override only fills unset ones).
struct Task {
    TaskKind kind = TaskKind::Trajectory;
    std::vector<double> x0{0.0};
    long steps = 100;
    long burn_in = 1000;
    long keep = 10000;
    double cluster_eps = 1e-3;
    double eps = 1e-2;
    double tol = 0.0;
    bool eps_explicit = false;
    bool tol_explicit = false;
    int grid_res = 101;
    int N = 100;
    long window = 1;
    int m_max = 16;
    int n_max = 64;
    int k_max = 8;
    int l_max = 16;
    int tail_start = -1; // -1: N/2
    int anchor_n = -1;   // -1: tail mode
    int additivity_horizon = 16;
    std::vector<double> deltas;
    std::optional<Gamma> gamma;
    std::optional<MapRep> cmp_map;
    std::string compare_mode;
    std::string family_choice = "iterates";
    std::optional<MapRep> h;
    // Second system of a conjugacy task.
    std::optional<Space> other_space;
    std::optional<MapSequence> other_seq;
};

struct Scenario {
    std::string name;
    std::string description;
    Space space;
    MapSequence sequence;
    std::optional<MapRep> limit;
    std::vector<Task> tasks;

    System make_system() const { return System(space, sequence, name, limit); }
};

// Parses and validates a scenario document; ConfigError messages name the
// offending JSON path.
Scenario parse_scenario(const std::string& text);

struct TaskResult {
    std::string task;
    std::string status; // "passed" | "failed" | "report-only" | "error"
    double wall_ms = 0.0;
    std::vector<std::string> artifacts;
    std::string message;
};

struct RunSummary {
    std::string scenario;
    std::vector<TaskResult> tasks;
    bool all_checks_passed = true;
};

struct RunOptions {
    std::string out_dir = "ndslab_out";
    int threads = 1;
    std::optional<double> default_tol;
};

// Executes the tasks in order, writing one JSON report (plus CSV series)
// per task under <out_dir>/<scenario name>/ and a summary.json. Report
// bodies contain no timestamps; repeated runs are byte-identical.
RunSummary run_scenario(const Scenario& scenario, const RunOptions& options);

struct FixtureInfo {
    std::string name;
    std::string description;
    std::string json_text;
};

// Scenario files shipped with the library, embedded at build time.
const std::vector<FixtureInfo>& shipped_fixtures();
const FixtureInfo* find_fixture(const std::string& name);

} // namespace ndslab
