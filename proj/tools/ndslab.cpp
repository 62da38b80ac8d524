// ndslab - scenario runner for nonautonomous discrete dynamical systems.
//
// Subcommands:
//   run <scenario.json | fixture-name> [--out DIR] [--tol X] [--threads N]
//   check <name> <scenario.json | fixture-name> [--task JSON] [--out DIR] ...
//   fixtures [--dump DIR]
//   report <run-dir>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ndslab/scenario.hpp"

namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ndslab::ConfigError("cannot read scenario file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string default_out_dir() {
    if (const char* env = std::getenv("NDSLAB_OUT"))
        return env;
    return "ndslab_out";
}

std::string load_scenario_text(const std::string& target) {
    if (const ndslab::FixtureInfo* fixture = ndslab::find_fixture(target))
        return fixture->json_text;
    if (fs::exists(target))
        return slurp(target);
    throw ndslab::ConfigError("'" + target + "' is neither a fixture name nor a file");
}

int cmd_run(const std::string& target, const std::string& out_dir, double tol, bool tol_set,
            int threads) {
    std::optional<ndslab::Scenario> scenario;
    try {
        scenario = ndslab::parse_scenario(load_scenario_text(target));
    } catch (const ndslab::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    ndslab::RunOptions options;
    options.out_dir = out_dir;
    options.threads = threads;
    if (tol_set)
        options.default_tol = tol;

    ndslab::RunSummary summary;
    try {
        summary = ndslab::run_scenario(*scenario, options);
    } catch (const ndslab::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    for (std::size_t i = 0; i < summary.tasks.size(); ++i) {
        const auto& t = summary.tasks[i];
        std::printf("%2zu  %-16s %-12s %8.1f ms", i, t.task.c_str(), t.status.c_str(), t.wall_ms);
        if (!t.message.empty())
            std::printf("  (%s)", t.message.c_str());
        std::printf("\n");
    }
    std::printf("%s: %s (reports in %s)\n", summary.scenario.c_str(),
                summary.all_checks_passed ? "all checks passed" : "CHECK FAILURES",
                (fs::path(out_dir) / summary.scenario).string().c_str());
    return summary.all_checks_passed ? 0 : 1;
}

struct CheckFlags {
    std::string task_json;
    int grid = -1, N = -1, k_max = -1, n_max = -1, l_max = -1, m_max = -1;
    int tail_start = -1, anchor_n = -1, horizon = -1;
    long burn_in = -1, keep = -1;
    double eps = -1.0, tol = -1.0, cluster_eps = -1.0, x0 = -1.0;
    bool has_eps = false, has_tol = false, has_cluster = false, has_x0 = false;
    std::string gamma;
};

nlohmann::json gamma_to_json(const std::string& text) {
    if (text.rfind("linear:", 0) == 0)
        return {{"kind", "linear"}, {"coef", std::stol(text.substr(7))}};
    nlohmann::json values = nlohmann::json::array();
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        values.push_back(std::stol(item));
    return {{"kind", "list"}, {"values", values}};
}

// Runs a single named check against the system of a scenario file or
// fixture, ignoring the file's own task list.
int cmd_check(const std::string& name, const std::string& target, const CheckFlags& flags,
              const std::string& out_dir, int threads) {
    nlohmann::json doc, task;
    try {
        doc = nlohmann::json::parse(load_scenario_text(target));
        if (!flags.task_json.empty())
            task = nlohmann::json::parse(flags.task_json);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    task["task"] = name;
    if (flags.grid > 0) task["grid"] = flags.grid;
    if (flags.N > 0) task["N"] = flags.N;
    if (flags.k_max > 0) task["k_max"] = flags.k_max;
    if (flags.n_max > 0) task["n_max"] = flags.n_max;
    if (flags.l_max > 0) task["l_max"] = flags.l_max;
    if (flags.m_max > 0) task["m_max"] = flags.m_max;
    if (flags.tail_start >= 0) task["tail_start"] = flags.tail_start;
    if (flags.anchor_n >= 0) task["anchor_n"] = flags.anchor_n;
    if (flags.horizon > 0) task["horizon"] = flags.horizon;
    if (flags.burn_in >= 0) task["burn_in"] = flags.burn_in;
    if (flags.keep > 0) task["keep"] = flags.keep;
    if (flags.has_eps) task["eps"] = flags.eps;
    if (flags.has_tol) task["tol"] = flags.tol;
    if (flags.has_cluster) task["cluster_eps"] = flags.cluster_eps;
    if (flags.has_x0) task["x0"] = nlohmann::json::array({flags.x0});
    if (!flags.gamma.empty()) task["gamma"] = gamma_to_json(flags.gamma);
    doc["tasks"] = nlohmann::json::array({task});
    doc["name"] = doc.value("name", std::string("system")) + "_" + name;

    ndslab::RunOptions options;
    options.out_dir = out_dir;
    options.threads = threads;
    try {
        const ndslab::Scenario scenario = ndslab::parse_scenario(doc.dump());
        const ndslab::RunSummary summary = ndslab::run_scenario(scenario, options);
        const auto& t = summary.tasks.at(0);
        std::printf("%s: %s%s%s\n", t.task.c_str(), t.status.c_str(),
                    t.message.empty() ? "" : " - ", t.message.c_str());
        for (const auto& a : t.artifacts)
            std::printf("  %s\n", (fs::path(out_dir) / scenario.name / a).string().c_str());
        return summary.all_checks_passed ? 0 : 1;
    } catch (const ndslab::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

int cmd_fixtures(const std::string& dump_dir) {
    const auto& fixtures = ndslab::shipped_fixtures();
    for (const auto& f : fixtures)
        std::printf("%-18s %s\n", f.name.c_str(), f.description.c_str());
    if (!dump_dir.empty()) {
        fs::create_directories(dump_dir);
        for (const auto& f : fixtures) {
            std::ofstream out(fs::path(dump_dir) / (f.name + ".json"), std::ios::binary);
            out << f.json_text;
        }
        std::printf("wrote %zu fixture files to %s\n", fixtures.size(), dump_dir.c_str());
    }
    return 0;
}

int cmd_report(const std::string& dir) {
    const fs::path summary_path = fs::path(dir) / "summary.json";
    if (!fs::exists(summary_path)) {
        std::cerr << "error: no summary.json under '" << dir << "'\n";
        return 2;
    }
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(slurp(summary_path.string()));
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    std::printf("scenario: %s\n", doc.value("scenario", std::string("?")).c_str());
    for (const auto& t : doc["tasks"]) {
        std::printf("%3ld  %-16s %-12s %8.1f ms\n", t.value("index", 0L),
                    t.value("task", std::string("?")).c_str(),
                    t.value("status", std::string("?")).c_str(), t.value("wall_ms", 0.0));
        for (const auto& a : t["artifacts"])
            std::printf("       - %s\n", a.get<std::string>().c_str());
    }
    std::printf("all checks passed: %s\n", doc.value("all_checks_passed", false) ? "yes" : "no");
    return doc.value("all_checks_passed", false) ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"nonautonomous discrete dynamical systems lab"};
    app.require_subcommand(1);

    std::string target, out_dir = default_out_dir(), dump_dir, report_dir;
    double tol = 0.0;
    int threads = 1;

    auto* run = app.add_subcommand("run", "run a scenario file or shipped fixture");
    run->add_option("scenario", target, "scenario file or fixture name")->required();
    run->add_option("--out", out_dir, "output directory (env NDSLAB_OUT overrides the default)");
    auto* tol_opt = run->add_option("--tol", tol, "default tolerance for checks that set none");
    run->add_option("--threads", threads, "worker threads (never affects outputs)")
        ->check(CLI::PositiveNumber);

    std::string check_name, check_target;
    CheckFlags cf;
    auto* check = app.add_subcommand("check", "run one named check against a system");
    check->add_option("name", check_name, "split|periodic|induced|uniap|action|kempf|"
                                          "fixed_point|periodic_point|conjugacy")
        ->required();
    check->add_option("scenario", check_target, "scenario file or fixture providing the system")
        ->required();
    check->add_option("--task", cf.task_json, "full task parameters as inline JSON");
    check->add_option("--grid", cf.grid);
    check->add_option("--N", cf.N);
    check->add_option("--k-max", cf.k_max);
    check->add_option("--n-max", cf.n_max);
    check->add_option("--l-max", cf.l_max);
    check->add_option("--m-max", cf.m_max);
    check->add_option("--tail-start", cf.tail_start);
    check->add_option("--anchor-n", cf.anchor_n);
    check->add_option("--horizon", cf.horizon);
    check->add_option("--burn-in", cf.burn_in);
    check->add_option("--keep", cf.keep);
    auto* f_eps = check->add_option("--eps", cf.eps);
    auto* f_tol = check->add_option("--tol", cf.tol);
    auto* f_ce = check->add_option("--cluster-eps", cf.cluster_eps);
    auto* f_x0 = check->add_option("--x0", cf.x0);
    check->add_option("--gamma", cf.gamma, "'linear:K' or comma-separated indices");
    check->add_option("--out", out_dir);
    check->add_option("--threads", threads)->check(CLI::PositiveNumber);

    auto* fixtures = app.add_subcommand("fixtures", "list shipped scenarios");
    fixtures->add_option("--dump", dump_dir, "write fixture files to a directory");

    auto* report = app.add_subcommand("report", "pretty-print a run summary");
    report->add_option("dir", report_dir, "run output directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed())
            return cmd_run(target, out_dir, tol, tol_opt->count() > 0, threads);
        if (check->parsed()) {
            cf.has_eps = f_eps->count() > 0;
            cf.has_tol = f_tol->count() > 0;
            cf.has_cluster = f_ce->count() > 0;
            cf.has_x0 = f_x0->count() > 0;
            return cmd_check(check_name, check_target, cf, out_dir, threads);
        }
        if (fixtures->parsed())
            return cmd_fixtures(dump_dir);
        if (report->parsed())
            return cmd_report(report_dir);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
