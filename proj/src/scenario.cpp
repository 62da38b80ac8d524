#include "ndslab/scenario.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "ndslab/json_out.hpp"
#include "ndslab/parallel.hpp"

namespace ndslab {

using nlohmann::json;

bool task_is_check(TaskKind kind) {
    switch (kind) {
    case TaskKind::Split:
    case TaskKind::Periodic:
    case TaskKind::Induced:
    case TaskKind::Uniap:
    case TaskKind::Action:
    case TaskKind::Kempf:
    case TaskKind::FixedPoint:
    case TaskKind::PeriodicPoint:
    case TaskKind::Conjugacy:
        return true;
    default:
        return false;
    }
}

std::string task_name(TaskKind kind) {
    switch (kind) {
    case TaskKind::Trajectory: return "trajectory";
    case TaskKind::Omega: return "omega";
    case TaskKind::LimitProfile: return "limit_profile";
    case TaskKind::Asymptotic: return "asymptotic";
    case TaskKind::UniformLimit: return "uniform_limit";
    case TaskKind::Equicontinuity: return "equicontinuity";
    case TaskKind::Split: return "split";
    case TaskKind::Periodic: return "periodic";
    case TaskKind::Induced: return "induced";
    case TaskKind::Uniap: return "uniap";
    case TaskKind::Action: return "action";
    case TaskKind::Kempf: return "kempf";
    case TaskKind::FixedPoint: return "fixed_point";
    case TaskKind::PeriodicPoint: return "periodic_point";
    case TaskKind::Conjugacy: return "conjugacy";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& message) {
    throw ConfigError(path + ": " + message);
}

const json& member(const json& j, const std::string& key, const std::string& path) {
    if (!j.is_object())
        fail(path, "expected an object");
    auto it = j.find(key);
    if (it == j.end())
        fail(path, "missing required key '" + key + "'");
    return *it;
}

double as_real(const json& j, const std::string& path) {
    if (!j.is_number())
        fail(path, "expected a number");
    return j.get<double>();
}

long as_int(const json& j, const std::string& path) {
    if (!j.is_number_integer())
        fail(path, "expected an integer");
    return j.get<long>();
}

std::string as_string(const json& j, const std::string& path) {
    if (!j.is_string())
        fail(path, "expected a string");
    return j.get<std::string>();
}

double opt_real(const json& j, const std::string& key, double fallback, const std::string& path) {
    auto it = j.find(key);
    return it == j.end() ? fallback : as_real(*it, path + "." + key);
}

long opt_int(const json& j, const std::string& key, long fallback, const std::string& path) {
    auto it = j.find(key);
    return it == j.end() ? fallback : as_int(*it, path + "." + key);
}

std::vector<double> as_real_vector(const json& j, const std::string& path) {
    if (!j.is_array())
        fail(path, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i)
        out.push_back(as_real(j[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

Metric parse_metric(const std::string& name, const std::string& path) {
    if (name == "euclidean") return Metric::Euclidean;
    if (name == "chebyshev") return Metric::Chebyshev;
    if (name == "arc") return Metric::Arc;
    fail(path, "unknown metric '" + name + "'");
}

Space parse_space(const json& j, const std::string& path) {
    const std::string kind = as_string(member(j, "kind", path), path + ".kind");
    try {
        if (kind == "interval") {
            const double lo = as_real(member(j, "lo", path), path + ".lo");
            const double hi = as_real(member(j, "hi", path), path + ".hi");
            Metric m = Metric::Euclidean;
            if (j.contains("metric"))
                m = parse_metric(as_string(j["metric"], path + ".metric"), path + ".metric");
            return Space::interval(lo, hi, m);
        }
        if (kind == "circle")
            return Space::circle(opt_real(j, "circumference", 1.0, path));
        if (kind == "box") {
            auto lo = as_real_vector(member(j, "lo", path), path + ".lo");
            auto hi = as_real_vector(member(j, "hi", path), path + ".hi");
            Metric m = Metric::Chebyshev;
            if (j.contains("metric"))
                m = parse_metric(as_string(j["metric"], path + ".metric"), path + ".metric");
            return Space::box(std::move(lo), std::move(hi), m);
        }
    } catch (const ConfigError& e) {
        fail(path, e.what());
    }
    fail(path, "unknown space kind '" + kind + "'");
}

MapRep parse_map(const json& j, const Space& space, const std::string& path) {
    const std::string form = as_string(member(j, "form", path), path + ".form");
    try {
        if (form == "pwl") {
            const json& pts = member(j, "points", path);
            if (!pts.is_array())
                fail(path + ".points", "expected an array of [x, y] pairs");
            std::vector<std::pair<double, double>> bp;
            for (std::size_t i = 0; i < pts.size(); ++i) {
                const std::string p = path + ".points[" + std::to_string(i) + "]";
                if (!pts[i].is_array() || pts[i].size() != 2)
                    fail(p, "expected an [x, y] pair");
                bp.emplace_back(as_real(pts[i][0], p), as_real(pts[i][1], p));
            }
            return MapRep::pwl(space, std::move(bp));
        }
        if (form == "catalog") {
            const std::string name = as_string(member(j, "name", path), path + ".name");
            std::vector<double> params;
            if (j.contains("params"))
                params = as_real_vector(j["params"], path + ".params");
            return MapRep::catalog(space, name, params);
        }
        if (form == "compose") {
            const json& parts = member(j, "parts", path);
            if (!parts.is_array() || parts.empty())
                fail(path + ".parts", "expected a nonempty array of maps");
            std::vector<MapRep> maps;
            for (std::size_t i = 0; i < parts.size(); ++i)
                maps.push_back(parse_map(parts[i], space, path + ".parts[" + std::to_string(i) + "]"));
            return MapRep::compose(std::move(maps));
        }
    } catch (const ConfigError& e) {
        const std::string what = e.what();
        if (what.rfind(path, 0) == 0)
            throw;
        fail(path, what);
    }
    fail(path, "unknown map form '" + form + "'");
}

Gamma parse_gamma(const json& j, const std::string& path) {
    try {
        if (j.is_array()) {
            std::vector<long> values;
            for (std::size_t i = 0; i < j.size(); ++i)
                values.push_back(as_int(j[i], path + "[" + std::to_string(i) + "]"));
            return Gamma::list(std::move(values));
        }
        const std::string kind = as_string(member(j, "kind", path), path + ".kind");
        if (kind == "linear")
            return Gamma::linear(as_int(member(j, "coef", path), path + ".coef"));
        if (kind == "list") {
            std::vector<long> values;
            const json& vals = member(j, "values", path);
            if (!vals.is_array())
                fail(path + ".values", "expected an array of integers");
            for (std::size_t i = 0; i < vals.size(); ++i)
                values.push_back(as_int(vals[i], path + ".values[" + std::to_string(i) + "]"));
            return Gamma::list(std::move(values));
        }
        fail(path, "unknown gamma kind '" + kind + "'");
    } catch (const ConfigError& e) {
        const std::string what = e.what();
        if (what.rfind(path, 0) == 0)
            throw;
        fail(path, what);
    }
}

MapSequence parse_sequence(const json& j, const Space& space, const std::string& path) {
    const std::string rule = as_string(member(j, "rule", path), path + ".rule");
    try {
        if (rule == "explicit") {
            const json& maps = member(j, "maps", path);
            if (!maps.is_array() || maps.empty())
                fail(path + ".maps", "expected a nonempty array of maps");
            std::vector<MapRep> list;
            for (std::size_t i = 0; i < maps.size(); ++i)
                list.push_back(parse_map(maps[i], space, path + ".maps[" + std::to_string(i) + "]"));
            if (j.contains("tail") && j["tail"].is_object()) {
                // Family-formula tail: the generator covers indices beyond
                // the explicit prefix.
                const json& tj = j["tail"];
                const std::string tpath = path + ".tail";
                const std::string name = as_string(member(tj, "family", tpath), tpath + ".family");
                std::vector<double> params;
                if (tj.contains("params"))
                    params = as_real_vector(tj["params"], tpath + ".params");
                FamilySpec spec = make_family(space, name, params);
                return MapSequence::explicit_with_family_tail(std::move(list), spec.name,
                                                              spec.generator, spec.limit);
            }
            TailRule tail = TailRule::None;
            if (j.contains("tail")) {
                const std::string t = as_string(j["tail"], path + ".tail");
                if (t == "none") tail = TailRule::None;
                else if (t == "repeat_last") tail = TailRule::RepeatLast;
                else if (t == "cycle") tail = TailRule::Cycle;
                else fail(path + ".tail", "unknown tail rule '" + t + "'");
            }
            return MapSequence::explicit_list(std::move(list), tail);
        }
        if (rule == "periodic") {
            const json& block = member(j, "block", path);
            if (!block.is_array() || block.empty())
                fail(path + ".block", "expected a nonempty array of maps");
            std::vector<MapRep> maps;
            for (std::size_t i = 0; i < block.size(); ++i)
                maps.push_back(parse_map(block[i], space, path + ".block[" + std::to_string(i) + "]"));
            return MapSequence::periodic(std::move(maps));
        }
        if (rule == "family") {
            const std::string name = as_string(member(j, "family", path), path + ".family");
            std::vector<double> params;
            if (j.contains("params"))
                params = as_real_vector(j["params"], path + ".params");
            FamilySpec spec = make_family(space, name, params);
            return MapSequence::family(spec.name, spec.generator, spec.limit);
        }
        if (rule == "shifted") {
            MapSequence base = parse_sequence(member(j, "base", path), space, path + ".base");
            const long k = as_int(member(j, "k", path), path + ".k");
            return MapSequence::shifted(std::move(base), static_cast<int>(k));
        }
        if (rule == "induced") {
            MapSequence base = parse_sequence(member(j, "base", path), space, path + ".base");
            Gamma gamma = parse_gamma(member(j, "gamma", path), path + ".gamma");
            return MapSequence::induced(std::move(base), std::move(gamma));
        }
    } catch (const ConfigError& e) {
        const std::string what = e.what();
        if (what.rfind(path, 0) == 0)
            throw;
        fail(path, what);
    }
    fail(path, "unknown sequence rule '" + rule + "'");
}

TaskKind parse_task_kind(const std::string& name, const std::string& path) {
    for (TaskKind k : {TaskKind::Trajectory, TaskKind::Omega, TaskKind::LimitProfile,
                       TaskKind::Asymptotic, TaskKind::UniformLimit, TaskKind::Equicontinuity,
                       TaskKind::Split, TaskKind::Periodic, TaskKind::Induced, TaskKind::Uniap,
                       TaskKind::Action, TaskKind::Kempf, TaskKind::FixedPoint,
                       TaskKind::PeriodicPoint, TaskKind::Conjugacy})
        if (task_name(k) == name)
            return k;
    fail(path, "unknown task '" + name + "'");
}

Task parse_task(const json& j, const Space& space, const std::string& path) {
    Task t;
    t.kind = parse_task_kind(as_string(member(j, "task", path), path + ".task"), path + ".task");
    if (j.contains("x0")) {
        const json& x0 = j["x0"];
        if (x0.is_array())
            t.x0 = as_real_vector(x0, path + ".x0");
        else
            t.x0 = {as_real(x0, path + ".x0")};
    }
    t.steps = opt_int(j, "steps", 100, path);
    t.burn_in = opt_int(j, "burn_in", 1000, path);
    t.keep = opt_int(j, "keep", 10000, path);
    t.cluster_eps = opt_real(j, "cluster_eps", 1e-3, path);
    t.grid_res = static_cast<int>(opt_int(j, "grid", 101, path));
    t.N = static_cast<int>(opt_int(j, "N", 100, path));
    t.window = opt_int(j, "window", 1, path);
    t.m_max = static_cast<int>(opt_int(j, "m_max", 16, path));
    t.n_max = static_cast<int>(opt_int(j, "n_max", 64, path));
    t.k_max = static_cast<int>(opt_int(j, "k_max", 8, path));
    t.l_max = static_cast<int>(opt_int(j, "l_max", 16, path));
    t.tail_start = static_cast<int>(opt_int(j, "tail_start", -1, path));
    t.anchor_n = static_cast<int>(opt_int(j, "anchor_n", -1, path));
    t.additivity_horizon = static_cast<int>(opt_int(j, "horizon", 16, path));
    if (j.contains("eps")) {
        t.eps = as_real(j["eps"], path + ".eps");
        t.eps_explicit = true;
    }
    if (j.contains("tol")) {
        t.tol = as_real(j["tol"], path + ".tol");
        t.tol_explicit = true;
    }
    if (j.contains("deltas"))
        t.deltas = as_real_vector(j["deltas"], path + ".deltas");
    if (j.contains("gamma"))
        t.gamma = parse_gamma(j["gamma"], path + ".gamma");
    if (j.contains("map"))
        t.cmp_map = parse_map(j["map"], space, path + ".map");
    if (j.contains("compare"))
        t.compare_mode = as_string(j["compare"], path + ".compare");
    if (j.contains("family"))
        t.family_choice = as_string(j["family"], path + ".family");

    // Statically checkable preconditions fail at parse time with the task's
    // path; dynamic ones surface when the task runs.
    if (t.grid_res < 2)
        fail(path, "grid resolution must be >= 2");
    if (t.keep < 1)
        fail(path, "keep must be >= 1");
    if (t.burn_in < 0)
        fail(path, "burn_in must be >= 0");
    if (t.eps_explicit && !(t.eps > 0))
        fail(path, "eps must be positive");

    switch (t.kind) {
    case TaskKind::Trajectory:
        if (t.steps < 1)
            fail(path, "trajectory needs steps >= 1");
        break;
    case TaskKind::LimitProfile:
        if (t.window < 1 || t.window > t.N)
            fail(path, "limit profile requires 1 <= window <= N");
        break;
    case TaskKind::Split:
        if (!(2 <= t.k_max && t.k_max <= t.n_max))
            fail(path, "split requires 2 <= k_max <= n_max");
        break;
    case TaskKind::Induced:
        if (!t.gamma)
            fail(path, "induced task requires a gamma");
        break;
    case TaskKind::Asymptotic:
        if (t.compare_mode.empty())
            fail(path, "asymptotic task requires a compare mode");
        if (t.compare_mode == "generators_vs_map" && !t.cmp_map)
            fail(path, "compare mode 'generators_vs_map' requires a map");
        break;
    case TaskKind::Equicontinuity:
        if (t.deltas.empty())
            fail(path, "equicontinuity task requires deltas");
        break;
    case TaskKind::Conjugacy: {
        const json& other = member(j, "other", path);
        const std::string opath = path + ".other";
        Space other_space = other.contains("space")
                                ? parse_space(other["space"], opath + ".space")
                                : space;
        t.other_seq = parse_sequence(member(other, "sequence", opath), other_space,
                                     opath + ".sequence");
        t.other_space = other_space;
        t.h = parse_map(member(j, "h", path), space, path + ".h");
        break;
    }
    default:
        break;
    }
    return t;
}

} // namespace

Scenario parse_scenario(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("scenario is not valid JSON: ") + e.what());
    }
    const std::string root = "$";
    if (doc.contains("schema") && as_int(doc["schema"], root + ".schema") != 1)
        fail(root + ".schema", "unsupported schema version");
    Space space = parse_space(member(doc, "space", root), root + ".space");
    MapSequence sequence = parse_sequence(member(doc, "sequence", root), space, root + ".sequence");
    Scenario s{
        as_string(member(doc, "name", root), root + ".name"),
        doc.contains("description") ? as_string(doc["description"], root + ".description") : "",
        std::move(space),
        std::move(sequence),
        std::nullopt,
        {},
    };
    if (doc.contains("limit"))
        s.limit = parse_map(doc["limit"], s.space, root + ".limit");
    const json& tasks = member(doc, "tasks", root);
    if (!tasks.is_array())
        fail(root + ".tasks", "expected an array");
    for (std::size_t i = 0; i < tasks.size(); ++i)
        s.tasks.push_back(parse_task(tasks[i], s.space, root + ".tasks[" + std::to_string(i) + "]"));
    return s;
}

// ---------------------------------------------------------------------------
// Running

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("cannot write " + path.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
}

void echo_common(JsonWriter& w, const Scenario& sc, const Task& t) {
    w.key("schema").value(1);
    w.key("scenario").value(sc.name);
    w.key("task").value(task_name(t.kind));
}

void echo_point(JsonWriter& w, const Point& p) {
    w.begin_array();
    for (double c : p.coords)
        w.value(c);
    w.end_array();
}

struct TaskIo {
    std::filesystem::path dir;
    std::string stem;
    std::vector<std::string>* artifacts;

    std::string emit(const std::string& suffix, const std::string& content) const {
        const std::string file = stem + suffix;
        write_file(dir / file, content);
        artifacts->push_back(file);
        return file;
    }
};

void write_verdict(JsonWriter& w, const VerdictReport& rep, const std::string& csv_path) {
    w.key("check").value(rep.check_name);
    w.key("passed").value(rep.passed);
    w.key("max_defect").value(rep.max_defect);
    w.key("tolerance").value(rep.tolerance);
    if (csv_path.empty())
        w.key("series_csv_path").null();
    else
        w.key("series_csv_path").value(csv_path);
}

// Writes the verdict's series CSV (when it has one) and the report JSON.
bool run_check_task(const Scenario& sc, const Task& t, const System& sys, const TaskIo& io,
                    double eff_eps, double eff_tol) {
    JsonWriter w;
    w.begin_object();
    echo_common(w, sc, t);
    bool passed = false;
    PointSet grd = grid(sys.space(), t.grid_res);

    switch (t.kind) {
    case TaskKind::Split: {
        VerdictReport rep =
            check_split(sys, t.k_max, t.n_max, grd, t.tol_explicit ? t.tol : 0.0);
        const std::string csv = io.emit("_series.csv", rep.series_csv());
        write_verdict(w, rep, csv);
        w.key("config").begin_object();
        w.key("k_max").value(t.k_max);
        w.key("n_max").value(t.n_max);
        w.key("grid").value(t.grid_res);
        w.end_object();
        passed = rep.passed;
        break;
    }
    case TaskKind::Periodic: {
        VerdictReport rep =
            check_periodic(sys, t.l_max, grd, t.tol_explicit ? t.tol : 0.0);
        const std::string csv = io.emit("_series.csv", rep.series_csv());
        write_verdict(w, rep, csv);
        w.key("config").begin_object();
        w.key("l_max").value(t.l_max);
        w.key("grid").value(t.grid_res);
        w.end_object();
        passed = rep.passed;
        break;
    }
    case TaskKind::Induced: {
        InducedVerdict rep = check_induced(sys, *t.gamma, t.n_max, grd, t.additivity_horizon,
                                           t.tol_explicit ? t.tol : 0.0);
        const std::string csv = io.emit("_series.csv", rep.verdict.series_csv());
        write_verdict(w, rep.verdict, csv);
        w.key("gamma").value(t.gamma->describe());
        w.key("gamma_additive").value(rep.gamma_additive);
        w.key("additivity_horizon").value(rep.additivity_horizon);
        w.key("config").begin_object();
        w.key("n_max").value(t.n_max);
        w.key("grid").value(t.grid_res);
        w.end_object();
        passed = rep.verdict.passed;
        break;
    }
    case TaskKind::Uniap: {
        const int tail = t.tail_start >= 0 ? t.tail_start : t.N / 2;
        UniapVerdict rep = check_uniap(sys, grd, t.N, eff_eps, tail);
        const std::string csv = io.emit("_series.csv", rep.verdict.series_csv());
        write_verdict(w, rep.verdict, csv);
        w.key("tail_max_defect").value(rep.tail_max_defect);
        w.key("inequality_excess").value(rep.inequality_excess);
        w.key("margin_no_slack").value(rep.margin_no_slack);
        w.key("margin_with_slack").value(rep.margin_with_slack);
        w.key("slack").value(rep.slack);
        w.key("uniform_converges").value(rep.uniform_converges);
        w.key("config").begin_object();
        w.key("N").value(t.N);
        w.key("eps").value(eff_eps);
        w.key("tail_start").value(tail);
        w.key("grid").value(t.grid_res);
        w.end_object();
        passed = rep.verdict.passed;
        break;
    }
    case TaskKind::Action: {
        ActionParams params;
        params.m_max = t.m_max;
        params.N = t.N;
        params.eps = eff_eps;
        params.tail_start = t.tail_start;
        if (t.anchor_n >= 0)
            params.anchor_n = t.anchor_n;
        VerdictReport rep = check_action(sys, grd, params);
        const std::string csv = io.emit("_series.csv", rep.series_csv());
        write_verdict(w, rep, csv);
        w.key("config").begin_object();
        w.key("m_max").value(t.m_max);
        w.key("N").value(t.N);
        w.key("eps").value(eff_eps);
        w.key("tail_start").value(params.tail_start >= 0 ? params.tail_start : t.N / 2);
        if (params.anchor_n)
            w.key("anchor_n").value(*params.anchor_n);
        w.key("grid").value(t.grid_res);
        w.end_object();
        passed = rep.passed;
        break;
    }
    case TaskKind::Kempf: {
        OmegaParams op{t.burn_in, t.keep, t.cluster_eps};
        VerdictReport rep = check_kempf(sys, sys.space().point(t.x0), op, eff_tol);
        write_verdict(w, rep, "");
        w.key("config").begin_object();
        w.key("x0");
        echo_point(w, sys.space().point(t.x0));
        w.key("burn_in").value(t.burn_in);
        w.key("keep").value(t.keep);
        w.key("cluster_eps").value(t.cluster_eps);
        w.key("tol").value(eff_tol);
        w.end_object();
        passed = rep.passed;
        break;
    }
    case TaskKind::FixedPoint: {
        OmegaParams op{t.burn_in, t.keep, t.cluster_eps};
        FixedPointResult rep = find_fixed_point(sys, sys.space().point(t.x0), op, eff_tol);
        write_verdict(w, rep.verdict, "");
        w.key("y");
        echo_point(w, rep.y);
        w.key("residual").value(rep.residual);
        w.key("phi_gap_at_y").value(rep.phi_gap_at_y);
        w.key("config").begin_object();
        w.key("x0");
        echo_point(w, sys.space().point(t.x0));
        w.key("burn_in").value(t.burn_in);
        w.key("keep").value(t.keep);
        w.key("cluster_eps").value(t.cluster_eps);
        w.key("tol").value(eff_tol);
        w.end_object();
        passed = rep.verdict.passed;
        break;
    }
    case TaskKind::PeriodicPoint: {
        OmegaParams op{t.burn_in, t.keep, t.cluster_eps};
        PeriodicPointResult rep =
            check_periodic_point(sys, sys.space().point(t.x0), op, t.n_max, eff_eps, grd);
        const std::string csv = io.emit("_series.csv", rep.verdict.series_csv());
        write_verdict(w, rep.verdict, csv);
        if (rep.n_found)
            w.key("n_found").value(*rep.n_found);
        else
            w.key("n_found").null();
        w.key("config").begin_object();
        w.key("x0");
        echo_point(w, sys.space().point(t.x0));
        w.key("burn_in").value(t.burn_in);
        w.key("keep").value(t.keep);
        w.key("n_max").value(t.n_max);
        w.key("eps").value(eff_eps);
        w.key("grid").value(t.grid_res);
        w.end_object();
        passed = rep.verdict.passed;
        break;
    }
    case TaskKind::Conjugacy: {
        System other(*t.other_space, *t.other_seq, sc.name + "/other");
        VerdictReport rep = check_conjugacy(sys, other, *t.h, grd, t.N, eff_tol);
        const std::string csv = io.emit("_series.csv", rep.series_csv());
        write_verdict(w, rep, csv);
        w.key("config").begin_object();
        w.key("N").value(t.N);
        w.key("tol").value(eff_tol);
        w.key("grid").value(t.grid_res);
        w.key("h");
        t.h->describe_json(w);
        w.end_object();
        passed = rep.passed;
        break;
    }
    default:
        throw Error("not a check task");
    }
    w.end_object();
    io.emit(".json", w.str());
    return passed;
}

void run_report_task(const Scenario& sc, const Task& t, const System& sys, const TaskIo& io) {
    JsonWriter w;
    w.begin_object();
    echo_common(w, sc, t);

    switch (t.kind) {
    case TaskKind::Trajectory: {
        Trajectory traj = trajectory(sys, sys.space().point(t.x0), t.steps);
        const std::string csv = io.emit("_trajectory.csv", traj.to_csv());
        w.key("x0");
        echo_point(w, traj.x0);
        w.key("steps").value(t.steps);
        w.key("final");
        echo_point(w, traj.points.back());
        w.key("csv_path").value(csv);
        break;
    }
    case TaskKind::Omega: {
        OmegaParams op{t.burn_in, t.keep, t.cluster_eps};
        OmegaEstimate est = omega_limit(sys, sys.space().point(t.x0), op);
        const std::string csv = io.emit("_points.csv", est.centers.to_csv());
        w.key("x0");
        echo_point(w, est.x0);
        w.key("burn_in").value(t.burn_in);
        w.key("keep").value(t.keep);
        w.key("eps").value(t.cluster_eps);
        w.key("center_count").value(static_cast<long long>(est.centers.size()));
        w.key("centers").begin_array();
        for (std::size_t i = 0; i < est.centers.size(); ++i)
            echo_point(w, est.centers[i]);
        w.end_array();
        w.key("csv_path").value(csv);
        break;
    }
    case TaskKind::LimitProfile: {
        PointSet grd = grid(sys.space(), t.grid_res);
        LimitProfile prof = pointwise_limit_profile(sys, grd, t.N, t.window, t.cluster_eps);
        w.key("N").value(t.N);
        w.key("window").value(t.window);
        w.key("eps").value(t.cluster_eps);
        w.key("max_jump").value(prof.max_jump);
        w.key("profile").begin_array();
        for (std::size_t i = 0; i < prof.grid_points.size(); ++i) {
            w.begin_object();
            w.key("x").value(prof.grid_points[i].x());
            w.key("values").begin_array();
            for (std::size_t v = 0; v < prof.values[i].size(); ++v)
                w.value(prof.values[i][v].x());
            w.end_array();
            w.end_object();
        }
        w.end_array();
        break;
    }
    case TaskKind::Asymptotic: {
        PointSet grd = grid(sys.space(), t.grid_res);
        const int tail = t.tail_start >= 0 ? t.tail_start : t.N / 2;
        SeqView a, b;
        if (t.compare_mode == "generators_vs_limit") {
            if (!sys.limit())
                throw ConfigError("compare mode 'generators_vs_limit' requires a declared limit");
            a = generator_view(sys, grd);
            b = map_view(*sys.limit(), grd);
        } else if (t.compare_mode == "generators_vs_map") {
            a = generator_view(sys, grd);
            b = map_view(*t.cmp_map, grd);
        } else if (t.compare_mode == "phi_orbit_vs_shift") {
            if (!sys.limit())
                throw ConfigError("compare mode 'phi_orbit_vs_shift' requires a declared limit");
            a = post_compose_view(*sys.limit(), iterate_view(sys, grd, t.N, 0));
            b = iterate_view(sys, grd, t.N, 1);
        } else {
            throw ConfigError("unknown compare mode '" + t.compare_mode + "'");
        }
        AsymptoticsReport rep = asymptotic_report(a, b, grd, t.N, t.eps, tail);
        CsvWriter csv({"n", "defect"});
        for (int n = 1; n <= rep.N; ++n)
            csv.row({static_cast<double>(n), rep.uniform_defect[static_cast<std::size_t>(n) - 1]});
        const std::string csv_path = io.emit("_series.csv", csv.str());
        w.key("compare").value(t.compare_mode);
        w.key("N").value(t.N);
        w.key("eps").value(t.eps);
        w.key("tail_start").value(tail);
        w.key("decision_pointwise").value(rep.decision_pointwise);
        w.key("decision_uniform").value(rep.decision_uniform);
        w.key("uniform_density").value(rep.uniform_density);
        w.key("per_x").begin_array();
        for (std::size_t i = 0; i < grd.size(); ++i) {
            w.begin_object();
            w.key("x").value(grd[i].x());
            w.key("tail_max").value(rep.per_x_tail_max[i]);
            w.key("density").value(rep.per_x_density[i]);
            w.end_object();
        }
        w.end_array();
        w.key("series_csv_path").value(csv_path);
        break;
    }
    case TaskKind::UniformLimit: {
        PointSet grd = grid(sys.space(), t.grid_res);
        const double tol = t.tol_explicit ? t.tol : 1e-2;
        UniformLimitReport rep = uniform_limit(sys, grd, t.N, tol);
        CsvWriter csv({"n", "defect"});
        for (std::size_t n = 0; n < rep.sup_defect.size(); ++n)
            csv.row({static_cast<double>(n + 1), rep.sup_defect[n]});
        const std::string csv_path = io.emit("_series.csv", csv.str());
        w.key("N").value(t.N);
        w.key("tol").value(tol);
        w.key("converges").value(rep.converges);
        w.key("eps_at_tail").value(rep.eps_at_tail);
        w.key("series_csv_path").value(csv_path);
        break;
    }
    case TaskKind::Equicontinuity: {
        PointSet grd = grid(sys.space(), t.grid_res);
        const IterateFamily fam = t.family_choice == "phi_iterates" ? IterateFamily::PhiIterates
                                                                    : IterateFamily::Iterates;
        EquicontinuityReport rep = equicontinuity(sys, fam, grd, t.N, t.deltas);
        w.key("family").value(rep.family_label);
        w.key("N").value(t.N);
        w.key("verdict_hint").value(rep.verdict_hint);
        w.key("table").begin_array();
        for (const auto& row : rep.table) {
            w.begin_object();
            w.key("delta").value(row.delta);
            w.key("eps_observed").value(row.eps_observed);
            w.end_object();
        }
        w.end_array();
        break;
    }
    default:
        throw Error("not a report task");
    }
    w.end_object();
    io.emit(".json", w.str());
}

} // namespace

RunSummary run_scenario(const Scenario& scenario, const RunOptions& options) {
    namespace fs = std::filesystem;
    set_max_threads(options.threads);
    const fs::path dir = fs::path(options.out_dir) / scenario.name;
    fs::create_directories(dir);

    RunSummary summary;
    summary.scenario = scenario.name;
    const System sys = scenario.make_system();

    for (std::size_t i = 0; i < scenario.tasks.size(); ++i) {
        const Task& t = scenario.tasks[i];
        TaskResult result;
        result.task = task_name(t.kind);
        char stem[32];
        std::snprintf(stem, sizeof(stem), "%02zu_%s", i, result.task.c_str());
        TaskIo io{dir, stem, &result.artifacts};

        const double eff_eps =
            t.eps_explicit ? t.eps : (options.default_tol ? *options.default_tol : t.eps);
        double builtin_tol = 0.0;
        switch (t.kind) {
        case TaskKind::Kempf: builtin_tol = 5e-3; break;
        case TaskKind::FixedPoint: builtin_tol = 1e-6; break;
        case TaskKind::Conjugacy: builtin_tol = 1e-9; break;
        default: break;
        }
        const double eff_tol =
            t.tol_explicit ? t.tol : (options.default_tol ? *options.default_tol : builtin_tol);

        const auto start = std::chrono::steady_clock::now();
        try {
            if (task_is_check(t.kind)) {
                const bool passed = run_check_task(scenario, t, sys, io, eff_eps, eff_tol);
                result.status = passed ? "passed" : "failed";
                if (!passed)
                    summary.all_checks_passed = false;
            } else {
                run_report_task(scenario, t, sys, io);
                result.status = "report-only";
            }
        } catch (const Error& e) {
            result.status = "error";
            result.message = e.what();
            if (task_is_check(t.kind))
                summary.all_checks_passed = false;
        }
        const auto stop = std::chrono::steady_clock::now();
        result.wall_ms = std::chrono::duration<double, std::milli>(stop - start).count();
        summary.tasks.push_back(std::move(result));
    }

    // Wall times live only here; report bodies stay byte-stable.
    JsonWriter w;
    w.begin_object();
    w.key("schema").value(1);
    w.key("scenario").value(summary.scenario);
    w.key("all_checks_passed").value(summary.all_checks_passed);
    w.key("tasks").begin_array();
    for (std::size_t i = 0; i < summary.tasks.size(); ++i) {
        const auto& r = summary.tasks[i];
        w.begin_object();
        w.key("index").value(static_cast<long long>(i));
        w.key("task").value(r.task);
        w.key("status").value(r.status);
        w.key("wall_ms").value(r.wall_ms);
        if (!r.message.empty())
            w.key("message").value(r.message);
        w.key("artifacts").begin_array();
        for (const auto& a : r.artifacts)
            w.value(a);
        w.end_array();
        w.end_object();
    }
    w.end_array();
    w.end_object();
    write_file(dir / "summary.json", w.str());
    return summary;
}

// Raw table generated at build time from the fixtures/ directory.
namespace detail {
struct RawFixture {
    const char* name;
    const char* text;
};
const RawFixture* fixture_table(std::size_t* count);
} // namespace detail

const std::vector<FixtureInfo>& shipped_fixtures() {
    static const std::vector<FixtureInfo> fixtures = [] {
        std::vector<FixtureInfo> out;
        std::size_t count = 0;
        const detail::RawFixture* table = detail::fixture_table(&count);
        for (std::size_t i = 0; i < count; ++i) {
            FixtureInfo info;
            info.name = table[i].name;
            info.json_text = table[i].text;
            try {
                json doc = json::parse(info.json_text);
                if (doc.contains("description"))
                    info.description = doc["description"].get<std::string>();
            } catch (const json::exception&) {
                info.description = "(unparsable fixture)";
            }
            out.push_back(std::move(info));
        }
        return out;
    }();
    return fixtures;
}

const FixtureInfo* find_fixture(const std::string& name) {
    for (const auto& f : shipped_fixtures())
        if (f.name == name)
            return &f;
    return nullptr;
}

} // namespace ndslab
