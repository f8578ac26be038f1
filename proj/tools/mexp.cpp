// mexp: command-line front end for the measure-expansiveness estimators.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "mexp/battery.hpp"
#include "mexp/config.hpp"
#include "mexp/entropy.hpp"
#include "mexp/errors.hpp"
#include "mexp/expansiveness.hpp"
#include "mexp/format.hpp"
#include "mexp/registry.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace mexp;

namespace {

enum Exit { kOk = 0, kBatteryFail = 1, kUsage = 2, kCapability = 3 };

struct Run {
    ExperimentConfig cfg;
    int workers = 1;
    std::string out;
    std::string format;
    bool timing = false;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
};

void emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw UsageError("cannot write " + path);
    f << text;
}

std::string sibling(const std::string& path, const std::string& ext) {
    fs::path p(path);
    p.replace_extension(ext);
    return p.string();
}

json header(const Run& r) {
    json j;
    j["version"] = MEXP_VERSION;
    j["seed"] = r.cfg.seed;
    j["config"] = r.cfg.to_text();
    return j;
}

std::string finish(const Run& r, json j) {
    if (r.timing)
        j["runtime_seconds"] =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - r.start).count();
    return j.dump(2) + "\n";
}

json point_json(const Point& p) {
    json a = json::array();
    for (std::size_t i = 0; i < p.dim; ++i) a.push_back(p.x[i]);
    return a;
}

json interval_json(const Interval& i) { return json::array({i.lo, i.hi}); }

Sampling sampling_of(const ExperimentConfig& c) {
    if (c.sampling == "global") return Sampling::global;
    if (c.sampling == "localized") return Sampling::localized;
    return Sampling::automatic;
}

struct Subject {
    SystemSpec f;
    MeasureSpec mu;
};

Subject subject(const ExperimentConfig& c) {
    const SystemSpec base = make_system(c.system, c.params);
    return {power(base, c.power), make_measure(c.measure, base)};
}

Point center_of(const ExperimentConfig& c, const Space& space) {
    std::vector<double> coords = c.center;
    if (coords.size() == 1 && space.dim() > 1) coords.assign(space.dim(), coords[0]);
    if (coords.size() != space.dim()) throw UsageError("center needs " + std::to_string(space.dim()) + " coordinates");
    try {
        return space.point(coords);
    } catch (const DomainError& e) {
        throw UsageError(std::string("bad center: ") + e.what());
    }
}

std::string csv_comments(const Run& r) {
    std::string s = "# mexp " + std::string(MEXP_VERSION) + "\n# seed " + std::to_string(r.cfg.seed) + "\n";
    std::istringstream in(r.cfg.to_text());
    for (std::string line; std::getline(in, line);) s += "# " + line + "\n";
    return s;
}

int cmd_decay(Run& r) {
    const auto& c = r.cfg;
    const Subject s = subject(c);
    const Sided sided = c.sided.value_or(s.f.invertible() ? Sided::two_sided : Sided::one_sided);
    DecaySettings ds{sided, c.delta, c.n_max, c.samples, c.seed, r.workers, sampling_of(c)};
    const DecaySeries series = decay_series(s.f, s.mu, center_of(c, s.f.space), ds);

    std::string csv = csv_comments(r) + "n,estimate,ci_low,ci_high\n";
    for (std::size_t i = 0; i < series.estimates.size(); ++i)
        csv += std::to_string(series.n_values[i]) + "," + num(series.estimates[i]) + "," + num(series.ci[i].lo) + "," +
               num(series.ci[i].hi) + "\n";

    json j = header(r);
    j["system"] = s.f.name;
    j["measure"] = s.mu.name;
    j["center"] = point_json(series.center);
    j["delta"] = series.delta;
    j["sided"] = to_string(series.sided);
    j["sampling"] = series.localized ? "localized" : "global";
    j["ball_mass"] = series.ball_mass;
    j["sample_count"] = series.sample_count;
    j["n"] = series.n_values;
    j["estimate"] = series.estimates;
    j["survivors"] = series.survivors;

    if (r.format == "json") {
        emit(r.out, finish(r, j));
    } else {
        emit(r.out, csv);
        if (!r.out.empty() && r.out != "-") emit(sibling(r.out, ".json"), finish(r, j));
    }
    return kOk;
}

int cmd_verdict(Run& r) {
    const auto& c = r.cfg;
    const Subject s = subject(c);
    VerdictSettings vs;
    vs.delta = c.delta;
    vs.n_max = c.n_max;
    vs.samples = c.samples;
    vs.x_probes = c.x_probes;
    vs.threshold = c.threshold;
    vs.seed = c.seed;
    vs.workers = r.workers;
    vs.sided = c.sided;
    vs.sampling = sampling_of(c);
    const ExpansivenessVerdict v = expansiveness_verdict(s.f, s.mu, vs);
    json j = header(r);
    j["system"] = s.f.name;
    j["measure"] = s.mu.name;
    j["delta"] = v.delta;
    j["verdict"] = to_string(v.verdict);
    j["sided"] = to_string(v.sided);
    j["x_probe_count"] = v.x_probe_count;
    j["n_max"] = v.n_max;
    j["samples"] = v.samples;
    j["threshold"] = v.threshold;
    j["worst_upper_bound"] = v.worst_upper_bound;
    j["best_lower_bound"] = v.best_lower_bound;
    j["witness"] = v.witness ? point_json(*v.witness) : json(nullptr);
    j["terminal_estimates"] = v.terminal_estimates;
    emit(r.out, finish(r, j));
    return kOk;
}

int cmd_entropy(Run& r) {
    const auto& c = r.cfg;
    const Subject s = subject(c);
    EntropySettings es;
    es.delta_grid = c.delta_grid;
    es.n_max = c.n_max;
    es.x_probes = c.x_probes;
    es.samples = c.samples;
    es.seed = c.seed;
    es.workers = r.workers;
    es.sampling = sampling_of(c);
    const EntropyEstimate e = bk_entropy(s.f, s.mu, es);

    if (r.format == "csv") {
        std::string csv = csv_comments(r) + "probe,x,delta,slope,se,n_first,n_last,censored\n";
        for (std::size_t p = 0; p < e.probes.size(); ++p) {
            std::string x;
            for (std::size_t i = 0; i < e.probes[p].dim; ++i) x += (i ? " " : "") + num(e.probes[p].x[i]);
            for (std::size_t d = 0; d < e.delta_grid.size(); ++d) {
                const SlopeFit& fit = e.per_x_rates[p][d];
                csv += std::to_string(p) + "," + x + "," + num(e.delta_grid[d]) + "," + num(fit.slope) + "," +
                       num(fit.se) + "," + std::to_string(fit.n_first) + "," + std::to_string(fit.n_last) + "," +
                       (fit.censored ? "1" : "0") + "\n";
            }
        }
        emit(r.out, csv);
        return kOk;
    }
    json j = header(r);
    j["system"] = s.f.name;
    j["measure"] = s.mu.name;
    j["delta_grid"] = e.delta_grid;
    j["e_of_delta"] = e.e_of_delta;
    j["se_of_delta"] = e.se_of_delta;
    j["ci"] = json::array();
    for (const auto& ci : e.ci) j["ci"].push_back(interval_json(ci));
    j["extrapolated_e"] = e.extrapolated_e;
    j["extrapolated_se"] = e.extrapolated_se;
    j["converged"] = e.converged;
    j["plateau_delta"] = e.delta_grid[e.plateau_index];
    j["probes"] = json::array();
    for (std::size_t p = 0; p < e.probes.size(); ++p) {
        json pj;
        pj["x"] = point_json(e.probes[p]);
        pj["fits"] = json::array();
        for (std::size_t d = 0; d < e.delta_grid.size(); ++d) {
            const SlopeFit& fit = e.per_x_rates[p][d];
            pj["fits"].push_back({{"delta", e.delta_grid[d]},
                                  {"slope", fit.slope},
                                  {"se", fit.se},
                                  {"n_first", fit.n_first},
                                  {"n_last", fit.n_last},
                                  {"residual_rms", fit.residual_rms},
                                  {"censored", fit.censored}});
        }
        j["probes"].push_back(pj);
    }
    emit(r.out, finish(r, j));
    return kOk;
}

std::vector<Ball> grid_cover(const Space& space, double radius, double spacing) {
    if (!(spacing > 0.0) || !(radius > 0.0)) throw UsageError("cover radius and spacing must be positive");
    const bool closed_end = space.kind() == SpaceKind::interval;
    const int per_axis = static_cast<int>(std::floor(1.0 / spacing + 1e-9)) + (closed_end ? 1 : 0);
    std::vector<Ball> cover;
    if (space.dim() == 1) {
        for (int k = 0; k < per_axis; ++k) cover.emplace_back(space.point({std::min(1.0, k * spacing)}), radius, false);
    } else if (space.kind() == SpaceKind::torus2) {
        for (int a = 0; a < per_axis; ++a)
            for (int b = 0; b < per_axis; ++b) cover.emplace_back(space.point({a * spacing, b * spacing}), radius, false);
    } else {
        throw UsageError("grid covers are available on the circle, the interval and the torus");
    }
    return cover;
}

int cmd_generator(Run& r) {
    const auto& c = r.cfg;
    const Subject s = subject(c);
    GeneratorSettings gs;
    gs.sided = c.sided.value_or(Sided::one_sided);
    gs.n_max = c.n_max;
    gs.sequence_samples = c.sequences;
    gs.mc_samples = c.samples;
    gs.threshold = c.threshold;
    gs.seed = c.seed;
    gs.workers = r.workers;
    gs.sampling = sampling_of(c);
    const GeneratorReport g = generator_check(s.f, s.mu, grid_cover(s.f.space, c.cover_radius, c.cover_spacing), gs);
    json j = header(r);
    j["system"] = s.f.name;
    j["measure"] = s.mu.name;
    j["sided"] = to_string(gs.sided);
    j["cover_size"] = g.cover.size();
    j["lebesgue_number"] = g.lebesgue_number;
    j["sequences_tested"] = g.sequences_tested;
    j["max_intersection_estimate"] = g.max_intersection_estimate;
    j["max_ci"] = interval_json(g.max_ci);
    j["worst_kind"] = g.worst_kind;
    j["is_generator_evidence"] = g.is_generator_evidence;
    emit(r.out, finish(r, j));
    return kOk;
}

int cmd_battery(Run& r) {
    BatteryReport report = run_battery(r.cfg.cases, r.cfg.seed, r.workers);
    report.config = r.cfg.to_text();
    std::string js = battery_json(report);
    if (r.timing) {
        json j = json::parse(js);
        js = finish(r, j);
    }
    const std::string md = battery_markdown(report);
    if (r.out.empty() || r.out == "-") {
        std::cout << (r.format == "json" ? js : md);
    } else {
        emit(r.out, js);
        emit(sibling(r.out, ".md"), md);
    }
    if (!report.ok()) {
        std::cerr << "failing cases:";
        for (const auto& id : report.failing()) std::cerr << " " << id;
        std::cerr << "\n";
        return kBatteryFail;
    }
    return kOk;
}

void list_everything() {
    std::cout << "systems:\n";
    for (const auto& name : system_names()) {
        const SystemSpec f = make_system(name);
        std::cout << "  " << name << "  (" << f.space.name() << (f.invertible() ? ", invertible" : "")
                  << (f.isometry ? ", isometry" : "") << (f.jacobian ? ", jacobian" : "") << ")\n";
    }
    std::cout << "measures:\n";
    for (const auto& name : measure_names()) std::cout << "  " << name << "\n";
    std::cout << "battery cases:\n";
    for (const auto& c : battery_cases()) std::cout << "  " << c.id << "  " << c.anchor << "\n";
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw UsageError("cannot read config file " + path);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Estimators and theorem battery for measure-expansive dynamics", "mexp"};
    app.require_subcommand(0, 1);
    bool list = false;
    app.add_flag("--list", list, "List systems, measures and battery cases");

    Run run;
    std::vector<std::pair<std::string, std::string>> given;
    std::string config_path;
    std::string explain_id;

    auto common = [&](CLI::App* sub) {
        auto opt = [&](const std::string& flag, const std::string& key, const std::string& help) {
            sub->add_option_function<std::string>(
                flag, [&given, key](const std::string& v) { given.emplace_back(key, v); }, help);
        };
        opt("--system", "system", "Zoo system name");
        sub->add_option_function<std::vector<std::string>>(
               "--param",
               [&given](const std::vector<std::string>& vs) {
                   for (const auto& v : vs) given.emplace_back("param", v);
               },
               "System parameter key=value (repeatable)")
            ->allow_extra_args(false);
        opt("--power", "power", "Iterate the system k times per step");
        opt("--measure", "measure", "Measure name");
        opt("--delta", "delta", "Dynamical-ball radius");
        opt("--delta-grid", "delta_grid", "Comma-separated radii");
        opt("--nmax", "n_max", "Largest window length");
        opt("--samples", "samples", "Monte-Carlo samples per estimate");
        opt("--probes", "x_probes", "Number of probe centers");
        opt("--threshold", "threshold", "Verdict threshold");
        opt("--seed", "seed", "Seed (default: MEXP_SEED or 7)");
        opt("--sided", "sided", "one, two or auto");
        opt("--sampling", "sampling", "automatic, global or localized");
        opt("--x", "center", "Center coordinates, comma-separated");
        opt("--cover-radius", "cover_radius", "Generator cover ball radius");
        opt("--cover-spacing", "cover_spacing", "Generator cover grid spacing");
        opt("--sequences", "sequences", "Itineraries per kind for the generator check");
        opt("--cases", "cases", "Comma-separated battery case ids");
        sub->add_option("--config", config_path, "Plain-text key = value file; flags override it");
        sub->add_option("--workers", run.workers, "Worker threads (results do not depend on it)")
            ->check(CLI::Range(1, 1024));
        sub->add_option("--out", run.out, "Output file (default: standard output)");
        sub->add_option("--format", run.format, "json or csv")->check(CLI::IsMember({"json", "csv", "md"}));
        sub->add_flag("--timing", run.timing, "Add wall-clock runtime to JSON output");
    };

    CLI::App* decay = app.add_subcommand("decay", "Measure of dynamical balls against n (CSV)");
    CLI::App* verdict = app.add_subcommand("verdict", "Expansiveness verdict over mu-sampled probes (JSON)");
    CLI::App* entropy = app.add_subcommand("entropy", "Metric BK-entropy over a delta grid (JSON or CSV)");
    CLI::App* generator = app.add_subcommand("generator", "Generator check for a grid cover of balls (JSON)");
    CLI::App* battery = app.add_subcommand("battery", "Run the theorem battery (Markdown, JSON with --out)");
    CLI::App* explain_cmd = app.add_subcommand("explain", "Describe a battery case");
    explain_cmd->add_option("case_id", explain_id, "Battery case id")->required();
    for (CLI::App* sub : {decay, verdict, entropy, generator, battery}) common(sub);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (list) {
            list_everything();
            return kOk;
        }
        if (*explain_cmd) {
            std::cout << explain(explain_id);
            return kOk;
        }
        const auto subs = app.get_subcommands();
        if (subs.empty()) {
            std::cerr << app.help();
            return kUsage;
        }
        const std::string command = subs.front()->get_name();
        run.cfg = ExperimentConfig::defaults_for(command);
        if (const char* env = std::getenv("MEXP_SEED")) run.cfg.set("seed", env);
        if (!config_path.empty()) run.cfg.apply_text(read_file(config_path));
        for (const auto& [k, v] : given) run.cfg.set(k, v);
        run.cfg.command = command;
        if (run.format.empty()) run.format = command == "decay" ? "csv" : command == "battery" ? "md" : "json";

        if (command == "decay") return cmd_decay(run);
        if (command == "verdict") return cmd_verdict(run);
        if (command == "entropy") return cmd_entropy(run);
        if (command == "generator") return cmd_generator(run);
        return cmd_battery(run);
    } catch (const CapabilityError& e) {
        std::cerr << "mexp: capability error: " << e.what() << "\n";
        return kCapability;
    } catch (const std::invalid_argument& e) {
        std::cerr << "mexp: " << e.what() << "\n";
        return kUsage;
    } catch (const std::runtime_error& e) {
        std::cerr << "mexp: " << e.what() << "\n";
        return kUsage;
    }
}
