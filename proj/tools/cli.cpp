#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <locale>
#include <numbers>
#include <sstream>
#include <variant>

#include "mhc/analytic.hpp"
#include "mhc/core_model.hpp"
#include "mhc/format.hpp"
#include "mhc/interference.hpp"
#include "mhc/simulate.hpp"

#ifndef MHC_VERSION
#define MHC_VERSION "0.0.0"
#endif

namespace mhc::cli {

namespace {

using nlohmann::json;
using Cell = std::variant<double, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

struct Options {
    std::string process = "matern1";
    double lambda_p = 2.0;
    double delta = 1.0;
    double alpha = 3.0;
    double r0 = 0.0;
    std::uint64_t seed = 1;
    std::size_t replicates = 1000;
    double window_radius = 0.0;  // 0 selects the default window
    std::string format = "csv";
    std::string out;

    std::string method = "quadrature";
    std::string fading = "none";
    double fading_shape = 1.0;
    double u = 1.0;
    double r_max = 4.0;
    int points = 41;
    double delta_min = 0.1;
    double delta_max = 2.0;
    bool type1 = false;
    bool type2 = false;
    bool palm = false;
    bool empirical = false;
    double rel_tol = 1e-9;
    int max_subdivisions = 2000;
    std::string manifest;
};

// Options registered on one subcommand, remembered so the run can be serialized.
class Binder {
public:
    explicit Binder(CLI::App* app) : app_(app) {}

    template <class T>
    Binder& option(const std::string& name, T& ref, const std::string& help) {
        app_->add_option("--" + name, ref, help)->capture_default_str();
        params_.push_back({name, [&ref] { return json(ref); }});
        return *this;
    }

    template <class T>
    Binder& choice(const std::string& name, T& ref, std::vector<std::string> allowed, const std::string& help) {
        app_->add_option("--" + name, ref, help)->capture_default_str()->check(CLI::IsMember(std::move(allowed)));
        params_.push_back({name, [&ref] { return json(ref); }});
        return *this;
    }

    Binder& flag(const std::string& name, bool& ref, const std::string& help) {
        app_->add_flag("--" + name, ref, help);
        params_.push_back({name, [&ref] { return json(ref); }});
        return *this;
    }

    json parameters() const {
        json out = json::object();
        for (const auto& p : params_) out[p.name] = p.value();
        return out;
    }

    bool has(const std::string& name) const {
        return std::any_of(params_.begin(), params_.end(), [&](const auto& p) { return p.name == name; });
    }

private:
    struct Param {
        std::string name;
        std::function<json()> value;
    };
    CLI::App* app_;
    std::vector<Param> params_;
};

std::string render_cell(const Cell& cell) {
    if (const auto* v = std::get_if<double>(&cell)) return format_number(*v);
    return std::get<std::string>(cell);
}

nlohmann::ordered_json json_cell(const Cell& cell) {
    if (const auto* v = std::get_if<double>(&cell)) {
        if (!std::isfinite(*v)) return nullptr;
        return std::stod(format_number(*v));
    }
    return std::get<std::string>(cell);
}

void write_table(std::ostream& out, const Table& table, const std::string& format) {
    if (format == "json") {
        // ordered so that objects keep the CSV column order
        auto rows = nlohmann::ordered_json::array();
        for (const auto& row : table.rows) {
            auto obj = nlohmann::ordered_json::object();
            for (std::size_t c = 0; c < table.columns.size(); ++c) obj[table.columns[c]] = json_cell(row[c]);
            rows.push_back(std::move(obj));
        }
        out << rows.dump(2) << '\n';
        return;
    }
    for (std::size_t c = 0; c < table.columns.size(); ++c) out << (c ? "," : "") << table.columns[c];
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << render_cell(row[c]);
        out << '\n';
    }
}

QuadratureConfig quadrature(const Options& o) {
    QuadratureConfig quad;
    quad.rel_tol = o.rel_tol;
    quad.max_subdivisions = o.max_subdivisions;
    quad.validate();
    return quad;
}

PathLossModel path_loss(const Options& o) { return PathLossModel::power_law(o.alpha, o.r0); }

HardCoreParams params_for(const Options& o) {
    return HardCoreParams(parse_process_kind(o.process), o.lambda_p, o.delta);
}

SimulationConfig simulation_config(const Options& o, const HardCoreParams& params, double min_window = 0.0) {
    SimulationConfig cfg = SimulationConfig::defaults(params);
    cfg.window_radius = o.window_radius > 0.0 ? o.window_radius : std::max(cfg.window_radius, min_window);
    cfg.replicates = o.replicates;
    cfg.seed = o.seed;
    if (o.fading == "exponential") cfg.fading = FadingModel::exponential();
    if (o.fading == "gamma") cfg.fading = FadingModel::gamma(o.fading_shape);
    cfg.validate(params);
    return cfg;
}

std::vector<double> linspace(double lo, double hi, int n) {
    if (n < 1) throw InputError("--points must be >= 1");
    if (n == 1) return {lo};
    std::vector<double> out;
    for (int i = 0; i < n; ++i) out.push_back(lo + (hi - lo) * i / (n - 1));
    return out;
}

Table cmd_intensity(const Options& o) {
    const HardCoreParams params = params_for(o);
    return {{"process", "lambda_p", "delta", "intensity"},
            {{o.process, o.lambda_p, o.delta, intensity(params)}}};
}

Table cmd_vunion(const Options& o) {
    return {{"delta", "u", "v_union"}, {{o.delta, o.u, v_union(o.delta, o.u)}}};
}

Table cmd_kfun(const Options& o) {
    if (!(o.r_max >= 0.0)) throw InputError("--r-max must be >= 0");
    const HardCoreParams params = params_for(o);
    const auto radii = linspace(0.0, o.r_max, o.points);
    const QuadratureConfig quad = quadrature(o);
    Table table{{"r", "k_function", "k_derivative", "poisson_reference"}, {}};
    for (double r : radii) {
        table.rows.push_back({r, k_function(params, r, quad), k_derivative(params, r), std::numbers::pi * r * r});
    }
    if (o.empirical) {
        const SimulationConfig cfg = simulation_config(o, params, o.r_max);
        const auto ensemble = sample_palm_ensemble(params, cfg);
        const auto estimates = estimate_k_function(ensemble, radii, intensity(params));
        table.columns.insert(table.columns.end(), {"k_empirical", "k_empirical_se"});
        for (std::size_t i = 0; i < radii.size(); ++i) {
            table.rows[i].push_back(estimates[i].value);
            table.rows[i].push_back(estimates[i].std_error);
        }
    }
    return table;
}

Table cmd_interference(const Options& o) {
    const HardCoreParams params = params_for(o);
    const PathLossModel pathloss = path_loss(o);
    require_compatible(params, pathloss);
    const double lambda = intensity(params);
    InterferenceEstimate est;
    if (o.method == "monte-carlo") {
        est = estimate_mean_interference(params, pathloss, simulation_config(o, params));
    } else {
        est.mean = mean_interference_quadrature(params, pathloss, quadrature(o));
        est.ci_low = est.ci_high = est.mean;
    }
    return {{"process", "lambda_p", "delta", "alpha", "r0", "method", "intensity", "mean", "normalized_mean",
             "std_error", "ci_low", "ci_high", "replicates", "tail_correction"},
            {{o.process, o.lambda_p, o.delta, o.alpha, o.r0, o.method, lambda, est.mean, est.mean / lambda,
              est.std_error, est.ci_low, est.ci_high, static_cast<double>(est.replicates), est.tail_correction}}};
}

Table cmd_eir(const Options& o, std::ostream& err) {
    const HardCoreParams params = params_for(o);
    const EirMethod method = parse_eir_method(o.method);
    if (method == EirMethod::Approximation && params.kind() == ProcessKind::MaternI &&
        !type1_approximation_reliable(params)) {
        err << "warning: the type I approximation is intended for lambda_p * delta^2 > 4\n";
    }
    const EirReport report = eir(params, path_loss(o), method, quadrature(o));
    return {{"process", "lambda_p", "delta", "alpha", "method", "mean_hardcore", "mean_poisson_hole", "eir_linear",
             "eir_db"},
            {{o.process, o.lambda_p, o.delta, o.alpha, std::string(to_string(report.method)), report.mean_hardcore,
              report.mean_poisson_hole, report.eir_linear, report.eir_db}}};
}

Table cmd_bounds(const Options& o) {
    const bool want_type1 = o.type1 || !o.type2;
    const bool want_type2 = o.type2 || !o.type1;
    const QuadratureConfig quad = quadrature(o);
    Table table{{"quantity", "value", "value_db"}, {}};
    auto row = [&](const std::string& name, double value, bool in_db) {
        table.rows.push_back({name, value, in_db ? Cell{to_db(value)} : Cell{std::string()}});
    };
    if (want_type1) {
        const HardCoreParams params(ProcessKind::MaternI, o.lambda_p, o.delta);
        const PathLossModel pathloss = path_loss(o);
        const AffineVBounds v = affine_v_bounds();
        row("h_lower", h_bound(params, pathloss, v.upper_on_v, quad), false);
        row("interference_below_2delta", interference_below_2delta(params, pathloss, quad), false);
        row("h_upper", h_bound(params, pathloss, v.lower_on_v, quad), false);
        row("interference_outside_2delta", interference_outside_2delta(params, pathloss), false);
        const EirBracket bracket = eir_type1_bracket(params, pathloss, quad);
        row("eir_type1_lower", bracket.lower, true);
        row("eir_type1_quadrature", eir(params, pathloss, EirMethod::Quadrature, quad).eir_linear, true);
        row("eir_type1_upper", bracket.upper, true);
        row("eir_type1_approximation", eir_type1_approximation(params, o.alpha).eir_linear, true);
        row("type1_growth_exponent", type1_growth_exponent(), false);
    }
    if (want_type2) {
        row("nu", eir_type2_bound(), true);
        row("eir_type2_bound", eir_type2_bound(o.alpha), true);
    }
    return table;
}

void cmd_sample(const Options& o, std::ostream& out, json manifest) {
    const HardCoreParams params = params_for(o);
    const SimulationConfig cfg = simulation_config(o, params);
    Rng rng = replicate_rng(cfg.seed, 0);
    PointPattern pattern;
    if (o.palm) {
        pattern = sample_palm(params, cfg, rng);
    } else {
        const bool marked = params.kind() == ProcessKind::MaternII;
        const PointPattern parent = sample_parent(params.lambda_p(), {0.0, cfg.window_radius}, rng, marked);
        if (params.kind() == ProcessKind::PoissonHole) {
            pattern = parent;
        } else {
            const ThinnedPattern thinned = marked ? thin_type2(parent, params.delta(), cfg.guard)
                                                  : thin_type1(parent, params.delta(), cfg.guard);
            pattern.window_radius = cfg.window_radius - cfg.guard;
            if (marked) pattern.marks.emplace();
            for (std::size_t i = 0; i < thinned.pattern.size(); ++i) {
                if (!thinned.reliable[i]) continue;
                pattern.points.push_back(thinned.pattern.points[i]);
                if (marked) pattern.marks->push_back((*thinned.pattern.marks)[i]);
            }
        }
    }
    out << "# " << manifest.dump() << '\n';
    if (o.format == "json") {
        Table table{{"x", "y", "mark"}, {}};
        for (std::size_t i = 0; i < pattern.size(); ++i) {
            table.rows.push_back({pattern.points[i].x, pattern.points[i].y,
                                  pattern.marks ? Cell{(*pattern.marks)[i]} : Cell{std::string()}});
        }
        write_table(out, table, "json");
    } else {
        write_pattern_csv(out, pattern);
    }
}

Table cmd_figure1(const Options& o) {
    if (!(o.delta_min >= 0.0) || !(o.delta_max >= o.delta_min)) {
        throw InputError("--delta-min and --delta-max must satisfy 0 <= delta-min <= delta-max");
    }
    Table table{{"delta", "poisson_hole", "matern2_upper_bound", "matern1_lower", "matern1_upper"}, {}};
    const double type2 = eir_type2_bound(o.alpha);
    const QuadratureConfig quad = quadrature(o);
    for (double delta : linspace(o.delta_min, o.delta_max, o.points)) {
        const HardCoreParams params(ProcessKind::MaternI, o.lambda_p, delta);
        const PathLossModel pathloss = path_loss(o);
        require_compatible(params, pathloss);
        // Normalized by the intensity: E(I) / lambda = 2 pi int_delta^inf g(r) r dr for the Poisson hole.
        const double poisson = 2.0 * std::numbers::pi * pathloss.radial_tail(delta);
        const EirBracket bracket = eir_type1_bracket(params, pathloss, quad);
        table.rows.push_back({delta, poisson, type2 * poisson, bracket.lower * poisson, bracket.upper * poisson});
    }
    return table;
}

json make_manifest(const std::string& command, const Binder& binder, const Options& o) {
    json manifest = json::object();
    manifest["tool"] = "mhc";
    manifest["version"] = MHC_VERSION;
    manifest["command"] = command;
    manifest["parameters"] = binder.parameters();
    manifest["seed"] = binder.has("seed") ? json(o.seed) : json(nullptr);
    return manifest;
}

std::vector<std::string> replay_arguments(const json& manifest) {
    if (!manifest.is_object() || !manifest.contains("command") || !manifest.contains("parameters")) {
        throw InputError("manifest must be a JSON object with 'command' and 'parameters'");
    }
    std::vector<std::string> args{manifest.at("command").get<std::string>()};
    for (const auto& [name, value] : manifest.at("parameters").items()) {
        if (value.is_boolean()) {
            if (value.get<bool>()) args.push_back("--" + name);
            continue;
        }
        args.push_back("--" + name);
        if (value.is_number_float()) {
            args.push_back(format_roundtrip(value.get<double>()));
        } else if (value.is_string()) {
            args.push_back(value.get<std::string>());
        } else {
            args.push_back(value.dump());
        }
    }
    return args;
}

json read_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open manifest file '" + path + "'");
    std::string line;
    std::getline(in, line);
    if (line.rfind("# ", 0) == 0) line = line.substr(2);
    try {
        return json::parse(line);
    } catch (const json::exception& e) {
        throw InputError("manifest line is not valid JSON: " + std::string(e.what()));
    }
}

int execute(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Mean interference in Matern hard-core networks", "mhc"};
    app.require_subcommand(1);
    app.set_version_flag("--version", MHC_VERSION);

    Options o;
    std::vector<std::string> process_names{"poisson", "matern1", "matern2"};
    std::vector<std::pair<CLI::App*, Binder>> commands;
    auto add = [&](const std::string& name, const std::string& help) -> Binder& {
        CLI::App* sub = app.add_subcommand(name, help);
        commands.emplace_back(sub, Binder(sub));
        Binder& b = commands.back().second;
        b.choice("format", o.format, {"csv", "json"}, "output format");
        sub->add_option("--out", o.out, "output path (default stdout)");
        return b;
    };
    commands.reserve(9);

    add("intensity", "intensity of the retained process")
        .choice("process", o.process, process_names, "process kind")
        .option("lambda-p", o.lambda_p, "parent intensity")
        .option("delta", o.delta, "hard-core distance");
    add("vunion", "area of the union of two radius-delta disks u apart")
        .option("delta", o.delta, "hard-core distance")
        .option("u", o.u, "distance between the disk centres");
    add("kfun", "K-function and its derivative on a radius grid")
        .choice("process", o.process, process_names, "process kind")
        .option("lambda-p", o.lambda_p, "parent intensity")
        .option("delta", o.delta, "hard-core distance")
        .option("r-max", o.r_max, "largest radius of the grid")
        .option("points", o.points, "number of grid radii")
        .option("rel-tol", o.rel_tol, "quadrature relative tolerance")
        .option("max-subdivisions", o.max_subdivisions, "quadrature subdivision budget")
        .flag("empirical", o.empirical, "add a Monte Carlo estimate from Palm replicates")
        .option("seed", o.seed, "random seed")
        .option("replicates", o.replicates, "Palm replicates")
        .option("window-radius", o.window_radius, "simulation window radius (0 = default)");
    add("interference", "mean interference at the typical point")
        .choice("process", o.process, process_names, "process kind")
        .option("lambda-p", o.lambda_p, "parent intensity")
        .option("delta", o.delta, "hard-core distance")
        .option("alpha", o.alpha, "path loss exponent")
        .option("r0", o.r0, "path loss inner cutoff")
        .choice("method", o.method, {"quadrature", "monte-carlo"}, "evaluation method")
        .option("rel-tol", o.rel_tol, "quadrature relative tolerance")
        .option("max-subdivisions", o.max_subdivisions, "quadrature subdivision budget")
        .option("seed", o.seed, "random seed")
        .option("replicates", o.replicates, "Palm replicates")
        .option("window-radius", o.window_radius, "simulation window radius (0 = default)")
        .choice("fading", o.fading, {"none", "exponential", "gamma"}, "unit-mean fading")
        .option("fading-shape", o.fading_shape, "gamma fading shape");
    add("eir", "excess interference ratio relative to the Poisson reference")
        .choice("process", o.process, process_names, "process kind")
        .option("lambda-p", o.lambda_p, "parent intensity")
        .option("delta", o.delta, "hard-core distance")
        .option("alpha", o.alpha, "path loss exponent")
        .option("r0", o.r0, "path loss inner cutoff")
        .choice("method", o.method, {"quadrature", "upper-bound", "approximation"}, "evaluation method")
        .option("rel-tol", o.rel_tol, "quadrature relative tolerance")
        .option("max-subdivisions", o.max_subdivisions, "quadrature subdivision budget");
    add("bounds", "interference bounds, type I approximation and type II constants")
        .option("lambda-p", o.lambda_p, "parent intensity")
        .option("delta", o.delta, "hard-core distance")
        .option("alpha", o.alpha, "path loss exponent")
        .option("r0", o.r0, "path loss inner cutoff")
        .flag("type1", o.type1, "type I quantities only")
        .flag("type2", o.type2, "type II quantities only")
        .option("rel-tol", o.rel_tol, "quadrature relative tolerance")
        .option("max-subdivisions", o.max_subdivisions, "quadrature subdivision budget");
    add("sample", "export one sampled point pattern as x,y,mark")
        .choice("process", o.process, process_names, "process kind")
        .option("lambda-p", o.lambda_p, "parent intensity")
        .option("delta", o.delta, "hard-core distance")
        .option("window-radius", o.window_radius, "window radius (0 = default)")
        .option("seed", o.seed, "random seed")
        .flag("palm", o.palm, "condition on a retained point at the origin");
    add("figure1", "normalized mean interference versus delta")
        .option("lambda-p", o.lambda_p, "parent intensity")
        .option("alpha", o.alpha, "path loss exponent")
        .option("r0", o.r0, "path loss inner cutoff")
        .option("delta-min", o.delta_min, "smallest delta")
        .option("delta-max", o.delta_max, "largest delta")
        .option("points", o.points, "number of delta values")
        .option("rel-tol", o.rel_tol, "quadrature relative tolerance")
        .option("max-subdivisions", o.max_subdivisions, "quadrature subdivision budget");
    CLI::App* replay = app.add_subcommand("replay", "re-run the command recorded in an output file's manifest");
    replay->add_option("--manifest", o.manifest, "file whose first line carries the manifest")->required();
    replay->add_option("--out", o.out, "output path (default stdout)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitValidation;
    }

    if (replay->parsed()) {
        std::vector<std::string> replay_args = replay_arguments(read_manifest(o.manifest));
        if (!o.out.empty()) replay_args.insert(replay_args.end(), {"--out", o.out});
        return execute(replay_args, out, err);
    }

    const auto start = std::chrono::steady_clock::now();
    for (auto& [sub, binder] : commands) {
        if (!sub->parsed()) continue;
        const std::string name = sub->get_name();
        const json manifest = make_manifest(name, binder, o);

        std::ofstream file;
        if (!o.out.empty()) {
            file.open(o.out, std::ios::binary);
            if (!file) throw InputError("cannot open output file '" + o.out + "'");
        }
        std::ostream& sink = o.out.empty() ? out : file;

        std::ostringstream body;
        body.imbue(std::locale::classic());
        if (name == "sample") {
            cmd_sample(o, body, manifest);
        } else {
            Table table;
            if (name == "intensity") table = cmd_intensity(o);
            if (name == "vunion") table = cmd_vunion(o);
            if (name == "kfun") table = cmd_kfun(o);
            if (name == "interference") table = cmd_interference(o);
            if (name == "eir") table = cmd_eir(o, err);
            if (name == "bounds") table = cmd_bounds(o);
            if (name == "figure1") table = cmd_figure1(o);
            body << "# " << manifest.dump() << '\n';
            write_table(body, table, o.format);
        }
        sink << body.str();
        sink.flush();

        json run = manifest;
        run["duration_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        err << "# run " << run.dump() << '\n';
    }
    return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    try {
        return execute(args, out, err);
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const NumericalError& e) {
        err << "numerical error: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace mhc::cli
