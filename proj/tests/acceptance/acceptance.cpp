// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "../../tools/cli.hpp"
#include "mhc/analytic.hpp"
#include "mhc/format.hpp"
#include "mhc/interference.hpp"
#include "mhc/numerics.hpp"
#include "mhc/simulate.hpp"

using namespace mhc;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail += (detail.empty() ? "" : "; ") + what;
        }
    }
};

struct Criterion {
    int id;
    std::string title;
    double time_limit_s;  // <= 0: no limit
    std::function<Outcome()> body;
};

std::string fmt(double v, int digits = 6) { return format_number(v, digits); }

// Runs the CLI and returns the last CSV field of the first data row.
double cli_last_field(const std::vector<std::string>& args) {
    std::ostringstream out;
    std::ostringstream err;
    if (mhc::cli::run(args, out, err) != 0) return std::nan("");
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);  // manifest
    std::getline(in, line);  // header
    std::getline(in, line);
    return std::stod(line.substr(line.rfind(',') + 1));
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

const std::vector<double> kLambdaGrid = {0.5, 1.0, 2.0, 4.0};
const std::vector<double> kDeltaGrid = {0.25, 0.5, 1.0, 2.0};
const std::vector<double> kAlphaGrid = {2.5, 3.0, 4.0};

Outcome type1_headline() {
    Outcome o;
    const double db = cli_last_field({"eir", "--process", "matern1", "--lambda-p", "2", "--delta", "2", "--alpha", "3",
                                      "--method", "approximation"});
    o.require(std::abs(db - 31.5) <= 0.1, "approximation " + fmt(db) + " dB not within 31.5 +- 0.1");
    o.detail = o.pass ? "EIR = " + fmt(db) + " dB" : o.detail;
    return o;
}

Outcome type1_quadrature() {
    Outcome o;
    const HardCoreParams p(ProcessKind::MaternI, 2.0, 2.0);
    const auto g = PathLossModel::power_law(3.0);
    const double q = eir(p, g, EirMethod::Quadrature).eir_db;
    const auto bracket = eir_type1_bracket(p, g);
    const double lo = to_db(bracket.lower);
    const double hi = to_db(bracket.upper);
    o.require(q >= 28.0 && q <= 32.0, "quadrature EIR " + fmt(q) + " dB outside [28, 32]");
    o.require(lo < q && q < hi, "quadrature EIR " + fmt(q) + " dB outside bound bracket");
    if (o.pass) o.detail = "EIR = " + fmt(q) + " dB in [" + fmt(lo) + ", " + fmt(hi) + "] dB";
    return o;
}

Outcome type2_universal() {
    Outcome o;
    const double nu = eir_type2_bound();
    const double sharp = to_db(eir_type2_bound(3.0));
    o.require(nu > 1.0 && nu < 1.25, "nu = " + fmt(nu) + " not in (1, 5/4)");
    o.require(to_db(nu) < 1.0, "nu = " + fmt(to_db(nu)) + " dB not below 1 dB");
    o.require(std::abs(sharp - 0.498) <= 0.005, "alpha = 3 bound " + fmt(sharp) + " dB not within 0.498 +- 0.005");
    if (o.pass) o.detail = "nu = " + fmt(nu) + " (" + fmt(to_db(nu)) + " dB), alpha = 3 bound " + fmt(sharp) + " dB";
    return o;
}

Outcome type2_grid() {
    Outcome o;
    int points = 0;
    double worst_gap = std::numeric_limits<double>::infinity();
    for (double alpha : kAlphaGrid) {
        const auto g = PathLossModel::power_law(alpha);
        const double bound = eir_type2_bound(alpha);
        std::vector<std::vector<double>> e(kLambdaGrid.size(), std::vector<double>(kDeltaGrid.size()));
        for (std::size_t i = 0; i < kLambdaGrid.size(); ++i) {
            for (std::size_t j = 0; j < kDeltaGrid.size(); ++j) {
                e[i][j] = eir(HardCoreParams(ProcessKind::MaternII, kLambdaGrid[i], kDeltaGrid[j]), g,
                              EirMethod::Quadrature)
                              .eir_linear;
                ++points;
                worst_gap = std::min(worst_gap, bound - e[i][j]);
                o.require(e[i][j] <= bound, "EIR above bound at lambda_p=" + fmt(kLambdaGrid[i]) +
                                                " delta=" + fmt(kDeltaGrid[j]) + " alpha=" + fmt(alpha));
                if (i > 0) o.require(e[i][j] >= e[i - 1][j], "not monotone in lambda_p");
                if (j > 0) o.require(e[i][j] >= e[i][j - 1], "not monotone in delta");
            }
        }
    }
    if (o.pass) o.detail = std::to_string(points) + " grid points, smallest margin to bound " + fmt(worst_gap, 3);
    return o;
}

Outcome sandwich_grid() {
    Outcome o;
    const auto v = affine_v_bounds();
    int points = 0;
    for (double lp : kLambdaGrid) {
        for (double delta : kDeltaGrid) {
            for (double alpha : kAlphaGrid) {
                const HardCoreParams p(ProcessKind::MaternI, lp, delta);
                const auto g = PathLossModel::power_law(alpha);
                const double lower = h_bound(p, g, v.upper_on_v);
                const double exact = interference_below_2delta(p, g);
                const double upper = h_bound(p, g, v.lower_on_v);
                ++points;
                o.require(lower < exact && exact < upper, "sandwich fails at lambda_p=" + fmt(lp) +
                                                              " delta=" + fmt(delta) + " alpha=" + fmt(alpha));
            }
        }
    }
    if (o.pass) o.detail = std::to_string(points) + " grid points";
    return o;
}

Outcome monte_carlo() {
    Outcome o;
    struct Case {
        double lambda_p, delta, alpha;
    };
    const Case cases[] = {{1.0, 1.0, 3.0}, {2.0, 0.5, 3.0}, {2.0, 1.0, 4.0}};
    std::string summary;
    for (const auto& c : cases) {
        for (auto kind : {ProcessKind::MaternI, ProcessKind::MaternII}) {
            const HardCoreParams p(kind, c.lambda_p, c.delta);
            const auto g = PathLossModel::power_law(c.alpha);
            const std::string tag = std::string(to_string(kind)) + "(" + fmt(c.lambda_p) + "," + fmt(c.delta) + "," +
                                    fmt(c.alpha) + ")";

            SimulationConfig cfg = SimulationConfig::defaults(p);
            cfg.window_radius = 5.0 * c.delta;
            cfg.replicates = 100000;
            cfg.seed = 1;
            const auto est = estimate_mean_interference(p, g, cfg);
            const double exact = mean_interference_quadrature(p, g);
            const double z = (est.mean - exact) / est.std_error;
            o.require(est.ci_low <= exact && exact <= est.ci_high,
                      tag + ": 95% CI [" + fmt(est.ci_low) + ", " + fmt(est.ci_high) + "] misses " + fmt(exact) +
                          " (z = " + fmt(z, 3) + ")");

            // stationary intensity: ~ 2e5 expected retained points per case
            SimulationConfig icfg = SimulationConfig::defaults(p);
            icfg.window_radius = std::max(30.0 * c.delta, 60.0 / std::sqrt(c.lambda_p));
            const double lam = intensity(p);
            const double per_window = lam * kPi * std::pow(icfg.window_radius - icfg.guard, 2);
            icfg.replicates = static_cast<std::size_t>(std::ceil(2e5 / per_window));
            icfg.seed = 2;
            const auto ie = estimate_intensity(p, icfg);
            const double rel = ie.value / lam - 1.0;
            o.require(std::abs(rel) < 0.01, tag + ": intensity off by " + fmt(100.0 * rel, 3) + "%");
            summary += (summary.empty() ? "" : ", ") + tag + " z=" + fmt(z, 2) + " dlam=" + fmt(100.0 * rel, 2) + "%";
        }
    }
    if (o.pass) o.detail = summary;
    return o;
}

Outcome k_function_check() {
    Outcome o;
    const HardCoreParams p(ProcessKind::MaternI, 2.0, 1.0);
    SimulationConfig cfg = SimulationConfig::defaults(p);
    cfg.window_radius = 4.0;
    cfg.replicates = 10000;
    cfg.seed = 1;
    const auto ensemble = sample_palm_ensemble(p, cfg);
    std::vector<double> radii;
    for (int i = 0; i <= 30; ++i) radii.push_back(1.0 + 0.1 * i);
    const auto est = estimate_k_function(ensemble, radii, intensity(p));
    double worst = 0.0;
    for (const auto& e : est) {
        const double exact = k_function(p, e.radius);
        const double dev = std::abs(e.value - exact);
        if (e.std_error > 0.0) worst = std::max(worst, dev / e.std_error);
        o.require(dev <= 3.0 * e.std_error, "K(" + fmt(e.radius) + ") = " + fmt(e.value) + " vs " + fmt(exact) +
                                                " (se " + fmt(e.std_error) + ")");
    }
    for (double r : {0.0, 0.3, 0.999, 0.999999}) o.require(k_function(p, r) == 0.0, "K(" + fmt(r) + ") != 0");
    const double ratio = k_function(p, 50.0) / (kPi * 2500.0);
    o.require(ratio >= 0.99 && ratio <= 1.01, "K(50)/(pi 50^2) = " + fmt(ratio));
    if (o.pass) {
        o.detail = "31 radii in [1, 4], worst deviation " + fmt(worst, 3) + " se; K(50)/(pi 50^2) = " + fmt(ratio);
    }
    return o;
}

Outcome h_oracle() {
    Outcome o;
    QuadratureConfig quad;
    quad.rel_tol = 1e-13;
    quad.abs_tol = 1e-300;
    double worst = 0.0;
    int points = 0;
    for (double alpha : {2.5, 3.0, 4.0}) {
        for (int i = 0; i <= 40; ++i) {
            const double vx = 0.01 * std::pow(5000.0, i / 40.0);  // log grid over [0.01, 50]
            for (double v : {0.5, 2.0}) {
                const double x = vx / v;
                const double direct = integrate_checked(
                    [&](double r) { return std::pow(r, 1.0 - alpha) * std::exp(-v * r); }, x, 2.0 * x, quad);
                const double rel = std::abs(h_integral(v, x, alpha) / direct - 1.0);
                worst = std::max(worst, rel);
                ++points;
                o.require(rel <= 1e-8, "H mismatch at vx=" + fmt(vx) + " alpha=" + fmt(alpha));
            }
        }
        const double v = 1.0;
        const double x = 50.0;
        const double ratio = std::exp(log_h_integral(v, x, alpha) + std::log(v) + (alpha - 1.0) * std::log(x) + v * x);
        o.require(ratio >= 0.9 && ratio <= 1.1, "asymptotic ratio " + fmt(ratio) + " at alpha=" + fmt(alpha));
    }
    if (o.pass) o.detail = std::to_string(points) + " points, worst relative difference " + fmt(worst, 3);
    return o;
}

Outcome degeneracy() {
    Outcome o;
    const auto g = PathLossModel::power_law(3.0);
    for (auto kind : {ProcessKind::MaternI, ProcessKind::MaternII}) {
        const auto report = eir(HardCoreParams(kind, 2.0, 0.0), g, EirMethod::Quadrature);
        o.require(report.eir_linear == 1.0 && report.eir_db == 0.0,
                  std::string(to_string(kind)) + " EIR at delta = 0 is " + fmt(report.eir_db) + " dB");
    }
    // A pure power law is not integrable at the origin; a bounded tabulated law gives finite means.
    std::vector<std::pair<double, double>> table;
    for (double r = 0.1; r <= 100.0; r *= 1.2) table.emplace_back(r, std::pow(r, -3.0));
    const auto bounded = PathLossModel::tabulated(table);
    std::vector<double> means;
    for (auto kind : {ProcessKind::MaternI, ProcessKind::MaternII, ProcessKind::PoissonHole}) {
        means.push_back(mean_interference_quadrature(HardCoreParams(kind, 2.0, 0.0), bounded));
    }
    o.require(std::isfinite(means[0]), "non-finite mean for bounded path loss");
    o.require(means[0] == means[1] && means[1] == means[2],
              "means differ: " + fmt(means[0], 17) + ", " + fmt(means[1], 17) + ", " + fmt(means[2], 17));
    bool all_inf = true;
    for (auto kind : {ProcessKind::MaternI, ProcessKind::MaternII, ProcessKind::PoissonHole}) {
        all_inf = all_inf && std::isinf(mean_interference_quadrature(HardCoreParams(kind, 2.0, 0.0), g));
    }
    o.require(all_inf, "power-law means at delta = 0 are not uniformly infinite");
    if (o.pass) o.detail = "EIR 0 dB for both types; equal means " + fmt(means[0]) + " (bounded path loss)";
    return o;
}

Outcome reproducibility() {
    Outcome o;
    const auto dir = std::filesystem::temp_directory_path();
    const auto first = dir / "mhc_acceptance_first.out";
    const auto second = dir / "mhc_acceptance_second.out";
    const std::vector<std::vector<std::string>> commands = {
        {"interference", "--process", "matern1", "--lambda-p", "1", "--delta", "1", "--method", "monte-carlo",
         "--replicates", "2000", "--window-radius", "5", "--seed", "2718"},
        {"interference", "--process", "matern2", "--lambda-p", "2", "--delta", "0.5", "--method", "monte-carlo",
         "--replicates", "2000", "--fading", "gamma", "--fading-shape", "1.7", "--format", "json"},
        {"kfun", "--empirical", "--process", "matern2", "--replicates", "500", "--r-max", "3.5", "--points", "8"},
        {"sample", "--process", "matern2", "--lambda-p", "1.3", "--delta", "0.45", "--seed", "99"},
        {"sample", "--process", "matern1", "--palm", "--window-radius", "6"},
    };
    for (auto args : commands) {
        const std::string name = args[0];
        args.insert(args.end(), {"--out", first.string()});
        std::ostringstream out;
        std::ostringstream err;
        const int a = mhc::cli::run(args, out, err);
        const int b = mhc::cli::run({"replay", "--manifest", first.string(), "--out", second.string()}, out, err);
        o.require(a == 0 && b == 0, name + ": command failed");
        const std::string x = read_file(first);
        o.require(!x.empty() && x == read_file(second), name + ": replay output differs");
    }
    std::filesystem::remove(first);
    std::filesystem::remove(second);
    if (o.pass) o.detail = std::to_string(commands.size()) + " commands replayed byte-identically";
    return o;
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "type I approximation headline", 1.0, type1_headline},
        {2, "type I quadrature EIR at (2, 2, 3)", 1.0, type1_quadrature},
        {3, "type II universal and alpha = 3 bounds", 1.0, type2_universal},
        {4, "type II quadrature EIR below bound and monotone", 10.0, type2_grid},
        {5, "affine bound sandwich of near-field interference", 10.0, sandwich_grid},
        {6, "Monte Carlo means and intensities", 120.0, monte_carlo},
        {7, "empirical K-function", 0.0, k_function_check},
        {8, "H(v, x) gamma form vs quadrature and asymptotics", 0.0, h_oracle},
        {9, "delta = 0 degeneracy", 0.0, degeneracy},
        {10, "manifest replay reproducibility", 0.0, reproducibility},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome outcome;
        try {
            outcome = c.body();
        } catch (const std::exception& e) {
            outcome.pass = false;
            outcome.detail = std::string("exception: ") + e.what();
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (c.time_limit_s > 0.0 && seconds >= c.time_limit_s) {
            outcome.pass = false;
            outcome.detail += "; runtime " + fmt(seconds, 3) + " s exceeds " + fmt(c.time_limit_s) + " s";
        }
        if (!outcome.pass) ++failures;
        std::printf("%s criterion %2d: %s [%.3f s] %s\n", outcome.pass ? "PASS" : "FAIL", c.id, c.title.c_str(),
                    seconds, outcome.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
