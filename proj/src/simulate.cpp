#include "mhc/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numbers>
#include <ostream>
#include <thread>

#include "mhc/format.hpp"

namespace mhc {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kZ95 = 1.959963984540054;
constexpr double kMinAcceptance = 1e-6;
constexpr int kMaxCellsPerAxis = 1024;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Uniform on [0, 1) from the top 53 bits.
double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double sample_fading(const FadingModel& fading, Rng& rng) {
    switch (fading.kind) {
        case FadingModel::Kind::None:
            return 1.0;
        case FadingModel::Kind::UnitMeanExponential:
            return std::exponential_distribution<double>(1.0)(rng);
        case FadingModel::Kind::UnitMeanGamma:
            return std::gamma_distribution<double>(fading.gamma_shape, 1.0 / fading.gamma_shape)(rng);
    }
    return 1.0;
}

// Neumaier-compensated sum in index order.
double compensated_sum(std::span<const double> values) {
    double sum = 0.0;
    double carry = 0.0;
    for (double v : values) {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v)) {
            carry += (sum - t) + v;
        } else {
            carry += (v - t) + sum;
        }
        sum = t;
    }
    return sum + carry;
}

struct SampleMoments {
    double mean = 0.0;
    double std_error = 0.0;
};

SampleMoments moments(std::span<const double> values) {
    SampleMoments m;
    const auto n = static_cast<double>(values.size());
    if (values.empty()) return m;
    m.mean = compensated_sum(values) / n;
    if (values.size() < 2) return m;
    std::vector<double> squares(values.size());
    std::transform(values.begin(), values.end(), squares.begin(),
                   [&](double v) { return (v - m.mean) * (v - m.mean); });
    const double variance = compensated_sum(squares) / (n - 1.0);
    m.std_error = std::sqrt(variance / n);
    return m;
}

// Runs body(k) for k in [0, count); results must be written to per-index slots.
template <class Body>
void parallel_for(std::size_t count, const Body& body) {
    const std::size_t workers =
        std::min<std::size_t>(std::max(1u, std::thread::hardware_concurrency()), std::max<std::size_t>(count, 1));
    if (workers <= 1) {
        for (std::size_t k = 0; k < count; ++k) body(k);
        return;
    }
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> threads;
    for (std::size_t w = 0; w < workers; ++w) {
        threads.emplace_back([&, w] {
            try {
                for (std::size_t k = w; k < count; k += workers) body(k);
            } catch (...) {
                const std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        });
    }
    for (auto& t : threads) t.join();
    if (failure) std::rethrow_exception(failure);
}

// Uniform bucket grid for fixed-radius neighbour queries.
class CellGrid {
public:
    CellGrid(std::span<const Point> points, double radius, double half_extent) : points_(points) {
        half_extent_ = std::max(half_extent, radius);
        const double span = 2.0 * half_extent_;
        cells_ = std::clamp(static_cast<int>(span / radius), 1, kMaxCellsPerAxis);
        cell_size_ = span / cells_;
        start_.assign(static_cast<std::size_t>(cells_) * cells_ + 1, 0);
        std::vector<std::size_t> cell_of(points.size());
        for (std::size_t i = 0; i < points.size(); ++i) {
            cell_of[i] = index(cell_coord(points[i].x), cell_coord(points[i].y));
            ++start_[cell_of[i] + 1];
        }
        for (std::size_t c = 1; c < start_.size(); ++c) start_[c] += start_[c - 1];
        order_.resize(points.size());
        std::vector<std::size_t> fill(start_.begin(), start_.end() - 1);
        for (std::size_t i = 0; i < points.size(); ++i) order_[fill[cell_of[i]]++] = i;
    }

    // Calls visit(j) for every j != i closer than `radius` to point i; stops early when visit returns false.
    template <class Visit>
    void for_each_neighbour(std::size_t i, double radius, Visit&& visit) const {
        const Point& p = points_[i];
        const int cx = cell_coord(p.x);
        const int cy = cell_coord(p.y);
        const double r2 = radius * radius;
        for (int gx = std::max(cx - 1, 0); gx <= std::min(cx + 1, cells_ - 1); ++gx) {
            for (int gy = std::max(cy - 1, 0); gy <= std::min(cy + 1, cells_ - 1); ++gy) {
                const std::size_t c = index(gx, gy);
                for (std::size_t s = start_[c]; s < start_[c + 1]; ++s) {
                    const std::size_t j = order_[s];
                    if (j == i) continue;
                    const double dx = points_[j].x - p.x;
                    const double dy = points_[j].y - p.y;
                    if (dx * dx + dy * dy < r2 && !visit(j)) return;
                }
            }
        }
    }

private:
    int cell_coord(double v) const {
        return std::clamp(static_cast<int>(std::floor((v + half_extent_) / cell_size_)), 0, cells_ - 1);
    }
    std::size_t index(int cx, int cy) const { return static_cast<std::size_t>(cx) * cells_ + cy; }

    std::span<const Point> points_;
    double half_extent_ = 0.0;
    double cell_size_ = 1.0;
    int cells_ = 1;
    std::vector<std::size_t> start_;
    std::vector<std::size_t> order_;
};

enum class Thinning { TypeI, TypeII };

// Retention decision for every point with norm <= evaluate_radius; others are marked dropped.
std::vector<bool> retention_mask(const PointPattern& parent, double delta, Thinning rule, double evaluate_radius) {
    const std::size_t n = parent.size();
    std::vector<bool> keep(n, false);
    if (delta == 0.0) {
        for (std::size_t i = 0; i < n; ++i) keep[i] = parent.points[i].norm() <= evaluate_radius;
        return keep;
    }
    if (rule == Thinning::TypeII && !parent.marks) {
        throw InputError("type II thinning requires marks");
    }
    const CellGrid grid(parent.points, delta, parent.window_radius);
    for (std::size_t i = 0; i < n; ++i) {
        if (parent.points[i].norm() > evaluate_radius) continue;
        bool retained = true;
        if (rule == Thinning::TypeI) {
            grid.for_each_neighbour(i, delta, [&](std::size_t) { return retained = false; });
        } else {
            const auto& marks = *parent.marks;
            grid.for_each_neighbour(i, delta, [&](std::size_t j) {
                if (marks[j] == marks[i]) throw InputError("duplicate marks among neighbouring points");
                if (marks[j] < marks[i]) retained = false;
                return retained;
            });
        }
        keep[i] = retained;
    }
    return keep;
}

PointPattern select(const PointPattern& parent, const std::vector<bool>& keep, double window_radius) {
    PointPattern out;
    out.window_radius = window_radius;
    if (parent.marks) out.marks.emplace();
    for (std::size_t i = 0; i < parent.size(); ++i) {
        if (!keep[i]) continue;
        out.points.push_back(parent.points[i]);
        if (parent.marks) out.marks->push_back((*parent.marks)[i]);
    }
    return out;
}

ThinnedPattern thin(const PointPattern& parent, double delta, double guard, Thinning rule) {
    if (!(delta >= 0.0)) throw InputError("hard-core distance must be >= 0");
    if (!(guard >= 0.0)) throw InputError("guard must be >= 0");
    const auto keep = retention_mask(parent, delta, rule, std::numeric_limits<double>::infinity());
    ThinnedPattern out{select(parent, keep, parent.window_radius), {}};
    const double reliable_radius = parent.window_radius - guard;
    for (const auto& p : out.pattern.points) out.reliable.push_back(p.norm() <= reliable_radius);
    return out;
}

void append(PointPattern& into, const PointPattern& from) {
    into.points.insert(into.points.end(), from.points.begin(), from.points.end());
    if (into.marks && from.marks) into.marks->insert(into.marks->end(), from.marks->begin(), from.marks->end());
}

void require_kind(const HardCoreParams& params, ProcessKind kind) {
    if (params.kind() != kind) {
        throw InputError("sampler requires " + std::string(to_string(kind)) + " parameters");
    }
}

void require_feasible_type2(const HardCoreParams& params) {
    const double rate = intensity(params.with_kind(ProcessKind::MaternII)) / params.lambda_p();
    if (rate < kMinAcceptance) {
        throw InputError("type II Palm acceptance rate " + format_number(rate, 3) +
                         " is below 1e-6; lambda_p * pi * delta^2 is too large for rejection sampling");
    }
}

// Draws the origin mark and the parent points in b(o, delta) until no such point has a smaller mark.
struct OriginDraw {
    double mark;
    PointPattern inner;
    std::size_t attempts;
};

OriginDraw draw_type2_origin(const HardCoreParams& params, Rng& rng) {
    for (std::size_t attempts = 1;; ++attempts) {
        const double t = uniform01(rng);
        PointPattern inner = sample_parent(params.lambda_p(), {0.0, params.delta()}, rng, true);
        const auto& marks = *inner.marks;
        if (std::all_of(marks.begin(), marks.end(), [t](double m) { return m > t; })) {
            return {t, std::move(inner), attempts};
        }
    }
}

}  // namespace

Rng replicate_rng(std::uint64_t seed, std::uint64_t index) {
    return Rng(splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632BE59BD9B4E019ULL)));
}

SimulationConfig SimulationConfig::defaults(const HardCoreParams& params) {
    SimulationConfig cfg;
    cfg.window_radius = std::max(10.0 * params.delta(), 20.0 / std::sqrt(params.lambda_p()));
    cfg.guard = params.delta();
    return cfg;
}

void SimulationConfig::validate(const HardCoreParams& params) const {
    if (replicates < 1) throw InputError("replicates must be >= 1");
    if (!(guard >= params.delta())) throw InputError("guard must be >= delta");
    if (!(window_radius >= 2.0 * params.delta() + guard) || !std::isfinite(window_radius)) {
        throw InputError("window radius must be finite and >= 2 delta + guard");
    }
}

double Region::area() const { return kPi * (outer_radius * outer_radius - inner_radius * inner_radius); }

PointPattern sample_parent(double lambda_p, const Region& region, Rng& rng, bool with_marks) {
    if (!(lambda_p >= 0.0)) throw InputError("parent intensity must be >= 0");
    if (!(region.inner_radius >= 0.0) || !(region.outer_radius >= region.inner_radius) ||
        !std::isfinite(region.outer_radius)) {
        throw InputError("region must satisfy 0 <= inner radius <= outer radius < infinity");
    }
    PointPattern out;
    out.window_radius = region.outer_radius;
    if (with_marks) out.marks.emplace();
    const double mean = lambda_p * region.area();
    if (mean <= 0.0) return out;
    const auto count = std::poisson_distribution<long long>(mean)(rng);
    out.points.reserve(static_cast<std::size_t>(count));
    const double r_in2 = region.inner_radius * region.inner_radius;
    const double span = region.outer_radius * region.outer_radius - r_in2;
    for (long long i = 0; i < count; ++i) {
        const double r = std::min(std::sqrt(r_in2 + uniform01(rng) * span), region.outer_radius);
        const double theta = 2.0 * kPi * uniform01(rng);
        out.points.push_back({r * std::cos(theta), r * std::sin(theta)});
        if (with_marks) out.marks->push_back(uniform01(rng));
    }
    return out;
}

ThinnedPattern thin_type1(const PointPattern& parent, double delta, double guard) {
    return thin(parent, delta, guard, Thinning::TypeI);
}

ThinnedPattern thin_type2(const PointPattern& parent, double delta, double guard) {
    return thin(parent, delta, guard, Thinning::TypeII);
}

PointPattern sample_palm_type1(const HardCoreParams& params, const SimulationConfig& cfg, Rng& rng) {
    require_kind(params, ProcessKind::MaternI);
    cfg.validate(params);
    const double delta = params.delta();
    const double radius = cfg.window_radius;
    // A Poisson parent conditioned on a retained point at o is the parent restricted to r >= delta.
    const PointPattern parent = sample_parent(params.lambda_p(), {delta, radius + delta}, rng);
    return select(parent, retention_mask(parent, delta, Thinning::TypeI, radius), radius);
}

PointPattern sample_palm_type2(const HardCoreParams& params, const SimulationConfig& cfg, Rng& rng) {
    require_kind(params, ProcessKind::MaternII);
    cfg.validate(params);
    require_feasible_type2(params);
    const double delta = params.delta();
    const double radius = cfg.window_radius;

    OriginDraw origin = draw_type2_origin(params, rng);
    PointPattern parent;
    parent.window_radius = radius + delta;
    parent.marks.emplace();
    parent.points.push_back({0.0, 0.0});
    parent.marks->push_back(origin.mark);
    append(parent, origin.inner);
    append(parent, sample_parent(params.lambda_p(), {delta, radius + delta}, rng, true));

    auto keep = retention_mask(parent, delta, Thinning::TypeII, radius);
    keep[0] = false;
    return select(parent, keep, radius);
}

PointPattern sample_palm_poisson_hole(const HardCoreParams& params, const SimulationConfig& cfg, Rng& rng) {
    require_kind(params, ProcessKind::PoissonHole);
    cfg.validate(params);
    return sample_parent(params.lambda_p(), {params.delta(), cfg.window_radius}, rng);
}

PointPattern sample_palm(const HardCoreParams& params, const SimulationConfig& cfg, Rng& rng) {
    switch (params.kind()) {
        case ProcessKind::MaternI:
            return sample_palm_type1(params, cfg, rng);
        case ProcessKind::MaternII:
            return sample_palm_type2(params, cfg, rng);
        case ProcessKind::PoissonHole:
            return sample_palm_poisson_hole(params, cfg, rng);
    }
    throw InputError("unknown process kind");
}

double type2_acceptance_rate(const HardCoreParams& params, const SimulationConfig& cfg) {
    require_kind(params, ProcessKind::MaternII);
    cfg.validate(params);
    require_feasible_type2(params);
    std::vector<double> attempts(cfg.replicates);
    parallel_for(cfg.replicates, [&](std::size_t k) {
        Rng rng = replicate_rng(cfg.seed, k);
        attempts[k] = static_cast<double>(draw_type2_origin(params, rng).attempts);
    });
    return static_cast<double>(cfg.replicates) / compensated_sum(attempts);
}

std::vector<PointPattern> sample_palm_ensemble(const HardCoreParams& params, const SimulationConfig& cfg) {
    cfg.validate(params);
    std::vector<PointPattern> out(cfg.replicates);
    parallel_for(cfg.replicates, [&](std::size_t k) {
        Rng rng = replicate_rng(cfg.seed, k);
        out[k] = sample_palm(params, cfg, rng);
    });
    return out;
}

InterferenceEstimate estimate_mean_interference(const HardCoreParams& params, const PathLossModel& pathloss,
                                                const SimulationConfig& cfg) {
    cfg.validate(params);
    require_compatible(params, pathloss);
    std::vector<double> totals(cfg.replicates);
    parallel_for(cfg.replicates, [&](std::size_t k) {
        Rng rng = replicate_rng(cfg.seed, k);
        const PointPattern pattern = sample_palm(params, cfg, rng);
        double sum = 0.0;
        for (const auto& p : pattern.points) sum += sample_fading(cfg.fading, rng) * pathloss(p.norm());
        totals[k] = sum;
    });

    const SampleMoments m = moments(totals);
    InterferenceEstimate est;
    est.replicates = cfg.replicates;
    est.tail_correction = cfg.tail_policy == TailPolicy::AnalyticTail
                              ? 2.0 * kPi * intensity(params) * pathloss.radial_tail(cfg.window_radius)
                              : 0.0;
    est.mean = m.mean + est.tail_correction;
    est.std_error = m.std_error;
    est.ci_low = est.mean - kZ95 * m.std_error;
    est.ci_high = est.mean + kZ95 * m.std_error;
    return est;
}

IntensityEstimate estimate_intensity(const HardCoreParams& params, const SimulationConfig& cfg) {
    cfg.validate(params);
    const double radius = cfg.window_radius;
    const double inner = radius - cfg.guard;
    const bool marked = params.kind() == ProcessKind::MaternII;
    std::vector<double> densities(cfg.replicates);
    parallel_for(cfg.replicates, [&](std::size_t k) {
        Rng rng = replicate_rng(cfg.seed, k);
        const PointPattern parent = sample_parent(params.lambda_p(), {0.0, radius}, rng, marked);
        std::size_t count = 0;
        if (params.kind() == ProcessKind::PoissonHole) {
            count = static_cast<std::size_t>(std::count_if(parent.points.begin(), parent.points.end(),
                                                           [&](const Point& p) { return p.norm() <= inner; }));
        } else {
            const auto keep = retention_mask(parent, params.delta(),
                                             marked ? Thinning::TypeII : Thinning::TypeI, inner);
            count = static_cast<std::size_t>(std::count(keep.begin(), keep.end(), true));
        }
        densities[k] = static_cast<double>(count) / (kPi * inner * inner);
    });
    const SampleMoments m = moments(densities);
    return {m.mean, m.std_error};
}

std::vector<KEstimate> estimate_k_function(std::span<const PointPattern> ensemble, std::span<const double> radii,
                                           double intensity) {
    if (ensemble.empty()) throw InputError("K-function estimation needs a non-empty ensemble");
    if (!(intensity > 0.0)) throw InputError("K-function estimation needs an intensity > 0");
    std::vector<KEstimate> out;
    std::vector<double> counts(ensemble.size());
    for (double r : radii) {
        for (std::size_t k = 0; k < ensemble.size(); ++k) {
            const PointPattern& pattern = ensemble[k];
            if (r > pattern.window_radius) {
                throw InputError("K-function radius " + format_number(r) + " exceeds the sampling window");
            }
            counts[k] = static_cast<double>(std::count_if(pattern.points.begin(), pattern.points.end(),
                                                          [r](const Point& p) { return p.norm() <= r; }));
        }
        const SampleMoments m = moments(counts);
        out.push_back({r, m.mean / intensity, m.std_error / intensity});
    }
    return out;
}

void write_pattern_csv(std::ostream& out, const PointPattern& pattern) {
    out << "x,y,mark\n";
    for (std::size_t i = 0; i < pattern.size(); ++i) {
        out << format_number(pattern.points[i].x) << ',' << format_number(pattern.points[i].y) << ',';
        if (pattern.marks) out << format_number((*pattern.marks)[i]);
        out << '\n';
    }
}

}  // namespace mhc
