#pragma once

// Samplers for the parent PPP, Matern type I / II thinning, reduced Palm
// versions seen from a retained point at the origin, and Monte Carlo
// estimators validated against the analytic module.

#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <vector>

#include "mhc/core_model.hpp"

namespace mhc {

using Rng = std::mt19937_64;

/// Generator for replicate `index` of a run seeded with `seed`; independent of execution order.
Rng replicate_rng(std::uint64_t seed, std::uint64_t index);

enum class TailPolicy { AnalyticTail, TruncateOnly };

struct SimulationConfig {
    double window_radius = 0.0;
    double guard = 0.0;
    std::size_t replicates = 1;
    std::uint64_t seed = 0;
    FadingModel fading;
    TailPolicy tail_policy = TailPolicy::AnalyticTail;

    /// R = max(10 delta, 20 / sqrt(lambda_p)), guard = delta.
    static SimulationConfig defaults(const HardCoreParams& params);

    /// Requires R >= 2 delta + guard, guard >= delta and at least one replicate.
    void validate(const HardCoreParams& params) const;
};

/// Disk (inner_radius = 0) or annulus centred at the origin.
struct Region {
    double inner_radius = 0.0;
    double outer_radius = 0.0;

    double area() const;
};

PointPattern sample_parent(double lambda_p, const Region& region, Rng& rng, bool with_marks = false);

/// Thinned pattern plus, per retained point, whether its whole delta-neighbourhood lay inside the window.
struct ThinnedPattern {
    PointPattern pattern;
    std::vector<bool> reliable;
};

/// Keeps points with no other parent point closer than delta.
ThinnedPattern thin_type1(const PointPattern& parent, double delta, double guard);

/// Keeps points whose neighbours closer than delta all carry larger marks.
/// Throws InputError if two points closer than delta share a mark.
ThinnedPattern thin_type2(const PointPattern& parent, double delta, double guard);

/// Retained points within window_radius of a retained point at the origin (origin excluded).
PointPattern sample_palm_type1(const HardCoreParams& params, const SimulationConfig& cfg, Rng& rng);
PointPattern sample_palm_type2(const HardCoreParams& params, const SimulationConfig& cfg, Rng& rng);
PointPattern sample_palm_poisson_hole(const HardCoreParams& params, const SimulationConfig& cfg, Rng& rng);
PointPattern sample_palm(const HardCoreParams& params, const SimulationConfig& cfg, Rng& rng);

/// Fraction of type II origin proposals accepted over cfg.replicates acceptances (expected lambda / lambda_p).
double type2_acceptance_rate(const HardCoreParams& params, const SimulationConfig& cfg);

/// cfg.replicates Palm patterns, replicate k drawn from replicate_rng(cfg.seed, k).
std::vector<PointPattern> sample_palm_ensemble(const HardCoreParams& params, const SimulationConfig& cfg);

InterferenceEstimate estimate_mean_interference(const HardCoreParams& params, const PathLossModel& pathloss,
                                                const SimulationConfig& cfg);

struct IntensityEstimate {
    double value = 0.0;
    double std_error = 0.0;
};

/// Retained points per unit area inside R - guard of stationary samples in the disk of radius R.
IntensityEstimate estimate_intensity(const HardCoreParams& params, const SimulationConfig& cfg);

struct KEstimate {
    double radius = 0.0;
    double value = 0.0;
    double std_error = 0.0;
};

/// Mean number of Palm points within each radius, divided by `intensity`.
std::vector<KEstimate> estimate_k_function(std::span<const PointPattern> ensemble, std::span<const double> radii,
                                           double intensity);

/// CSV with header `x,y,mark`; the mark field is empty for unmarked patterns.
void write_pattern_csv(std::ostream& out, const PointPattern& pattern);

}  // namespace mhc
