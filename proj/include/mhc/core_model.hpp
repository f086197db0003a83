#pragma once

// Domain types shared by the analytic, interference and simulation modules.

#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "mhc/errors.hpp"

namespace mhc {

enum class ProcessKind { MaternI, MaternII, PoissonHole };

std::string_view to_string(ProcessKind kind);
ProcessKind parse_process_kind(std::string_view name);

/**
 * Parameters of a hard-core process built from a parent PPP.
 *
 * `PoissonHole` is the reference process: a Poisson process of constant
 * intensity lambda_p whose points lie only outside the ball b(o, delta)
 * around the typical point.
 */
class HardCoreParams {
public:
    HardCoreParams(ProcessKind kind, double lambda_p, double delta);

    ProcessKind kind() const noexcept { return kind_; }
    double lambda_p() const noexcept { return lambda_p_; }
    double delta() const noexcept { return delta_; }

    HardCoreParams with_kind(ProcessKind kind) const { return {kind, lambda_p_, delta_}; }

private:
    ProcessKind kind_;
    double lambda_p_;
    double delta_;
};

/// Intensity of the retained process. Type II uses a cancellation-safe form near delta = 0.
double intensity(const HardCoreParams& params);

/**
 * Radially symmetric path loss g(r).
 *
 * PowerLaw: g(r) = max(r0, r)^(-alpha), alpha > 2.
 * Tabulated: log-log interpolation between grid points (linear where a value
 * is zero), constant below the first radius, and a power-law tail beyond the
 * last radius whose exponent is fitted to the last two points and must
 * exceed 2 so that the plane integral is finite.
 */
class PathLossModel {
public:
    static PathLossModel power_law(double alpha, double r0 = 0.0);
    static PathLossModel tabulated(std::vector<std::pair<double, double>> table);

    bool is_power_law() const noexcept { return table_.empty(); }
    double alpha() const noexcept { return alpha_; }
    double r0() const noexcept { return r0_; }
    const std::vector<std::pair<double, double>>& table() const noexcept { return table_; }

    double operator()(double r) const;

    /// Radii where g is not smooth.
    std::vector<double> breakpoints() const;

    /// Integral of g(r) r dr over [from, infinity); +infinity when it diverges (power law, r0 = 0, from = 0).
    double radial_tail(double from) const;

private:
    PathLossModel() = default;

    double alpha_ = 0.0;
    double r0_ = 0.0;
    std::vector<std::pair<double, double>> table_;
    double tail_exponent_ = 0.0;
};

/// Throws InputError when a power law's inner cutoff r0 exceeds the hard-core distance.
void require_compatible(const HardCoreParams& params, const PathLossModel& pathloss);

/// Fading power distribution. Every variant has unit mean.
struct FadingModel {
    enum class Kind { None, UnitMeanExponential, UnitMeanGamma };

    Kind kind = Kind::None;
    double gamma_shape = 1.0;

    static FadingModel none() { return {}; }
    static FadingModel exponential() { return {Kind::UnitMeanExponential, 1.0}; }
    static FadingModel gamma(double shape);
};

struct Point {
    double x = 0.0;
    double y = 0.0;

    double norm() const;
    friend bool operator==(const Point&, const Point&) = default;
};

/// Finite planar pattern sampled in the disk of radius `window_radius` about the origin.
struct PointPattern {
    std::vector<Point> points;
    std::optional<std::vector<double>> marks;
    double window_radius = 0.0;

    std::size_t size() const noexcept { return points.size(); }
    bool empty() const noexcept { return points.empty(); }

    /// Checks the window containment and mark-range invariants.
    void validate() const;
};

/// Smallest pairwise distance among points with norm <= max_radius (+inf for fewer than two).
double min_pairwise_distance(const PointPattern& pattern, double max_radius);

struct InterferenceEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    std::size_t replicates = 0;
    double tail_correction = 0.0;
};

struct QuadratureConfig {
    double rel_tol = 1e-9;
    double abs_tol = 1e-12;
    int max_subdivisions = 2000;
    std::vector<double> breakpoints;

    void validate() const;
    QuadratureConfig with_breakpoints(std::vector<double> extra) const;
};

}  // namespace mhc
