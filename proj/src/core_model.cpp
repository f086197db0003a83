#include "mhc/core_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace mhc {

namespace {

constexpr double kPi = std::numbers::pi;

// Integral of r * c * (r / r1)^(-p) over [a, b].
double power_segment_integral(double c, double r1, double p, double a, double b) {
    const double scale = c * std::pow(r1, p);
    const double e = 2.0 - p;
    const double log_ratio = std::log(b / a);
    if (std::abs(e * log_ratio) < 1e-12) {
        return scale * std::pow(a, e) * log_ratio;
    }
    return scale * std::pow(a, e) * std::expm1(e * log_ratio) / e;
}

// Integral of r * (g1 + slope * (r - r1)) over [a, b].
double linear_segment_integral(double r1, double g1, double slope, double a, double b) {
    const double c0 = g1 - slope * r1;
    return c0 * (b * b - a * a) / 2.0 + slope * (b * b * b - a * a * a) / 3.0;
}

}  // namespace

std::string_view to_string(ProcessKind kind) {
    switch (kind) {
        case ProcessKind::MaternI:
            return "matern1";
        case ProcessKind::MaternII:
            return "matern2";
        case ProcessKind::PoissonHole:
            return "poisson";
    }
    return "unknown";
}

ProcessKind parse_process_kind(std::string_view name) {
    if (name == "matern1") return ProcessKind::MaternI;
    if (name == "matern2") return ProcessKind::MaternII;
    if (name == "poisson") return ProcessKind::PoissonHole;
    throw InputError("unknown process '" + std::string(name) + "' (expected poisson, matern1 or matern2)");
}

HardCoreParams::HardCoreParams(ProcessKind kind, double lambda_p, double delta)
    : kind_(kind), lambda_p_(lambda_p), delta_(delta) {
    if (!(lambda_p > 0.0) || !std::isfinite(lambda_p)) {
        throw InputError("lambda_p must be a finite value > 0");
    }
    if (!(delta >= 0.0) || !std::isfinite(delta)) {
        throw InputError("delta must be a finite value >= 0");
    }
}

double intensity(const HardCoreParams& params) {
    const double lp = params.lambda_p();
    const double area = kPi * params.delta() * params.delta();
    switch (params.kind()) {
        case ProcessKind::MaternI:
            return lp * std::exp(-lp * area);
        case ProcessKind::MaternII:
            if (area == 0.0) return lp;
            return -std::expm1(-lp * area) / area;
        case ProcessKind::PoissonHole:
            return lp;
    }
    return lp;
}

PathLossModel PathLossModel::power_law(double alpha, double r0) {
    if (!(alpha > 2.0) || !std::isfinite(alpha)) {
        throw DomainError("path loss exponent alpha must be > 2 for a finite mean interference");
    }
    if (!(r0 >= 0.0) || !std::isfinite(r0)) {
        throw InputError("path loss cutoff r0 must be >= 0");
    }
    PathLossModel model;
    model.alpha_ = alpha;
    model.r0_ = r0;
    return model;
}

PathLossModel PathLossModel::tabulated(std::vector<std::pair<double, double>> table) {
    if (table.size() < 2) {
        throw InputError("tabulated path loss needs at least two (r, g) pairs");
    }
    for (std::size_t i = 0; i < table.size(); ++i) {
        const auto [r, g] = table[i];
        if (!(r > 0.0) || !std::isfinite(r)) throw InputError("tabulated radii must be finite and > 0");
        if (!(g >= 0.0) || !std::isfinite(g)) throw InputError("tabulated path loss values must be finite and >= 0");
        if (i > 0) {
            if (!(r > table[i - 1].first)) throw InputError("tabulated radii must be strictly increasing");
            if (g > table[i - 1].second) throw InputError("tabulated path loss must be nonincreasing");
        }
    }
    PathLossModel model;
    const auto [r1, g1] = table[table.size() - 2];
    const auto [r2, g2] = table.back();
    if (g2 > 0.0) {
        // g1 >= g2 > 0 by monotonicity.
        model.tail_exponent_ = std::log(g1 / g2) / std::log(r2 / r1);
        if (!(model.tail_exponent_ > 2.0)) {
            throw DomainError("tabulated path loss is not integrable over the plane: fitted tail exponent " +
                              std::to_string(model.tail_exponent_) + " <= 2");
        }
    }
    model.table_ = std::move(table);
    return model;
}

double PathLossModel::operator()(double r) const {
    if (is_power_law()) {
        return std::pow(std::max(r0_, r), -alpha_);
    }
    if (r <= table_.front().first) return table_.front().second;
    const auto& [rn, gn] = table_.back();
    if (r >= rn) {
        return gn == 0.0 ? 0.0 : gn * std::pow(r / rn, -tail_exponent_);
    }
    const auto upper = std::upper_bound(table_.begin(), table_.end(), r,
                                        [](double v, const auto& entry) { return v < entry.first; });
    const auto& [ra, ga] = *(upper - 1);
    const auto& [rb, gb] = *upper;
    if (ga > 0.0 && gb > 0.0) {
        const double p = std::log(ga / gb) / std::log(rb / ra);
        return ga * std::pow(r / ra, -p);
    }
    return ga + (gb - ga) * (r - ra) / (rb - ra);
}

std::vector<double> PathLossModel::breakpoints() const {
    std::vector<double> out;
    if (is_power_law()) {
        if (r0_ > 0.0) out.push_back(r0_);
        return out;
    }
    for (const auto& entry : table_) out.push_back(entry.first);
    return out;
}

double PathLossModel::radial_tail(double from) const {
    from = std::max(from, 0.0);
    if (is_power_law()) {
        double total = 0.0;
        double start = from;
        if (start < r0_) {
            total += std::pow(r0_, -alpha_) * (r0_ * r0_ - start * start) / 2.0;
            start = r0_;
        }
        if (start == 0.0) return std::numeric_limits<double>::infinity();
        return total + std::pow(start, 2.0 - alpha_) / (alpha_ - 2.0);
    }

    double total = 0.0;
    double start = from;
    const auto& [rf, gf] = table_.front();
    if (start < rf) {
        total += gf * (rf * rf - start * start) / 2.0;
        start = rf;
    }
    for (std::size_t i = 0; i + 1 < table_.size(); ++i) {
        const auto& [ra, ga] = table_[i];
        const auto& [rb, gb] = table_[i + 1];
        if (rb <= start) continue;
        const double a = std::max(ra, start);
        if (ga > 0.0 && gb > 0.0) {
            const double p = std::log(ga / gb) / std::log(rb / ra);
            total += power_segment_integral(ga, ra, p, a, rb);
        } else {
            total += linear_segment_integral(ra, ga, (gb - ga) / (rb - ra), a, rb);
        }
    }
    const auto& [rn, gn] = table_.back();
    if (gn > 0.0) {
        const double a = std::max(rn, start);
        total += gn * std::pow(rn, tail_exponent_) * std::pow(a, 2.0 - tail_exponent_) / (tail_exponent_ - 2.0);
    }
    return total;
}

void require_compatible(const HardCoreParams& params, const PathLossModel& pathloss) {
    if (pathloss.is_power_law() && pathloss.r0() > params.delta()) {
        throw InputError("path loss cutoff r0 must not exceed the hard-core distance delta");
    }
}

FadingModel FadingModel::gamma(double shape) {
    if (!(shape > 0.0) || !std::isfinite(shape)) {
        throw InputError("gamma fading shape must be > 0");
    }
    return {Kind::UnitMeanGamma, shape};
}

double Point::norm() const { return std::hypot(x, y); }

void PointPattern::validate() const {
    if (!(window_radius >= 0.0)) throw InputError("window radius must be >= 0");
    for (const auto& p : points) {
        if (p.norm() > window_radius) throw InputError("point outside the sampling window");
    }
    if (marks) {
        if (marks->size() != points.size()) throw InputError("marks and points differ in length");
        for (double m : *marks) {
            if (!(m >= 0.0 && m < 1.0)) throw InputError("marks must lie in [0, 1)");
        }
    }
}

double min_pairwise_distance(const PointPattern& pattern, double max_radius) {
    std::vector<Point> inner;
    for (const auto& p : pattern.points) {
        if (p.norm() <= max_radius) inner.push_back(p);
    }
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < inner.size(); ++i) {
        for (std::size_t j = i + 1; j < inner.size(); ++j) {
            best = std::min(best, std::hypot(inner[i].x - inner[j].x, inner[i].y - inner[j].y));
        }
    }
    return best;
}

void QuadratureConfig::validate() const {
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw InputError("quadrature tolerances must be > 0");
    if (max_subdivisions < 1) throw InputError("max_subdivisions must be >= 1");
    if (!std::is_sorted(breakpoints.begin(), breakpoints.end())) {
        throw InputError("quadrature breakpoints must be sorted ascending");
    }
}

QuadratureConfig QuadratureConfig::with_breakpoints(std::vector<double> extra) const {
    QuadratureConfig out = *this;
    out.breakpoints.insert(out.breakpoints.end(), extra.begin(), extra.end());
    std::sort(out.breakpoints.begin(), out.breakpoints.end());
    out.breakpoints.erase(std::unique(out.breakpoints.begin(), out.breakpoints.end()), out.breakpoints.end());
    return out;
}

}  // namespace mhc
