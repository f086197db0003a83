#include "mhc/interference.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "mhc/numerics.hpp"

namespace mhc {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_intensity(const HardCoreParams& params) {
    const double lp = params.lambda_p();
    const double area = kPi * params.delta() * params.delta();
    switch (params.kind()) {
        case ProcessKind::MaternI:
            return std::log(lp) - lp * area;
        case ProcessKind::MaternII:
            return std::log(intensity(params));
        case ProcessKind::PoissonHole:
            return std::log(lp);
    }
    return std::log(lp);
}

// Quadrature settings on the unit-delta variable t = r / delta in [1, 2].
QuadratureConfig unit_config(const QuadratureConfig& quad, const PathLossModel& pathloss, double delta) {
    std::vector<double> scaled;
    for (double bp : pathloss.breakpoints()) scaled.push_back(bp / delta);
    for (double bp : quad.breakpoints) scaled.push_back(bp / delta);
    QuadratureConfig out = quad;
    out.breakpoints.clear();
    return out.with_breakpoints(std::move(scaled));
}

// log of the interference from [delta, 2 delta]; -inf when it vanishes.
double log_below_2delta(const HardCoreParams& params, const PathLossModel& pathloss, const QuadratureConfig& quad) {
    const double delta = params.delta();
    if (delta == 0.0) return kNegInf;
    const double g_delta = pathloss(delta);
    if (g_delta == 0.0) return kNegInf;

    const double lp_d2 = params.lambda_p() * delta * delta;
    if (params.kind() == ProcessKind::PoissonHole) {
        const double near = pathloss.radial_tail(delta) - pathloss.radial_tail(2.0 * delta);
        return std::log(2.0 * kPi * params.lambda_p() * near);
    }

    const QuadratureConfig cfg = unit_config(quad, pathloss, delta);
    auto weight = [&](double t) { return pathloss(delta * t) / g_delta * t; };
    if (params.kind() == ProcessKind::MaternI) {
        const double c2 = constants::c2_lens();
        const double j = integrate_checked(
            [&](double t) { return weight(t) * std::exp(lp_d2 * (c2 - v_union(1.0, t))); }, 1.0, 2.0, cfg);
        return std::log(2.0 * kPi * lp_d2) + lp_d2 * (kPi - c2) + std::log(g_delta) + std::log(j);
    }
    const double j = integrate_checked(
        [&](double t) { return weight(t) * normalized_pair_retention(params, delta * t); }, 1.0, 2.0, cfg);
    return log_intensity(params) + std::log(2.0 * kPi * delta * delta) + std::log(g_delta) + std::log(j);
}

// log of the Poisson-hole mean interference at the matched intensity.
double log_poisson_hole(const HardCoreParams& params, const PathLossModel& pathloss) {
    return log_intensity(params) + std::log(2.0 * kPi * pathloss.radial_tail(params.delta()));
}

double log_h_bound(const HardCoreParams& params, const PathLossModel& pathloss, const AffineVBound& bound,
                   const QuadratureConfig& quad) {
    const double lp = params.lambda_p();
    const double delta = params.delta();
    if (delta == 0.0) return kNegInf;
    const double prefactor = std::log(2.0 * kPi * lp) - lp * bound.a * delta * delta;
    if (pathloss.is_power_law()) {
        return prefactor + log_h_integral(lp * bound.b * delta, delta, pathloss.alpha());
    }
    const double g_delta = pathloss(delta);
    if (g_delta == 0.0) return kNegInf;
    const double rate = lp * bound.b * delta * delta;
    const double j = integrate_checked(
        [&](double t) { return pathloss(delta * t) / g_delta * t * std::exp(-rate * (t - 1.0)); }, 1.0, 2.0,
        unit_config(quad, pathloss, delta));
    return prefactor + 2.0 * std::log(delta) - rate + std::log(g_delta) + std::log(j);
}

void require_kind(const HardCoreParams& params, ProcessKind kind, const char* what) {
    if (params.kind() != kind) {
        throw InputError(std::string(what) + " requires " + std::string(to_string(kind)) + " parameters");
    }
}

EirReport make_report(double mean_hardcore, double mean_poisson_hole, double log_eir, EirMethod method) {
    EirReport report;
    report.mean_hardcore = mean_hardcore;
    report.mean_poisson_hole = mean_poisson_hole;
    report.eir_linear = std::exp(log_eir);
    report.eir_db = 10.0 * log_eir / std::numbers::ln10;
    report.method = method;
    return report;
}

EirReport unit_report(const HardCoreParams& params, const PathLossModel& pathloss, EirMethod method) {
    const double reference = mean_interference_poisson_hole(params, pathloss);
    return make_report(reference, reference, 0.0, method);
}

}  // namespace

std::string_view to_string(EirMethod method) {
    switch (method) {
        case EirMethod::Quadrature:
            return "quadrature";
        case EirMethod::UpperBound:
            return "upper-bound";
        case EirMethod::Approximation:
            return "approximation";
    }
    return "unknown";
}

EirMethod parse_eir_method(std::string_view name) {
    if (name == "quadrature") return EirMethod::Quadrature;
    if (name == "upper-bound") return EirMethod::UpperBound;
    if (name == "approximation") return EirMethod::Approximation;
    throw InputError("unknown EIR method '" + std::string(name) +
                     "' (expected quadrature, upper-bound or approximation)");
}

double to_db(double linear) { return 10.0 * std::log10(linear); }

double interference_below_2delta(const HardCoreParams& params, const PathLossModel& pathloss,
                                  const QuadratureConfig& quad) {
    require_compatible(params, pathloss);
    return std::exp(log_below_2delta(params, pathloss, quad));
}

double interference_outside_2delta(const HardCoreParams& params, const PathLossModel& pathloss) {
    require_compatible(params, pathloss);
    return 2.0 * kPi * intensity(params) * pathloss.radial_tail(2.0 * params.delta());
}

double mean_interference_quadrature(const HardCoreParams& params, const PathLossModel& pathloss,
                                    const QuadratureConfig& quad) {
    return interference_below_2delta(params, pathloss, quad) + interference_outside_2delta(params, pathloss);
}

double mean_interference_poisson_hole(const HardCoreParams& params, const PathLossModel& pathloss) {
    require_compatible(params, pathloss);
    return 2.0 * kPi * intensity(params) * pathloss.radial_tail(params.delta());
}

double log_h_integral(double v, double x, double alpha) {
    if (!(v > 0.0) || !(x > 0.0)) throw DomainError("H(v, x) requires v > 0 and x > 0");
    if (!(alpha > 2.0)) throw DomainError("H(v, x) requires alpha > 2");
    const double order = 2.0 - alpha;
    const double log_near = log_upper_incomplete_gamma(order, v * x);
    const double log_far = log_upper_incomplete_gamma(order, 2.0 * v * x);
    return (alpha - 2.0) * std::log(v) + log_near + std::log1p(-std::exp(log_far - log_near));
}

double h_integral(double v, double x, double alpha) { return std::exp(log_h_integral(v, x, alpha)); }

double h_bound(const HardCoreParams& params, const PathLossModel& pathloss, const AffineVBound& bound,
               const QuadratureConfig& quad) {
    require_kind(params, ProcessKind::MaternI, "h(a, b)");
    require_compatible(params, pathloss);
    return std::exp(log_h_bound(params, pathloss, bound, quad));
}

EirBracket eir_type1_bracket(const HardCoreParams& params, const PathLossModel& pathloss,
                             const QuadratureConfig& quad) {
    require_kind(params, ProcessKind::MaternI, "the type I EIR bracket");
    require_compatible(params, pathloss);
    if (params.delta() == 0.0) return {};
    const double reference = log_poisson_hole(params, pathloss);
    const double far = pathloss.radial_tail(2.0 * params.delta()) / pathloss.radial_tail(params.delta());
    const AffineVBounds bounds = affine_v_bounds();
    return {std::exp(log_h_bound(params, pathloss, bounds.upper_on_v, quad) - reference) + far,
            std::exp(log_h_bound(params, pathloss, bounds.lower_on_v, quad) - reference) + far};
}

EirReport eir(const HardCoreParams& params, const PathLossModel& pathloss, EirMethod method,
              const QuadratureConfig& quad) {
    require_compatible(params, pathloss);
    if (params.kind() == ProcessKind::PoissonHole) return unit_report(params, pathloss, method);

    switch (method) {
        case EirMethod::Quadrature: {
            if (params.delta() == 0.0) return unit_report(params, pathloss, method);
            const double reference_log = log_poisson_hole(params, pathloss);
            const double far = pathloss.radial_tail(2.0 * params.delta()) / pathloss.radial_tail(params.delta());
            const double ratio = std::exp(log_below_2delta(params, pathloss, quad) - reference_log) + far;
            return make_report(mean_interference_quadrature(params, pathloss, quad),
                               std::exp(reference_log), std::log(ratio), method);
        }
        case EirMethod::UpperBound: {
            if (params.kind() != ProcessKind::MaternII) {
                throw InputError("upper-bound EIR is only available for matern2 (no universal type I upper bound)");
            }
            if (params.delta() == 0.0) return unit_report(params, pathloss, method);
            const double bound = pathloss.is_power_law() ? eir_type2_bound(pathloss.alpha()) : eir_type2_bound();
            const double reference = mean_interference_poisson_hole(params, pathloss);
            return make_report(bound * reference, reference, std::log(bound), method);
        }
        case EirMethod::Approximation: {
            if (params.kind() != ProcessKind::MaternI) {
                throw InputError("the EIR approximation is only available for matern1");
            }
            if (!pathloss.is_power_law()) {
                throw InputError("the EIR approximation requires a power-law path loss");
            }
            return eir_type1_approximation(params, pathloss.alpha());
        }
    }
    throw InputError("unknown EIR method");
}

double type1_growth_exponent() {
    const AffineVBound tangent = affine_v_bounds().upper_on_v;
    return kPi - tangent.a - tangent.b;
}

bool type1_approximation_reliable(const HardCoreParams& params) {
    return params.lambda_p() * params.delta() * params.delta() > 4.0;
}

EirReport eir_type1_approximation(const HardCoreParams& params, double alpha) {
    require_kind(params, ProcessKind::MaternI, "the EIR approximation");
    const PathLossModel pathloss = PathLossModel::power_law(alpha);
    if (params.delta() == 0.0) return unit_report(params, pathloss, EirMethod::Approximation);

    const double growth = type1_growth_exponent();
    if (!(growth > 1.0)) {
        throw NumericalError("type I growth exponent is not above 1", growth);
    }
    const double lp_d2 = params.lambda_p() * params.delta() * params.delta();
    const double b = affine_v_bounds().upper_on_v.b;
    const double log_eir =
        std::log(alpha - 2.0) + (alpha - 2.0) * std::numbers::ln2 + lp_d2 * growth - std::log(b * lp_d2);
    const double reference = mean_interference_poisson_hole(params, pathloss);
    return make_report(std::exp(log_eir) * reference, reference, log_eir, EirMethod::Approximation);
}

double eir_type2_bound(std::optional<double> alpha) {
    const double nu = 12.0 * kPi / (8.0 * kPi + 3.0 * std::numbers::sqrt3);
    if (!alpha) return nu;
    if (!(*alpha > 2.0)) throw DomainError("the sharpened type II bound requires alpha > 2");
    return nu - (nu - 1.0) / std::exp2(*alpha - 2.0);
}

}  // namespace mhc
