#include "mhc/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mhc/numerics.hpp"

namespace mhc {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSqrt3 = std::numbers::sqrt3;
// Below this value of lambda_p * V the type II retention uses its series expansion.
constexpr double kSeriesThreshold = 1e-4;

// 1 - e^{-x}
double one_minus_exp(double x) { return -std::expm1(-x); }

// V_delta(delta t) / delta^2 for the unit hard-core distance.
double v_unit(double t) { return v_union(1.0, t); }

void require_kind(const HardCoreParams& params, ProcessKind kind, const char* what) {
    if (params.kind() != kind) {
        throw InputError(std::string(what) + " requires " + std::string(to_string(kind)) + " parameters");
    }
}

// (lambda_p / lambda)^2 k(delta t) for type II, as a function of t = r / delta in [1, 2].
double normalized_type2_unit(double lp_area, double t) {
    if (t >= 2.0) return 1.0;
    const double v = v_unit(t) / kPi;  // V / (pi delta^2), in (4/3 + sqrt3/(2 pi), 2)
    const double lv = lp_area * v;
    if (lv < kSeriesThreshold) {
        const double k = 1.0 - lp_area * (v + 1.0) / 3.0 + lp_area * lp_area * (v * v + v + 1.0) / 12.0;
        const double ratio = lp_area / one_minus_exp(lp_area);
        return ratio * ratio * k;
    }
    const double phi_a = one_minus_exp(lp_area);
    const double phi_v = one_minus_exp(lv);
    return 2.0 * (v * phi_a - phi_v) / (phi_a * phi_a * v * (v - 1.0));
}

// K'(delta t) / delta, t = r / delta.
double k_derivative_unit(const HardCoreParams& params, double t) {
    if (t < 1.0) return 0.0;
    if (t >= 2.0 || params.kind() == ProcessKind::PoissonHole) return 2.0 * kPi * t;
    const double lp_d2 = params.lambda_p() * params.delta() * params.delta();
    if (params.kind() == ProcessKind::MaternI) {
        return 2.0 * kPi * t * std::exp(lp_d2 * (2.0 * kPi - v_unit(t)));
    }
    return 2.0 * kPi * t * normalized_type2_unit(lp_d2 * kPi, t);
}

}  // namespace

namespace constants {

double c1_kbound() { return kPi / 3.0 + kSqrt3 / 4.0; }
double c2_lens() { return 4.0 * kPi / 3.0 + kSqrt3 / 2.0; }

}  // namespace constants

double v_union(double delta, double u) {
    if (!(delta >= 0.0) || !(u >= 0.0)) throw DomainError("v_union requires delta >= 0 and u >= 0");
    if (delta == 0.0) return 0.0;
    if (u >= 2.0 * delta) return 2.0 * kPi * delta * delta;
    const double ratio = std::min(u / (2.0 * delta), 1.0);
    const double half_chord = std::sqrt(std::max(delta * delta - u * u / 4.0, 0.0));
    return 2.0 * kPi * delta * delta - 2.0 * delta * delta * std::acos(ratio) + u * half_chord;
}

double AffineVBound::evaluate(double delta, double r) const {
    return (kPi + a) * delta * delta + b * delta * r;
}

AffineVBounds affine_v_bounds() {
    const double sqrt7 = std::sqrt(7.0);
    AffineVBounds out;
    out.upper_on_v = {2.0 * std::asin(0.75) - 3.0 * sqrt7 / 8.0, sqrt7 / 2.0, AffineVBound::Side::UpperOnV};
    out.lower_on_v = {kSqrt3 - kPi / 3.0, 2.0 * kPi / 3.0 - kSqrt3 / 2.0, AffineVBound::Side::LowerOnV};
    return out;
}

double pair_retention_type1(const HardCoreParams& params, double u) {
    if (!(u >= 0.0)) throw DomainError("pair retention requires u >= 0");
    const double delta = params.delta();
    if (u < delta) return 0.0;
    return std::exp(-params.lambda_p() * v_union(delta, u));
}

double pair_retention_type2(const HardCoreParams& params, double r) {
    const double delta = params.delta();
    if (!(delta > 0.0)) throw DomainError("type II pair retention requires delta > 0");
    if (!(r >= delta)) throw DomainError("type II pair retention is defined for r >= delta");
    const double lp = params.lambda_p();
    const double area = kPi * delta * delta;
    const double v = v_union(delta, r);
    if (lp * v < kSeriesThreshold) {
        return 1.0 - lp * (v + area) / 3.0 + lp * lp * (v * v + v * area + area * area) / 12.0;
    }
    const double numer = 2.0 * v * one_minus_exp(lp * area) - 2.0 * area * one_minus_exp(lp * v);
    return numer / (lp * lp * area * v * (v - area));
}

double normalized_pair_retention(const HardCoreParams& params, double r) {
    if (!(r >= 0.0)) throw DomainError("pair retention requires r >= 0");
    const double delta = params.delta();
    if (r < delta) return 0.0;
    if (delta == 0.0 || r >= 2.0 * delta) return 1.0;
    const double lp_d2 = params.lambda_p() * delta * delta;
    switch (params.kind()) {
        case ProcessKind::MaternI:
            return std::exp(lp_d2 * (2.0 * kPi - v_unit(r / delta)));
        case ProcessKind::MaternII:
            return normalized_type2_unit(lp_d2 * kPi, r / delta);
        case ProcessKind::PoissonHole:
            return 1.0;
    }
    return 1.0;
}

double k_derivative(const HardCoreParams& params, double r) {
    if (!(r >= 0.0)) throw DomainError("K'(r) requires r >= 0");
    const double delta = params.delta();
    if (delta == 0.0) return 2.0 * kPi * r;
    return delta * k_derivative_unit(params, r / delta);
}

double k_function(const HardCoreParams& params, double r, const QuadratureConfig& quad) {
    if (!(r >= 0.0)) throw DomainError("K(r) requires r >= 0");
    const double delta = params.delta();
    if (r <= delta) return 0.0;
    if (params.kind() == ProcessKind::PoissonHole || delta == 0.0) {
        return kPi * (r * r - delta * delta);
    }
    const double t_end = std::min(r / delta, 2.0);
    const double near = integrate_checked([&](double t) { return k_derivative_unit(params, t); }, 1.0, t_end, quad);
    const double far = r > 2.0 * delta ? kPi * (r * r - 4.0 * delta * delta) : 0.0;
    return delta * delta * near + far;
}

double k2delta_lower_bound(const HardCoreParams& params) {
    require_kind(params, ProcessKind::MaternI, "the K(2 delta) lower bound");
    const double lp = params.lambda_p();
    const double delta = params.delta();
    const double exponent = 2.0 * constants::c1_kbound() - kSqrt3;  // 2 pi/3 - sqrt(3)/2
    return 2.0 * kPi / (kSqrt3 * lp) * std::expm1(lp * delta * delta * exponent);
}

}  // namespace mhc
