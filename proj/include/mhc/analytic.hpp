#pragma once

// Second-order structure of the Matern hard-core processes: union areas,
// pair retention probabilities and K-functions.

#include "mhc/core_model.hpp"

namespace mhc {

namespace constants {

/// pi/3 + sqrt(3)/4: enters the closed-form lower bound on K(2 delta).
double c1_kbound();
/// 4 pi/3 + sqrt(3)/2 = V_delta(delta) / delta^2.
double c2_lens();

}  // namespace constants

/// Area of the union of two disks of radius delta whose centres are u apart.
double v_union(double delta, double u);

/**
 * Affine form (pi + a) delta^2 + b delta r of V_delta(r) on delta < r < 2 delta.
 * `UpperOnV` lies above V (tangent at r = 3 delta / 2); `LowerOnV` is the chord
 * between r = delta and r = 2 delta.
 */
struct AffineVBound {
    enum class Side { UpperOnV, LowerOnV };

    double a = 0.0;
    double b = 0.0;
    Side side = Side::UpperOnV;

    double evaluate(double delta, double r) const;
};

struct AffineVBounds {
    AffineVBound lower_on_v;  // chord: a = sqrt(3) - pi/3, b = 2 pi/3 - sqrt(3)/2
    AffineVBound upper_on_v;  // tangent: a = 2 asin(3/4) - 3 sqrt(7)/8, b = sqrt(7)/2
};

AffineVBounds affine_v_bounds();

/// Probability that two parent points at distance u both survive type I thinning.
double pair_retention_type1(const HardCoreParams& params, double u);

/// Probability that two parent points at distance r >= delta both survive type II thinning.
double pair_retention_type2(const HardCoreParams& params, double r);

/// (lambda_p / lambda)^2 k(r) for the matching Matern type; exactly 1 for r >= 2 delta, 0 below delta.
double normalized_pair_retention(const HardCoreParams& params, double r);

/// K'(r). Zero below delta for every kind; 2 pi r beyond 2 delta.
double k_derivative(const HardCoreParams& params, double r);

/// K(r) by quadrature of K' on [delta, min(r, 2 delta)] and the exact annulus beyond.
double k_function(const HardCoreParams& params, double r, const QuadratureConfig& quad = {});

/// Closed-form lower bound on K(2 delta) for the type I process.
double k2delta_lower_bound(const HardCoreParams& params);

}  // namespace mhc
