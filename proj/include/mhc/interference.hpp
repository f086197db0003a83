#pragma once

// Mean interference at the typical point, its bounds and the excess
// interference ratio (EIR) of hard-core processes relative to Poisson.

#include <optional>
#include <string_view>

#include "mhc/analytic.hpp"
#include "mhc/core_model.hpp"

namespace mhc {

enum class EirMethod { Quadrature, UpperBound, Approximation };

std::string_view to_string(EirMethod method);
EirMethod parse_eir_method(std::string_view name);

struct EirReport {
    double mean_hardcore = 0.0;
    double mean_poisson_hole = 0.0;
    double eir_linear = 1.0;
    double eir_db = 0.0;
    EirMethod method = EirMethod::Quadrature;
};

/// 10 log10(x).
double to_db(double linear);

/**
 * Mean interference lambda * int g(r) K'(r) dr at the typical point.
 *
 * The hard-core annulus [delta, 2 delta] is integrated adaptively; beyond
 * 2 delta the second-order structure is Poisson and the tail is added
 * analytically (or, for tabulated path loss, by exact piecewise integration
 * plus the fitted power-law remainder). Returns +infinity when the path loss
 * is not integrable at the origin (power law with r0 = 0 and delta = 0).
 */
double mean_interference_quadrature(const HardCoreParams& params, const PathLossModel& pathloss,
                                    const QuadratureConfig& quad = {});

/// Interference from the annulus delta <= r <= 2 delta, by quadrature.
double interference_below_2delta(const HardCoreParams& params, const PathLossModel& pathloss,
                                  const QuadratureConfig& quad = {});

/// Interference from r > 2 delta: 2 pi lambda int_{2 delta}^inf g(r) r dr.
double interference_outside_2delta(const HardCoreParams& params, const PathLossModel& pathloss);

/// Poisson process of the matched intensity with a hole of radius delta at the origin.
double mean_interference_poisson_hole(const HardCoreParams& params, const PathLossModel& pathloss);

/// H(v, x) = int_x^{2x} r^{1 - alpha} e^{-v r} dr = v^{alpha-2} (Gamma(2-alpha, vx) - Gamma(2-alpha, 2vx)).
double h_integral(double v, double x, double alpha);
double log_h_integral(double v, double x, double alpha);

/**
 * h(a, b) = 2 pi lambda_p e^{-lambda_p a delta^2} int_delta^{2 delta} g(r) r e^{-lambda_p b delta r} dr.
 *
 * With the tangent constants (upper bound on V) this is a lower bound on the
 * type I interference from [delta, 2 delta]; with the chord constants it is
 * an upper bound.
 */
double h_bound(const HardCoreParams& params, const PathLossModel& pathloss, const AffineVBound& bound,
               const QuadratureConfig& quad = {});

struct EirBracket {
    double lower = 1.0;
    double upper = 1.0;
};

/// Type I EIR interval obtained by replacing the near-field term with h(a, b).
EirBracket eir_type1_bracket(const HardCoreParams& params, const PathLossModel& pathloss,
                             const QuadratureConfig& quad = {});

/// Excess interference ratio. Exactly 1 for the Poisson reference and for delta = 0.
EirReport eir(const HardCoreParams& params, const PathLossModel& pathloss, EirMethod method,
              const QuadratureConfig& quad = {});

/// pi - a - b for the tangent constants; the growth rate of the type I EIR in lambda_p delta^2.
double type1_growth_exponent();

/// Closed-form type I approximation; reliable when lambda_p delta^2 > 4.
EirReport eir_type1_approximation(const HardCoreParams& params, double alpha);
bool type1_approximation_reliable(const HardCoreParams& params);

/// nu = 12 pi / (8 pi + 3 sqrt 3), or its power-law sharpening nu - (nu - 1) / 2^(alpha - 2).
double eir_type2_bound(std::optional<double> alpha = std::nullopt);

}  // namespace mhc
