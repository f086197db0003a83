#pragma once

#include <functional>

#include "mhc/core_model.hpp"

namespace mhc {

struct QuadratureResult {
    double value = 0.0;
    double abs_error_estimate = 0.0;
    int subdivisions_used = 0;
    bool converged = false;
};

/**
 * Globally adaptive 21-point Gauss-Kronrod quadrature of f over [a, b].
 *
 * The interval is first split at every cfg.breakpoint lying strictly inside
 * (a, b); the panel with the largest error estimate is bisected until the
 * summed estimate meets max(abs_tol, rel_tol * |value|) or max_subdivisions
 * is reached, in which case `converged` is false. `b` may be +infinity; the
 * map x = a + t / (1 - t) is then applied, so f must decay integrably.
 */
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureConfig& cfg = {});

/// Same as integrate() but throws NumericalError when the tolerance is unmet.
double integrate_checked(const std::function<double(double)>& f, double a, double b,
                         const QuadratureConfig& cfg = {});

/// Exponential integral E1(x) = Gamma(0, x), x > 0.
double exponential_integral_e1(double x);

/// Upper incomplete gamma function Gamma(s, x) for real s and x > 0.
double upper_incomplete_gamma(double s, double x);

/// log Gamma(s, x); stays finite where Gamma(s, x) underflows.
double log_upper_incomplete_gamma(double s, double x);

}  // namespace mhc
