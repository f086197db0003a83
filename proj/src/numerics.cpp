#include "mhc/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <string>
#include <vector>

#include "mhc/format.hpp"

namespace mhc {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = std::numeric_limits<double>::min();

// Gauss-Kronrod 10/21 abscissae and weights (QUADPACK qk21).
constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};
constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077958109831074, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5, 7, 9).
constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Panel {
    double a;
    double b;
    double value;
    double error;

    bool operator<(const Panel& other) const { return error < other.error; }
};

template <class F>
Panel gauss_kronrod21(const F& f, double a, double b) {
    const double centre = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double abs_half = std::abs(half);

    std::array<double, 10> f_left{};
    std::array<double, 10> f_right{};
    const double fc = f(centre);
    double res_gauss = 0.0;
    double res_kronrod = kWgk[10] * fc;
    double res_abs = std::abs(res_kronrod);

    for (int j = 0; j < 10; ++j) {
        const double dx = half * kXgk[j];
        const double f1 = f(centre - dx);
        const double f2 = f(centre + dx);
        f_left[j] = f1;
        f_right[j] = f2;
        res_kronrod += kWgk[j] * (f1 + f2);
        res_abs += kWgk[j] * (std::abs(f1) + std::abs(f2));
        if (j % 2 == 1) res_gauss += kWg[j / 2] * (f1 + f2);
    }

    const double mean = 0.5 * res_kronrod;
    double res_asc = kWgk[10] * std::abs(fc - mean);
    for (int j = 0; j < 10; ++j) {
        res_asc += kWgk[j] * (std::abs(f_left[j] - mean) + std::abs(f_right[j] - mean));
    }

    const double value = res_kronrod * half;
    res_abs *= abs_half;
    res_asc *= abs_half;
    double error = std::abs((res_kronrod - res_gauss) * half);
    if (res_asc != 0.0 && error != 0.0) {
        error = res_asc * std::min(1.0, std::pow(200.0 * error / res_asc, 1.5));
    }
    if (res_abs > kTiny / (50.0 * kEps)) {
        error = std::max(50.0 * kEps * res_abs, error);
    }
    return {a, b, value, error};
}

template <class F>
QuadratureResult adaptive(const F& f, std::vector<double> knots, const QuadratureConfig& cfg) {
    std::priority_queue<Panel> panels;
    double total = 0.0;
    double total_error = 0.0;
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        Panel p = gauss_kronrod21(f, knots[i], knots[i + 1]);
        total += p.value;
        total_error += p.error;
        panels.push(p);
    }

    int subdivisions = 0;
    auto done = [&] { return total_error <= std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total)); };
    while (!done() && subdivisions < cfg.max_subdivisions && std::isfinite(total_error)) {
        const Panel worst = panels.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) break;  // panel below machine resolution
        panels.pop();
        const Panel left = gauss_kronrod21(f, worst.a, mid);
        const Panel right = gauss_kronrod21(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        total_error += left.error + right.error - worst.error;
        panels.push(left);
        panels.push(right);
        ++subdivisions;

        // Periodic resummation keeps the running totals free of drift.
        if (subdivisions % 64 == 0) {
            auto copy = panels;
            total = 0.0;
            total_error = 0.0;
            while (!copy.empty()) {
                total += copy.top().value;
                total_error += copy.top().error;
                copy.pop();
            }
        }
    }

    QuadratureResult result;
    result.value = total;
    result.abs_error_estimate = total_error;
    result.subdivisions_used = subdivisions;
    result.converged = std::isfinite(total) && std::isfinite(total_error) && done();
    return result;
}

std::vector<double> interior_knots(double a, double b, const std::vector<double>& breakpoints) {
    std::vector<double> knots{a};
    for (double bp : breakpoints) {
        if (bp > a && bp < b) knots.push_back(bp);
    }
    knots.push_back(b);
    return knots;
}

// ln Gamma(1 + f) for |f| <= 0.1 by its Maclaurin series; avoids forming 1 + f.
double log_gamma_1p_small(double f) {
    static constexpr std::array<double, 17> kZeta = {
        1.6449340668482264, 1.2020569031595943, 1.0823232337111382, 1.0369277551433699,
        1.0173430619844491, 1.0083492773819228, 1.0040773561979443, 1.0020083928260822,
        1.0009945751278181, 1.0004941886041195, 1.0002460865533080, 1.0001227133475785,
        1.0000612481350587, 1.0000305882363070, 1.0000152822594087, 1.0000076371976379,
        1.0000038172932650};
    double sum = -std::numbers::egamma * f;
    double power = f;
    for (std::size_t k = 2; k < kZeta.size() + 2; ++k) {
        power *= -f;
        sum += kZeta[k - 2] * power / static_cast<double>(k);
    }
    return sum;
}

double log_gamma_1p(double f) { return std::abs(f) <= 0.1 ? log_gamma_1p_small(f) : std::lgamma(1.0 + f); }

// Gamma(f, x) for 0 < f < 1 and small x via
// (Gamma(1+f) - x^f) / f - sum_{k>=1} (-1)^k x^(f+k) / (k! (f+k)).
double gamma_fractional_small_x(double f, double x) {
    const double log_x = std::log(x);
    const double head = (std::expm1(log_gamma_1p(f)) - std::expm1(f * log_x)) / f;
    const double xf = std::exp(f * log_x);
    double term = 1.0;  // (-1)^k x^k / k!
    double sum = 0.0;
    for (int k = 1; k < 200; ++k) {
        term *= -x / k;
        const double add = term / (f + k);
        sum += add;
        if (std::abs(add) < kEps * std::abs(sum)) break;
    }
    return head - xf * sum;
}

double e1_series(double x) {
    double term = 1.0;
    double sum = 0.0;
    for (int k = 1; k < 200; ++k) {
        term *= -x / k;
        const double add = term / k;
        sum += add;
        if (std::abs(add) < kEps * std::abs(sum)) break;
    }
    return -std::numbers::egamma - std::log(x) - sum;
}

// Modified Lentz evaluation of the continued fraction for Gamma(s, x) / (x^s e^-x).
double gamma_continued_fraction(double s, double x) {
    constexpr double kFloor = 1e-300;
    double b = x + 1.0 - s;
    double c = 1.0 / kFloor;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 100000; ++i) {
        const double an = -i * (i - s);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < kFloor) d = kFloor;
        c = b + an / c;
        if (std::abs(c) < kFloor) c = kFloor;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < kEps) return h;
    }
    throw NumericalError("incomplete gamma continued fraction did not converge", std::abs(h));
}

bool use_continued_fraction(double s, double x) { return x >= std::max(1.0, s + 1.0); }

// Gamma(s, x) for the small-x branch (x < max(1, s + 1)); no underflow is possible there.
double gamma_small_x(double s, double x) {
    if (s >= 1.0) {
        double ap = s;
        double del = 1.0 / s;
        double sum = del;
        for (int n = 0; n < 1000; ++n) {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if (std::abs(del) < std::abs(sum) * kEps) break;
        }
        const double lower_fraction = std::exp(-x + s * std::log(x) - std::lgamma(s)) * sum;
        return std::exp(std::lgamma(s)) * (1.0 - lower_fraction);
    }
    if (s > 0.0) return gamma_fractional_small_x(s, x);

    const double steps = std::ceil(-s);
    const double start = s + steps;  // in [0, 1)
    double value = start == 0.0 ? e1_series(x) : gamma_fractional_small_x(start, x);
    const double log_x = std::log(x);
    for (int j = 1; j <= static_cast<int>(steps); ++j) {
        const double order = start - j;
        value = (value - std::exp(order * log_x - x)) / order;
    }
    return value;
}

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureConfig& cfg) {
    cfg.validate();
    if (std::isnan(a) || std::isnan(b) || std::isinf(a)) {
        throw InputError("integration limits must be finite (upper limit may be +infinity)");
    }
    if (a == b) return {0.0, 0.0, 0, true};
    if (b < a) {
        QuadratureResult r = integrate(f, b, a, cfg);
        r.value = -r.value;
        return r;
    }
    if (std::isinf(b)) {
        auto mapped = [&f, a](double t) {
            const double one_minus = 1.0 - t;
            return f(a + t / one_minus) / (one_minus * one_minus);
        };
        std::vector<double> mapped_breaks;
        for (double bp : cfg.breakpoints) {
            if (bp > a && std::isfinite(bp)) mapped_breaks.push_back((bp - a) / (1.0 + bp - a));
        }
        return adaptive(mapped, interior_knots(0.0, 1.0, mapped_breaks), cfg);
    }
    return adaptive(f, interior_knots(a, b, cfg.breakpoints), cfg);
}

double integrate_checked(const std::function<double(double)>& f, double a, double b,
                         const QuadratureConfig& cfg) {
    const QuadratureResult r = integrate(f, a, b, cfg);
    if (!r.converged) {
        throw NumericalError("quadrature tolerance not met (achieved abs error " +
                                 format_number(r.abs_error_estimate, 3) + " after " +
                                 std::to_string(r.subdivisions_used) + " subdivisions)",
                             r.abs_error_estimate);
    }
    return r.value;
}

double exponential_integral_e1(double x) {
    if (!(x > 0.0)) throw DomainError("E1(x) requires x > 0");
    if (x < 1.0) return e1_series(x);
    return std::exp(-x) * gamma_continued_fraction(0.0, x);
}

double log_upper_incomplete_gamma(double s, double x) {
    if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("Gamma(s, x) requires finite x > 0");
    if (!std::isfinite(s)) throw DomainError("Gamma(s, x) requires a finite order s");
    if (use_continued_fraction(s, x)) {
        return -x + s * std::log(x) + std::log(gamma_continued_fraction(s, x));
    }
    return std::log(gamma_small_x(s, x));
}

double upper_incomplete_gamma(double s, double x) {
    if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("Gamma(s, x) requires finite x > 0");
    if (!std::isfinite(s)) throw DomainError("Gamma(s, x) requires a finite order s");
    if (use_continued_fraction(s, x)) {
        return std::exp(-x + s * std::log(x)) * gamma_continued_fraction(s, x);
    }
    return gamma_small_x(s, x);
}

}  // namespace mhc
