#include "psalloc/closed_form_m1.hpp"

#include <cmath>

#include "psalloc/quadrature.hpp"

namespace psalloc::m1 {

namespace {

constexpr int kIntegralMaxR = 500;

void check(double rho, int r, int rmin) {
    validate_params({1, rho});
    if (r < rmin)
        throw ValidationError(ValidationError::Code::bad_config,
                              "r out of range for this representation");
}

// Int_1^{1+rho} u^{-p} (1 - 1/u)^r du, evaluated as exp(r g(u) - r g_max) with
// g = log(1 - 1/u) to keep the peaked integrand at u = 1+rho in range.
// Returns the integral scaled by exp(-r g_max); log_scale receives r g_max.
double w_integral_scaled(double rho, int r, int p, double tol, int order, double& log_scale) {
    const double top = 1.0 + rho;
    const double gmax = std::log(1.0 - 1.0 / top);
    log_scale = r * gmax;
    auto f = [&](double u) {
        return std::exp(r * (std::log(1.0 - 1.0 / u) - gmax) - p * std::log(u));
    };
    return quad::integrate_graded(f, 1.0, top, top, tol, order);
}

}  // namespace

double pi0_integral(double rho, int r, const SolverConfig& cfg) {
    check(rho, r, 0);
    if (r == 0) return 1.0 - rho;
    if (r > kIntegralMaxR) return pi0_series(rho, r, cfg);
    double log_scale = 0.0;
    const double I = w_integral_scaled(rho, r, 0, cfg.tol_rel, cfg.quad_points, log_scale);
    return (1.0 - rho) * std::exp((r - 1) * std::log1p(rho) + log_scale) * I;
}

double pi0_series(double rho, int r, const SolverConfig& cfg) {
    check(rho, r, 1);
    const double x = rho / (1.0 + rho);
    double sum = 0.0, xn = x;
    int n = 1;
    for (; n <= cfg.max_terms; ++n) {
        sum += double(n) / (double(r) + n) * xn;
        xn *= x;
        // remaining terms are below x^{n+1} / (1-x)
        if (xn / (1.0 - x) < cfg.tol_rel * sum) break;
    }
    if (n > cfg.max_terms) throw NumericalError("pi0_series: term cap reached");
    return (1.0 - rho) / (1.0 + rho) * std::pow(rho, r) * sum;
}

double pi0_integral_alt(double rho, int r, const SolverConfig& cfg) {
    check(rho, r, 1);
    if (r > kIntegralMaxR) return pi0_series(rho, r, cfg);
    auto f = [&](double u) {
        const double d = 1.0 + rho - u * rho;
        return std::exp(r * std::log(u)) / (d * d);
    };
    const double I = quad::integrate_graded(f, 0.0, 1.0, 1.0, cfg.tol_rel, cfg.quad_points);
    return (1.0 - rho) * std::pow(rho, r + 1) * I;
}

double pi1_integral_u(double rho, int r, const SolverConfig& cfg) {
    check(rho, r, 0);
    auto f = [&](double u) {
        return std::exp(r * std::log(u)) / (1.0 + rho - u * rho);
    };
    const double I = quad::integrate_graded(f, 0.0, 1.0, 1.0, cfg.tol_rel, cfg.quad_points);
    return (1.0 - rho) * std::pow(rho, r + 1) * (r + 1) * I;
}

double pi1_integral_w(double rho, int r, const SolverConfig& cfg) {
    check(rho, r, 0);
    if (r == 0) return (1.0 - rho) * std::log1p(rho);
    double log_scale = 0.0;
    const double I = w_integral_scaled(rho, r, 1, cfg.tol_rel, cfg.quad_points, log_scale);
    return (1.0 - rho) * std::exp(r * std::log1p(rho) + log_scale) * (r + 1) * I;
}

double pi1_identity(double rho, int r, const SolverConfig& cfg) {
    check(rho, r, 0);
    return (1.0 - rho) * std::pow(rho, r + 1) - pi0_series(rho, r + 1, cfg);
}

double pi1(double rho, int r, const SolverConfig& cfg) {
    const double id = pi1_identity(rho, r, cfg);
    if (r <= kIntegralMaxR) {
        const double a = pi1_integral_u(rho, r, cfg);
        const double b = pi1_integral_w(rho, r, cfg);
        const double tol = 50.0 * std::max(cfg.tol_rel, 1e-13) * std::abs(id);
        if (std::abs(a - id) > tol || std::abs(b - id) > tol)
            throw NumericalError("pi(1,r) representations disagree beyond tolerance");
    }
    return id;
}

JointDistribution full_distribution(double rho, int R, const SolverConfig& cfg) {
    validate_params({1, rho});
    if (R < 3)
        throw ValidationError(ValidationError::Code::bad_config, "need R >= m + 2");
    JointDistribution d = make_distribution({1, rho}, R, Method::closed_form);
    d.at(0, 0) = 1.0 - rho;
    for (int r = 1; r <= R + 1; ++r) {
        const double v = pi0_series(rho, r, cfg);
        if (r <= R) d.at(0, r) = v;
        d.at(1, r - 1) = (1.0 - rho) * std::pow(rho, r) - v;
    }
    for (auto& v : d.values)
        if (v != 0.0 && std::abs(v) < kFlushThreshold) {
            v = 0.0;
            ++d.flushed;
        }
    d.tol = cfg.tol_rel;
    return d;
}

}  // namespace psalloc::m1
