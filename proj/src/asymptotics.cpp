#include "psalloc/asymptotics.hpp"

#include <cmath>

#include "psalloc/closed_form_m2.hpp"
#include "psalloc/quadrature.hpp"

namespace psalloc {

namespace {

double factorial_ratio(int m, int k) {  // m!/k! for k <= m
    double f = 1.0;
    for (int i = k + 1; i <= m; ++i) f *= i;
    return f;
}

// 2^(r-1+shift) Int_1^2 u^-p (1 - 1/u)^(r) du, the m = 1 layer integral,
// evaluated in scaled form (the integrand peaks at u = 2 where it equals 2^-r).
double layer_integral_m1(int r, int p, double shift, const SolverConfig& cfg) {
    const double gmax = std::log(0.5);  // log(1 - 1/2)
    auto f = [&](double u) {
        return std::exp(r * (std::log(1.0 - 1.0 / u) - gmax) - p * std::log(u));
    };
    const double I = quad::integrate_graded(f, 1.0, 2.0, 2.0, cfg.tol_rel, cfg.quad_points);
    // 2^(r-1+shift) * 2^-r = 2^(shift-1)
    return std::exp((shift - 1.0) * std::log(2.0)) * I;
}

}  // namespace

HeavyTrafficValue heavy_traffic_pi(int m, int k, double epsilon, int r, int terms) {
    if (m < 1 || k < 0 || k > m)
        throw ValidationError(ValidationError::Code::m_out_of_range, "need 0 <= k <= m, m >= 1");
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw ValidationError(ValidationError::Code::rho_out_of_range, "epsilon in (0,1)");
    if (r < 1)
        throw ValidationError(ValidationError::Code::bad_config,
                              "heavy_traffic_pi: invalid as Y -> 0; need r >= 1");
    if (terms != 1 && terms != 2)
        throw ValidationError(ValidationError::Code::bad_config, "terms must be 1 or 2");
    const double Y = epsilon * r;
    double v = std::pow(epsilon, m - k + 1) * factorial_ratio(m, k) * std::exp(-Y) *
               std::pow(Y, k - m);
    if (terms == 2)
        v *= 1.0 - epsilon * (0.5 * Y + m + double(m * m + (2 - k) * m - k) / Y);
    return {v, v < 0.0};
}

double tail_pi(int m, int k, double rho, int r) {
    validate_params({m, rho});
    if (k < 0 || k > m)
        throw ValidationError(ValidationError::Code::m_out_of_range, "need 0 <= k <= m");
    if (r < 1) throw ValidationError(ValidationError::Code::bad_config, "need r >= 1");
    return (1.0 - rho) * std::pow(rho, m + r) * std::pow(double(r), k - m) *
           factorial_ratio(m, k);
}

double boundary_layer_Q0(int m, int k, int r, const SolverConfig& cfg) {
    if (k < 0 || k > m || r < 0)
        throw ValidationError(ValidationError::Code::bad_config, "need 0 <= k <= m, r >= 0");
    if (m == 1) {
        if (k == 0) return r == 0 ? 1.0 : layer_integral_m1(r, 0, 0.0, cfg);
        return 1.0 - boundary_layer_Q0(1, 0, r + 1, cfg);
    }
    if (m == 2) {
        if (k == 0) {
            if (r == 0) return 1.0;
            return std::exp((r - 2.0) * std::log(2.0)) * r * (r + 1) *
                   m2::double_integral(1.0, r, 0, cfg);
        }
        if (k == 1) {
            if (r == 0) return 1.0 - boundary_layer_Q0(2, 0, 1, cfg);
            return std::exp((r - 1.0) * std::log(2.0)) * double(r + 1) * (r + 1) *
                   m2::double_integral(1.0, r, 1, cfg);
        }
        return 1.0 - boundary_layer_Q0(2, 1, r + 1, cfg) - boundary_layer_Q0(2, 0, r + 2, cfg);
    }
    throw ValidationError(ValidationError::Code::m_out_of_range,
                          "boundary_layer_Q0: closed forms exist for m = 1, 2 only");
}

double boundary_layer_Q1_m1(int k, int r, const SolverConfig& cfg) {
    if (k == 0) {
        if (r < 1)
            throw ValidationError(ValidationError::Code::bad_config, "Q1(0,r): need r >= 1");
        return -(r - 1.0) * layer_integral_m1(r, 0, -1.0, cfg) - 0.5;
    }
    if (k == 1) {
        if (r < 0)
            throw ValidationError(ValidationError::Code::bad_config, "Q1(1,r): need r >= 0");
        return -double(r) - 1.0 - boundary_layer_Q1_m1(0, r + 1, cfg);
    }
    throw ValidationError(ValidationError::Code::bad_config, "Q1: k in {0,1}");
}

}  // namespace psalloc
