#include "psalloc/closed_form_m2.hpp"

#include <cmath>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "psalloc/quadrature.hpp"

namespace psalloc::m2 {

double a_star(double rho) { return rho / ((1.0 + rho) * (1.0 + rho)); }

namespace {

// t runs over panels graded toward 0 (Laplace peak for large r) and toward 1,
// where (1-t)^(r-a*) has a branch point that plain Gauss panels cannot see.
std::vector<double> t_edges(int lv0, int lv1) {
    std::vector<double> e = quad::graded_edges(0.0, 0.5, true, lv0);
    const std::vector<double> hi = quad::graded_edges(0.5, 1.0, false, lv1);
    e.insert(e.end(), hi.begin() + 1, hi.end());
    return e;
}

double eval_grid(double rho, int r, int k, const std::vector<double>& eu,
                 const std::vector<double>& et, const quad::Rule& rule, int threads) {
    const double as = a_star(rho);
    const double c = rho * rho / ((1.0 + rho) * (1.0 + rho));
    const int denom_pow = r + 2 + k;
    const int nu = int(eu.size()) - 1;
    const int nt = int(et.size()) - 1;
    const int nn = int(rule.x.size());
    std::vector<double> partial(nu, 0.0);

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(threads > 0 ? threads : omp_get_max_threads())
#endif
    for (int pu = 0; pu < nu; ++pu) {
        const double mu = 0.5 * (eu[pu] + eu[pu + 1]);
        const double hu = 0.5 * (eu[pu + 1] - eu[pu]);
        double acc_u = 0.0;
        for (int i = 0; i < nn; ++i) {
            const double u = mu + hu * rule.x[i];
            const double one_mu = 1.0 - u;
            const double lg_u = (r - 1) * std::log1p(-u) + 2.0 * std::log(u);
            double acc_t = 0.0;
            for (int pt = 0; pt < nt; ++pt) {
                const double mt = 0.5 * (et[pt] + et[pt + 1]);
                const double ht = 0.5 * (et[pt + 1] - et[pt]);
                double s = 0.0;
                for (int j = 0; j < nn; ++j) {
                    const double t = mt + ht * rule.x[j];
                    const double one_mt = 1.0 - t;
                    double lg = lg_u + (r - as) * std::log1p(-t) + c * t * one_mu -
                                denom_pow * std::log1p(rho * one_mu * one_mt);
                    double v = std::exp(lg);
                    if (k == 1) v *= r - 2.0 * rho * one_mu * one_mt;
                    s += rule.w[j] * v;
                }
                acc_t += ht * s;
            }
            acc_u += rule.w[i] * acc_t;
        }
        partial[pu] = hu * acc_u;
    }
    double total = 0.0;
    for (double p : partial) total += p;  // fixed order: independent of threads
    return total;
}

}  // namespace

double double_integral(double rho, int r, int k, const SolverConfig& cfg, int threads) {
    if (!(rho > 0.0 && rho <= 1.0))
        throw ValidationError(ValidationError::Code::rho_out_of_range,
                              "double_integral: rho must be in (0, 1]");
    if (r < 1)
        throw ValidationError(ValidationError::Code::bad_config, "double_integral: r >= 1");
    const quad::Rule& rule = quad::gauss_legendre(cfg.quad_points);
    int lv = std::max(10, int(std::ceil(std::log2(double(r)))) + 6);
    // branch-point grading: (1-t)^(r-a*) needs h^(r-a*+1) below tol
    int lv1 = std::max(12, int(std::ceil(40.0 / (r + 1.0))) + 10);
    double prev = eval_grid(rho, r, k, quad::graded_edges(0.0, 1.0, true, lv),
                            t_edges(lv, lv1), rule, threads);
    for (int round = 0; round < 3; ++round) {
        lv += 4;
        lv1 += 6;
        const double cur = eval_grid(rho, r, k, quad::graded_edges(0.0, 1.0, true, lv),
                                     t_edges(lv, lv1), rule, threads);
        if (std::abs(cur - prev) <= cfg.tol_rel * std::abs(cur)) return cur;
        prev = cur;
    }
    return prev;
}

double pi0(double rho, int r, const SolverConfig& cfg) {
    validate_params({2, rho});
    if (r < 0) throw ValidationError(ValidationError::Code::bad_config, "r >= 0");
    if (r == 0) return 1.0 - rho;
    const double I = double_integral(rho, r, 0, cfg, 0);
    return (1.0 - rho) * std::exp((r - 2) * std::log1p(rho) + (r + 2) * std::log(rho)) *
           double(r) * (r + 1) * I;
}

double pi1(double rho, int r, const SolverConfig& cfg) {
    validate_params({2, rho});
    if (r < 0) throw ValidationError(ValidationError::Code::bad_config, "r >= 0");
    if (r == 0) return rho * (1.0 - rho) - pi0(rho, 1, cfg);
    const double I = double_integral(rho, r, 1, cfg, 0);
    return (1.0 - rho) * std::exp((r - 1) * std::log1p(rho) + (r + 2) * std::log(rho)) *
           double(r + 1) * (r + 1) * I;
}

double pi2(double rho, int r, const SolverConfig& cfg) {
    validate_params({2, rho});
    if (r < 0) throw ValidationError(ValidationError::Code::bad_config, "r >= 0");
    return (1.0 - rho) * std::pow(rho, r + 2) - pi1(rho, r + 1, cfg) - pi0(rho, r + 2, cfg);
}

double pi0_series(double rho, int r, const SolverConfig& cfg) {
    validate_params({2, rho});
    if (r < 1 || r > 8)
        throw ValidationError(ValidationError::Code::bad_config,
                              "pi0_series: supported for 1 <= r <= 8 only");
    const double as = a_star(rho);
    const double lx2 = 2.0 * (std::log(rho) - std::log1p(rho));  // log (rho/(1+rho))^2

    // inner tail S(q) = sum_{l>=q} x2^l / (l(l-1)(l-2) Gamma(l-a*)), returned
    // as value relative to its first term plus that term's log.
    auto inner = [&](int q, double& log_first) {
        log_first = q * lx2 - std::lgamma(q - as) - std::log(double(q) * (q - 1) * (q - 2));
        double tot = 0.0;
        for (int l = q; l < q + 2000; ++l) {
            const double lg = l * lx2 - std::lgamma(l - as) - std::log(double(l) * (l - 1) * (l - 2));
            const double term = std::exp(lg - log_first);
            tot += term;
            if (term < 1e-18 * tot) break;
        }
        return tot;
    };

    const double pref_log =
        std::log(2.0 * (1.0 - rho)) + (3.0 * r + 2.0) * std::log1p(rho) - (r + 2.0) * std::log(rho);
    double total = 0.0, comp = 0.0;  // Kahan
    for (int L = 0; L < cfg.max_terms; ++L) {
        double lgS;
        const double S = inner(L + r + 2, lgS);
        const double lg = std::lgamma(double(L + r + 2)) - std::lgamma(double(L + 1)) -
                          std::lgamma(double(r)) + std::lgamma(L + r + 1 - as) -
                          L * std::log(as) + lgS + pref_log;
        const double term = (L % 2 == 0 ? 1.0 : -1.0) * std::exp(lg) * S;
        const double y = term - comp;
        const double t = total + y;
        comp = (t - total) - y;
        total = t;
        if (L > 5 && std::abs(term) < cfg.tol_rel * std::abs(total)) return total;
    }
    throw NumericalError("pi0_series (m=2): term cap reached");
}

JointDistribution full_distribution(double rho, int R, const SolverConfig& cfg, int threads) {
    validate_params({2, rho});
    if (R < 4) throw ValidationError(ValidationError::Code::bad_config, "need R >= m + 2");
    JointDistribution d = make_distribution({2, rho}, R, Method::closed_form);

    std::vector<double> p0(R + 3, 0.0), p1(R + 2, 0.0);
    p0[0] = 1.0 - rho;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (threads != 1) \
    num_threads(threads > 0 ? threads : omp_get_max_threads())
#endif
    for (int r = 1; r <= R + 2; ++r) {
        p0[r] = (1.0 - rho) * std::exp((r - 2) * std::log1p(rho) + (r + 2) * std::log(rho)) *
                double(r) * (r + 1) * double_integral(rho, r, 0, cfg, 1);
        if (r <= R + 1)
            p1[r] = (1.0 - rho) * std::exp((r - 1) * std::log1p(rho) + (r + 2) * std::log(rho)) *
                    double(r + 1) * (r + 1) * double_integral(rho, r, 1, cfg, 1);
    }
    p1[0] = rho * (1.0 - rho) - p0[1];

    for (int r = 0; r <= R; ++r) {
        d.at(0, r) = p0[r];
        d.at(1, r) = p1[r];
        d.at(2, r) = (1.0 - rho) * std::pow(rho, r + 2) - p1[r + 1] - p0[r + 2];
    }
    for (auto& v : d.values)
        if (v != 0.0 && std::abs(v) < kFlushThreshold) {
            v = 0.0;
            ++d.flushed;
        }
    d.tol = cfg.tol_rel;
    return d;
}

}  // namespace psalloc::m2
