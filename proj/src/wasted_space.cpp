#include "psalloc/wasted_space.hpp"

#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "psalloc/ctmc.hpp"
#include "psalloc/spectral.hpp"

namespace psalloc {

namespace {

std::vector<double> level0_row(int m, double rho, Method method) {
    SolverConfig cfg;
    JointDistribution d = (method == Method::spectral)
                              ? solve_spectral({m, rho}, cfg)
                              : solve_stationary({m, rho}, cfg);
    std::vector<double> row(m + 1);
    for (int k = 0; k <= m; ++k) row[k] = d.pi(k, 0);
    return row;
}

}  // namespace

WastedSpaceDistribution w_pmf(double rho, int lmax, const WastedSpaceConfig& cfg) {
    validate_params({1, rho});
    if (lmax < 0)
        throw ValidationError(ValidationError::Code::bad_config, "lmax must be >= 0");
    if (cfg.method != Method::ctmc && cfg.method != Method::spectral)
        throw ValidationError(ValidationError::Code::bad_config,
                              "w_pmf: method must be ctmc or spectral");

    // pi(j,0;M) <= (1-rho) rho^j, so the discarded j-tail mass is below
    // rho^(jmax+1); pick jmax from that envelope.
    int jmax = cfg.jmax;
    if (jmax <= 0)
        jmax = std::max(4, int(std::ceil(std::log(cfg.tol_rel * (1.0 - rho)) / std::log(rho))));

    const int mmax = lmax + jmax;
    // row cache, one model instance per M; instances are independent
    std::vector<std::vector<double>> rows(mmax + 1);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (cfg.threads != 1) \
    num_threads(cfg.threads > 0 ? cfg.threads : omp_get_max_threads())
#endif
    for (int M = 1; M <= mmax; ++M) rows[M] = level0_row(M, rho, cfg.method);

    auto pi_j0 = [&](int j, int M) -> double {
        if (M == 0) return j == 0 ? 1.0 - rho : 0.0;  // empty system
        if (j > M) return 0.0;
        return rows[M][j];
    };

    WastedSpaceDistribution out;
    out.rho = rho;
    out.lmax = lmax;
    out.jmax = jmax;
    out.discarded_j_mass = std::pow(rho, jmax + 1);
    out.pmf.assign(lmax + 1, 0.0);
    out.pmf[0] = 1.0 - rho;
    for (int j = 1; j <= jmax; ++j) out.pmf[0] += pi_j0(j, j);
    for (int L = 1; L <= lmax; ++L) {
        double s = 0.0;
        for (int j = 1; j <= jmax; ++j) s += pi_j0(j, L + j) - pi_j0(j, L + j - 1);
        if (!(s > -1e-9))
            throw NumericalError("w_pmf: negative probability at L=" + std::to_string(L) +
                                 " (inner sum not converged)");
        out.pmf[L] = s;
    }
    double total = 0.0;
    for (int L = 0; L <= lmax; ++L) {
        total += out.pmf[L];
        out.mean += double(L) * out.pmf[L];
    }
    out.tail_mass = 1.0 - total;

    const CoffmanMitraniBand band = coffman_mitrani_band(rho);
    out.cm_bound_ok = (out.mean >= band.lower && out.mean <= band.upper);
    return out;
}

double w_mean(const WastedSpaceDistribution& dist) {
    double s = 0.0;
    for (std::size_t L = 0; L < dist.pmf.size(); ++L) s += double(L) * dist.pmf[L];
    return s;
}

CoffmanMitraniBand coffman_mitrani_band(double rho) {
    CoffmanMitraniBand b;
    b.lower = 0.5 * std::sqrt(M_PI / (1.0 - rho));
    b.upper = (M_PI * M_PI / 6.0 - 1.0) / (1.0 - rho);
    return b;
}

}  // namespace psalloc
