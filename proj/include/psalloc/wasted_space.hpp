#pragma once

#include <vector>

#include "psalloc/model.hpp"

namespace psalloc {

struct WastedSpaceConfig {
    double tol_rel = 1e-10;      // j-sum truncation tolerance
    int jmax = 0;                // 0 = derive from the geometric envelope
    Method method = Method::ctmc;  // ctmc or spectral per model instance
    int threads = 0;             // 0 = OpenMP default, 1 = serial reference
};

/// P[W = L] for 0 <= L <= lmax, derived from the family of fixed-m models
/// (each per-M solve is independent, so the family runs in parallel with
/// every worker writing only its own cache slot):
/// the state (j, 0) of the model with m = M is the event "j items stored,
/// none above index M", so W-probabilities are differences of pi(j,0;M)
/// across M.
struct WastedSpaceDistribution {
    double rho = 0.0;
    int lmax = 0;
    int jmax = 0;
    std::vector<double> pmf;
    double mean = 0.0;
    double discarded_j_mass = 0.0;  // geometric bound on the truncated j tail
    double tail_mass = 0.0;         // 1 - sum(pmf): W mass beyond lmax
    bool cm_bound_ok = false;       // heavy-traffic E[W] band (diagnostic only)
};

WastedSpaceDistribution w_pmf(double rho, int lmax, const WastedSpaceConfig& cfg = {});

/// E[W] = sum L p[L] of an already-computed pmf.
double w_mean(const WastedSpaceDistribution& dist);

/// Heavy-traffic band (1/2) sqrt(pi/(1-rho)) <= E[W] <= (pi^2/6 - 1)/(1-rho).
/// Valid as rho -> 1; reported as a diagnostic at moderate rho.
struct CoffmanMitraniBand {
    double lower = 0.0;
    double upper = 0.0;
};
CoffmanMitraniBand coffman_mitrani_band(double rho);

}  // namespace psalloc
