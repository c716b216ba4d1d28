#pragma once

#include "psalloc/model.hpp"

namespace psalloc {

/// Heavy-traffic value on the Y = eps*r scale. The two-term form can go
/// negative where the expansion breaks down (small Y); the sign is flagged,
/// never clamped.
struct HeavyTrafficValue {
    double value = 0.0;
    bool negative = false;
};

/// pi(k,r) ~ eps^(m-k+1) (m!/k!) e^-Y Y^(k-m) [1 - eps(Y/2 + m +
/// (m^2+(2-k)m-k)/Y)], Y = eps*r, with `terms` selecting the 1- or 2-term
/// bracket. Requires r >= 1 (the formula is invalid as Y -> 0).
HeavyTrafficValue heavy_traffic_pi(int m, int k, double epsilon, int r, int terms);

/// Fixed-rho tail law pi(k,r) ~ (1-rho) rho^(m+r) r^(k-m) m!/k!.
double tail_pi(int m, int k, double rho, int r);

/// Leading boundary-layer coefficient Q0(k,r) on the r = O(1) scale,
/// pi(k,r) = eps*(Q0 + eps*Q1 + ...). Closed forms exist for m = 1 and
/// m = 2 only.
double boundary_layer_Q0(int m, int k, int r, const SolverConfig& cfg = {});

/// First boundary-layer correction for m = 1.
double boundary_layer_Q1_m1(int k, int r, const SolverConfig& cfg = {});

}  // namespace psalloc
