#pragma once

#include "psalloc/model.hpp"

namespace psalloc::m2 {

/// a* = rho/(1+rho)^2, the non-integer part of the (1-t) exponent. Always
/// below 1/4.
double a_star(double rho);

/// The bare double integral shared by the m = 2 closed forms and their
/// rho -> 1 boundary-layer limits. k selects the pi(0,.) or pi(1,.) integrand
/// (denominator power r+2 vs r+3 and the [r - 2 rho (1-u)(1-t)] bracket).
/// Valid for rho in (0, 1]; r >= 1.
double double_integral(double rho, int r, int k, const SolverConfig& cfg = {},
                       int threads = 0);

/// pi(0,r) via the double-integral representation; pi(0,0) = 1 - rho.
double pi0(double rho, int r, const SolverConfig& cfg = {});

/// pi(1,r) via the double-integral representation for r >= 1;
/// pi(1,0) = rho(1-rho) - pi(0,1) via the corner identity.
double pi1(double rho, int r, const SolverConfig& cfg = {});

/// pi(2,r) = (1-rho) rho^(r+2) - pi(1,r+1) - pi(0,r+2).
double pi2(double rho, int r, const SolverConfig& cfg = {});

/// Series form of pi(0,r) with log-gamma term evaluation and compensated
/// accumulation of the alternating (-1/a*)^L outer sum. Cross-check only;
/// refuses r > 8 (the alternating growth makes larger r a cancellation
/// hazard in any fixed precision).
double pi0_series(double rho, int r, const SolverConfig& cfg = {});

/// Full table for k in {0,1,2}, r <= R. The per-r integrals are independent;
/// `threads` = 1 forces the serial reference path, 0 uses the OpenMP default.
JointDistribution full_distribution(double rho, int R, const SolverConfig& cfg = {},
                                    int threads = 0);

}  // namespace psalloc::m2
