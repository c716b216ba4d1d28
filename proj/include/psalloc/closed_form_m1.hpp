#pragma once

#include "psalloc/model.hpp"

namespace psalloc {

/// Exact m = 1 representations, each computed independently so they can
/// cross-validate one another and the numerical solvers.
namespace m1 {

/// pi(0,r) = (1-rho)(1+rho)^(r-1) Int_1^{1+rho} (1 - 1/u)^r du  (r >= 1);
/// pi(0,0) = 1 - rho.
double pi0_integral(double rho, int r, const SolverConfig& cfg = {});

/// pi(0,r) = ((1-rho)/(1+rho)) rho^r sum_{n>=1} n/(r+n) (rho/(1+rho))^n.
/// The term ratio is below rho/(1+rho) < 1/2, giving a provable geometric
/// tail bound; this form is the authority for large r.
double pi0_series(double rho, int r, const SolverConfig& cfg = {});

/// pi(0,r) = (1-rho) rho^(r+1) Int_0^1 u^r / (1+rho-u*rho)^2 du  (r >= 1).
double pi0_integral_alt(double rho, int r, const SolverConfig& cfg = {});

/// pi(1,r) = (1-rho) rho^(r+1) (r+1) Int_0^1 u^r / (1+rho-u*rho) du.
double pi1_integral_u(double rho, int r, const SolverConfig& cfg = {});

/// pi(1,r) = (1-rho)(1+rho)^r (r+1) Int_1^{1+rho} (1/u)(1 - 1/u)^r du.
double pi1_integral_w(double rho, int r, const SolverConfig& cfg = {});

/// pi(1,r) = (1-rho) rho^(r+1) - pi(0,r+1), from the anti-diagonal identity.
double pi1_identity(double rho, int r, const SolverConfig& cfg = {});

/// Consensus pi(1,r): evaluates the three representations, checks pairwise
/// agreement within cfg.tol_rel (throws NumericalError on disagreement) and
/// returns the identity form. Integral forms are skipped for r > 500, where
/// the series route is authoritative.
double pi1(double rho, int r, const SolverConfig& cfg = {});

/// Full table for k in {0,1}, r <= R. Row 0 from the series, row 1 from the
/// anti-diagonal identity.
JointDistribution full_distribution(double rho, int R, const SolverConfig& cfg = {});

}  // namespace m1
}  // namespace psalloc
