#pragma once

#include "psalloc/model.hpp"

namespace psalloc {

/// Cache of the separable-solution coefficients A(k, r; l). Built once
/// (single writer); afterwards all reads are const and safe concurrently. A depends only on
/// j = k - l and s = l + r: A(k,r;l) = B(k-l, l+r) where B(j, s) is the z^j
/// Taylor coefficient of (1-z)^(-s/(1-rho)-1) (1-rho z)^(rho s/(1-rho)-1).
/// Only orders j <= m+1 are ever needed, so each coefficient is a finite
/// convolution of the two generalized-binomial series.
class AKernel {
  public:
    static AKernel build(const ModelParams& params, int smax);

    /// A(k, r; l). Zero for l > k (the integrand is analytic); requires
    /// k <= m+1, r >= 0, l >= 0 and l + r <= smax().
    double A(int k, int r, int l) const;

    /// B(j, s) from the cache (integer s in [0, smax]).
    double B(int j, int s) const;

    const ModelParams& params() const { return params_; }
    int smax() const { return smax_; }

  private:
    ModelParams params_;
    int smax_ = 0;
    std::vector<double> b_;  // (m+2) x (smax+1)
};

/// Standalone evaluation of the z^(k-l) coefficient by series convolution.
/// Matches AKernel::A; also accepts non-integer "r" arguments through bcoef.
double compute_A(const ModelParams& params, int k, int r, int l);

/// B(j, s) at arbitrary real s (used by the telescoped boundary rows, which
/// evaluate the polynomial coefficient functions at shifted arguments).
double bcoef(double rho, int j, double s);

/// d(0) = (1-rho) rho^m / A(m, 0; 0).
double d0(const ModelParams& params, const AKernel& kernel);

/// |A(m,0;n) - sum_{l=n}^m n (1-rho^(m-l+1)) / (l (1-rho)) A(l,0;n)|.
double A_identity_residual(const AKernel& kernel, int m, int n);

/// Coefficients d(r) of the separable expansion, with diagnostics.
struct DSequence {
    ModelParams params;
    int R = 0;  // reconstruction range the sequence supports
    int D = 0;  // highest solved index
    std::vector<double> d;
    double max_row_residual = 0.0;   // worst scaled residual of the raw order-(m+2) rows
    double corner_residual = 0.0;    // residual of the (m,0) corner condition
    double telescope_residual = 0.0; // verification of the perfect-difference property
};

/// Solves the one-dimensional boundary-value problem for d(r).
///
/// The raw boundary rows (order m+2 in r) telescope: row_r = theta(r) -
/// theta(r-1) for an order-(m+1) functional theta whose coefficients follow
/// mechanically from the row coefficients evaluated at shifted arguments.
/// Since d decays and the theta coefficients grow only polynomially,
/// theta(r) = 0 for every r >= 0, and theta(0) = 0 is exactly the (m,0)
/// corner condition (for m = 1 and m = 2 it reproduces the known closed
/// reductions). The solved system is therefore
///     d(0) anchor + theta(r) = 0 for 0 <= r <= D-m-1 + geometric tail rows,
/// which has no near-constant null direction; a solve of the raw rows
/// instead spreads an O(eps) absolute error floor across all r and loses
/// the relative accuracy of the small d(r). The perfect-difference property
/// is verified row by row during assembly and reported in the diagnostics.
DSequence solve_d(const ModelParams& params, const AKernel& kernel,
                  const SolverConfig& cfg = {});

/// pi(k,r) = sum_l (-1)^l d(r+l) C(l+r, r) A(k,r;l) for r >= 1; the r = 0 row
/// from the corner-condition summation formula using the pi(., 1) row.
JointDistribution reconstruct_pi(const ModelParams& params, const AKernel& kernel,
                                 const DSequence& dseq);

/// Convenience: kernel build + d solve + reconstruction.
JointDistribution solve_spectral(const ModelParams& params, const SolverConfig& cfg = {});

}  // namespace psalloc
