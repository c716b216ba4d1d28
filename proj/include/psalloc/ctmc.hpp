#pragma once

#include <Eigen/SparseCore>

#include "psalloc/model.hpp"

namespace psalloc {

/// How pi(k, R+1) is expressed in terms of pi(k, R) when the strip is cut at R.
///  - asymptotic: rho * ((R+1)/R)^(k-m), the limiting level ratio including
///    its algebraic factor; exponentially accurate and the default.
///  - geometric:  plain rho.
///  - zero:       pi(k, R+1) = 0; needs a larger R for the same interior accuracy.
enum class TailClosure { asymptotic, geometric, zero };

const char* closure_name(TailClosure c);
TailClosure closure_from_name(const std::string& name);

/// The truncated balance equations in sparse form. Unknown ordering is
/// level-major: index(k, r) = r*(m+1) + k, which keeps the bandwidth at m+1.
/// The row of state (m, R) is replaced by the normalization row
/// sum_{k+r<=R} pi(k,r) = 1 - rho^(R+1), fixing the scale of the otherwise
/// rank-deficient system.
struct BalanceSystem {
    ModelParams params;
    int R = 0;
    TailClosure closure = TailClosure::asymptotic;
    Eigen::SparseMatrix<double> A;
    Eigen::VectorXd b;
    int normalization_row = 0;

    int index(int k, int r) const { return r * (params.m + 1) + k; }
    int rows() const { return (params.m + 1) * (R + 1); }
};

BalanceSystem assemble(const ModelParams& params, int R,
                       TailClosure closure = TailClosure::asymptotic);

/// Stationary distribution of the truncated chain.
///
/// Production path is block elimination over levels r = R..1: level r is
/// entered only through the transition (m, r-1) -> (m, r), so the level
/// vector satisfies pi_r = rho * pi(m, r-1) * w_r with w_r from an
/// (m+1)x(m+1) M-matrix solve. The multiplicative cascade keeps every entry
/// accurate in the relative sense, which a flat LU on the assembled system
/// cannot do across the ~rho^R dynamic range. The level-0 back-substitution
/// uses the rows k = m..1 plus the (m,0) corner; the (0,0) corner is the
/// redundant row whose residual is reported as the solution quality.
JointDistribution solve_stationary(const ModelParams& params, const SolverConfig& cfg = {},
                                   TailClosure closure = TailClosure::asymptotic);

/// Direct sparse LU on the assembled system. Kept as an independent route for
/// cross-checks; its absolute error floor (~1e-17) limits relative accuracy
/// of entries far below the scale of pi(0,0).
JointDistribution solve_assembled(const BalanceSystem& sys);

/// Largest residual of the balance rows (in/out flow mismatch), scaled by the
/// anti-diagonal magnitude (1-rho) rho^N of each state's level. The (0,0)
/// corner row is redundant given the others plus normalization; it absorbs
/// the truncation-boundary imbalance (~rho^(R+1)) and can be skipped.
double max_balance_residual(const JointDistribution& d, TailClosure closure,
                            bool skip_redundant_corner = false);

}  // namespace psalloc
