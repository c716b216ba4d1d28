#include "psalloc/ctmc.hpp"

#include <Eigen/SparseLU>
#include <cmath>
#include <vector>

namespace psalloc {

const char* closure_name(TailClosure c) {
    switch (c) {
        case TailClosure::asymptotic: return "asymptotic";
        case TailClosure::geometric: return "geometric";
        case TailClosure::zero: return "zero";
    }
    return "?";
}

TailClosure closure_from_name(const std::string& name) {
    if (name == "asymptotic") return TailClosure::asymptotic;
    if (name == "geometric") return TailClosure::geometric;
    if (name == "zero") return TailClosure::zero;
    throw ValidationError(ValidationError::Code::bad_config, "unknown closure: " + name);
}

namespace {

double closure_ratio(TailClosure c, const ModelParams& p, int R, int k) {
    switch (c) {
        case TailClosure::asymptotic:
            return p.rho * std::pow(double(R + 1) / double(R), k - p.m);
        case TailClosure::geometric:
            return p.rho;
        case TailClosure::zero:
            return 0.0;
    }
    return 0.0;
}

}  // namespace

BalanceSystem assemble(const ModelParams& params_in, int R, TailClosure closure) {
    const ModelParams params = validate_params(params_in);
    if (R < params.m + 2)
        throw ValidationError(ValidationError::Code::bad_config,
                              "truncation too small: need R >= m + 2");
    const int m = params.m;
    const double rho = params.rho;
    BalanceSystem sys;
    sys.params = params;
    sys.R = R;
    sys.closure = closure;
    sys.normalization_row = sys.index(m, R);
    const int n = sys.rows();
    sys.b = Eigen::VectorXd::Zero(n);

    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(std::size_t(n) * 5);
    auto add = [&](int i, int j, double v) {
        if (i != sys.normalization_row) trip.emplace_back(i, j, v);
    };
    for (int r = 0; r <= R; ++r) {
        for (int k = 0; k <= m; ++k) {
            const int i = sys.index(k, r);
            const int N = k + r;
            add(i, i, rho + (N > 0 ? 1.0 : 0.0));  // flow out
            if (k >= 1) add(i, sys.index(k - 1, r), -rho);
            if (k < m) add(i, sys.index(k + 1, r), -double(k + 1) / (N + 1));
            if (r < R)
                add(i, sys.index(k, r + 1), -double(r + 1) / (N + 1));
            else
                add(i, i, -double(r + 1) / (N + 1) * closure_ratio(closure, params, R, k));
            if (k == m && r >= 1) add(i, sys.index(m, r - 1), -rho);
        }
    }
    for (int r = 0; r <= R; ++r)
        for (int k = 0; k <= m && k + r <= R; ++k)
            trip.emplace_back(sys.normalization_row, sys.index(k, r), 1.0);
    sys.b[sys.normalization_row] = 1.0 - std::pow(rho, R + 1);

    sys.A.resize(n, n);
    sys.A.setFromTriplets(trip.begin(), trip.end());
    return sys;
}

namespace {

// Solve M w = e_m where M is tridiag(lower, diag, upper) plus a dense last
// column. colm[k] holds the full (k, m) entry. Forward elimination of the
// subdiagonal keeps fill confined to that column; M is an M-matrix so no
// pivoting is needed.
void solve_level(int m, const std::vector<double>& lower, std::vector<double> diag,
                 const std::vector<double>& upper, std::vector<double> colm,
                 std::vector<double>& w) {
    std::vector<double> rhs(m + 1, 0.0);
    rhs[m] = 1.0;
    colm[m] += diag[m];
    colm[m - 1] += upper[m - 1];
    for (int k = 0; k < m; ++k) {
        const double f = lower[k + 1] / diag[k];
        if (k + 1 < m) diag[k + 1] -= f * upper[k];
        colm[k + 1] -= f * colm[k];
        rhs[k + 1] -= f * rhs[k];
    }
    w[m] = rhs[m] / colm[m];
    for (int k = m - 1; k >= 0; --k) {
        double v = rhs[k] - colm[k] * w[m];
        if (k + 1 < m) v -= upper[k] * w[k + 1];
        w[k] = v / diag[k];
    }
}

}  // namespace

JointDistribution solve_stationary(const ModelParams& params_in, const SolverConfig& cfg,
                                   TailClosure closure) {
    const ModelParams params = validate_params(params_in);
    validate_config(cfg, params);
    const int m = params.m;
    const double rho = params.rho;
    const int R = cfg.R > 0 ? cfg.R : default_truncation(params);

    // Backward sweep: w_r solves (D_r + U_r T_r) w_r = e_m with
    // T_r = rho * w_{r+1} e_m^T (T_R from the tail closure).
    std::vector<std::vector<double>> ws(R + 1, std::vector<double>(m + 1));
    std::vector<double> lower(m + 1), diag(m + 1), upper(m + 1), lastcol(m + 1);
    std::vector<double> w_next(m + 1, 0.0);
    for (int r = R; r >= 1; --r) {
        for (int k = 0; k <= m; ++k) {
            diag[k] = 1.0 + rho;
            lower[k] = (k >= 1) ? -rho : 0.0;
            upper[k] = (k < m) ? -double(k + 1) / (k + r + 1) : 0.0;
            if (r == R) {
                // closure couples pi(k,R) to itself
                diag[k] -= double(r + 1) / (k + r + 1) * closure_ratio(closure, params, R, k);
                lastcol[k] = 0.0;
            } else {
                lastcol[k] = -double(r + 1) / (k + r + 1) * rho * w_next[k];
            }
        }
        solve_level(m, lower, diag, upper, lastcol, ws[r]);
        for (double v : ws[r])
            if (!std::isfinite(v))
                throw NumericalError("level elimination produced a non-finite cascade vector");
        w_next = ws[r];
    }

    // Level 0 direction: fix pi(m,0) = 1 and walk the rows k = m..1 down.
    std::vector<double> pi0(m + 1, 0.0);
    pi0[m] = 1.0;
    for (int k = m; k >= 1; --k) {
        const double pik1 = rho * ws[1][k] * pi0[m];  // pi(k,1) for this scaling
        double v = (1.0 + rho) * pi0[k] - pik1 / (k + 1);
        if (k < m) v -= pi0[k + 1];
        pi0[k - 1] = v / rho;
    }

    JointDistribution d = make_distribution(params, R, Method::ctmc);
    for (int k = 0; k <= m; ++k) d.at(k, 0) = pi0[k];
    for (int r = 1; r <= R; ++r) {
        const double base = rho * d.pi(m, r - 1);
        for (int k = 0; k <= m; ++k) d.at(k, r) = base * ws[r][k];
    }

    // Redundant (0,0) corner row as the quality diagnostic, then normalize.
    const double corner = rho * d.pi(0, 0) - d.pi(1, 0) - d.pi(0, 1);
    double total = 0.0;
    for (int r = 0; r <= R; ++r)
        for (int k = 0; k <= m && k + r <= R; ++k) total += d.pi(k, r);
    if (!(total > 0.0) || !std::isfinite(total))
        throw NumericalError("stationary solve failed: non-positive total mass");
    const double scale = (1.0 - std::pow(rho, R + 1)) / total;
    for (auto& v : d.values) {
        v *= scale;
        if (v != 0.0 && std::abs(v) < kFlushThreshold) {
            v = 0.0;
            ++d.flushed;
        }
    }
    d.tol = std::abs(corner) * scale;

    // All solved rows must sit at machine level; the dropped redundant
    // (0,0) row absorbs the truncation-boundary imbalance (~rho^(R+1)) and
    // is reported through tol instead.
    const double resid = max_balance_residual(d, closure, true);
    if (!(resid <= std::max(cfg.tol_rel, 1e-11) * 1e3))
        throw NumericalError("stationary solve ill-conditioned: balance residual " +
                             std::to_string(resid));
    d.tol = std::max(d.tol, resid);
    return d;
}

JointDistribution solve_assembled(const BalanceSystem& sys) {
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.analyzePattern(sys.A);
    lu.factorize(sys.A);
    if (lu.info() != Eigen::Success)
        throw NumericalError("sparse LU factorization failed (matrix singular to working "
                             "precision)");
    Eigen::VectorXd x = lu.solve(sys.b);
    if (lu.info() != Eigen::Success) throw NumericalError("sparse LU solve failed");
    JointDistribution d = make_distribution(sys.params, sys.R, Method::ctmc);
    for (int i = 0; i < sys.rows(); ++i) d.values[i] = x[i];
    d.tol = 1e-10;
    return d;
}

double max_balance_residual(const JointDistribution& d, TailClosure closure,
                            bool skip_redundant_corner) {
    const int m = d.params.m;
    const double rho = d.params.rho;
    const int R = d.R;
    double worst = 0.0;
    for (int r = 0; r <= R; ++r) {
        for (int k = 0; k <= m; ++k) {
            if (skip_redundant_corner && k == 0 && r == 0) continue;
            const int N = k + r;
            double out = (rho + (N > 0 ? 1.0 : 0.0)) * d.pi(k, r);
            double in = 0.0;
            if (k >= 1) in += rho * d.pi(k - 1, r);
            if (k < m) in += double(k + 1) / (N + 1) * d.pi(k + 1, r);
            const double up = (r < R) ? d.pi(k, r + 1)
                                      : closure_ratio(closure, d.params, R, k) * d.pi(k, R);
            in += double(r + 1) / (N + 1) * up;
            if (k == m && r >= 1) in += rho * d.pi(m, r - 1);
            const double scale = (1.0 - rho) * std::pow(rho, N) + kFlushThreshold;
            worst = std::max(worst, std::abs(out - in) / scale);
        }
    }
    return worst;
}

}  // namespace psalloc
