#include "psalloc/spectral.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <cmath>

namespace psalloc {

namespace {

// product form of C(l+r, r) = prod_{i=1..l} (r+i)/i; exact continuation to
// real r for the shifted boundary-row arguments
long double binom_lr(int l, long double r) {
    long double out = 1.0L;
    for (int i = 1; i <= l; ++i) out *= (r + i) / i;
    return out;
}

// The convolution cancels by roughly (1/(1-rho^2))^j, so it is carried in
// extended precision; heavy traffic would otherwise lose the boundary rows.
long double bcoef_ld(long double rho, int j, long double s) {
    if (j < 0 || j > 63)
        throw ValidationError(ValidationError::Code::bad_config,
                              "bcoef: order out of range (m too large for this method)");
    const long double a = s / (1.0L - rho) + 1.0L;
    const long double b = rho * s / (1.0L - rho) - 1.0L;
    // u_n = [z^n](1-z)^-a, v_n = [z^n](1-rho z)^b
    long double u[64], v[64];
    u[0] = v[0] = 1.0L;
    for (int n = 1; n <= j; ++n) {
        u[n] = u[n - 1] * (a + n - 1) / n;
        v[n] = v[n - 1] * (-rho) * (b - n + 1) / n;
    }
    long double out = 0.0L;
    for (int i = 0; i <= j; ++i) out += u[j - i] * v[i];
    return out;
}

}  // namespace

double bcoef(double rho, int j, double s) {
    return double(bcoef_ld(rho, j, s));
}

AKernel AKernel::build(const ModelParams& params_in, int smax) {
    const ModelParams params = validate_params(params_in);
    if (smax < 0)
        throw ValidationError(ValidationError::Code::bad_config, "AKernel: smax >= 0");
    AKernel k;
    k.params_ = params;
    k.smax_ = smax;
    const int jmax = params.m + 1;
    if (jmax + 1 > 63)
        throw ValidationError(ValidationError::Code::bad_config, "AKernel: m too large");
    k.b_.assign(std::size_t(jmax + 1) * (smax + 1), 0.0);
    for (int s = 0; s <= smax; ++s)
        for (int j = 0; j <= jmax; ++j) {
            const double v = bcoef(params.rho, j, double(s));
            if (!std::isfinite(v))
                throw NumericalError("AKernel coefficient overflow at j=" + std::to_string(j) +
                                     " s=" + std::to_string(s));
            k.b_[std::size_t(j) * (smax + 1) + s] = v;
        }
    return k;
}

double AKernel::B(int j, int s) const {
    return b_[std::size_t(j) * (smax_ + 1) + s];
}

double AKernel::A(int k, int r, int l) const {
    if (l > k) return 0.0;
    if (k > params_.m + 1 || l < 0 || r < 0 || l + r > smax_)
        throw ValidationError(ValidationError::Code::bad_config, "AKernel::A: index out of range");
    return B(k - l, l + r);
}

double compute_A(const ModelParams& params_in, int k, int r, int l) {
    const ModelParams params = validate_params(params_in);
    if (l < 0 || r < 0 || k < 0 || k > params.m + 1)
        throw ValidationError(ValidationError::Code::bad_config, "compute_A: index out of range");
    if (l > k) return 0.0;
    return bcoef(params.rho, k - l, double(l + r));
}

double d0(const ModelParams& params, const AKernel& kernel) {
    return (1.0 - params.rho) * std::pow(params.rho, params.m) / kernel.A(params.m, 0, 0);
}

double A_identity_residual(const AKernel& kernel, int m, int n) {
    if (n < 1 || n > m)
        throw ValidationError(ValidationError::Code::bad_config, "A_identity_residual: 1 <= n <= m");
    const double rho = kernel.params().rho;
    double rhs = 0.0;
    for (int l = n; l <= m; ++l)
        rhs += n * (1.0 - std::pow(rho, m - l + 1)) / (l * (1.0 - rho)) * kernel.A(l, 0, n);
    return std::abs(kernel.A(m, 0, n) - rhs);
}

namespace {

// Coefficient of d(r-1+j), j = 0..m+2, in the k = m boundary row at level r,
// after clearing its (m+r+1) pole analytically. The row reads
//   (m+1)/(m+r+1) * sum_l (-1)^l C(l+r,r) A(m+1,r;l) d(r+l)
//     = rho * sum_l (-1)^l C(l+r-1,r-1) A(m,r-1;l) d(r-1+l).
// Every coefficient is a polynomial in r, so it can be evaluated at the
// shifted (possibly negative) arguments the telescoping needs.
long double row_entry(int m, long double rho, long double r, int j) {
    long double c = 0.0L;
    const int l = j - 1;
    if (l >= 0 && l <= m + 1) {
        long double P;
        if (l == m + 1)
            P = binom_lr(m, r);  // (m+1)/(m+r+1) * C(m+1+r, r), cancelled exactly
        else
            P = (m + 1) * binom_lr(l, r) * bcoef_ld(rho, m + 1 - l, l + r) / (m + r + 1);
        c += (l % 2 == 0 ? P : -P);
    }
    if (j >= 0 && j <= m) {
        const long double Q = rho * binom_lr(j, r - 1) * bcoef_ld(rho, m - j, j + r - 1);
        c -= (j % 2 == 0 ? Q : -Q);
    }
    return c;
}

// theta(r) coefficients: gamma_l(r) = sum_{j=l..m+1} c_{j+1}(r - (j-l)).
void theta_coeffs(int m, long double rho, int r, std::vector<long double>& g) {
    g.assign(m + 2, 0.0L);
    for (int l = 0; l <= m + 1; ++l)
        for (int j = l; j <= m + 1; ++j)
            g[l] += row_entry(m, rho, (long double)(r) - (j - l), j + 1);
}

}  // namespace

DSequence solve_d(const ModelParams& params_in, const AKernel& kernel,
                  const SolverConfig& cfg) {
    const ModelParams params = validate_params(params_in);
    validate_config(cfg, params);
    const int m = params.m;
    const double rho = params.rho;
    const int R = cfg.R > 0 ? cfg.R : default_truncation(params);
    const int D = R + m + 8;
    if (kernel.smax() < D + 1)
        throw ValidationError(ValidationError::Code::bad_config,
                              "solve_d: kernel must cover s <= R + m + 9");

    const int n = D + 1;
    std::vector<Eigen::Triplet<double>> trip;
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
    // column scaling d(r) = rho^r e(r) keeps the matrix entries O(1)
    auto cs = [&](int r) { return std::pow(rho, r); };

    int row = 0;
    trip.emplace_back(row, 0, 1.0);
    rhs[row] = d0(params, kernel);
    ++row;

    DSequence out;
    std::vector<long double> g, gprev;
    theta_coeffs(m, rho, 0, gprev);
    for (int r = 0; r <= D - m - 1; ++r, ++row) {
        if (r == 0)
            g = gprev;
        else {
            theta_coeffs(m, rho, r, g);
            // verify the perfect-difference property: c_0(r) = -gamma_0(r-1)
            const long double c0 = row_entry(m, rho, (long double)(r), 0);
            long double scale = std::abs(c0);
            for (long double v : gprev) scale = std::max(scale, std::abs(v));
            out.telescope_residual = std::max(out.telescope_residual,
                                              double(std::abs(c0 + gprev[0]) / scale));
            gprev = g;
        }
        long double rowscale = 0.0L;
        for (int l = 0; l <= m + 1; ++l)
            rowscale = std::max(rowscale, std::abs(g[l] * (long double)cs(r + l)));
        for (int l = 0; l <= m + 1; ++l)
            trip.emplace_back(row, r + l, double(g[l] * (long double)cs(r + l) / rowscale));
    }
    for (int r = D - m + 1; r <= D; ++r, ++row) {
        trip.emplace_back(row, r, 1.0);
        trip.emplace_back(row, r - 1, -rho * cs(r - 1) / cs(r));
    }
    if (row != n) throw NumericalError("solve_d: row count mismatch");
    if (out.telescope_residual > 1e-8)
        throw NumericalError("solve_d: boundary rows failed the telescoping check");

    Eigen::SparseMatrix<double> A(n, n);
    A.setFromTriplets(trip.begin(), trip.end());
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.analyzePattern(A);
    lu.factorize(A);
    if (lu.info() != Eigen::Success)
        throw NumericalError("solve_d: factorization failed (system ill-conditioned)");
    Eigen::VectorXd e = lu.solve(rhs);
    if (lu.info() != Eigen::Success) throw NumericalError("solve_d: solve failed");

    out.params = params;
    out.R = R;
    out.D = D;
    out.d.resize(n);
    for (int r = 0; r <= D; ++r) out.d[r] = e[r] * cs(r);

    // positivity: d(r) = pi(0,r) for r >= 1; negativity flags insufficient R
    for (int r = 0; r <= R + m; ++r)
        if (!(out.d[r] > 0.0))
            throw NumericalError("solve_d: negative d(" + std::to_string(r) +
                                 "); increase the truncation level");

    // corner condition (1+rho) pi(m,0) = rho pi(m-1,0) + pi(m,1)/(m+1),
    // implied by theta(0) = 0; verified here as a diagnostic
    {
        auto piA = [&](int k, int r) {
            long double s = 0.0L;
            for (int l = 0; l <= k; ++l) {
                const long double t =
                    out.d[r + l] * binom_lr(l, (long double)r) * (long double)kernel.A(k, r, l);
                s += (l % 2 == 0) ? t : -t;
            }
            return double(s);
        };
        double pm1_0 = (1.0 - rho) * std::pow(rho, m - 1);
        for (int l = 0; l < m - 1; ++l)
            pm1_0 -= piA(l, 1) / (l + 1) * (1.0 - std::pow(rho, m - 1 - l)) / (1.0 - rho);
        out.corner_residual = std::abs((1.0 + rho) * piA(m, 0) - rho * pm1_0 -
                                       piA(m, 1) / (m + 1));
    }

    // residuals of the raw order-(m+2) rows, scaled by the largest term
    for (int r = 1; r <= D - m - 1; ++r) {
        long double lhs = 0.0L, scale = 0.0L;
        for (int j = 0; j <= m + 2; ++j) {
            const long double t =
                row_entry(m, rho, (long double)(r), j) * (long double)out.d[r - 1 + j];
            lhs += t;
            scale = std::max(scale, std::abs(t));
        }
        out.max_row_residual = std::max(out.max_row_residual, double(std::abs(lhs) / scale));
    }
    if (out.max_row_residual > std::max(cfg.tol_rel, 1e-12) * 1e3)
        throw NumericalError("solve_d: boundary-row residual too large");
    return out;
}

JointDistribution reconstruct_pi(const ModelParams& params_in, const AKernel& kernel,
                                 const DSequence& dseq) {
    const ModelParams params = validate_params(params_in);
    const int m = params.m;
    const double rho = params.rho;
    const int R = dseq.R;
    if (kernel.smax() < R + m)
        throw ValidationError(ValidationError::Code::bad_config,
                              "reconstruct_pi: kernel too small");
    JointDistribution d = make_distribution(params, R, Method::spectral);
    for (int r = 1; r <= R; ++r)
        for (int k = 0; k <= m; ++k) {
            long double s = 0.0L;
            for (int l = 0; l <= k; ++l) {
                const long double t = dseq.d[r + l] * binom_lr(l, (long double)r) *
                                      (long double)kernel.A(k, r, l);
                s += (l % 2 == 0) ? t : -t;
            }
            d.at(k, r) = double(s);
        }
    // row r = 0 by summing the r = 0 balance rows down from the (0,0) corner:
    // pi(k,0) = (1-rho) rho^k - sum_{l<k} pi(l,1)/(l+1) * (1-rho^(k-l))/(1-rho)
    for (int k = 0; k <= m; ++k) {
        double s = 0.0;
        for (int l = 0; l < k; ++l)
            s += d.pi(l, 1) / (l + 1) * (1.0 - std::pow(rho, k - l)) / (1.0 - rho);
        d.at(k, 0) = (1.0 - rho) * std::pow(rho, k) - s;
    }
    for (auto& v : d.values)
        if (v != 0.0 && std::abs(v) < kFlushThreshold) {
            v = 0.0;
            ++d.flushed;
        }
    d.tol = std::max(dseq.max_row_residual, dseq.telescope_residual);
    return d;
}

JointDistribution solve_spectral(const ModelParams& params_in, const SolverConfig& cfg) {
    const ModelParams params = validate_params(params_in);
    validate_config(cfg, params);
    const int R = cfg.R > 0 ? cfg.R : default_truncation(params);
    SolverConfig c = cfg;
    c.R = R;
    AKernel kernel = AKernel::build(params, R + params.m + 10);
    DSequence dseq = solve_d(params, kernel, c);
    JointDistribution out = reconstruct_pi(params, kernel, dseq);
    out.tol = std::max(out.tol, dseq.corner_residual);
    return out;
}

}  // namespace psalloc
