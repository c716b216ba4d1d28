#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace psalloc {

// All types here are immutable after construction and every operation is a
// pure function, so concurrent use needs no coordination.

/// Parameters of one model instance: m primary spaces, traffic intensity
/// rho = lambda/mu with mu normalized to 1 (so lambda = rho).
struct ModelParams {
    int m = 1;
    double rho = 0.5;
};

struct ValidationError : std::invalid_argument {
    enum class Code { rho_out_of_range, unstable, m_out_of_range, bad_config };
    Code code;
    ValidationError(Code c, const std::string& msg)
        : std::invalid_argument(msg), code(c) {}
};

/// Thrown when a solve fails for numerical reasons (maps to CLI exit 3).
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Requested index lies beyond the stored truncation.
struct TruncationError : std::out_of_range {
    using std::out_of_range::out_of_range;
};

/// Returns p unchanged if 0 < rho < 1 and m >= 1; throws otherwise,
/// with a distinct code per violated constraint.
ModelParams validate_params(const ModelParams& p);

struct StateIndex {
    int k = 0;  // occupied primary spaces, 0 <= k <= m
    int r = 0;  // occupied secondary spaces, r >= 0
    int total() const { return k + r; }
};

enum class Method { ctmc, closed_form, spectral, asymptotic, empirical };

const char* method_name(Method m);
Method method_from_name(const std::string& name);

/// Values below this are flushed to zero and counted in `flushed`.
inline constexpr double kFlushThreshold = 1e-300;

/// Rectangular table pi[k][r] for 0 <= k <= m, 0 <= r <= R.
/// Storage is level-major: index(k, r) = r*(m+1) + k.
struct JointDistribution {
    ModelParams params;
    int R = 0;
    Method method = Method::ctmc;
    double tol = 0.0;   // achieved residual estimate
    int flushed = 0;    // entries below kFlushThreshold zeroed
    std::vector<double> values;

    double pi(int k, int r) const { return values[std::size_t(r) * (params.m + 1) + k]; }
    double& at(int k, int r) { return values[std::size_t(r) * (params.m + 1) + k]; }
    std::size_t size() const { return values.size(); }
};

JointDistribution make_distribution(const ModelParams& p, int R, Method method);

struct SolverConfig {
    int R = 0;               // truncation level; 0 = choose from rho (see default_truncation)
    int quad_points = 24;    // Gauss-Legendre nodes per panel
    double tol_rel = 1e-12;  // relative tolerance for series/quadrature termination
    int max_terms = 200000;  // series-term cap
};

void validate_config(const SolverConfig& cfg, const ModelParams& p);

/// Smallest R with rho^R < 1e-16 * (1 - rho), at least m + 2. Bounds the
/// mass beyond truncation below double-precision noise. Relative accuracy
/// of the deepest ~30 levels is limited by the tail closure; callers probing
/// the tail at level r should solve with R comfortably above r.
int default_truncation(const ModelParams& p);

/// |sum_k pi(k, N-k) - (1-rho) rho^N| over the stored anti-diagonal N.
/// Throws TruncationError if N > d.R.
double geometric_identity_residual(const JointDistribution& d, int N);

/// |stored mass - expected mass| where both sums run over the anti-diagonals
/// fully inside the table (k + r <= R), so the expected mass is the exact
/// partial geometric sum 1 - rho^(R+1). Not meaningful for asymptotic tables.
double normalization_residual(const JointDistribution& d);

/// Most negative entry (0 if none). All probabilities should be >= -1e-12.
double min_entry(const JointDistribution& d);

}  // namespace psalloc
