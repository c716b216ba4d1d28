#include "psalloc/model.hpp"

#include <cmath>
#include <cstring>

namespace psalloc {

ModelParams validate_params(const ModelParams& p) {
    if (!(p.rho > 0.0))
        throw ValidationError(ValidationError::Code::rho_out_of_range,
                              "rho out of range: rho must be positive, got " + std::to_string(p.rho));
    if (!(p.rho < 1.0))
        throw ValidationError(ValidationError::Code::unstable,
                              "unstable: rho must be < 1 for a stationary regime, got " + std::to_string(p.rho));
    if (p.m < 1)
        throw ValidationError(ValidationError::Code::m_out_of_range,
                              "m out of range: need m >= 1, got " + std::to_string(p.m));
    return p;
}

const char* method_name(Method m) {
    switch (m) {
        case Method::ctmc: return "ctmc";
        case Method::closed_form: return "closed_form";
        case Method::spectral: return "spectral";
        case Method::asymptotic: return "asymptotic";
        case Method::empirical: return "empirical";
    }
    return "?";
}

Method method_from_name(const std::string& name) {
    if (name == "ctmc") return Method::ctmc;
    if (name == "closed_form" || name == "closed") return Method::closed_form;
    if (name == "spectral") return Method::spectral;
    if (name == "asymptotic") return Method::asymptotic;
    if (name == "empirical") return Method::empirical;
    throw ValidationError(ValidationError::Code::bad_config, "unknown method: " + name);
}

JointDistribution make_distribution(const ModelParams& p, int R, Method method) {
    JointDistribution d;
    d.params = p;
    d.R = R;
    d.method = method;
    d.values.assign(std::size_t(R + 1) * (p.m + 1), 0.0);
    return d;
}

void validate_config(const SolverConfig& cfg, const ModelParams& p) {
    if (cfg.R != 0 && cfg.R < p.m + 2)
        throw ValidationError(ValidationError::Code::bad_config,
                              "truncation too small: need R >= m + 2");
    if (cfg.quad_points < 8)
        throw ValidationError(ValidationError::Code::bad_config, "quad_points must be >= 8");
    if (!(cfg.tol_rel > 0.0 && cfg.tol_rel < 1.0))
        throw ValidationError(ValidationError::Code::bad_config, "tol_rel must be in (0, 1)");
    if (cfg.max_terms < 1)
        throw ValidationError(ValidationError::Code::bad_config, "max_terms must be >= 1");
}

int default_truncation(const ModelParams& p) {
    int r = int(std::ceil(std::log(1e-16 * (1.0 - p.rho)) / std::log(p.rho)));
    return std::max(r, p.m + 2);
}

double geometric_identity_residual(const JointDistribution& d, int N) {
    if (N < 0 || N > d.R)
        throw TruncationError("anti-diagonal N=" + std::to_string(N) +
                              " not fully stored (R=" + std::to_string(d.R) + ")");
    const int m = d.params.m;
    double s = 0.0;
    for (int k = std::max(0, N - d.R); k <= std::min(m, N); ++k) s += d.pi(k, N - k);
    return std::abs(s - (1.0 - d.params.rho) * std::pow(d.params.rho, N));
}

double normalization_residual(const JointDistribution& d) {
    const int m = d.params.m;
    double s = 0.0;
    for (int r = 0; r <= d.R; ++r)
        for (int k = 0; k <= m; ++k)
            if (k + r <= d.R) s += d.pi(k, r);
    const double expected = 1.0 - std::pow(d.params.rho, d.R + 1);
    return std::abs(s - expected);
}

double min_entry(const JointDistribution& d) {
    double mn = 0.0;
    for (double v : d.values) mn = std::min(mn, v);
    return mn;
}

}  // namespace psalloc
