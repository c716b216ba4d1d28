#pragma once

#include <vector>

namespace psalloc {

/// Regularized upper incomplete gamma Q(a, x) = Gamma(a, x)/Gamma(a).
/// Series for x < a + 1, continued fraction otherwise.
double gamma_q(double a, double x);

/// P[chi2_dof >= stat].
double chi_square_pvalue(double stat, int dof);

struct ChiSquareResult {
    double stat = 0.0;
    int dof = 0;          // bins - 1
    double pvalue = 1.0;
    int bins = 0;         // cells kept individually
    int merged = 0;       // cells folded into the common tail bin
};

/// Pearson chi-square of observed counts against expected probabilities.
/// Cells with expected count below min_expected are merged into one tail
/// bin together with the leftover probability mass (1 - sum(expected_probs)).
ChiSquareResult chi_square_fit(const std::vector<long long>& observed,
                               const std::vector<double>& expected_probs,
                               long long total_observed, double min_expected = 5.0);

/// Two-sided 99% critical value of Student's t with df degrees of freedom.
double t_critical_99(int df);

}  // namespace psalloc
