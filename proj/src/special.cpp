#include "psalloc/special.hpp"

#include <cmath>
#include <stdexcept>

namespace psalloc {

namespace {

double gamma_q_series(double a, double x) {
    // P(a,x) by series, return 1 - P.
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int n = 0; n < 1000; ++n) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::abs(del) < std::abs(sum) * 1e-16) break;
    }
    return 1.0 - sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_q_cf(double a, double x) {
    // Lentz continued fraction for Q(a,x).
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 1000; ++i) {
        double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double gamma_q(double a, double x) {
    if (!(a > 0.0) || x < 0.0) throw std::invalid_argument("gamma_q: need a > 0, x >= 0");
    if (x == 0.0) return 1.0;
    return (x < a + 1.0) ? gamma_q_series(a, x) : gamma_q_cf(a, x);
}

double chi_square_pvalue(double stat, int dof) {
    if (dof <= 0) throw std::invalid_argument("chi_square_pvalue: dof must be positive");
    if (stat <= 0.0) return 1.0;
    return gamma_q(0.5 * dof, 0.5 * stat);
}

ChiSquareResult chi_square_fit(const std::vector<long long>& observed,
                               const std::vector<double>& expected_probs,
                               long long total_observed, double min_expected) {
    if (observed.size() != expected_probs.size())
        throw std::invalid_argument("chi_square_fit: size mismatch");
    ChiSquareResult res;
    double tail_exp = double(total_observed);
    long long tail_obs = total_observed;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        const double e = expected_probs[i] * total_observed;
        if (e >= min_expected) {
            res.stat += (observed[i] - e) * (observed[i] - e) / e;
            res.bins += 1;
            tail_exp -= e;
            tail_obs -= observed[i];
        } else {
            res.merged += 1;
        }
    }
    if (tail_exp >= min_expected) {
        res.stat += (tail_obs - tail_exp) * (tail_obs - tail_exp) / tail_exp;
        res.bins += 1;
    }
    res.dof = res.bins - 1;
    res.pvalue = res.dof > 0 ? chi_square_pvalue(res.stat, res.dof) : 1.0;
    return res;
}

double t_critical_99(int df) {
    // two-sided 99% (i.e. t_{0.995, df}); normal limit beyond the table
    static const double table[] = {
        63.657, 9.925, 5.841, 4.604, 4.032, 3.707, 3.499, 3.355, 3.250, 3.169,
        3.106,  3.055, 3.012, 2.977, 2.947, 2.921, 2.898, 2.878, 2.861, 2.845,
        2.831,  2.819, 2.807, 2.797, 2.787, 2.779, 2.771, 2.763, 2.756, 2.750};
    if (df < 1) throw std::invalid_argument("t_critical_99: df must be >= 1");
    if (df <= 30) return table[df - 1];
    if (df <= 40) return 2.704;
    if (df <= 60) return 2.660;
    if (df <= 120) return 2.617;
    return 2.576;
}

}  // namespace psalloc
