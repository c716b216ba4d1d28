#include "psalloc/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace psalloc::quad {

namespace {

// Newton iteration on P_n; nodes seeded by the Chebyshev-like estimate.
Rule compute_rule(int n) {
    Rule rule;
    rule.x.resize(n);
    rule.w.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        rule.x[i] = -x;
        rule.x[n - 1 - i] = x;
        double w = 2.0 / ((1.0 - x * x) * pp * pp);
        rule.w[i] = w;
        rule.w[n - 1 - i] = w;
    }
    return rule;
}

}  // namespace

const Rule& gauss_legendre(int n) {
    if (n < 2) throw std::invalid_argument("gauss_legendre: order must be >= 2");
    static std::mutex mu;
    static std::map<int, Rule> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, compute_rule(n)).first;
    return it->second;
}

std::vector<double> graded_edges(double a, double b, bool toward_a, int levels) {
    std::vector<double> e;
    e.reserve(levels + 2);
    e.push_back(a);
    for (int i = levels; i >= 1; --i) e.push_back(a + (b - a) * std::ldexp(1.0, -i));
    e.push_back(b);
    if (!toward_a) {
        std::vector<double> rev;
        rev.reserve(e.size());
        for (auto it = e.rbegin(); it != e.rend(); ++it) rev.push_back(a + b - *it);
        return rev;
    }
    return e;
}

std::vector<double> uniform_edges(double a, double b, int npanels) {
    std::vector<double> e(npanels + 1);
    for (int i = 0; i <= npanels; ++i) e[i] = a + (b - a) * i / npanels;
    return e;
}

double integrate_panels(const std::function<double(double)>& f,
                        const std::vector<double>& edges, const Rule& rule) {
    double total = 0.0;
    for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
        const double mid = 0.5 * (edges[p] + edges[p + 1]);
        const double half = 0.5 * (edges[p + 1] - edges[p]);
        double s = 0.0;
        for (std::size_t i = 0; i < rule.x.size(); ++i) s += rule.w[i] * f(mid + half * rule.x[i]);
        total += half * s;
    }
    return total;
}

double integrate_graded(const std::function<double(double)>& f, double a, double b,
                        double peak, double tol_rel, int order, int init_levels,
                        int max_levels) {
    const bool toward_a = (peak <= 0.5 * (a + b));
    const Rule& rule = gauss_legendre(order);
    double prev = integrate_panels(f, graded_edges(a, b, toward_a, init_levels), rule);
    for (int lv = init_levels + 4; lv <= max_levels; lv += 4) {
        double cur = integrate_panels(f, graded_edges(a, b, toward_a, lv), rule);
        if (std::abs(cur - prev) <= tol_rel * std::abs(cur)) return cur;
        prev = cur;
    }
    return prev;
}

}  // namespace psalloc::quad
