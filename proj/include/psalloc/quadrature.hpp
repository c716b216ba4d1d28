#pragma once

#include <functional>
#include <vector>

namespace psalloc::quad {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct Rule {
    std::vector<double> x;
    std::vector<double> w;
};

/// Rule of the given order, computed once and cached. Thread-safe.
const Rule& gauss_legendre(int n);

/// Panel edges on [a, b], geometrically bisected toward one end so that the
/// smallest panel has width (b-a)/2^levels. toward_a selects which end.
std::vector<double> graded_edges(double a, double b, bool toward_a, int levels);

/// Uniform edges (npanels + 1 of them).
std::vector<double> uniform_edges(double a, double b, int npanels);

/// Sum of Gauss-Legendre approximations over consecutive panels given by `edges`.
double integrate_panels(const std::function<double(double)>& f,
                        const std::vector<double>& edges, const Rule& rule);

/// Integrate f on [a, b] with panels graded toward `peak` (must be a or b),
/// doubling the grading depth until two refinements agree to tol_rel.
double integrate_graded(const std::function<double(double)>& f, double a, double b,
                        double peak, double tol_rel, int order = 24,
                        int init_levels = 8, int max_levels = 40);

}  // namespace psalloc::quad
