#pragma once

#include <cstddef>
#include <vector>

namespace rbergomi {

// Gauss-Legendre rule on [-1, 1].
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Nodes/weights computed by Newton iteration on the Legendre recurrence and
// cached per order.
const GaussLegendre& gauss_legendre(int n);

// Rule mapped onto [a, b].
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;

    static QuadratureRule gauss_legendre_on(double a, double b, int n);
};

template <typename F>
double integrate_gl(F&& f, double a, double b, int n) {
    const auto& rule = gauss_legendre(n);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        acc += rule.weights[i] * f(mid + half * rule.nodes[i]);
    return acc * half;
}

}  // namespace rbergomi
