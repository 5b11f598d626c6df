#include "rbergomi/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rbergomi/quadrature.hpp"

namespace rbergomi {

namespace {
constexpr int kSingularOrder = 64;  // power-substituted endpoint panel
constexpr int kSmoothOrder = 32;    // per log-graded panel
constexpr double kPanelLogWidth = 2.0;
}  // namespace

KernelSpec::KernelSpec(double hurst) : h(hurst) {
    if (!(h > 0.0) || !(h <= 0.5))
        throw std::invalid_argument("KernelSpec: H must lie in (0, 1/2]");
}

double kernel_product_integral(const KernelSpec& k, double d1, double d2, double upper) {
    if (d1 < 0.0 || d2 < 0.0) throw std::invalid_argument("kernel_product_integral: negative offset");
    if (upper <= 0.0) return 0.0;
    if (d1 > d2) std::swap(d1, d2);
    const double hm = k.hm(), hp = k.hp();

    if (k.h == 0.5) return upper;  // kernel identically 1
    if (d1 == d2) {
        // int_0^U (d+y)^(2H-1) dy
        return (std::pow(d1 + upper, 2.0 * k.h) - std::pow(d1, 2.0 * k.h)) / (2.0 * k.h);
    }

    double acc = 0.0;
    double lo;
    if (d1 == 0.0) {
        // w = y^(H+1/2) absorbs the y^(H-1/2) factor exactly
        const double ystar = std::min(d2, upper);
        acc += integrate_gl(
                   [&](double w) { return std::pow(d2 + std::pow(w, 1.0 / hp), hm); },
                   0.0, std::pow(ystar, hp), kSingularOrder) /
               hp;
        lo = ystar;
    } else {
        lo = std::min(d1, upper);
        acc += integrate_gl(
            [&](double y) { return std::pow(d1 + y, hm) * std::pow(d2 + y, hm); },
            0.0, lo, kSingularOrder);
    }
    if (upper > lo) {
        // y = e^tau: integrand varies on O(1) scales per unit tau
        const double t0 = std::log(lo), t1 = std::log(upper);
        const int panels = std::max(1, static_cast<int>(std::ceil((t1 - t0) / kPanelLogWidth)));
        const double step = (t1 - t0) / panels;
        auto g = [&](double tau) {
            const double y = std::exp(tau);
            return std::pow(d1 + y, hm) * std::pow(d2 + y, hm) * y;
        };
        for (int i = 0; i < panels; ++i)
            acc += integrate_gl(g, t0 + i * step, t0 + (i + 1) * step, kSmoothOrder);
    }
    return acc;
}

double cov_rl_fbm(const KernelSpec& k, double t, double s) {
    if (t < 0.0 || s < 0.0) throw std::invalid_argument("cov_rl_fbm: negative time");
    const double m = std::min(t, s);
    if (m == 0.0) return 0.0;
    return kernel_product_integral(k, std::abs(t - s), 0.0, m);
}

double cov_forward_integral(const KernelSpec& k, double horizon, double r1, double r2) {
    if (!(horizon > 0.0)) throw std::invalid_argument("cov_forward_integral: horizon must be > 0");
    if (r1 < horizon || r2 < horizon)
        throw std::domain_error("cov_forward_integral: forward dates must be >= horizon");
    return kernel_product_integral(k, r1 - horizon, r2 - horizon, horizon);
}

double cov_cross(const KernelSpec& k, double t, double u) {
    if (t < 0.0 || u < 0.0) throw std::invalid_argument("cov_cross: negative time");
    const double m = std::min(t, u);
    if (m == 0.0) return 0.0;
    const double hp = k.hp();
    return (std::pow(t, hp) - std::pow(t - m, hp)) / hp;
}

}  // namespace rbergomi
