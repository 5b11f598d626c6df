#pragma once

namespace rbergomi {

// Riemann-Liouville fractional kernel (t - s)^(H - 1/2) with H in (0, 1/2].
struct KernelSpec {
    explicit KernelSpec(double hurst);

    double h;
    double hp() const { return h + 0.5; }
    double hm() const { return h - 0.5; }
};

// Core integral shared by all kernel covariances:
//   int_0^U (d1 + y)^(H-1/2) (d2 + y)^(H-1/2) dy,   d1, d2 >= 0, U >= 0.
// Closed form when d1 == d2; otherwise the integrable endpoint singularity is
// removed by the power substitution w = y^(H+1/2) and the smooth remainder is
// integrated on logarithmically graded Gauss-Legendre panels.
double kernel_product_integral(const KernelSpec& k, double d1, double d2, double upper);

// Cov(W^H_t, W^H_s) = int_0^min(t,s) (t-u)^(H-1/2) (s-u)^(H-1/2) du.
double cov_rl_fbm(const KernelSpec& k, double t, double s);

// Cov(Z_r1, Z_r2) with Z_r = int_0^T (r-s)^(H-1/2) dW_s,  r1, r2 >= T > 0.
double cov_forward_integral(const KernelSpec& k, double horizon, double r1, double r2);

// Cov(W^H_t, W_u) = [t^(H+1/2) - (t - min(t,u))^(H+1/2)] / (H+1/2).
double cov_cross(const KernelSpec& k, double t, double u);

}  // namespace rbergomi
