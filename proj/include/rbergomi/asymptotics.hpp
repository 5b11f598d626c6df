#pragma once

#include <optional>

#include "rbergomi/model.hpp"

namespace rbergomi {

enum class Underlying { Vix, Spx };

// Short-maturity smile limits: level of I_T, limit of S_T / T^lambda and of
// C_T / T^gamma. VIX: lambda = 0, gamma = 3H - 1/2 (curvature needs H < 1/6).
// SPX: lambda = H - 1/2, no curvature formula.
struct SmileAsymptotics {
    Underlying underlying = Underlying::Vix;
    double level = 0.0;
    double skew_value = 0.0;
    double skew_exponent = 0.0;
    std::optional<double> curvature_value;
    double curvature_exponent = 0.0;
};

// J_i = int_0^Delta E[D^i_0 v_r] dr,  G_ij = int_0^Delta E[D^j_0 D^i_0 v_r] dr.
struct JGTensors {
    double j1 = 0.0, j2 = 0.0;
    double g11 = 0.0, g12 = 0.0, g22 = 0.0;
    double norm_j() const;
};

// Symmetric 3-index coefficients entering the curvature, stored with the
// time-limit factor 2/(1-6H) already applied:
//   t_ijk = lim_{T->0} T^(1/2-3H) int_T^(T+Delta) E[D^kD^jD^i_0 v_r] dr.
struct ThirdDerivativeTensor {
    double t111 = 0.0, t112 = 0.0, t122 = 0.0, t222 = 0.0;
    double get(int i, int j, int k) const;
};

JGTensors compute_jg(const ModelParams& p);
ThirdDerivativeTensor third_derivative_limit(const ModelParams& p);  // needs H < 1/6

// Generic VIX limits from the tensors. Curvature only when a tensor is given
// (requires H < 1/6 upstream). Throws on a degenerate model (norm_j == 0).
SmileAsymptotics vix_limits_generic(const JGTensors& jg, double vix0_sq,
                                    const std::optional<ThirdDerivativeTensor>& third,
                                    double delta, double h);

// psi(rho, nu, eta, chi) = sqrt((chi nu + chib eta rho)^2 + chib^2 eta^2 rhob^2)
double psi_two_factor(const ModelParams& p);

// Explicit two-factor closed forms. Curvature included iff want_curvature;
// requesting it with H >= 1/6 is a domain error.
SmileAsymptotics vix_limits_rbergomi(const ModelParams& p, bool want_curvature = true);

// Specializations at rho = 1 and rho = 0 (independent algebraic routes used
// as cross-checks of the general formula).
SmileAsymptotics vix_limits_rho1(const ModelParams& p, bool want_curvature = true);
SmileAsymptotics vix_limits_rho0(const ModelParams& p, bool want_curvature = true);

// SPX: level sqrt(v0); skew coefficient of T^(H-1/2).
SmileAsymptotics spx_limits(const ModelParams& p);

// Normalised calibration functions at chi = 1/2 with a_t = eta rho / nu,
// b_t = eta rhob / nu:
//   I0 = nu C_I psi_t,  S0 = nu C_S Phi_S / psi_t^3,  C0 = nu C_C Phi_C / psi_t^5.
struct NormalizedFunctions {
    double psi = 0.0;
    double phi_s = 0.0;
    double phi_c = 0.0;
    double c_i = 0.0;
    double c_s = 0.0;
    double c_c = 0.0;
};

NormalizedFunctions normalized_functions(double a_t, double b_t, double h, double delta);

}  // namespace rbergomi
