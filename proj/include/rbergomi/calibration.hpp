#pragma once

#include <map>
#include <string>
#include <vector>

#include "rbergomi/model.hpp"

namespace rbergomi {

// Short-maturity limits assumed observable for the joint calibration.
struct ObservedLimits {
    double spx_level = 0.0;       // lim I_T (spot), = sqrt(v0)
    double spx_skew_coeff = 0.0;  // coefficient of T^(H-1/2) in the spot skew
    double vix_level = 0.0;       // I0
    double vix_skew = 0.0;        // S0
    double vix_curv_coeff = 0.0;  // C0, coefficient of T^(3H-1/2)
    double delta = 30.0 / 365.0;
};

// Spot-skew observations at two maturities, used to recover H by the
// power-law fit |S(T)| = c T^(H-1/2).
struct SpotSkewObservations {
    double t1 = 0.0, skew1 = 0.0;
    double t2 = 0.0, skew2 = 0.0;
};

struct SpotCalibration {
    double v0 = 0.0;
    double h = 0.0;
    double skew_coeff = 0.0;  // c in S(T) = c T^(H-1/2), signed
};

// v0 = level^2; H = 1/2 + log(S(T1)/S(T2)) / log(T1/T2). Throws on skews of
// mixed sign or zero, or H outside (0, 1/2) (message carries the raw value).
SpotCalibration calibrate_spot(double spx_level, const SpotSkewObservations& obs);

struct VixRoot {
    double nu = 0.0;
    double a_t = 0.0;  // eta rho / nu
    double b_t = 0.0;  // eta rhob / nu, >= 0
    double eta = 0.0;
    double rho = 0.0;
    double residual = 0.0;
};

struct VixCalibration {
    std::vector<VixRoot> roots;  // deduplicated, sorted by a_t
    bool converged = false;
    bool ambiguous = false;  // several distinct roots (the quotient system
                             // admits a one-parameter solution family when the
                             // targets are exactly model-consistent)
    double best_residual = 0.0;
    double quotient_mismatch = 0.0;  // deviation of the two quotients from the
                                     // structural dependence they satisfy on
                                     // model-generated data
};

// Solves I0 = nu C_I psi, S0 = nu C_S Phi_S / psi^3, C0 = nu C_C Phi_C / psi^5
// via the nu-free quotients and a damped Newton iteration multistarted on a
// 16x16 grid over a_t in [-3,3], b_t in [0,3]. chi is fixed at 1/2.
VixCalibration calibrate_vix(const ObservedLimits& obs, double h, double v0);

struct LoadingsCalibration {
    double rho1 = 0.0, rho2 = 0.0, rho3 = 0.0;
    double attainable_min = 0.0, attainable_max = 0.0;
};

// Solves rho1 chi nu + eta chib (rho1 rho + rho2 rhob) = 2 Hp (1+Hp) * coeff
// on rho1^2 + rho2^2 <= 1, minimizing rho2^2; rho3 = sqrt(1-rho1^2-rho2^2).
// Throws std::domain_error with the attainable range when infeasible.
LoadingsCalibration calibrate_spx_loadings(const ModelParams& partial, double spx_skew_coeff);

struct CalibrationResult {
    ModelParams params;
    std::map<std::string, double> residuals;  // per-target relative errors
    int iterations = 0;
    bool converged = false;
    bool ambiguous = false;
    std::vector<VixRoot> vix_roots;
};

// Full pipeline: (v0, H) from the spot, (nu, eta, rho) from the VIX limits,
// loadings from the spot skew coefficient.
CalibrationResult calibrate_full(const ObservedLimits& obs, const SpotSkewObservations& spot);

}  // namespace rbergomi
