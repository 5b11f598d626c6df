#pragma once

#include <cstdint>
#include <vector>

#include "rbergomi/asymptotics.hpp"
#include "rbergomi/model.hpp"
#include "rbergomi/pricing.hpp"

namespace rbergomi {

struct SimConfig {
    std::int64_t n_paths = 100000;
    int n_steps = 128;      // SPX log-Euler grid
    int n_vix_nodes = 32;   // Gauss-Legendre nodes on [T, T+Delta]
    std::uint64_t seed = 1;
    bool antithetic = false;
    int threads = 0;  // 0 = all cores; never affects results

    void validate() const;
};

// Exact-in-distribution VIX_T samples: one Gaussian draw of the forward
// integrals {Z^1_r, Z^2_r} at the quadrature nodes determines E_T[v_r], hence
// VIX_T, with no inner simulation. Path i is a pure function of (seed, i).
std::vector<double> simulate_vix(const ModelParams& p, double maturity, const SimConfig& cfg);

// Log-Euler SPX samples with exact joint Gaussian inputs (fBm values and
// Brownian increments drawn from one covariance system per factor).
std::vector<double> simulate_spx(const ModelParams& p, double maturity, const SimConfig& cfg);

// Discounted-payoff means, standard errors, implied vols and ATM metrics.
// Metric standard errors come from 16 block means (blocks keep antithetic
// pairs together).
Smile price_smile(const std::vector<double>& samples, double underlying,
                  const std::vector<double>& log_strikes, double maturity,
                  std::size_t fit_width = 5);

// 11 strikes at log(M0) + j*h, j in -5..5, h = mult * I_atm_estimate * sqrt(T).
std::vector<double> default_strike_grid(const std::vector<double>& samples, double maturity,
                                        int per_side = 5, double spacing_mult = 0.1);

struct TermStructureRow {
    double maturity = 0.0;
    AtmMetrics atm;
    double rescaled_skew = 0.0;       // T^(-lambda) * skew
    double rescaled_curvature = 0.0;  // T^(-gamma) * curvature
    double limit_level = 0.0;
    double limit_skew = 0.0;          // limit of T^(-lambda) S_T
    double limit_curvature = 0.0;     // limit of T^(-gamma) C_T (VIX, H < 1/6)
};

// One smile per maturity with the rescaled ATM columns next to the
// corresponding closed-form limits.
std::vector<TermStructureRow> term_structure_study(const ModelParams& p, Underlying underlying,
                                                   const std::vector<double>& maturities,
                                                   const SimConfig& cfg);

}  // namespace rbergomi
