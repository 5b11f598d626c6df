#pragma once

#include <string>
#include <vector>

#include "rbergomi/quadrature.hpp"

namespace rbergomi {

// Two-factor rough Bergomi:
//   v_t = v0 [ chi E(nu W^1H_t) + (1-chi) E(eta (rho W^1H_t + rhob W^2H_t)) ]
// with E(X) = exp(X - Var[X]/2) and W^iH the Riemann-Liouville fBm.
// rho1..rho3 are the stock Brownian loadings B = rho1 W^1 + rho2 W^2 + rho3 W^3.
struct ModelParams {
    double h = 0.1;
    double nu = 1.0;
    double eta = 1.0;
    double rho = 0.0;
    double chi = 0.5;
    double v0 = 0.04;
    double rho1 = -0.5;
    double rho2 = -0.5;
    double rho3 = 0.7071067811865476;
    double delta = 30.0 / 365.0;  // VIX window (years)

    double chib() const { return 1.0 - chi; }
    double rhob() const;
    double hp() const { return h + 0.5; }
    double hm() const { return h - 0.5; }

    // Throws std::invalid_argument naming the offending field.
    void validate() const;
    // Non-fatal conditions (e.g. rho <= -sqrt(2)/2 breaks the sufficiency condition).
    std::vector<std::string> warnings() const;
};

// Spot variance given the two fBm values at t. Uses the exact Wick variance
// t^(2H)/(2H).
double variance(const ModelParams& p, double w1h, double w2h, double t);

// Realized forward integrals Z^i_r = int_0^y (r-s)^(H-1/2) dW^i_s at a set of
// forward dates (quadrature nodes for the VIX window).
struct ForwardVarianceState {
    double y = 0.0;  // observation time
    std::vector<double> nodes;
    std::vector<double> z1;
    std::vector<double> z2;
};

// E_T[v_r] for one forward date given the realized forward integrals.
double conditional_forward_variance(const ModelParams& p, double T, double r, double z1,
                                    double z2);

// State-based overload; r must match one of state.nodes.
double conditional_forward_variance(const ModelParams& p, const ForwardVarianceState& state,
                                    double T, double r);

// VIX_T^2 = (1/Delta) int_T^(T+Delta) E_T[v_r] dr via the supplied rule.
double vix_squared(const ModelParams& p, const ForwardVarianceState& state, double T,
                   const QuadratureRule& rule);

// Closed-form expectations of the Malliavin derivatives of v at time 0:
//   E[D^i_0 v_r]          = v0 r^(H-1/2)   * first(i)
//   E[D^j_0 D^i_0 v_r]    = v0 r^(2H-1)    * second(i,j)
//   E[D^kD^jD^i_0 v_r]    = v0 r^(3H-3/2)  * third(i,j,k)
struct MalliavinExpectations {
    double v0, hm;
    double c1[2];
    double c2[2][2];
    double c3[2][2][2];

    double first(int i, double r) const;
    double second(int i, int j, double r) const;
    double third(int i, int j, int k, double r) const;
};

MalliavinExpectations malliavin_dv_expectations(const ModelParams& p);

}  // namespace rbergomi
