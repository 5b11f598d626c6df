#pragma once

#include <cstddef>
#include <vector>

namespace rbergomi {

double norm_cdf(double x);
double norm_pdf(double x);

// Black-Scholes call on the forward, log-forward x, log-strike k.
// Returns (e^x - e^k)^+ when sigma*sqrt(T-t) == 0.
double bs_price(double t, double x, double k, double sigma, double maturity);

// Vega at (x, k, sigma); zero total vol handled as 0.
double bs_vega(double t, double x, double k, double sigma, double maturity);

// Unique non-negative sigma with bs_price(...) == price to 1e-12 absolute in
// price. Safeguarded Newton with bisection fallback on [1e-9, 10]. Throws
// std::domain_error (naming the violated bound) outside the static
// no-arbitrage interval [(e^x - e^k)^+, e^x].
double implied_vol(double price, double t, double x, double k, double maturity);

struct AtmMetrics {
    double level = 0.0;
    double skew = 0.0;  // signed d(iv)/dk at ATM
    double curvature = 0.0;
    double level_se = 0.0;
    double skew_se = 0.0;
    double curvature_se = 0.0;
};

// Monte Carlo smile for one maturity.
struct Smile {
    double maturity = 0.0;
    double underlying = 0.0;  // forward level M_0 (sample mean)
    double log_forward = 0.0;
    std::vector<double> log_strikes;
    std::vector<double> prices;
    std::vector<double> price_se;
    std::vector<double> implied_vols;  // NaN where inversion failed
    std::vector<double> iv_se;
    AtmMetrics atm;
    double skew_exponent = 0.0;       // lambda used when reporting rescaled skew
    double curvature_exponent = 0.0;  // gamma likewise
};

// Least-squares quadratic fit of iv(k) over the fit_width strikes nearest the
// anchor; returns value / first derivative / second derivative at the anchor.
// Requires >= 5 strikes bracketing the anchor; throws on a degenerate fit.
AtmMetrics smile_metrics(const std::vector<double>& log_strikes,
                         const std::vector<double>& implied_vols, double anchor,
                         std::size_t fit_width);

// Partial derivatives of the Black-Scholes function used as a verification
// ladder: G = (d_xx - d_x)BS, f the log of its Gaussian kernel, and
// L = (1/4 d_x + 1/2 d_xk) G with successive k/x derivatives. General-point
// closed forms plus the at-the-money simplifications.
namespace bsdiff {

double G(double x, double k, double vs);  // vs = sigma*sqrt(T-t)
double f(double x, double k, double vs);
double dxG(double x, double k, double vs);
double dxkG(double x, double k, double vs);
double L(double x, double k, double vs);
double dkL(double x, double k, double vs);
double dxkL(double x, double k, double vs);
double dxxkL(double x, double k, double vs);
double dxxxkL(double x, double k, double vs);

double dxG_atm(double x, double vs);
double dxkG_atm(double x, double vs);
double L_atm(double x, double vs);
double dkL_atm(double x, double vs);
double dxkL_atm(double x, double vs);
double dxxkL_atm(double x, double vs);
double dxxxkL_atm(double x, double vs);
double H_atm(double x, double vs);  // (d_xxxk - d_xxk) L at x = k

}  // namespace bsdiff

}  // namespace rbergomi
