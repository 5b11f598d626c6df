#include "rbergomi/pricing.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>

namespace rbergomi {

double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double norm_pdf(double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

double bs_price(double t, double x, double k, double sigma, double maturity) {
    if (sigma < 0.0) throw std::invalid_argument("bs_price: sigma must be >= 0");
    if (maturity < t) throw std::invalid_argument("bs_price: maturity before valuation time");
    const double vs = sigma * std::sqrt(maturity - t);
    if (vs == 0.0) return std::max(std::exp(x) - std::exp(k), 0.0);
    const double dp = (x - k) / vs + 0.5 * vs;
    return std::exp(x) * norm_cdf(dp) - std::exp(k) * norm_cdf(dp - vs);
}

double bs_vega(double t, double x, double k, double sigma, double maturity) {
    const double sq = std::sqrt(maturity - t);
    const double vs = sigma * sq;
    if (vs == 0.0) return 0.0;
    const double dp = (x - k) / vs + 0.5 * vs;
    return std::exp(x) * norm_pdf(dp) * sq;
}

double implied_vol(double price, double t, double x, double k, double maturity) {
    const double intrinsic = std::max(std::exp(x) - std::exp(k), 0.0);
    const double upper = std::exp(x);
    if (price < intrinsic) {
        std::ostringstream msg;
        msg << "implied_vol: price " << price << " below intrinsic bound " << intrinsic;
        throw std::domain_error(msg.str());
    }
    if (price > upper) {
        std::ostringstream msg;
        msg << "implied_vol: price " << price << " above forward bound " << upper;
        throw std::domain_error(msg.str());
    }
    if (price == intrinsic) return 0.0;

    double lo = 1e-9, hi = 10.0;
    auto diff = [&](double s) { return bs_price(t, x, k, s, maturity) - price; };
    double flo = diff(lo), fhi = diff(hi);
    if (flo > 0.0) return 0.0;  // price below the smallest representable vol
    if (fhi < 0.0) {
        std::ostringstream msg;
        msg << "implied_vol: price " << price << " above bs_price at sigma=10";
        throw std::domain_error(msg.str());
    }

    double s = 0.5 * (lo + hi);
    for (int iter = 0; iter < 200; ++iter) {
        const double fs = diff(s);
        if (std::abs(fs) < 1e-12) return s;
        if (fs > 0.0)
            hi = s;
        else
            lo = s;
        const double v = bs_vega(t, x, k, s, maturity);
        double next = (v > 1e-300) ? s - fs / v : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);  // bisection safeguard
        if (hi - lo < 1e-16 * std::max(1.0, s)) return 0.5 * (lo + hi);
        s = next;
    }
    return s;
}

AtmMetrics smile_metrics(const std::vector<double>& log_strikes,
                         const std::vector<double>& implied_vols, double anchor,
                         std::size_t fit_width) {
    if (log_strikes.size() != implied_vols.size())
        throw std::invalid_argument("smile_metrics: strike/vol size mismatch");
    std::vector<std::size_t> valid;
    for (std::size_t i = 0; i < log_strikes.size(); ++i)
        if (std::isfinite(implied_vols[i])) valid.push_back(i);
    if (valid.size() < 5)
        throw std::invalid_argument("smile_metrics: need at least 5 valid strikes");
    const bool below = std::any_of(valid.begin(), valid.end(),
                                   [&](std::size_t i) { return log_strikes[i] <= anchor; });
    const bool above = std::any_of(valid.begin(), valid.end(),
                                   [&](std::size_t i) { return log_strikes[i] >= anchor; });
    if (!below || !above)
        throw std::invalid_argument("smile_metrics: strikes must bracket the ATM point");

    fit_width = std::max<std::size_t>(fit_width, 3);
    std::sort(valid.begin(), valid.end(), [&](std::size_t a, std::size_t b) {
        return std::abs(log_strikes[a] - anchor) < std::abs(log_strikes[b] - anchor);
    });
    const std::size_t m = std::min(fit_width, valid.size());

    Eigen::MatrixXd A(m, 3);
    Eigen::VectorXd y(m);
    for (std::size_t r = 0; r < m; ++r) {
        const double dk = log_strikes[valid[r]] - anchor;
        A(r, 0) = 1.0;
        A(r, 1) = dk;
        A(r, 2) = dk * dk;
        y(r) = implied_vols[valid[r]];
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (svd.rank() < 3) throw std::invalid_argument("smile_metrics: degenerate fit (collinear strikes)");
    const Eigen::Vector3d c = svd.solve(y);

    AtmMetrics out;
    out.level = c(0);
    out.skew = c(1);
    out.curvature = 2.0 * c(2);
    return out;
}

namespace bsdiff {

namespace {
constexpr double kInvSqrt2Pi = 0.3989422804014327;

double pref(double x, double k, double vs) { return std::exp(f(x, k, vs)) * kInvSqrt2Pi / vs; }
double dxf(double x, double k, double vs) { return 0.5 - (x - k) / (vs * vs); }
}  // namespace

double f(double x, double k, double vs) {
    const double d = x - k;
    return 0.5 * (x + k) - d * d / (2.0 * vs * vs) - vs * vs / 8.0;
}

double G(double x, double k, double vs) { return pref(x, k, vs); }

double dxG(double x, double k, double vs) { return pref(x, k, vs) * dxf(x, k, vs); }

double dxkG(double x, double k, double vs) {
    const double a = dxf(x, k, vs), c = -1.0 / (vs * vs);
    return pref(x, k, vs) * (-c + a * (1.0 - a));
}

double L(double x, double k, double vs) {
    const double a = dxf(x, k, vs), c = -1.0 / (vs * vs);
    const double dk_f = 1.0 - a;
    return pref(x, k, vs) * (0.25 + 0.25 * dk_f - 0.5 * dk_f * dk_f - 0.5 * c);
}

double dkL(double x, double k, double vs) {
    const double a = dxf(x, k, vs), c = -1.0 / (vs * vs);
    return pref(x, k, vs) *
           (0.75 * a - 1.25 * a * a + 0.5 * a * a * a - 1.25 * c + 1.5 * a * c);
}

double dxkL(double x, double k, double vs) {
    const double a = dxf(x, k, vs), c = -1.0 / (vs * vs);
    const double a2 = a * a;
    return pref(x, k, vs) * (0.75 * a2 - 1.25 * a2 * a + 0.5 * a2 * a2 + 0.75 * c -
                             3.75 * a * c + 3.0 * a2 * c + 1.5 * c * c);
}

double dxxkL(double x, double k, double vs) {
    const double a = dxf(x, k, vs), c = -1.0 / (vs * vs);
    const double a2 = a * a, a3 = a2 * a;
    return pref(x, k, vs) * (0.75 * a3 - 1.25 * a2 * a2 + 0.5 * a2 * a3 + 2.25 * c * a -
                             7.5 * c * a2 - 3.75 * c * c + 5.0 * c * a3 + 7.5 * c * c * a);
}

double dxxxkL(double x, double k, double vs) {
    const double a = dxf(x, k, vs), c = -1.0 / (vs * vs);
    const double a2 = a * a, a3 = a2 * a, a4 = a2 * a2, c2 = c * c;
    return pref(x, k, vs) *
           (0.75 * a4 - 1.25 * a4 * a + 0.5 * a4 * a2 + 4.5 * c * a2 - 12.5 * c * a3 -
            18.75 * c2 * a + 7.5 * c * a4 + 22.5 * c2 * a2 + 2.25 * c2 + 7.5 * c2 * c);
}

namespace {
double atm_pref(double x, double vs) {
    return std::exp(x - vs * vs / 8.0) * kInvSqrt2Pi / vs;
}
}  // namespace

double dxG_atm(double x, double vs) { return 0.5 * atm_pref(x, vs); }

double dxkG_atm(double x, double vs) { return atm_pref(x, vs) * (0.25 + 1.0 / (vs * vs)); }

double L_atm(double x, double vs) { return atm_pref(x, vs) * (0.25 + 0.5 / (vs * vs)); }

double dkL_atm(double x, double vs) { return atm_pref(x, vs) * (0.125 + 0.5 / (vs * vs)); }

double dxkL_atm(double x, double vs) {
    const double s2 = vs * vs;
    return atm_pref(x, vs) * (1.0 / 16.0 + 3.0 / (8.0 * s2) + 1.5 / (s2 * s2));
}

double dxxkL_atm(double x, double vs) {
    return atm_pref(x, vs) * (1.0 / 32.0 + 1.0 / (8.0 * vs * vs));
}

double dxxxkL_atm(double x, double vs) {
    const double s2 = vs * vs;
    return atm_pref(x, vs) *
           (1.0 / 64.0 - 1.0 / (32.0 * s2) - 1.5 / (s2 * s2) - 7.5 / (s2 * s2 * s2));
}

double H_atm(double x, double vs) {
    const double s2 = vs * vs;
    return atm_pref(x, vs) *
           (-1.0 / 64.0 - 5.0 / (32.0 * s2) - 1.5 / (s2 * s2) - 7.5 / (s2 * s2 * s2));
}

}  // namespace bsdiff

}  // namespace rbergomi
