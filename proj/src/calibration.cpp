#include "rbergomi/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>

#include "rbergomi/asymptotics.hpp"

namespace rbergomi {

SpotCalibration calibrate_spot(double spx_level, const SpotSkewObservations& obs) {
    if (!(spx_level > 0.0)) throw std::invalid_argument("calibrate_spot: spx_level must be > 0");
    if (!(obs.t1 > 0.0) || !(obs.t2 > obs.t1))
        throw std::invalid_argument("calibrate_spot: need 0 < T1 < T2");
    if (obs.skew1 == 0.0 || obs.skew2 == 0.0 || obs.skew1 * obs.skew2 < 0.0)
        throw std::invalid_argument("calibrate_spot: skew observations must be nonzero with a common sign");

    SpotCalibration out;
    out.v0 = spx_level * spx_level;
    const double ratio = std::abs(obs.skew1) / std::abs(obs.skew2);
    out.h = 0.5 + std::log(ratio) / std::log(obs.t1 / obs.t2);
    if (!(out.h > 0.0) || !(out.h < 0.5)) {
        std::ostringstream msg;
        msg << "calibrate_spot: implied H = " << out.h << " outside (0, 1/2)";
        throw std::domain_error(msg.str());
    }
    out.skew_coeff = obs.skew1 / std::pow(obs.t1, out.h - 0.5);
    return out;
}

namespace {

struct QuotientSystem {
    double h;
    double target_s;  // Phi_S / psi^4 target
    double target_c;  // Phi_C / psi^6 target

    Eigen::Vector2d residual(double a, double b) const {
        const auto nf = normalized_functions(a, b, h, 1.0);  // delta cancels in these ratios
        const double psi2 = nf.psi * nf.psi;
        return {nf.phi_s / (psi2 * psi2) - target_s, nf.phi_c / std::pow(psi2, 3) - target_c};
    }
};

constexpr int kGrid = 16;
constexpr int kMaxIter = 100;
constexpr double kResidualTol = 1e-12;
constexpr double kDedupe = 1e-6;

}  // namespace

VixCalibration calibrate_vix(const ObservedLimits& obs, double h, double v0) {
    (void)v0;  // the VIX limits do not depend on v0
    if (!(h > 0.0) || !(h < 1.0 / 6.0))
        throw std::domain_error("calibrate_vix: requires H in (0, 1/6)");
    if (!(obs.vix_level > 0.0)) throw std::invalid_argument("calibrate_vix: vix_level must be > 0");
    if (!(obs.delta > 0.0)) throw std::invalid_argument("calibrate_vix: delta must be > 0");

    const auto nf0 = normalized_functions(0.0, 0.0, h, obs.delta);
    QuotientSystem sys;
    sys.h = h;
    sys.target_s = (obs.vix_skew / obs.vix_level) * nf0.c_i / nf0.c_s;
    sys.target_c = (obs.vix_curv_coeff / obs.vix_level) * nf0.c_i / nf0.c_c;
    const double scale = 1.0 + std::abs(sys.target_s) + std::abs(sys.target_c);

    VixCalibration out;
    // On model-consistent data the two quotients satisfy an exact polynomial
    // dependence (both are affine in N_S/psi^4), so the root set is a curve.
    // Record how far the observed pair is from that relation.
    {
        const double hp = h + 0.5;
        const double q = 2.0 * h * (sys.target_s + 0.5 / (hp * hp));  // N_S/psi^4
        out.quotient_mismatch = std::abs((1.5 * q - 0.5) - sys.target_c);
    }

    double best_res = std::numeric_limits<double>::infinity();
    for (int ia = 0; ia < kGrid; ++ia) {
        for (int ib = 0; ib < kGrid; ++ib) {
            double a = -3.0 + 6.0 * ia / (kGrid - 1);
            double b = 3.0 * ib / (kGrid - 1);
            bool ok = false;
            Eigen::Vector2d f = sys.residual(a, b);
            for (int it = 0; it < kMaxIter && !ok; ++it) {
                if (f.cwiseAbs().maxCoeff() < kResidualTol * scale) {
                    ok = true;
                    break;
                }
                const double step = 1e-7;
                Eigen::Matrix2d J;
                J.col(0) = (sys.residual(a + step, b) - sys.residual(a - step, b)) / (2 * step);
                J.col(1) = (sys.residual(a, b + step) - sys.residual(a, b - step)) / (2 * step);
                const Eigen::Vector2d dx = J.fullPivLu().solve(-f);
                if (!dx.allFinite()) break;
                double lambda = 1.0;
                const double n0 = f.norm();
                double an = a, bn = b;
                for (int half = 0; half < 40; ++half) {
                    an = a + lambda * dx(0);
                    bn = std::abs(b + lambda * dx(1));  // b >= 0 (psi, Phi_C even in b)
                    if (sys.residual(an, bn).norm() < n0) break;
                    lambda *= 0.5;
                }
                a = an;
                b = bn;
                f = sys.residual(a, b);
            }
            const double res = f.cwiseAbs().maxCoeff();
            best_res = std::min(best_res, res);
            if (ok && std::abs(a) < 10.0 && b < 10.0) {
                const bool dup = std::any_of(out.roots.begin(), out.roots.end(), [&](const VixRoot& r) {
                    return std::hypot(r.a_t - a, r.b_t - b) < kDedupe;
                });
                if (!dup) {
                    VixRoot root;
                    root.a_t = a;
                    root.b_t = b;
                    const auto nf = normalized_functions(a, b, h, obs.delta);
                    root.nu = obs.vix_level / (nf.c_i * nf.psi);
                    const double mag = std::hypot(a, b);
                    root.eta = root.nu * mag;
                    root.rho = mag > 0.0 ? a / mag : 1.0;
                    root.residual = res;
                    out.roots.push_back(root);
                }
            }
        }
    }
    std::sort(out.roots.begin(), out.roots.end(),
              [](const VixRoot& x, const VixRoot& y) { return x.a_t < y.a_t; });
    out.converged = !out.roots.empty();
    out.ambiguous = out.roots.size() > 1;
    out.best_residual = best_res;
    return out;
}

LoadingsCalibration calibrate_spx_loadings(const ModelParams& p, double spx_skew_coeff) {
    const double hp = p.hp();
    const double target = 2.0 * hp * (1.0 + hp) * spx_skew_coeff;
    const double w = p.chi * p.nu + p.chib() * p.eta * p.rho;  // rho1 weight
    const double bt = p.chib() * p.eta * p.rhob();             // rho2 weight
    const double reach = std::hypot(w, bt);

    LoadingsCalibration out;
    out.attainable_min = -reach;
    out.attainable_max = reach;
    if (std::abs(target) > reach) {
        std::ostringstream msg;
        msg << "calibrate_spx_loadings: target " << target << " outside attainable range ["
            << -reach << ", " << reach << "]";
        throw std::domain_error(msg.str());
    }

    if (target == 0.0) {
        out.rho1 = 0.0;
        out.rho2 = 0.0;
    } else if (w != 0.0 && std::abs(target / w) <= 1.0) {
        out.rho1 = target / w;  // rho2^2 = 0 is feasible
        out.rho2 = 0.0;
    } else if (w == 0.0) {
        out.rho1 = 0.0;
        out.rho2 = target / bt;
    } else {
        // need |rho2| > 0: minimal rho2^2 lies on the unit circle
        const double disc = std::max(0.0, bt * bt + w * w - target * target);
        const double denom = bt * bt + w * w;
        const double r2a = (target * bt + w * std::sqrt(disc)) / denom;
        const double r2b = (target * bt - w * std::sqrt(disc)) / denom;
        out.rho2 = std::abs(r2a) <= std::abs(r2b) ? r2a : r2b;
        out.rho1 = (target - out.rho2 * bt) / w;
    }
    out.rho3 = std::sqrt(std::max(0.0, 1.0 - out.rho1 * out.rho1 - out.rho2 * out.rho2));
    return out;
}

CalibrationResult calibrate_full(const ObservedLimits& obs, const SpotSkewObservations& spot) {
    const auto sc = calibrate_spot(obs.spx_level, spot);
    const auto vc = calibrate_vix(obs, sc.h, sc.v0);

    CalibrationResult out;
    out.converged = vc.converged;
    out.ambiguous = vc.ambiguous;
    out.vix_roots = vc.roots;
    out.params.h = sc.h;
    out.params.v0 = sc.v0;
    out.params.chi = 0.5;
    out.params.delta = obs.delta;
    if (!vc.converged) {
        out.residuals["vix_quotients"] = vc.best_residual;
        return out;
    }

    // Deterministic primary root: smallest residual, then smallest |a_t|.
    const VixRoot* primary = &vc.roots.front();
    for (const auto& r : vc.roots) {
        if (r.residual < primary->residual - 1e-15 ||
            (std::abs(r.residual - primary->residual) <= 1e-15 &&
             std::abs(r.a_t) < std::abs(primary->a_t)))
            primary = &r;
    }
    out.params.nu = primary->nu;
    out.params.eta = primary->eta;
    out.params.rho = primary->rho;

    const double coeff = obs.spx_skew_coeff != 0.0 ? obs.spx_skew_coeff : sc.skew_coeff;
    const auto lc = calibrate_spx_loadings(out.params, coeff);
    out.params.rho1 = lc.rho1;
    out.params.rho2 = lc.rho2;
    out.params.rho3 = lc.rho3;

    const auto lim = vix_limits_rbergomi(out.params, true);
    const auto spx = spx_limits(out.params);
    auto rel = [](double got, double want) {
        return std::abs(got - want) / std::max(1e-300, std::abs(want));
    };
    out.residuals["vix_level"] = rel(lim.level, obs.vix_level);
    out.residuals["vix_skew"] = rel(lim.skew_value, obs.vix_skew);
    out.residuals["vix_curvature"] = rel(lim.curvature_value.value_or(0.0), obs.vix_curv_coeff);
    out.residuals["spx_level"] = rel(spx.level, obs.spx_level);
    out.residuals["spx_skew_coeff"] = rel(spx.skew_value, coeff);
    return out;
}

}  // namespace rbergomi
