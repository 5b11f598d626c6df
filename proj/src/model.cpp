#include "rbergomi/model.hpp"

#include <cmath>
#include <stdexcept>

namespace rbergomi {

double ModelParams::rhob() const { return std::sqrt(std::max(0.0, 1.0 - rho * rho)); }

void ModelParams::validate() const {
    auto fail = [](const std::string& field, const std::string& why) {
        throw std::invalid_argument("ModelParams." + field + ": " + why);
    };
    if (!(h > 0.0) || !(h <= 0.5)) fail("h", "Hurst exponent must lie in (0, 1/2]");
    if (!(nu > 0.0)) fail("nu", "must be > 0");
    if (!(eta > 0.0)) fail("eta", "must be > 0");
    if (!(rho >= -1.0 && rho <= 1.0)) fail("rho", "must lie in [-1, 1]");
    if (!(chi >= 0.0 && chi <= 1.0)) fail("chi", "must lie in [0, 1]");
    if (!(v0 > 0.0)) fail("v0", "must be > 0");
    if (!(delta > 0.0)) fail("delta", "must be > 0");
    const double s = rho1 * rho1 + rho2 * rho2 + rho3 * rho3;
    if (std::abs(s - 1.0) > 1e-12) fail("rho1..rho3", "loadings must satisfy rho1^2+rho2^2+rho3^2 = 1");
}

std::vector<std::string> ModelParams::warnings() const {
    std::vector<std::string> w;
    if (rho <= -std::sqrt(2.0) / 2.0)
        w.push_back("rho <= -sqrt(2)/2: outside the range where the short-maturity limits are proven");
    return w;
}

double variance(const ModelParams& p, double w1h, double w2h, double t) {
    if (!(t > 0.0)) throw std::invalid_argument("variance: t must be > 0");
    const double var = std::pow(t, 2.0 * p.h) / (2.0 * p.h);
    const double e1 = std::exp(p.nu * w1h - 0.5 * p.nu * p.nu * var);
    const double e2 =
        std::exp(p.eta * (p.rho * w1h + p.rhob() * w2h) - 0.5 * p.eta * p.eta * var);
    return p.v0 * (p.chi * e1 + p.chib() * e2);
}

double conditional_forward_variance(const ModelParams& p, double T, double r, double z1,
                                    double z2) {
    if (r < T) throw std::domain_error("conditional_forward_variance: r must be >= T");
    const double drift = (std::pow(r - T, 2.0 * p.h) - std::pow(r, 2.0 * p.h)) / (4.0 * p.h);
    const double e1 = std::exp(p.nu * p.nu * drift + p.nu * z1);
    const double e2 = std::exp(p.eta * p.eta * drift + p.eta * (p.rho * z1 + p.rhob() * z2));
    return p.v0 * (p.chi * e1 + p.chib() * e2);
}

double conditional_forward_variance(const ModelParams& p, const ForwardVarianceState& state,
                                    double T, double r) {
    for (std::size_t i = 0; i < state.nodes.size(); ++i) {
        if (std::abs(state.nodes[i] - r) <= 1e-14 * std::max(1.0, std::abs(r)))
            return conditional_forward_variance(p, T, r, state.z1[i], state.z2[i]);
    }
    throw std::domain_error("conditional_forward_variance: r is not one of the state nodes");
}

double vix_squared(const ModelParams& p, const ForwardVarianceState& state, double T,
                   const QuadratureRule& rule) {
    if (rule.nodes.size() != state.nodes.size())
        throw std::invalid_argument("vix_squared: rule and state node counts differ");
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        acc += rule.weights[i] *
               conditional_forward_variance(p, T, state.nodes[i], state.z1[i], state.z2[i]);
    return acc / p.delta;
}

MalliavinExpectations malliavin_dv_expectations(const ModelParams& p) {
    MalliavinExpectations m{};
    m.v0 = p.v0;
    m.hm = p.hm();
    const double chi = p.chi, chib = p.chib(), nu = p.nu, eta = p.eta, rho = p.rho,
                 rhob = p.rhob();
    m.c1[0] = chi * nu + chib * eta * rho;
    m.c1[1] = chib * eta * rhob;
    m.c2[0][0] = chi * nu * nu + chib * eta * eta * rho * rho;
    m.c2[0][1] = m.c2[1][0] = chib * eta * eta * rho * rhob;
    m.c2[1][1] = chib * eta * eta * rhob * rhob;
    const double e3 = eta * eta * eta;
    double c111 = chi * nu * nu * nu + chib * e3 * rho * rho * rho;
    double c112 = chib * e3 * rho * rho * rhob;
    double c122 = chib * e3 * rho * rhob * rhob;
    double c222 = chib * e3 * rhob * rhob * rhob;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k) {
                const int ones = i + j + k;
                m.c3[i][j][k] = (ones == 0) ? c111 : (ones == 1) ? c112 : (ones == 2) ? c122 : c222;
            }
    return m;
}

namespace {
void require_positive_r(double r) {
    if (!(r > 0.0)) throw std::domain_error("malliavin expectation: r must be > 0");
}
}  // namespace

double MalliavinExpectations::first(int i, double r) const {
    require_positive_r(r);
    return v0 * std::pow(r, hm) * c1[i];
}

double MalliavinExpectations::second(int i, int j, double r) const {
    require_positive_r(r);
    return v0 * std::pow(r, 2.0 * hm) * c2[i][j];  // r^(2H-1)
}

double MalliavinExpectations::third(int i, int j, int k, double r) const {
    require_positive_r(r);
    return v0 * std::pow(r, 3.0 * hm) * c3[i][j][k];
}

}  // namespace rbergomi
