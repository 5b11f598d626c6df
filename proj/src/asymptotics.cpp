#include "rbergomi/asymptotics.hpp"

#include <cmath>
#include <stdexcept>

namespace rbergomi {

double JGTensors::norm_j() const { return std::hypot(j1, j2); }

double ThirdDerivativeTensor::get(int i, int j, int k) const {
    switch (i + j + k) {
        case 0: return t111;
        case 1: return t112;
        case 2: return t122;
        default: return t222;
    }
}

JGTensors compute_jg(const ModelParams& p) {
    p.validate();
    const auto m = malliavin_dv_expectations(p);
    const double jfac = p.v0 * std::pow(p.delta, p.hp()) / p.hp();
    const double gfac = p.v0 * std::pow(p.delta, 2.0 * p.h) / (2.0 * p.h);
    JGTensors jg;
    jg.j1 = jfac * m.c1[0];
    jg.j2 = jfac * m.c1[1];
    jg.g11 = gfac * m.c2[0][0];
    jg.g12 = gfac * m.c2[0][1];
    jg.g22 = gfac * m.c2[1][1];
    return jg;
}

ThirdDerivativeTensor third_derivative_limit(const ModelParams& p) {
    if (!(p.h < 1.0 / 6.0))
        throw std::domain_error("third_derivative_limit: requires H < 1/6");
    const auto m = malliavin_dv_expectations(p);
    const double lim = 2.0 / (1.0 - 6.0 * p.h);  // lim T^(1/2-3H) int_T^(T+D) r^(3H-3/2) dr
    ThirdDerivativeTensor t;
    t.t111 = p.v0 * m.c3[0][0][0] * lim;
    t.t112 = p.v0 * m.c3[0][0][1] * lim;
    t.t122 = p.v0 * m.c3[0][1][1] * lim;
    t.t222 = p.v0 * m.c3[1][1][1] * lim;
    return t;
}

SmileAsymptotics vix_limits_generic(const JGTensors& jg, double vix0_sq,
                                    const std::optional<ThirdDerivativeTensor>& third,
                                    double delta, double h) {
    const double nj = jg.norm_j();
    if (!(nj > 0.0)) throw std::domain_error("vix_limits_generic: degenerate model, ||J|| = 0");
    if (!(vix0_sq > 0.0)) throw std::domain_error("vix_limits_generic: VIX_0^2 must be > 0");

    SmileAsymptotics out;
    out.underlying = Underlying::Vix;
    out.skew_exponent = 0.0;
    out.curvature_exponent = 3.0 * h - 0.5;
    out.level = nj / (2.0 * delta * vix0_sq);

    const double j[2] = {jg.j1, jg.j2};
    const double g[2][2] = {{jg.g11, jg.g12}, {jg.g12, jg.g22}};
    double s = 0.0;
    for (int i = 0; i < 2; ++i)
        for (int jj = 0; jj < 2; ++jj)
            s += j[i] * j[jj] * (g[i][jj] - j[i] * j[jj] / (delta * vix0_sq));
    out.skew_value = s / (2.0 * nj * nj * nj);

    if (third) {
        if (!(h < 1.0 / 6.0))
            throw std::domain_error("vix_limits_generic: curvature requires H < 1/6");
        double c = 0.0;
        for (int i = 0; i < 2; ++i)
            for (int jj = 0; jj < 2; ++jj)
                for (int k = 0; k < 2; ++k) c += j[i] * j[jj] * j[k] * third->get(i, jj, k);
        out.curvature_value = 2.0 * delta * vix0_sq / (3.0 * std::pow(nj, 5)) * c;
    }
    return out;
}

double psi_two_factor(const ModelParams& p) {
    const double w = p.chi * p.nu + p.chib() * p.eta * p.rho;
    const double b = p.chib() * p.eta * p.rhob();
    return std::hypot(w, b);
}

SmileAsymptotics vix_limits_rbergomi(const ModelParams& p, bool want_curvature) {
    p.validate();
    if (want_curvature && !(p.h < 1.0 / 6.0))
        throw std::domain_error("vix_limits_rbergomi: curvature requires H < 1/6");

    const double h = p.h, hp = p.hp(), hm = p.hm();
    const double chi = p.chi, chib = p.chib(), nu = p.nu, eta = p.eta, rho = p.rho,
                 rhob = p.rhob();
    const double w = chi * nu + chib * eta * rho;
    const double psi = psi_two_factor(p);
    if (!(psi > 0.0)) throw std::domain_error("vix_limits_rbergomi: degenerate model, psi = 0");

    SmileAsymptotics out;
    out.underlying = Underlying::Vix;
    out.skew_exponent = 0.0;
    out.curvature_exponent = 3.0 * h - 0.5;
    out.level = std::pow(p.delta, hm) / (2.0 * h + 1.0) * psi;

    const double br2 = chib * chib * eta * eta * rhob * rhob;
    const double bracket = w * w * ((chi * nu * nu + chib * eta * eta * rho * rho) / (2.0 * h) -
                                    (w / hp) * (w / hp)) +
                           2.0 * w * br2 * (eta * rho / (2.0 * h) - w / (hp * hp)) +
                           std::pow(chib, 3) * std::pow(eta, 4) * std::pow(rhob, 4) *
                               (1.0 / (2.0 * h) - chib / (hp * hp));
    out.skew_value = hp * std::pow(p.delta, hm) / (2.0 * psi * psi * psi) * bracket;

    if (want_curvature) {
        const double e2 = eta * eta, e3 = e2 * eta;
        const double cnum = w * w * w * (chi * nu * nu * nu + chib * e3 * rho * rho * rho) +
                            3.0 * w * w * chib * chib * e2 * e2 * rhob * rhob * rho * rho +
                            3.0 * w * chib * chib * chib * e3 * e2 *
                                std::pow(rhob, 4) * rho +
                            std::pow(chib, 4) * e3 * e3 * std::pow(rhob, 6);
        out.curvature_value = 4.0 * hp * hp * std::pow(p.delta, -2.0 * h) /
                              (3.0 * std::pow(psi, 5) * (1.0 - 6.0 * h)) * cnum;
    }
    return out;
}

SmileAsymptotics vix_limits_rho1(const ModelParams& p, bool want_curvature) {
    if (p.rho != 1.0) throw std::invalid_argument("vix_limits_rho1: rho must be 1");
    const double h = p.h, hp = p.hp(), hm = p.hm();
    const double w = p.chi * p.nu + p.chib() * p.eta;

    SmileAsymptotics out;
    out.underlying = Underlying::Vix;
    out.skew_exponent = 0.0;
    out.curvature_exponent = 3.0 * h - 0.5;
    out.level = std::pow(p.delta, hm) / (2.0 * hp) * w;
    out.skew_value =
        0.5 * hp * std::pow(p.delta, hm) / w *
        ((p.chi * p.nu * p.nu + p.chib() * p.eta * p.eta) / (2.0 * h) - (w / hp) * (w / hp));
    if (want_curvature) {
        if (!(h < 1.0 / 6.0)) throw std::domain_error("vix_limits_rho1: curvature requires H < 1/6");
        const double m3 = p.chi * std::pow(p.nu, 3) + p.chib() * std::pow(p.eta, 3);
        out.curvature_value =
            4.0 * hp * hp * std::pow(p.delta, -2.0 * h) / (3.0 - 18.0 * h) * m3 / (w * w);
    }
    return out;
}

SmileAsymptotics vix_limits_rho0(const ModelParams& p, bool want_curvature) {
    if (p.rho != 0.0) throw std::invalid_argument("vix_limits_rho0: rho must be 0");
    const double h = p.h, hp = p.hp(), hm = p.hm();
    const double chi = p.chi, chib = p.chib(), nu = p.nu, eta = p.eta;
    const double q = chi * chi * nu * nu + chib * chib * eta * eta;
    const double psi = std::sqrt(q);

    SmileAsymptotics out;
    out.underlying = Underlying::Vix;
    out.skew_exponent = 0.0;
    out.curvature_exponent = 3.0 * h - 0.5;
    out.level = std::pow(p.delta, hm) / (2.0 * hp) * psi;
    const double bracket =
        std::pow(chi, 3) * std::pow(nu, 4) * (1.0 / (2.0 * h) - chi / (hp * hp)) -
        2.0 * chi * chi * nu * nu * chib * chib * eta * eta / (hp * hp) +
        std::pow(chib, 3) * std::pow(eta, 4) * (1.0 / (2.0 * h) - chib / (hp * hp));
    out.skew_value = hp * std::pow(p.delta, hm) / (2.0 * psi * psi * psi) * bracket;
    if (want_curvature) {
        if (!(h < 1.0 / 6.0)) throw std::domain_error("vix_limits_rho0: curvature requires H < 1/6");
        const double num = std::pow(chi, 4) * std::pow(nu, 6) + std::pow(chib, 4) * std::pow(eta, 6);
        out.curvature_value = 4.0 * hp * hp * std::pow(p.delta, -2.0 * h) / (3.0 - 18.0 * h) *
                              num / std::pow(q, 2.5);
    }
    return out;
}

SmileAsymptotics spx_limits(const ModelParams& p) {
    p.validate();
    SmileAsymptotics out;
    out.underlying = Underlying::Spx;
    out.level = std::sqrt(p.v0);
    out.skew_exponent = p.hm();
    const double hp = p.hp();
    out.skew_value = (p.rho1 * p.chi * p.nu +
                      p.eta * p.chib() * (p.rho1 * p.rho + p.rho2 * p.rhob())) /
                     (2.0 * hp * (1.0 + hp));
    out.curvature_exponent = 0.0;
    return out;
}

NormalizedFunctions normalized_functions(double a_t, double b_t, double h, double delta) {
    if (!(h > 0.0) || !(h < 1.0 / 6.0))
        throw std::domain_error("normalized_functions: requires H in (0, 1/6)");
    const double hp = h + 0.5, hm = h - 0.5;
    const double e = 1.0 + a_t;
    const double psi2 = e * e + b_t * b_t;

    NormalizedFunctions out;
    out.psi = std::sqrt(psi2);
    out.phi_s = e * e * ((1.0 + a_t * a_t) / (2.0 * h) - e * e / (2.0 * hp * hp)) +
                2.0 * e * b_t * b_t * (a_t / (2.0 * h) - e / (2.0 * hp * hp)) +
                std::pow(b_t, 4) * (1.0 / (2.0 * h) - 1.0 / (2.0 * hp * hp));
    out.phi_c = e * e * e * (1.0 + std::pow(a_t, 3)) +
                3.0 * e * e * a_t * a_t * b_t * b_t + 3.0 * e * a_t * std::pow(b_t, 4) +
                std::pow(b_t, 6);
    out.c_i = std::pow(delta, hm) / (4.0 * hp);
    out.c_s = hp * std::pow(delta, hm) / 2.0;
    out.c_c = 8.0 * hp * hp / (3.0 * std::pow(delta, 2.0 * h) * (1.0 - 6.0 * h));
    return out;
}

}  // namespace rbergomi
