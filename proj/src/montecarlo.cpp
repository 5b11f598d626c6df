#include "rbergomi/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "rbergomi/gaussian.hpp"
#include "rbergomi/rng.hpp"

namespace rbergomi {

namespace {

constexpr std::int64_t kBatch = 4096;  // paths per batch, fixed so results never depend on threads
constexpr std::size_t kBlocks = 16;    // block means for metric standard errors

int resolve_threads(int requested, std::int64_t batches) {
    int n = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
    if (n < 1) n = 1;
    return static_cast<int>(std::min<std::int64_t>(n, batches));
}

// Runs fn(batch_lo, batch_hi) over [0, n_paths) in fixed batches; each batch
// writes to a disjoint slice of the output, so scheduling order is irrelevant.
template <typename Fn>
void run_batches(std::int64_t n_paths, int threads, Fn&& fn) {
    const std::int64_t batches = (n_paths + kBatch - 1) / kBatch;
    std::atomic<std::int64_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::int64_t b = next.fetch_add(1);
            if (b >= batches) return;
            const std::int64_t lo = b * kBatch;
            const std::int64_t hi = std::min(n_paths, lo + kBatch);
            fn(lo, hi);
        }
    };
    const int nt = resolve_threads(threads, batches);
    if (nt <= 1) {
        worker();
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(nt);
    for (int i = 0; i < nt; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
}

}  // namespace

void SimConfig::validate() const {
    if (n_paths < 2) throw std::invalid_argument("SimConfig.n_paths: must be >= 2");
    if (n_steps < 1) throw std::invalid_argument("SimConfig.n_steps: must be >= 1");
    if (n_vix_nodes < 4) throw std::invalid_argument("SimConfig.n_vix_nodes: must be >= 4");
    if (antithetic && (n_paths % 2) != 0)
        throw std::invalid_argument("SimConfig.n_paths: must be even with antithetic variates");
}

std::vector<double> simulate_vix(const ModelParams& p, double maturity, const SimConfig& cfg) {
    p.validate();
    cfg.validate();
    if (!(maturity > 0.0)) throw std::invalid_argument("simulate_vix: maturity must be > 0");

    const int nn = cfg.n_vix_nodes;
    const auto rule = QuadratureRule::gauss_legendre_on(maturity, maturity + p.delta, nn);

    SchemeSpec spec{KernelSpec(p.h), {}};
    spec.coords.reserve(2 * nn);
    for (int f = 0; f < 2; ++f)
        for (int i = 0; i < nn; ++i) spec.coords.push_back(Coordinate::forward(f, maturity, rule.nodes[i]));
    const GaussianSystem sys = build_system(spec);

    // E_T[v_r] = v0 [chi e^{nu^2 d(r) + nu z1} + chib e^{eta^2 d(r) + eta(rho z1 + rhob z2)}]
    std::vector<double> drift(nn);
    for (int i = 0; i < nn; ++i) {
        const double r = rule.nodes[i];
        drift[i] = (std::pow(r - maturity, 2.0 * p.h) - std::pow(r, 2.0 * p.h)) / (4.0 * p.h);
    }
    const double chib = p.chib(), rhob = p.rhob();

    std::vector<double> out(static_cast<std::size_t>(cfg.n_paths));
    run_batches(cfg.n_paths, cfg.threads, [&](std::int64_t plo, std::int64_t phi) {
        const std::int64_t dlo = cfg.antithetic ? plo / 2 : plo;
        const std::int64_t dhi = cfg.antithetic ? (phi + 1) / 2 : phi;
        const auto ndraws = static_cast<Eigen::Index>(dhi - dlo);
        Eigen::MatrixXd z(sys.dim(), ndraws);
        sample_into(sys, cfg.seed, static_cast<std::uint64_t>(dlo), false, z);
        for (Eigen::Index c = 0; c < ndraws; ++c) {
            for (int sgn = 0; sgn < (cfg.antithetic ? 2 : 1); ++sgn) {
                const std::int64_t path = cfg.antithetic ? 2 * (dlo + c) + sgn : dlo + c;
                if (path < plo || path >= phi) continue;
                const double flip = sgn ? -1.0 : 1.0;
                double acc = 0.0;
                for (int i = 0; i < nn; ++i) {
                    const double z1 = flip * z(i, c);
                    const double z2 = flip * z(nn + i, c);
                    const double e1 = std::exp(p.nu * p.nu * drift[i] + p.nu * z1);
                    const double e2 = std::exp(p.eta * p.eta * drift[i] +
                                               p.eta * (p.rho * z1 + rhob * z2));
                    acc += rule.weights[i] * p.v0 * (p.chi * e1 + chib * e2);
                }
                out[static_cast<std::size_t>(path)] = std::sqrt(acc / p.delta);
            }
        }
    });
    return out;
}

std::vector<double> simulate_spx(const ModelParams& p, double maturity, const SimConfig& cfg) {
    p.validate();
    cfg.validate();
    if (!(maturity > 0.0)) throw std::invalid_argument("simulate_spx: maturity must be > 0");

    const int n = cfg.n_steps;
    const double dt = maturity / n;
    const double sqdt = std::sqrt(dt);

    // Coordinates per factor: W^H at t_1..t_{n-1} (left points), W at t_1..t_n.
    SchemeSpec spec{KernelSpec(p.h), {}};
    const int nfbm = n - 1;
    for (int f = 0; f < 2; ++f) {
        for (int j = 1; j <= nfbm; ++j) spec.coords.push_back(Coordinate::fbm(f, j * dt));
        for (int j = 1; j <= n; ++j) spec.coords.push_back(Coordinate::brownian(f, j * dt));
    }
    const GaussianSystem sys = build_system(spec);
    const int per_factor = nfbm + n;

    std::vector<double> wick(nfbm + 1);  // 0.5 * Var[nu-normalized factor] at left points
    wick[0] = 0.0;
    for (int j = 1; j <= nfbm; ++j) wick[j] = std::pow(j * dt, 2.0 * p.h) / (4.0 * p.h);
    const double chib = p.chib(), rhob = p.rhob();

    std::vector<double> out(static_cast<std::size_t>(cfg.n_paths));
    run_batches(cfg.n_paths, cfg.threads, [&](std::int64_t plo, std::int64_t phi) {
        const std::int64_t dlo = cfg.antithetic ? plo / 2 : plo;
        const std::int64_t dhi = cfg.antithetic ? (phi + 1) / 2 : phi;
        const auto ndraws = static_cast<Eigen::Index>(dhi - dlo);
        Eigen::MatrixXd z(sys.dim(), ndraws);
        sample_into(sys, cfg.seed, static_cast<std::uint64_t>(dlo), false, z);
        std::vector<double> w3(n);
        for (Eigen::Index c = 0; c < ndraws; ++c) {
            const auto draw = static_cast<std::uint64_t>(dlo + c);
            NormalStream ns(cfg.seed, draw);
            for (int j = 0; j < n; ++j)
                w3[j] = ns(static_cast<std::uint64_t>(sys.dim() + j)) * sqdt;
            for (int sgn = 0; sgn < (cfg.antithetic ? 2 : 1); ++sgn) {
                const std::int64_t path = cfg.antithetic ? 2 * (dlo + c) + sgn : dlo + c;
                if (path < plo || path >= phi) continue;
                const double flip = sgn ? -1.0 : 1.0;
                double logs = 0.0;
                double w1p = 0.0, w2p = 0.0;  // previous grid Brownian values
                for (int j = 0; j < n; ++j) {
                    double v;
                    if (j == 0) {
                        v = p.v0;
                    } else {
                        const double w1h = flip * z(j - 1, c);
                        const double w2h = flip * z(per_factor + j - 1, c);
                        const double e1 = std::exp(p.nu * w1h - p.nu * p.nu * wick[j]);
                        const double e2 = std::exp(p.eta * (p.rho * w1h + rhob * w2h) -
                                                   p.eta * p.eta * wick[j]);
                        v = p.v0 * (p.chi * e1 + chib * e2);
                    }
                    const double w1 = flip * z(nfbm + j, c);
                    const double w2 = flip * z(per_factor + nfbm + j, c);
                    const double db =
                        p.rho1 * (w1 - w1p) + p.rho2 * (w2 - w2p) + p.rho3 * flip * w3[j];
                    logs += std::sqrt(v) * db - 0.5 * v * dt;
                    w1p = w1;
                    w2p = w2;
                }
                out[static_cast<std::size_t>(path)] = std::exp(logs);
            }
        }
    });
    return out;
}

namespace {

struct StrikeStats {
    double price = 0.0;
    double se = 0.0;
};

StrikeStats payoff_stats(const std::vector<double>& samples, double strike) {
    const auto n = samples.size();
    double sum = 0.0, sumsq = 0.0;
    for (double s : samples) {
        const double pay = std::max(s - strike, 0.0);
        sum += pay;
        sumsq += pay * pay;
    }
    StrikeStats st;
    st.price = sum / static_cast<double>(n);
    const double var = std::max(0.0, sumsq / static_cast<double>(n) - st.price * st.price);
    st.se = std::sqrt(var / static_cast<double>(n));
    return st;
}

// ATM metrics of one sub-sample; NaN level on failure.
AtmMetrics block_metrics(const std::vector<double>& block, const std::vector<double>& ks,
                         double maturity, std::size_t fit_width) {
    AtmMetrics bad;
    bad.level = std::numeric_limits<double>::quiet_NaN();
    double m0 = 0.0;
    for (double s : block) m0 += s;
    m0 /= static_cast<double>(block.size());
    if (!(m0 > 0.0)) return bad;
    const double x = std::log(m0);
    std::vector<double> ivs(ks.size(), std::numeric_limits<double>::quiet_NaN());
    for (std::size_t i = 0; i < ks.size(); ++i) {
        const auto st = payoff_stats(block, std::exp(ks[i]));
        try {
            ivs[i] = implied_vol(st.price, 0.0, x, ks[i], maturity);
        } catch (const std::domain_error&) {
        }
    }
    try {
        return smile_metrics(ks, ivs, x, fit_width);
    } catch (const std::invalid_argument&) {
        return bad;
    }
}

}  // namespace

Smile price_smile(const std::vector<double>& samples, double underlying,
                  const std::vector<double>& log_strikes, double maturity,
                  std::size_t fit_width) {
    if (samples.empty()) throw std::invalid_argument("price_smile: no samples");
    if (log_strikes.empty()) throw std::invalid_argument("price_smile: empty strike list");
    if (!(underlying > 0.0)) throw std::invalid_argument("price_smile: underlying must be > 0");

    Smile sm;
    sm.maturity = maturity;
    sm.underlying = underlying;
    sm.log_forward = std::log(underlying);
    sm.log_strikes = log_strikes;
    const auto ns = log_strikes.size();
    sm.prices.resize(ns);
    sm.price_se.resize(ns);
    sm.implied_vols.assign(ns, std::numeric_limits<double>::quiet_NaN());
    sm.iv_se.assign(ns, std::numeric_limits<double>::quiet_NaN());

    for (std::size_t i = 0; i < ns; ++i) {
        const auto st = payoff_stats(samples, std::exp(log_strikes[i]));
        sm.prices[i] = st.price;
        sm.price_se[i] = st.se;
        try {
            sm.implied_vols[i] = implied_vol(st.price, 0.0, sm.log_forward, log_strikes[i], maturity);
            const double vega = bs_vega(0.0, sm.log_forward, log_strikes[i], sm.implied_vols[i], maturity);
            if (vega > 0.0) sm.iv_se[i] = st.se / vega;
        } catch (const std::domain_error&) {
        }
    }

    sm.atm = smile_metrics(log_strikes, sm.implied_vols, sm.log_forward, fit_width);

    // Block means for the metric standard errors; blocks keep antithetic pairs.
    const auto n = samples.size();
    if (n >= 4 * kBlocks) {
        std::size_t base = n / kBlocks;
        base -= base % 2;
        std::vector<double> lv, sk, cv;
        for (std::size_t b = 0; b < kBlocks; ++b) {
            const std::size_t lo = b * base;
            const std::size_t hi = (b + 1 == kBlocks) ? n : lo + base;
            std::vector<double> block(samples.begin() + lo, samples.begin() + hi);
            const auto m = block_metrics(block, log_strikes, maturity, fit_width);
            if (std::isfinite(m.level)) {
                lv.push_back(m.level);
                sk.push_back(m.skew);
                cv.push_back(m.curvature);
            }
        }
        auto se_of = [](const std::vector<double>& v) {
            if (v.size() < 4) return std::numeric_limits<double>::quiet_NaN();
            double mean = 0.0;
            for (double x : v) mean += x;
            mean /= static_cast<double>(v.size());
            double var = 0.0;
            for (double x : v) var += (x - mean) * (x - mean);
            var /= static_cast<double>(v.size() - 1);
            return std::sqrt(var / static_cast<double>(v.size()));
        };
        sm.atm.level_se = se_of(lv);
        sm.atm.skew_se = se_of(sk);
        sm.atm.curvature_se = se_of(cv);
    }
    return sm;
}

std::vector<double> default_strike_grid(const std::vector<double>& samples, double maturity,
                                        int per_side, double spacing_mult) {
    if (samples.empty()) throw std::invalid_argument("default_strike_grid: no samples");
    double m0 = 0.0;
    for (double s : samples) m0 += s;
    m0 /= static_cast<double>(samples.size());
    if (!(m0 > 0.0)) throw std::invalid_argument("default_strike_grid: mean sample not positive");
    const double x = std::log(m0);
    const auto atm = payoff_stats(samples, m0);
    double iv_est;
    try {
        iv_est = implied_vol(atm.price, 0.0, x, x, maturity);
    } catch (const std::domain_error&) {
        iv_est = 0.0;
    }
    if (!(iv_est > 0.0)) {
        // degenerate (deterministic) samples: fall back to a tiny absolute width
        iv_est = 1e-6;
    }
    const double h = spacing_mult * iv_est * std::sqrt(maturity);
    std::vector<double> ks;
    ks.reserve(2 * per_side + 1);
    for (int j = -per_side; j <= per_side; ++j) ks.push_back(x + j * h);
    return ks;
}

std::vector<TermStructureRow> term_structure_study(const ModelParams& p, Underlying underlying,
                                                   const std::vector<double>& maturities,
                                                   const SimConfig& cfg) {
    for (std::size_t i = 1; i < maturities.size(); ++i)
        if (!(maturities[i] > maturities[i - 1]))
            throw std::invalid_argument("term_structure_study: maturities must be sorted ascending");
    for (double t : maturities)
        if (!(t > 0.0)) throw std::invalid_argument("term_structure_study: maturities must be > 0");

    const bool vix = underlying == Underlying::Vix;
    const bool curvature_ok = vix && p.h < 1.0 / 6.0;
    const SmileAsymptotics lim =
        vix ? vix_limits_rbergomi(p, curvature_ok) : spx_limits(p);

    std::vector<TermStructureRow> rows;
    rows.reserve(maturities.size());
    for (double t : maturities) {
        const auto samples = vix ? simulate_vix(p, t, cfg) : simulate_spx(p, t, cfg);
        double m0 = 0.0;
        for (double s : samples) m0 += s;
        m0 /= static_cast<double>(samples.size());
        const auto ks = default_strike_grid(samples, t);
        const Smile sm = price_smile(samples, m0, ks, t);

        TermStructureRow row;
        row.maturity = t;
        row.atm = sm.atm;
        row.rescaled_skew = sm.atm.skew * std::pow(t, -lim.skew_exponent);
        row.rescaled_curvature =
            curvature_ok ? sm.atm.curvature * std::pow(t, -lim.curvature_exponent) : 0.0;
        row.limit_level = lim.level;
        row.limit_skew = lim.skew_value;
        row.limit_curvature = curvature_ok && lim.curvature_value ? *lim.curvature_value : 0.0;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace rbergomi
