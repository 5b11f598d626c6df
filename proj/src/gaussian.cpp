#include "rbergomi/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "rbergomi/rng.hpp"

namespace rbergomi {

namespace {

struct KernelCoord {
    double power;  // H - 1/2 or 0
    double a;      // kernel anchor
    double upper;  // integration horizon
};

KernelCoord as_kernel(const KernelSpec& k, const Coordinate& c) {
    switch (c.kind) {
        case Coordinate::Kind::FbmValue:
            if (!(c.time > 0.0))
                throw std::invalid_argument("fBm coordinate requires t > 0 (value at 0 is identically 0)");
            return {k.hm(), c.time, c.time};
        case Coordinate::Kind::BrownianValue:
            if (!(c.time > 0.0)) throw std::invalid_argument("Brownian coordinate requires t > 0");
            return {0.0, c.time, c.time};
        case Coordinate::Kind::ForwardIntegral:
            if (!(c.horizon > 0.0))
                throw std::invalid_argument("forward-integral coordinate requires horizon > 0");
            if (c.time < c.horizon)
                throw std::domain_error("forward-integral coordinate requires r >= horizon");
            return {k.hm(), c.time, c.horizon};
    }
    throw std::logic_error("unreachable");
}

}  // namespace

double coordinate_cov(const KernelSpec& k, const Coordinate& a, const Coordinate& b) {
    if (a.factor != b.factor) return 0.0;
    const KernelCoord ka = as_kernel(k, a), kb = as_kernel(k, b);
    const double m = std::min(ka.upper, kb.upper);
    const bool sa = ka.power != 0.0, sb = kb.power != 0.0;
    if (sa && sb) return kernel_product_integral(k, ka.a - m, kb.a - m, m);
    if (!sa && !sb) return m;
    const double anchor = sa ? ka.a : kb.a;  // singular-kernel side
    const double hp = k.hp();
    return (std::pow(anchor, hp) - std::pow(anchor - m, hp)) / hp;
}

GaussianSystem build_system(const SchemeSpec& spec) {
    const auto n = static_cast<Eigen::Index>(spec.coords.size());
    GaussianSystem sys;
    sys.labels = spec.coords;
    sys.cov.resize(n, n);
    sys.chol.resize(n, n);
    if (n == 0) return sys;

    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j <= i; ++j) {
            const double c = coordinate_cov(spec.kernel, spec.coords[i], spec.coords[j]);
            sys.cov(i, j) = c;
            sys.cov(j, i) = c;
        }

    const double maxdiag = sys.cov.diagonal().maxCoeff();
    double jitter = 0.0;
    for (;;) {
        Eigen::MatrixXd work = sys.cov;
        if (jitter > 0.0) work.diagonal().array() += jitter;
        Eigen::LLT<Eigen::MatrixXd> llt(work);
        if (llt.info() == Eigen::Success) {
            sys.chol = llt.matrixL();
            sys.jitter = jitter;
            return sys;
        }
        jitter = (jitter == 0.0) ? 1e-12 * maxdiag : 10.0 * jitter;
        if (jitter > 1e-8 * maxdiag) {
            std::ostringstream msg;
            msg << "build_system: Cholesky failed after max jitter " << 1e-8 * maxdiag
                << " (dim=" << n << ", maxdiag=" << maxdiag
                << ", mindiag=" << sys.cov.diagonal().minCoeff() << ")";
            throw std::runtime_error(msg.str());
        }
    }
}

void sample_into(const GaussianSystem& sys, std::uint64_t seed, std::uint64_t stream0,
                 bool negate, Eigen::Ref<Eigen::MatrixXd> out) {
    const Eigen::Index dim = sys.dim();
    const Eigen::Index count = out.cols();
    Eigen::MatrixXd z(dim, count);
    for (Eigen::Index j = 0; j < count; ++j) {
        NormalStream ns(seed, stream0 + static_cast<std::uint64_t>(j));
        for (Eigen::Index i = 0; i < dim; ++i) z(i, j) = ns(static_cast<std::uint64_t>(i));
    }
    if (negate) z = -z;
    out.noalias() = sys.chol.triangularView<Eigen::Lower>() * z;
}

Eigen::MatrixXd sample(const GaussianSystem& sys, std::uint64_t seed, std::uint64_t stream0,
                       int n) {
    if (n < 0) throw std::invalid_argument("sample: n must be >= 0");
    Eigen::MatrixXd out(sys.dim(), n);
    if (n > 0 && sys.dim() > 0) sample_into(sys, seed, stream0, false, out);
    return out;
}

}  // namespace rbergomi
