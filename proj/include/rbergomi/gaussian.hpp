#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "rbergomi/kernel.hpp"

namespace rbergomi {

// One coordinate of the joint Gaussian vector driving a simulation scheme.
// Every coordinate is a Wiener integral int_0^U (a - s)^p dW^factor_s with
// p in {H - 1/2, 0}:
//   FbmValue(t):          U = t, a = t, p = H - 1/2
//   BrownianValue(t):     U = t, p = 0
//   ForwardIntegral(T,r): U = T, a = r, p = H - 1/2
struct Coordinate {
    enum class Kind { FbmValue, BrownianValue, ForwardIntegral };

    Kind kind;
    int factor;      // independent driving Brownian motion index
    double time;     // t for values, r for forward integrals
    double horizon;  // T for forward integrals, unused otherwise

    static Coordinate fbm(int factor, double t) { return {Kind::FbmValue, factor, t, 0.0}; }
    static Coordinate brownian(int factor, double t) { return {Kind::BrownianValue, factor, t, 0.0}; }
    static Coordinate forward(int factor, double horizon, double r) {
        return {Kind::ForwardIntegral, factor, r, horizon};
    }
};

struct SchemeSpec {
    KernelSpec kernel;
    std::vector<Coordinate> coords;
};

struct GaussianSystem {
    Eigen::MatrixXd cov;   // symmetric PSD
    Eigen::MatrixXd chol;  // lower triangular, chol * chol^T == cov (+ jitter)
    double jitter = 0.0;   // diagonal regularization actually applied
    std::vector<Coordinate> labels;

    Eigen::Index dim() const { return cov.rows(); }
};

// Assembles the covariance from the kernel covariances and factors it,
// escalating diagonal jitter 1e-12*maxdiag -> 1e-8*maxdiag on LLT failure.
GaussianSystem build_system(const SchemeSpec& spec);

// Covariance between two coordinates (zero across factors).
double coordinate_cov(const KernelSpec& k, const Coordinate& a, const Coordinate& b);

// n independent draws of the joint vector, one column per draw. Draw j is a
// pure function of (seed, stream0 + j); thread count never enters.
Eigen::MatrixXd sample(const GaussianSystem& sys, std::uint64_t seed, std::uint64_t stream0,
                       int n);

// Fills `out` (dim x count) with draws for streams stream0..stream0+count-1,
// multiplying the Cholesky factor into `normals` scratch. negate flips the
// whole Gaussian vector (antithetic variate).
void sample_into(const GaussianSystem& sys, std::uint64_t seed, std::uint64_t stream0,
                 bool negate, Eigen::Ref<Eigen::MatrixXd> out);

}  // namespace rbergomi
