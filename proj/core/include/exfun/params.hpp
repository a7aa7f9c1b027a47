#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>

#include "exfun/errors.hpp"

namespace exfun {

using Complex = std::complex<double>;

/// Drift/volatility pair of the underlying Brownian motion with drift,
/// X_t = mu*t + sigma*W_t.  All derived constants are recomputed on demand.
struct GbmParams {
    double mu;
    double sigma;

    GbmParams(double mu_, double sigma_) : mu(mu_), sigma(sigma_) {
        if (!std::isfinite(mu) || !std::isfinite(sigma) || !(sigma > 0.0)) {
            throw std::invalid_argument("GbmParams: require finite mu and sigma > 0");
        }
    }

    [[nodiscard]] double sigma2() const noexcept { return sigma * sigma; }
};

/// a = sigma^2/2 - mu.  Drift rate of the exponential moment E[e^{-X_s}] = e^{a s}.
[[nodiscard]] inline double derived_a(const GbmParams& p) noexcept {
    return 0.5 * p.sigma2() - p.mu;
}

/// b = mu + sigma^2/2.  First-order coefficient of the frequency-domain ODE.
[[nodiscard]] inline double derived_b(const GbmParams& p) noexcept {
    return p.mu + 0.5 * p.sigma2();
}

/// Positive-branch exponent solving (sigma^2/2) k^2 - mu k - lambda = 0.
struct ExponentK {
    Complex value;
};

/// k = (mu + sqrt(mu^2 + 2 lambda sigma^2)) / sigma^2 with the principal square
/// root (Re >= 0).  For real lambda > 0 the result is real and positive.
///
/// Arguments whose discriminant falls on the nonpositive real axis (the branch
/// cut) raise BranchError; contour callers perturb the offending node rather
/// than having the branch silently flip here.
inline ExponentK compute_k(const GbmParams& p, Complex lambda) {
    const double s2 = p.sigma2();
    const Complex disc = p.mu * p.mu + 2.0 * lambda * s2;
    const double scale = std::max(1.0, std::abs(disc));
    if (disc.real() <= 0.0 && std::abs(disc.imag()) <= 1e-12 * scale) {
        throw BranchError("compute_k: mu^2 + 2*lambda*sigma^2 lies on the branch cut");
    }
    return ExponentK{(p.mu + std::sqrt(disc)) / s2};
}

}  // namespace exfun
