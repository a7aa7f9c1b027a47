#pragma once

#include <vector>

#include "exfun/kummer.hpp"
#include "exfun/params.hpp"

namespace exfun {

/// A point (y, lambda) at which a Laplace transform in t is evaluated.
struct LaplaceQuery {
    double y;        // functional level, same units as I_t; >= 0
    Complex lambda;  // frequency; Re > 0 for the real-facing operations
};

enum class TransformKind { ccdf, cdf, pdf };

struct TransformValue {
    Complex value;
    TransformKind kind;
    std::vector<KummerRegime> regimes;  // Kummer regimes touched by the evaluation
    double abs_error_estimate;
};

struct TransformOptions {
    double target_rel_error = 1e-6;  // EvaluationError beyond this
    KummerOptions kummer{};
};

/// P(y, lambda), the Laplace transform in t of the complementary CDF
/// P(I_t > y):
///   P = (1/lambda) (2/(y sigma^2))^k Gamma(1 - 2mu/s2 + k)/Gamma(1 - 2mu/s2 + 2k)
///       * M(k, 1 - 2mu/s2 + 2k, -2/(y sigma^2)),
/// with k the positive root from compute_k.  y = 0 returns the limit
/// 1/lambda; for real lambda the value is real, in (0, 1/lambda], and
/// nonincreasing in y.
[[nodiscard]] TransformValue ccdf_transform(const GbmParams& params, const LaplaceQuery& q,
                                            const TransformOptions& opt = {});

/// Fhat(y, lambda) = 1/lambda - P(y, lambda), the transform of the CDF.
[[nodiscard]] TransformValue cdf_transform(const GbmParams& params, const LaplaceQuery& q,
                                           const TransformOptions& opt = {});

/// phat(y, lambda) = -dP/dy, the transform of the density, differentiated
/// symbolically via dM/dz = (a/b) M(a+1, b+1, z):
///   phat = (1/lambda) (sigma^2/2)^{-k} Gamma-ratio
///          * [ k y^{-k-1} M(k, beta, z) - (2k/(sigma^2 beta)) y^{-k-2} M(k+1, beta+1, z) ],
/// beta = 1 - 2mu/sigma^2 + 2k, z = -2/(y sigma^2).  Requires y > 0.
[[nodiscard]] TransformValue pdf_transform(const GbmParams& params, const LaplaceQuery& q,
                                           const TransformOptions& opt = {});

/// Analytic extension P(y, z) off the real axis.  Values in the closed lower
/// half-plane are produced by Schwarz reflection, so P(y, conj z) is exactly
/// conj(P(y, z)), and real z reproduces ccdf_transform bit for bit.  Nodes of
/// deformed inversion contours may have Re(z) <= 0; anything on the k branch
/// cut raises BranchError.
[[nodiscard]] TransformValue ccdf_transform_complex(const GbmParams& params, Complex z, double y,
                                                    const TransformOptions& opt = {});

/// Analytic extension of phat(y, z), same conventions as ccdf_transform_complex.
[[nodiscard]] TransformValue pdf_transform_complex(const GbmParams& params, Complex z, double y,
                                                   const TransformOptions& opt = {});

/// E[I_t] = (e^{a t} - 1)/a with a = derived_a (t when a = 0).  Analytic
/// anchor for the Monte Carlo oracle.
[[nodiscard]] double moment_first(const GbmParams& params, double t);

}  // namespace exfun
