#pragma once

#include <functional>
#include <vector>

#include "exfun/params.hpp"
#include "exfun/transforms.hpp"

namespace exfun {

enum class InversionMethod { gaver_stehfest, talbot, bromwich };

struct InversionConfig {
    InversionMethod method = InversionMethod::gaver_stehfest;
    /// Stehfest order N (even, in [8, 20]) or contour node count (even, >= 8).
    int nodes = 14;
    /// Bromwich abscissa; the trapezoid aliasing error scales like e^{-2*shift*t},
    /// so pick roughly 9/t_min.  Ignored by the other methods.
    double contour_shift = 9.2;
    std::vector<double> t_grid;
};

struct InvertedValue {
    double t;
    double value;                 // reported value (clamped to [0,1] for CDFs)
    double method_error_estimate; // order-refinement delta
    double raw;                   // unclamped value, for monotonicity diagnostics
};

/// Gaver-Stehfest weights of even order n >= 2, computed once per order in
/// exact rational arithmetic and rounded to double.  Their sum is 0 for n >= 4.
const std::vector<double>& stehfest_weights(int n);

using TransformFn = std::function<Complex(Complex)>;

/// Numerically inverts a Laplace transform on cfg.t_grid.  gaver_stehfest
/// evaluates the transform at real frequencies only; talbot and bromwich
/// evaluate along deformed/vertical contours and retry a failed node once,
/// perturbed by 1e-6 relative, before raising NodeFailure.
[[nodiscard]] std::vector<InvertedValue> invert(const TransformFn& transform,
                                                const InversionConfig& cfg);

/// F(t, y) by inverting 1/z - P(y, z).  Reported value clamped to [0, 1].
[[nodiscard]] InvertedValue cdf_at(const GbmParams& params, double t, double y,
                                   const InversionConfig& cfg, const TransformOptions& topt = {});

/// p_t(y) by inverting phat(y, z).
[[nodiscard]] InvertedValue pdf_at(const GbmParams& params, double t, double y,
                                   const InversionConfig& cfg, const TransformOptions& topt = {});

}  // namespace exfun
