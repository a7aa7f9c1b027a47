#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "exfun/params.hpp"

namespace exfun {

enum class Integrator { riemann_left, trapezoid };

/// Discretization-bias tag carried by Monte Carlo estimates.
enum class BiasNote { first_order_in_dt, second_order_in_dt };

struct McConfig {
    std::size_t paths = 100000;
    int steps_per_unit_time = 1000;
    double horizon = 1.0;  // t_max
    std::uint64_t seed = 1;
    Integrator integrator = Integrator::trapezoid;
};

struct McEstimate {
    double value;
    double std_error;
    std::size_t n_effective;
    BiasNote bias_note;
};

/// Simulated values of I_t = integral_0^t e^{-X_s} ds, column per requested t.
struct McSamples {
    std::vector<double> t_points;
    std::vector<std::vector<double>> by_t;  // by_t[ti][path]
    BiasNote bias_note;
};

/// Simulates cfg.paths paths of X with exact Gaussian increments on a grid of
/// width <= 1/steps_per_unit_time that contains every t_point, accumulating
/// the integral with the configured rule.  Per-path RNG streams are derived
/// from (seed, path index), so results are bit-identical for a given config
/// regardless of thread count.  t_points must be sorted, positive, <= horizon.
[[nodiscard]] McSamples simulate_integrals(const GbmParams& params, const McConfig& cfg,
                                           std::vector<double> t_points);

/// Fraction of samples <= y, with binomial standard error sqrt(p(1-p)/n).
[[nodiscard]] McEstimate empirical_cdf(std::span<const double> samples, double y,
                                       BiasNote note = BiasNote::second_order_in_dt);

/// Gaussian-kernel density estimate at y with plug-in standard error.
[[nodiscard]] McEstimate empirical_pdf(std::span<const double> samples, double y, double bandwidth,
                                       BiasNote note = BiasNote::second_order_in_dt);

/// Silverman's rule: 0.9 min(sd, IQR/1.34) n^{-1/5}.
[[nodiscard]] double silverman_bandwidth(std::span<const double> samples);

/// Sample dump, one row per (path, t): `path_id,t,I_t`.
void write_samples_csv(std::ostream& out, const McSamples& samples);

}  // namespace exfun
