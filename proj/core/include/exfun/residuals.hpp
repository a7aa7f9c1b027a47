#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "exfun/inversion.hpp"
#include "exfun/params.hpp"
#include "exfun/transforms.hpp"

namespace exfun {

/// Finite-difference residual diagnostics on a grid.  Residuals are
/// normalized by the largest individual equation-term magnitude on the grid,
/// so norm_rel is scale-free.
struct ResidualReport {
    std::vector<double> coord1;       // y (ODE) or t (PDE)
    std::vector<double> coord2;       // lambda (ODE) or y (PDE)
    std::vector<double> residuals;    // per point
    std::vector<double> term_scales;  // per point, max |term|
    std::vector<double> step_sizes;   // stencil steps used
    double norm_rel = 0.0;            // max |residual| / max term scale
    double error_floor = 0.0;         // tabulation error / term scale (PDE only)
};

/// Residual of (sigma^2/2) y^2 P'' + (b y - 1) P' - lambda P = 0 for a
/// caller-supplied P(y); 5-point centered stencils with per-point step
/// h = rel_step * y.
[[nodiscard]] ResidualReport ode_residual_of(const std::function<double(double)>& p_of_y,
                                             const GbmParams& params, double lambda,
                                             std::span<const double> y_grid,
                                             double rel_step = 1e-4);

/// Same residual with P taken from ccdf_transform.
[[nodiscard]] ResidualReport ode_residual(const GbmParams& params, double lambda,
                                          std::span<const double> y_grid, double rel_step = 1e-4,
                                          const TransformOptions& topt = {});

/// Tabulated field F(t, y) with per-entry error estimates (the inversion
/// error floor below which PDE residuals cannot be expected to drop).
struct FieldTable {
    std::vector<double> t_grid;
    std::vector<double> y_grid;
    std::vector<std::vector<double>> value;  // value[ti][yi]
    std::vector<std::vector<double>> err;    // same shape; empty means zero
};

/// Inverts the CDF transform over the grid product to build a FieldTable.
[[nodiscard]] FieldTable tabulate_cdf(const GbmParams& params, std::span<const double> t_grid,
                                      std::span<const double> y_grid, const InversionConfig& cfg,
                                      const TransformOptions& topt = {});

/// Two algebraically identical spellings of the forward equation:
///   conservative: dF/dt = (sigma^2/2) d/dy(y^2 dF/dy) - (a y + 1) dF/dy
///   expanded:     dF/dt = (sigma^2/2) y^2 F_yy + (b y - 1) F_y
enum class PdeForm { conservative, expanded };

/// Centered-stencil residual of the forward PDE on the interior of the
/// tabulated grid (nonuniform spacing handled).
[[nodiscard]] ResidualReport pde_residual(const GbmParams& params, const FieldTable& table,
                                          PdeForm form = PdeForm::conservative);

/// Rows of `coord1,coord2,residual,term_scale`.
void write_residual_csv(std::ostream& out, const ResidualReport& report);

}  // namespace exfun
