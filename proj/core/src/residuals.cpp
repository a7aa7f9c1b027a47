#include "exfun/residuals.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "exfun/csv.hpp"
#include "exfun/parallel.hpp"

namespace exfun {

namespace {

void finalize_norm(ResidualReport& r) {
    double max_res = 0.0;
    double max_scale = 0.0;
    for (std::size_t i = 0; i < r.residuals.size(); ++i) {
        max_res = std::max(max_res, std::abs(r.residuals[i]));
        max_scale = std::max(max_scale, r.term_scales[i]);
    }
    r.norm_rel = max_scale > 0.0 ? max_res / max_scale : 0.0;
}

// centered first/second derivative weights on a nonuniform 3-point stencil
struct Stencil3 {
    double wl, wc, wr;
};

Stencil3 d1_weights(double h1, double h2) {
    return {-h2 / (h1 * (h1 + h2)), (h2 - h1) / (h1 * h2), h1 / (h2 * (h1 + h2))};
}

Stencil3 d2_weights(double h1, double h2) {
    return {2.0 / (h1 * (h1 + h2)), -2.0 / (h1 * h2), 2.0 / (h2 * (h1 + h2))};
}

}  // namespace

ResidualReport ode_residual_of(const std::function<double(double)>& p_of_y,
                               const GbmParams& params, double lambda,
                               std::span<const double> y_grid, double rel_step) {
    if (!(lambda > 0.0)) throw std::invalid_argument("ode_residual: lambda must be > 0");
    if (!(rel_step > 0.0)) throw std::invalid_argument("ode_residual: rel_step must be > 0");
    const double half_s2 = 0.5 * params.sigma2();
    const double b = derived_b(params);

    ResidualReport r;
    const std::size_t n = y_grid.size();
    r.coord1.resize(n);
    r.coord2.assign(n, lambda);
    r.residuals.resize(n);
    r.term_scales.resize(n);
    r.step_sizes.resize(n);

    parallel_for(n, [&](std::size_t i) {
        const double y = y_grid[i];
        if (!(y > 0.0)) throw std::invalid_argument("ode_residual: grid points must be > 0");
        const double h = rel_step * y;
        const double pm2 = p_of_y(y - 2.0 * h);
        const double pm1 = p_of_y(y - h);
        const double p0 = p_of_y(y);
        const double pp1 = p_of_y(y + h);
        const double pp2 = p_of_y(y + 2.0 * h);
        const double d1 = (-pp2 + 8.0 * pp1 - 8.0 * pm1 + pm2) / (12.0 * h);
        const double d2 = (-pp2 + 16.0 * pp1 - 30.0 * p0 + 16.0 * pm1 - pm2) / (12.0 * h * h);
        const double term_diffusion = half_s2 * y * y * d2;
        const double term_drift = (b * y - 1.0) * d1;
        const double term_mass = lambda * p0;
        r.coord1[i] = y;
        r.residuals[i] = term_diffusion + term_drift - term_mass;
        r.term_scales[i] = std::max({std::abs(term_diffusion), std::abs(term_drift),
                                     std::abs(term_mass)});
        r.step_sizes[i] = h;
    });
    finalize_norm(r);
    return r;
}

ResidualReport ode_residual(const GbmParams& params, double lambda,
                            std::span<const double> y_grid, double rel_step,
                            const TransformOptions& topt) {
    auto p = [&](double y) {
        return ccdf_transform(params, {y, Complex(lambda, 0.0)}, topt).value.real();
    };
    return ode_residual_of(p, params, lambda, y_grid, rel_step);
}

FieldTable tabulate_cdf(const GbmParams& params, std::span<const double> t_grid,
                        std::span<const double> y_grid, const InversionConfig& cfg,
                        const TransformOptions& topt) {
    FieldTable table;
    table.t_grid.assign(t_grid.begin(), t_grid.end());
    table.y_grid.assign(y_grid.begin(), y_grid.end());
    table.value.assign(t_grid.size(), std::vector<double>(y_grid.size()));
    table.err.assign(t_grid.size(), std::vector<double>(y_grid.size()));
    const std::size_t ny = y_grid.size();
    parallel_for(t_grid.size() * ny, [&](std::size_t idx) {
        const std::size_t ti = idx / ny;
        const std::size_t yi = idx % ny;
        const InvertedValue v = cdf_at(params, t_grid[ti], y_grid[yi], cfg, topt);
        table.value[ti][yi] = v.raw;  // unclamped, so stencils see the actual sequence
        table.err[ti][yi] = v.method_error_estimate;
    });
    return table;
}

ResidualReport pde_residual(const GbmParams& params, const FieldTable& table, PdeForm form) {
    const std::size_t nt = table.t_grid.size();
    const std::size_t ny = table.y_grid.size();
    if (nt < 3 || ny < 3) {
        throw std::invalid_argument("pde_residual: grids must admit centered stencils (>= 3 points)");
    }
    const double half_s2 = 0.5 * params.sigma2();
    const double a = derived_a(params);
    const double b = derived_b(params);

    ResidualReport r;
    double max_err = 0.0;
    for (std::size_t ti = 1; ti + 1 < nt; ++ti) {
        const double ht1 = table.t_grid[ti] - table.t_grid[ti - 1];
        const double ht2 = table.t_grid[ti + 1] - table.t_grid[ti];
        const Stencil3 dt = d1_weights(ht1, ht2);
        for (std::size_t yi = 1; yi + 1 < ny; ++yi) {
            const double y = table.y_grid[yi];
            const double hy1 = y - table.y_grid[yi - 1];
            const double hy2 = table.y_grid[yi + 1] - y;
            const Stencil3 dy = d1_weights(hy1, hy2);
            const Stencil3 dyy = d2_weights(hy1, hy2);

            const double f_t = dt.wl * table.value[ti - 1][yi] + dt.wc * table.value[ti][yi] +
                               dt.wr * table.value[ti + 1][yi];
            const double f_y = dy.wl * table.value[ti][yi - 1] + dy.wc * table.value[ti][yi] +
                               dy.wr * table.value[ti][yi + 1];
            const double f_yy = dyy.wl * table.value[ti][yi - 1] + dyy.wc * table.value[ti][yi] +
                                dyy.wr * table.value[ti][yi + 1];

            double residual = 0.0;
            double scale = 0.0;
            if (form == PdeForm::conservative) {
                const double diffusion = half_s2 * (y * y * f_yy + 2.0 * y * f_y);
                const double drift = (a * y + 1.0) * f_y;
                residual = diffusion - drift - f_t;
                scale = std::max({std::abs(diffusion), std::abs(drift), std::abs(f_t)});
            } else {
                const double diffusion = half_s2 * y * y * f_yy;
                const double drift = (b * y - 1.0) * f_y;
                residual = diffusion + drift - f_t;
                scale = std::max({std::abs(diffusion), std::abs(drift), std::abs(f_t)});
            }
            r.coord1.push_back(table.t_grid[ti]);
            r.coord2.push_back(y);
            r.residuals.push_back(residual);
            r.term_scales.push_back(scale);
            r.step_sizes.push_back(std::min(hy1, hy2));
            if (!table.err.empty()) {
                max_err = std::max({max_err, table.err[ti][yi - 1], table.err[ti][yi],
                                    table.err[ti][yi + 1], table.err[ti - 1][yi],
                                    table.err[ti + 1][yi]});
            }
        }
    }
    finalize_norm(r);
    double max_scale = 0.0;
    for (double s : r.term_scales) max_scale = std::max(max_scale, s);
    r.error_floor = max_scale > 0.0 ? max_err / max_scale : 0.0;
    return r;
}

void write_residual_csv(std::ostream& out, const ResidualReport& report) {
    out << "coord1,coord2,residual,term_scale\n";
    for (std::size_t i = 0; i < report.residuals.size(); ++i) {
        out << csv_number(report.coord1[i]) << ',' << csv_number(report.coord2[i]) << ','
            << csv_number(report.residuals[i]) << ',' << csv_number(report.term_scales[i]) << '\n';
    }
}

}  // namespace exfun
