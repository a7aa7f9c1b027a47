#include "exfun/cli.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "exfun/csv.hpp"
#include "exfun/errors.hpp"
#include "exfun/parallel.hpp"
#include "exfun/residuals.hpp"
#include "exfun/transforms.hpp"

namespace exfun {

namespace {

// ---------------------------------------------------------------------------
// helpers
// ---------------------------------------------------------------------------

std::string spacing_text(Spacing s) { return s == Spacing::linear ? "linear" : "log"; }

std::string grid_text(const GridSpec& g) {
    return csv_number(g.start) + ":" + csv_number(g.stop) + ":" + std::to_string(g.count) + ":" +
           spacing_text(g.spacing);
}

std::string method_text(InversionMethod m) {
    switch (m) {
        case InversionMethod::gaver_stehfest: return "stehfest";
        case InversionMethod::talbot: return "talbot";
        case InversionMethod::bromwich: return "bromwich";
    }
    return "stehfest";
}

std::string integrator_text(Integrator i) {
    return i == Integrator::riemann_left ? "left" : "trapezoid";
}

using KvList = std::vector<std::pair<std::string, std::string>>;

void emit_comment(std::ostream& os, const KvList& kvs) {
    os << "# params:";
    for (const auto& [k, v] : kvs) os << ' ' << k << '=' << v;
    os << '\n';
}

const GridSpec& require_axis(const std::optional<GridSpec>& axis, const char* what) {
    if (!axis) throw std::invalid_argument(std::string("missing required axis: ") + what);
    return *axis;
}

double require_single(const GridSpec& axis, const char* what) {
    if (axis.count != 1) {
        throw std::invalid_argument(std::string(what) + " expects a single value here");
    }
    return axis.start;
}

InversionConfig resolve_inversion(const RunSpec& spec) {
    InversionConfig cfg = spec.inversion;
    if (cfg.nodes == 0) {
        switch (cfg.method) {
            case InversionMethod::gaver_stehfest: cfg.nodes = 14; break;
            case InversionMethod::talbot: cfg.nodes = 32; break;
            case InversionMethod::bromwich: cfg.nodes = 48; break;
        }
    }
    return cfg;
}

KvList inversion_kvs(const InversionConfig& cfg) {
    KvList kvs{{"method", method_text(cfg.method)}, {"nodes", std::to_string(cfg.nodes)}};
    if (cfg.method == InversionMethod::bromwich) {
        kvs.emplace_back("contour_shift", csv_number(cfg.contour_shift));
    }
    return kvs;
}

// ---------------------------------------------------------------------------
// command implementations
// ---------------------------------------------------------------------------

void run_transform_like(const RunSpec& spec, const GbmParams& params, std::ostream& os,
                        bool single_point) {
    const GridSpec y_axis = require_axis(spec.y_axis, "--y/--y-grid");
    const GridSpec l_axis = require_axis(spec.lambda_axis, "--lambda/--lambda-grid");
    if (single_point) {
        require_single(y_axis, "transform --y");
        require_single(l_axis, "transform --lambda");
    }
    const auto ys = make_grid(y_axis);
    const auto ls = make_grid(l_axis);
    for (double y : ys) {
        if (!(y > 0.0)) throw std::invalid_argument("--y/--y-grid: levels must be > 0");
    }
    for (double l : ls) {
        if (!(l > 0.0)) throw std::invalid_argument("--lambda/--lambda-grid: frequencies must be > 0");
    }

    emit_comment(os, {{"command", single_point ? "transform" : "table"},
                      {"mu", csv_number(spec.mu)},
                      {"sigma", csv_number(spec.sigma)},
                      {"y_grid", grid_text(y_axis)},
                      {"lambda_grid", grid_text(l_axis)}});
    os << "y,lambda,P,Fhat,phat\n";

    std::vector<std::string> rows(ys.size() * ls.size());
    parallel_for(rows.size(), [&](std::size_t i) {
        const double y = ys[i / ls.size()];
        const double lambda = ls[i % ls.size()];
        const LaplaceQuery q{y, Complex(lambda, 0.0)};
        const double p = ccdf_transform(params, q).value.real();
        const double f = cdf_transform(params, q).value.real();
        const double d = pdf_transform(params, q).value.real();
        rows[i] = csv_number(y) + "," + csv_number(lambda) + "," + csv_number(p) + "," +
                  csv_number(f) + "," + csv_number(d) + "\n";
    });
    for (const auto& row : rows) os << row;
}

void run_inverted_grid(const RunSpec& spec, const GbmParams& params, std::ostream& os, bool cdf) {
    const GridSpec t_axis = require_axis(spec.t_axis, "--t/--t-grid");
    const GridSpec y_axis = require_axis(spec.y_axis, "--y/--y-grid");
    const auto ts = make_grid(t_axis);
    const auto ys = make_grid(y_axis);
    const InversionConfig cfg = resolve_inversion(spec);

    KvList kvs{{"command", cdf ? "cdf" : "pdf"},
               {"mu", csv_number(spec.mu)},
               {"sigma", csv_number(spec.sigma)},
               {"t_grid", grid_text(t_axis)},
               {"y_grid", grid_text(y_axis)}};
    for (auto& kv : inversion_kvs(cfg)) kvs.push_back(kv);
    emit_comment(os, kvs);
    os << "t,y,value,err_est\n";

    std::vector<std::string> rows(ts.size() * ys.size());
    parallel_for(rows.size(), [&](std::size_t i) {
        const double t = ts[i / ys.size()];
        const double y = ys[i % ys.size()];
        const InvertedValue v =
            cdf ? cdf_at(params, t, y, cfg) : pdf_at(params, t, y, cfg);
        rows[i] = csv_number(t) + "," + csv_number(y) + "," + csv_number(v.value) + "," +
                  csv_number(v.method_error_estimate) + "\n";
    });
    for (const auto& row : rows) os << row;
}

void run_mc_check(const RunSpec& spec, const GbmParams& params, std::ostream& os) {
    const double t = require_single(require_axis(spec.t_axis, "--t"), "mc-check --t");
    const double y = require_single(require_axis(spec.y_axis, "--y"), "mc-check --y");
    if (!(t > 0.0) || !(y > 0.0)) throw std::invalid_argument("mc-check: t and y must be > 0");

    McConfig mc = spec.mc;
    mc.horizon = t;
    const InversionConfig cfg = resolve_inversion(spec);

    const McSamples samples = simulate_integrals(params, mc, {t});
    const McEstimate est = empirical_cdf(samples.by_t.front(), y, samples.bias_note);
    const double analytic = cdf_at(params, t, y, cfg).value;
    const bool pass = std::abs(analytic - est.value) <= 3.0 * est.std_error + 0.003;

    KvList kvs{{"command", "mc-check"},
               {"mu", csv_number(spec.mu)},
               {"sigma", csv_number(spec.sigma)},
               {"t", csv_number(t)},
               {"y", csv_number(y)},
               {"paths", std::to_string(mc.paths)},
               {"steps", std::to_string(mc.steps_per_unit_time)},
               {"seed", std::to_string(mc.seed)},
               {"integrator", integrator_text(mc.integrator)}};
    for (auto& kv : inversion_kvs(cfg)) kvs.push_back(kv);
    emit_comment(os, kvs);
    os << "t,y,analytic,mc,se,pass\n";
    os << csv_number(t) << ',' << csv_number(y) << ',' << csv_number(analytic) << ','
       << csv_number(est.value) << ',' << csv_number(est.std_error) << ',' << (pass ? 1 : 0)
       << '\n';

    if (!spec.dump_samples_path.empty()) {
        std::ofstream dump(spec.dump_samples_path);
        if (!dump) {
            throw std::invalid_argument("mc-check: cannot open --dump-samples path " +
                                        spec.dump_samples_path);
        }
        write_samples_csv(dump, samples);
    }
}

void run_verify(const RunSpec& spec, const GbmParams& params, std::ostream& os) {
    if (spec.verify_kind == "ode") {
        const GridSpec y_axis = require_axis(spec.y_axis, "--y-grid");
        if (!(spec.verify_lambda > 0.0)) {
            throw std::invalid_argument("verify: --lambda must be > 0");
        }
        const auto ys = make_grid(y_axis);
        const ResidualReport rep = ode_residual(params, spec.verify_lambda, ys);
        emit_comment(os, {{"command", "verify"},
                          {"kind", "ode"},
                          {"mu", csv_number(spec.mu)},
                          {"sigma", csv_number(spec.sigma)},
                          {"lambda", csv_number(spec.verify_lambda)},
                          {"y_grid", grid_text(y_axis)},
                          {"norm_rel", csv_number(rep.norm_rel)}});
        write_residual_csv(os, rep);
        return;
    }
    if (spec.verify_kind == "pde") {
        const GridSpec t_axis = require_axis(spec.t_axis, "--t-grid");
        const GridSpec y_axis = require_axis(spec.y_axis, "--y-grid");
        const auto ts = make_grid(t_axis);
        const auto ys = make_grid(y_axis);
        const InversionConfig cfg = resolve_inversion(spec);
        const FieldTable table = tabulate_cdf(params, ts, ys, cfg);
        const ResidualReport rep = pde_residual(params, table);
        KvList kvs{{"command", "verify"},
                   {"kind", "pde"},
                   {"mu", csv_number(spec.mu)},
                   {"sigma", csv_number(spec.sigma)},
                   {"t_grid", grid_text(t_axis)},
                   {"y_grid", grid_text(y_axis)}};
        for (auto& kv : inversion_kvs(cfg)) kvs.push_back(kv);
        kvs.emplace_back("norm_rel", csv_number(rep.norm_rel));
        kvs.emplace_back("error_floor", csv_number(rep.error_floor));
        emit_comment(os, kvs);
        write_residual_csv(os, rep);
        return;
    }
    throw std::invalid_argument("verify: --kind must be 'ode' or 'pde'");
}

}  // namespace

int run(const RunSpec& spec, std::ostream& out) {
    const GbmParams params(spec.mu, spec.sigma);

    std::ofstream file;
    std::ostream* os = &out;
    if (!spec.output_path.empty()) {
        file.open(spec.output_path);
        if (!file) throw std::invalid_argument("cannot open --output path " + spec.output_path);
        os = &file;
    }

    switch (spec.command) {
        case Command::transform: run_transform_like(spec, params, *os, true); break;
        case Command::table: run_transform_like(spec, params, *os, false); break;
        case Command::cdf: run_inverted_grid(spec, params, *os, true); break;
        case Command::pdf: run_inverted_grid(spec, params, *os, false); break;
        case Command::mc_check: run_mc_check(spec, params, *os); break;
        case Command::verify: run_verify(spec, params, *os); break;
    }
    os->flush();
    return 0;
}

namespace {

// per-subcommand flag state collected before building a RunSpec
struct Flags {
    double mu = 0.0;
    double sigma = 1.0;
    std::optional<double> y, lambda, t;
    std::optional<std::string> y_grid, lambda_grid, t_grid;
    InversionMethod method = InversionMethod::gaver_stehfest;
    int nodes = 0;  // 0 = per-method default
    double contour_shift = 9.2;
    std::size_t paths = 100000;
    int steps = 1000;
    std::uint64_t seed = 42;
    Integrator integrator = Integrator::trapezoid;
    std::string verify_kind = "ode";
    double verify_lambda = 1.0;
    std::string output;
    std::string dump_samples;
};

std::optional<GridSpec> axis_of(const std::optional<double>& single,
                                const std::optional<std::string>& grid) {
    if (grid) return parse_grid(*grid);
    if (single) return GridSpec{*single, *single, 1, Spacing::linear};
    return std::nullopt;
}

void add_param_flags(CLI::App* sub, Flags& f) {
    sub->add_option("--mu", f.mu, "drift per unit time")->required();
    sub->add_option("--sigma", f.sigma, "volatility per sqrt(unit time), must be > 0")->required();
    sub->add_option("--output", f.output, "output CSV path (default: stdout)");
}

void add_inversion_flags(CLI::App* sub, Flags& f) {
    static const std::map<std::string, InversionMethod> methods{
        {"stehfest", InversionMethod::gaver_stehfest},
        {"talbot", InversionMethod::talbot},
        {"bromwich", InversionMethod::bromwich}};
    sub->add_option("--method", f.method,
                    "inversion method: stehfest (real nodes), talbot, bromwich")
        ->transform(CLI::CheckedTransformer(methods, CLI::ignore_case));
    sub->add_option("--nodes", f.nodes,
                    "Stehfest order (even, 8-20) or contour node count (default per method)");
    sub->add_option("--contour-shift", f.contour_shift,
                    "Bromwich abscissa in 1/time units (aim for about 9/t_min)");
}

void add_mc_flags(CLI::App* sub, Flags& f) {
    static const std::map<std::string, Integrator> integrators{
        {"left", Integrator::riemann_left}, {"trapezoid", Integrator::trapezoid}};
    sub->add_option("--paths", f.paths, "Monte Carlo path count");
    sub->add_option("--steps", f.steps, "integration steps per unit time");
    sub->add_option("--seed", f.seed, "RNG seed (64-bit); runs are reproducible per seed");
    sub->add_option("--integrator", f.integrator, "integral rule: left or trapezoid")
        ->transform(CLI::CheckedTransformer(integrators, CLI::ignore_case));
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{
        "Distribution of the exponential integral functional of geometric Brownian motion:\n"
        "closed-form Laplace transforms, numerical inversion, Monte Carlo validation, and\n"
        "ODE/PDE residual verification.  All output is CSV with a '# params:' provenance line."};
    app.require_subcommand(1);

    Flags f;
    Command cmd = Command::transform;

    auto* transform = app.add_subcommand(
        "transform", "Evaluate P, Fhat, phat at a single (y, lambda) point");
    add_param_flags(transform, f);
    transform->add_option("--y", f.y, "functional level (time units), > 0")->required();
    transform->add_option("--lambda", f.lambda, "Laplace frequency (1/time), > 0")->required();
    transform->callback([&] { cmd = Command::transform; });

    auto* table = app.add_subcommand(
        "table", "Evaluate P, Fhat, phat over a (y, lambda) grid product");
    add_param_flags(table, f);
    table->add_option("--y-grid", f.y_grid, "y grid as start:stop:count:linear|log (time units)")
        ->required();
    table
        ->add_option("--lambda-grid", f.lambda_grid,
                     "lambda grid as start:stop:count:linear|log (1/time)")
        ->required();
    table->callback([&] { cmd = Command::table; });

    auto* cdf = app.add_subcommand("cdf", "Invert the CDF transform on a (t, y) grid");
    auto* pdf = app.add_subcommand("pdf", "Invert the density transform on a (t, y) grid");
    for (CLI::App* sub : {cdf, pdf}) {
        add_param_flags(sub, f);
        auto* t1 = sub->add_option("--t", f.t, "time point (time units), > 0");
        auto* tg = sub->add_option("--t-grid", f.t_grid, "t grid as start:stop:count:linear|log");
        t1->excludes(tg);
        tg->excludes(t1);
        auto* y1 = sub->add_option("--y", f.y, "functional level (time units), > 0");
        auto* yg = sub->add_option("--y-grid", f.y_grid, "y grid as start:stop:count:linear|log");
        y1->excludes(yg);
        yg->excludes(y1);
        add_inversion_flags(sub, f);
    }
    cdf->callback([&] { cmd = Command::cdf; });
    pdf->callback([&] { cmd = Command::pdf; });

    auto* mc_check = app.add_subcommand(
        "mc-check", "Compare inverted F(t,y) against a Monte Carlo estimate");
    add_param_flags(mc_check, f);
    mc_check->add_option("--t", f.t, "time point (time units), > 0")->required();
    mc_check->add_option("--y", f.y, "functional level (time units), > 0")->required();
    add_mc_flags(mc_check, f);
    add_inversion_flags(mc_check, f);
    mc_check->add_option("--dump-samples", f.dump_samples,
                         "also write raw samples (path_id,t,I_t) to this path");
    mc_check->callback([&] { cmd = Command::mc_check; });

    auto* verify = app.add_subcommand(
        "verify", "Finite-difference residuals of the frequency-domain ODE or the forward PDE");
    add_param_flags(verify, f);
    verify->add_option("--kind", f.verify_kind, "residual kind: ode or pde");
    verify->add_option("--lambda", f.verify_lambda, "Laplace frequency for --kind ode (1/time)");
    verify->add_option("--y-grid", f.y_grid, "y grid as start:stop:count:linear|log")->required();
    verify->add_option("--t-grid", f.t_grid, "t grid for --kind pde (start:stop:count:linear|log)");
    add_inversion_flags(verify, f);
    verify->callback([&] { cmd = Command::verify; });

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("gbm-exfun");
    for (const auto& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return 2;
    }

    try {
        RunSpec spec;
        spec.command = cmd;
        spec.mu = f.mu;
        spec.sigma = f.sigma;
        spec.y_axis = axis_of(f.y, f.y_grid);
        spec.lambda_axis = axis_of(f.lambda, f.lambda_grid);
        spec.t_axis = axis_of(f.t, f.t_grid);
        spec.inversion.method = f.method;
        spec.inversion.nodes = f.nodes;
        spec.inversion.contour_shift = f.contour_shift;
        spec.mc.paths = f.paths;
        spec.mc.steps_per_unit_time = f.steps;
        spec.mc.seed = f.seed;
        spec.mc.integrator = f.integrator;
        spec.verify_kind = f.verify_kind;
        spec.verify_lambda = f.verify_lambda;
        spec.output_path = f.output;
        spec.dump_samples_path = f.dump_samples;
        return run(spec, out);
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "failure: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace exfun
