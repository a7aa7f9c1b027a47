#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "exfun/grid.hpp"
#include "exfun/inversion.hpp"
#include "exfun/mc.hpp"

namespace exfun {

enum class Command { transform, table, cdf, pdf, mc_check, verify };

/// Fully resolved run description.  Single-point flags (--y 1) become
/// one-point axes; every run with the same RunSpec (seed included) produces
/// byte-identical output.
struct RunSpec {
    Command command = Command::transform;
    double mu = 0.0;
    double sigma = 1.0;
    std::optional<GridSpec> y_axis;
    std::optional<GridSpec> lambda_axis;
    std::optional<GridSpec> t_axis;
    InversionConfig inversion{};
    McConfig mc{};
    std::string verify_kind = "ode";  // "ode" or "pde"
    double verify_lambda = 1.0;
    std::string output_path;        // empty = stdout
    std::string dump_samples_path;  // mc-check: optional raw-sample CSV
};

/// Executes a validated RunSpec, writing CSV to out (or spec.output_path if
/// set).  Returns 0; failures throw (std::invalid_argument for bad inputs,
/// NumericalError subclasses for evaluation failures).
int run(const RunSpec& spec, std::ostream& out);

/// Full command-line front end: parse, validate, execute.  Exit codes:
/// 0 success, 1 numerical failure, 2 usage/validation error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace exfun
