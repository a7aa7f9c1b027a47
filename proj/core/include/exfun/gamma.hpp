#pragma once

#include "exfun/params.hpp"

namespace exfun {

/// Principal-branch log-gamma for complex arguments (Lanczos approximation,
/// reflection for Re(z) < 0.5).  Accurate to ~14 significant digits.
/// Throws PoleError at (near-)nonpositive integers.
[[nodiscard]] Complex log_gamma(Complex z);

/// Gamma(num) / Gamma(den) evaluated as exp(log_gamma(num) - log_gamma(den)),
/// so ratios stay representable for arguments far into the right half-plane.
[[nodiscard]] Complex gamma_ratio(Complex num, Complex den);

}  // namespace exfun
