#pragma once

#include <string>
#include <vector>

namespace exfun {

enum class Spacing { linear, log };

/// One axis of an evaluation grid: count points from start to stop inclusive.
struct GridSpec {
    double start;
    double stop;
    int count;
    Spacing spacing;
};

/// Parses the one-flag grid syntax "start:stop:count:linear|log".
/// Throws std::invalid_argument with the offending field named.
[[nodiscard]] GridSpec parse_grid(const std::string& text);

/// Materializes grid points; count == 1 yields {start}.
[[nodiscard]] std::vector<double> make_grid(const GridSpec& spec);

}  // namespace exfun
