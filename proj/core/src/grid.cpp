#include "exfun/grid.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace exfun {

namespace {

void validate(const GridSpec& g) {
    if (g.count < 1) throw std::invalid_argument("grid: count must be >= 1");
    if (g.count > 1 && !(g.start < g.stop)) {
        throw std::invalid_argument("grid: start must be < stop");
    }
    if (g.spacing == Spacing::log && !(g.start > 0.0 && g.stop > 0.0)) {
        throw std::invalid_argument("grid: log spacing requires positive endpoints");
    }
}

}  // namespace

GridSpec parse_grid(const std::string& text) {
    std::istringstream in(text);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(in, field, ':')) fields.push_back(field);
    if (fields.size() != 4) {
        throw std::invalid_argument("grid: expected start:stop:count:spacing, got '" + text + "'");
    }
    GridSpec g{};
    try {
        g.start = std::stod(fields[0]);
        g.stop = std::stod(fields[1]);
        g.count = std::stoi(fields[2]);
    } catch (const std::exception&) {
        throw std::invalid_argument("grid: non-numeric field in '" + text + "'");
    }
    if (fields[3] == "linear") {
        g.spacing = Spacing::linear;
    } else if (fields[3] == "log") {
        g.spacing = Spacing::log;
    } else {
        throw std::invalid_argument("grid: spacing must be 'linear' or 'log', got '" + fields[3] + "'");
    }
    validate(g);
    return g;
}

std::vector<double> make_grid(const GridSpec& spec) {
    validate(spec);
    std::vector<double> pts(static_cast<std::size_t>(spec.count));
    if (spec.count == 1) {
        pts[0] = spec.start;
        return pts;
    }
    if (spec.spacing == Spacing::linear) {
        const double step = (spec.stop - spec.start) / (spec.count - 1);
        for (int i = 0; i < spec.count; ++i) pts[static_cast<std::size_t>(i)] = spec.start + step * i;
    } else {
        const double lstart = std::log(spec.start);
        const double step = (std::log(spec.stop) - lstart) / (spec.count - 1);
        for (int i = 0; i < spec.count; ++i) {
            pts[static_cast<std::size_t>(i)] = std::exp(lstart + step * i);
        }
    }
    pts.front() = spec.start;
    pts.back() = spec.stop;
    return pts;
}

}  // namespace exfun
