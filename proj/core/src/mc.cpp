#include "exfun/mc.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <random>
#include <stdexcept>

#include "exfun/csv.hpp"
#include "exfun/parallel.hpp"

namespace exfun {

namespace {

struct SplitMix64 {
    std::uint64_t state;
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
};

// xoshiro256++, seeded per (seed, stream) through SplitMix64.  Gives each
// path its own deterministic stream with no global state.
class Xoshiro256pp {
public:
    using result_type = std::uint64_t;

    Xoshiro256pp(std::uint64_t seed, std::uint64_t stream) {
        SplitMix64 sm{seed ^ (0x632BE59BD9B4E019ULL * (stream + 1))};
        bool all_zero = true;
        for (auto& word : state_) {
            word = sm.next();
            all_zero = all_zero && word == 0;
        }
        if (all_zero) state_[0] = 0x9E3779B97F4A7C15ULL;
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~result_type{0}; }

    result_type operator()() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::uint64_t state_[4];
};

void validate_config(const McConfig& cfg) {
    if (cfg.paths < 1) throw std::invalid_argument("mc: paths must be >= 1");
    if (cfg.steps_per_unit_time < 1) {
        throw std::invalid_argument("mc: steps_per_unit_time must be >= 1");
    }
    if (!(cfg.horizon > 0.0) || !std::isfinite(cfg.horizon)) {
        throw std::invalid_argument("mc: horizon must be finite and > 0");
    }
}

}  // namespace

McSamples simulate_integrals(const GbmParams& params, const McConfig& cfg,
                             std::vector<double> t_points) {
    validate_config(cfg);
    if (t_points.empty()) throw std::invalid_argument("mc: t_points must be nonempty");
    double prev = 0.0;
    for (double t : t_points) {
        if (!(t > prev)) throw std::invalid_argument("mc: t_points must be sorted and positive");
        prev = t;
    }
    if (t_points.back() > cfg.horizon * (1.0 + 1e-12)) {
        throw std::invalid_argument("mc: t_points must lie within the horizon");
    }

    // Time grid: each span between recording times is split into equal
    // substeps of width <= 1/steps_per_unit_time.  The Gaussian increments
    // are exact for any grid; only the integral quadrature sees dt.
    struct Segment {
        double dt;
        double sqrt_dt;
        int substeps;
    };
    std::vector<Segment> segments(t_points.size());
    double lo = 0.0;
    for (std::size_t i = 0; i < t_points.size(); ++i) {
        const double span = t_points[i] - lo;
        const int n = std::max(1, static_cast<int>(std::ceil(span * cfg.steps_per_unit_time - 1e-9)));
        const double dt = span / n;
        segments[i] = {dt, std::sqrt(dt), n};
        lo = t_points[i];
    }

    McSamples out;
    out.t_points = t_points;
    out.bias_note = cfg.integrator == Integrator::riemann_left ? BiasNote::first_order_in_dt
                                                               : BiasNote::second_order_in_dt;
    out.by_t.assign(t_points.size(), std::vector<double>(cfg.paths));

    const bool trapezoid = cfg.integrator == Integrator::trapezoid;
    const double mu = params.mu;
    const double sigma = params.sigma;

    parallel_for(cfg.paths, [&](std::size_t path) {
        Xoshiro256pp rng(cfg.seed, static_cast<std::uint64_t>(path));
        std::normal_distribution<double> gauss(0.0, 1.0);
        double x = 0.0;
        double integral = 0.0;
        double e_prev = 1.0;  // e^{-X_0}
        for (std::size_t seg = 0; seg < segments.size(); ++seg) {
            const auto [dt, sqrt_dt, substeps] = segments[seg];
            const double drift = mu * dt;
            for (int s = 0; s < substeps; ++s) {
                x += drift + sigma * sqrt_dt * gauss(rng);
                const double e_next = std::exp(-x);
                integral += trapezoid ? 0.5 * (e_prev + e_next) * dt : e_prev * dt;
                e_prev = e_next;
            }
            out.by_t[seg][path] = integral;
        }
    });
    return out;
}

McEstimate empirical_cdf(std::span<const double> samples, double y, BiasNote note) {
    if (samples.empty()) throw std::invalid_argument("empirical_cdf: empty sample set");
    const double n = static_cast<double>(samples.size());
    std::size_t count = 0;
    for (double x : samples) count += (x <= y) ? 1 : 0;
    const double p = static_cast<double>(count) / n;
    return {p, std::sqrt(p * (1.0 - p) / n), samples.size(), note};
}

McEstimate empirical_pdf(std::span<const double> samples, double y, double bandwidth,
                         BiasNote note) {
    if (samples.empty()) throw std::invalid_argument("empirical_pdf: empty sample set");
    if (!(bandwidth > 0.0)) throw std::invalid_argument("empirical_pdf: bandwidth must be > 0");
    const double inv_norm = 1.0 / (bandwidth * std::sqrt(2.0 * std::numbers::pi));
    double sum = 0.0;
    double sum_sq = 0.0;
    for (double x : samples) {
        const double u = (y - x) / bandwidth;
        const double k = inv_norm * std::exp(-0.5 * u * u);
        sum += k;
        sum_sq += k * k;
    }
    const double n = static_cast<double>(samples.size());
    const double mean = sum / n;
    const double var = std::max(0.0, (sum_sq / n - mean * mean) / std::max(1.0, n - 1.0));
    return {mean, std::sqrt(var), samples.size(), note};
}

double silverman_bandwidth(std::span<const double> samples) {
    if (samples.size() < 2) throw std::invalid_argument("silverman_bandwidth: need >= 2 samples");
    const double n = static_cast<double>(samples.size());
    double mean = 0.0;
    for (double x : samples) mean += x;
    mean /= n;
    double ss = 0.0;
    for (double x : samples) ss += (x - mean) * (x - mean);
    const double sd = std::sqrt(ss / (n - 1.0));

    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    auto quantile = [&](double q) {
        const double pos = q * (n - 1.0);
        const std::size_t i = static_cast<std::size_t>(pos);
        const double frac = pos - static_cast<double>(i);
        if (i + 1 >= sorted.size()) return sorted.back();
        return sorted[i] * (1.0 - frac) + sorted[i + 1] * frac;
    };
    const double iqr = quantile(0.75) - quantile(0.25);
    const double spread = iqr > 0.0 ? std::min(sd, iqr / 1.34) : sd;
    return 0.9 * spread * std::pow(n, -0.2);
}

void write_samples_csv(std::ostream& out, const McSamples& samples) {
    out << "path_id,t,I_t\n";
    if (samples.by_t.empty()) return;
    const std::size_t paths = samples.by_t.front().size();
    for (std::size_t p = 0; p < paths; ++p) {
        for (std::size_t ti = 0; ti < samples.t_points.size(); ++ti) {
            out << p << ',' << csv_number(samples.t_points[ti]) << ','
                << csv_number(samples.by_t[ti][p]) << '\n';
        }
    }
}

}  // namespace exfun
