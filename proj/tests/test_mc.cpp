#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <sstream>

#include "exfun/mc.hpp"
#include "exfun/transforms.hpp"

using namespace exfun;

namespace {

McConfig config(std::size_t paths, int steps, double horizon, std::uint64_t seed,
                Integrator integ = Integrator::trapezoid) {
    McConfig cfg;
    cfg.paths = paths;
    cfg.steps_per_unit_time = steps;
    cfg.horizon = horizon;
    cfg.seed = seed;
    cfg.integrator = integ;
    return cfg;
}

double mean(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double stddev(const std::vector<double>& v) {
    const double m = mean(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / (static_cast<double>(v.size()) - 1.0));
}

}  // namespace

TEST_CASE("deterministic limit: sigma -> 0 gives I_t = t") {
    const GbmParams p(0.0, 1e-8);
    const McSamples s = simulate_integrals(p, config(10, 100, 2.0, 7), {2.0});
    for (double v : s.by_t.front()) CHECK(std::abs(v - 2.0) <= 1e-6);
}

TEST_CASE("sample means match moment_first within 4 standard errors") {
    struct Case {
        double mu, sigma, t;
    } cases[] = {{0.0, 1.0, 1.0}, {1.0, 1.0, 2.0}, {-0.5, 0.8, 1.0}};
    std::uint64_t seed = 424242;
    for (const auto& c : cases) {
        const GbmParams p(c.mu, c.sigma);
        const McSamples s = simulate_integrals(p, config(100000, 300, c.t, seed++), {c.t});
        const auto& col = s.by_t.front();
        const double se = stddev(col) / std::sqrt(static_cast<double>(col.size()));
        CHECK(std::abs(mean(col) - moment_first(p, c.t)) <= 4.0 * se);
    }
}

TEST_CASE("per-path integrals are strictly increasing in t") {
    const GbmParams p(0.5, 1.2);
    const McSamples s = simulate_integrals(p, config(1000, 50, 2.0, 99), {0.5, 1.1, 2.0});
    for (std::size_t path = 0; path < 1000; ++path) {
        CHECK(s.by_t[0][path] > 0.0);
        CHECK(s.by_t[1][path] > s.by_t[0][path]);
        CHECK(s.by_t[2][path] > s.by_t[1][path]);
    }
}

TEST_CASE("identical config reproduces bit-identical samples across thread counts") {
    const GbmParams p(0.2, 0.9);
    const McConfig cfg = config(4000, 100, 1.0, 31337);
    const McSamples a = simulate_integrals(p, cfg, {0.4, 1.0});

    setenv("GBM_EXFUN_THREADS", "1", 1);
    const McSamples b = simulate_integrals(p, cfg, {0.4, 1.0});
    setenv("GBM_EXFUN_THREADS", "3", 1);
    const McSamples c = simulate_integrals(p, cfg, {0.4, 1.0});
    unsetenv("GBM_EXFUN_THREADS");

    CHECK(a.by_t == b.by_t);
    CHECK(a.by_t == c.by_t);

    // different seed changes the sample set
    McConfig other = cfg;
    other.seed = 31338;
    CHECK(simulate_integrals(p, other, {0.4, 1.0}).by_t != a.by_t);
}

TEST_CASE("trapezoid and riemann_left converge toward each other as steps double") {
    const GbmParams p(0.0, 1.0);
    auto gap = [&](int steps) {
        const McSamples trap =
            simulate_integrals(p, config(50000, steps, 1.0, 555, Integrator::trapezoid), {1.0});
        const McSamples riem =
            simulate_integrals(p, config(50000, steps, 1.0, 555, Integrator::riemann_left), {1.0});
        return std::abs(mean(trap.by_t.front()) - mean(riem.by_t.front()));
    };
    const double g1 = gap(25);
    const double g2 = gap(50);
    // the rules differ at first order in dt, so the gap should roughly halve
    CHECK(g1 / g2 > 1.6);
    CHECK(g1 / g2 < 2.5);
}

TEST_CASE("Richardson check: riemann_left CDF bias shrinks ~first order") {
    const GbmParams p(0.0, 1.0);
    auto cdf_at_steps = [&](int steps) {
        const McSamples s =
            simulate_integrals(p, config(200000, steps, 1.0, 777, Integrator::riemann_left), {1.0});
        return empirical_cdf(s.by_t.front(), 1.0).value;
    };
    const double d1 = std::abs(cdf_at_steps(4) - cdf_at_steps(8));
    const double d2 = std::abs(cdf_at_steps(8) - cdf_at_steps(16));
    CHECK(d1 / d2 > 1.3);  // ~2 expected for a first-order rule, with MC noise slack
    CHECK(d1 / d2 < 3.2);
}

TEST_CASE("empirical_cdf edge values and bias tag") {
    const std::vector<double> samples{1.0, 2.0, 3.0, 4.0, 5.0};
    CHECK(empirical_cdf(samples, 0.5).value == 0.0);
    CHECK(empirical_cdf(samples, 9.0).value == 1.0);
    const McEstimate med = empirical_cdf(samples, 3.0);
    CHECK(std::abs(med.value - 0.5) <= 1.0 / std::sqrt(5.0));
    CHECK(med.n_effective == 5);
    CHECK(med.std_error == doctest::Approx(std::sqrt(0.6 * 0.4 / 5.0)));
    const McEstimate tagged = empirical_cdf(samples, 3.0, BiasNote::first_order_in_dt);
    CHECK(tagged.bias_note == BiasNote::first_order_in_dt);
}

TEST_CASE("empirical_pdf: single-sample kernel shape and normalization") {
    const std::vector<double> one{2.0};
    const double h = 0.7;
    for (double y : {1.0, 2.0, 2.5}) {
        const double u = (y - 2.0) / h;
        const double want = std::exp(-0.5 * u * u) / (h * std::sqrt(2.0 * std::numbers::pi));
        CHECK(empirical_pdf(one, y, h).value == doctest::Approx(want).epsilon(1e-14));
    }

    // KDE integrates to ~1 over a covering grid
    const GbmParams p(0.0, 1.0);
    const McSamples s = simulate_integrals(p, config(2000, 100, 1.0, 2024), {1.0});
    const auto& col = s.by_t.front();
    const double bw = silverman_bandwidth(col);
    CHECK(bw > 0.0);
    double integral = 0.0;
    const double lo = 0.0, hi = 12.0;
    const int n = 1200;
    for (int i = 0; i <= n; ++i) {
        const double y = lo + (hi - lo) * i / n;
        const double w = (i == 0 || i == n) ? 0.5 : 1.0;
        integral += w * empirical_pdf(col, y, bw).value;
    }
    integral *= (hi - lo) / n;
    CHECK(std::abs(integral - 1.0) <= 0.01);
}

TEST_CASE("sample dump CSV schema") {
    const GbmParams p(0.0, 1.0);
    const McSamples s = simulate_integrals(p, config(2, 10, 1.0, 5), {0.5, 1.0});
    std::ostringstream out;
    write_samples_csv(out, s);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "path_id,t,I_t");
    std::getline(in, line);
    CHECK(line.substr(0, 6) == "0,0.5,");
    int rows = 1;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 4);  // 2 paths x 2 t-points
}

TEST_CASE("validation") {
    const GbmParams p(0.0, 1.0);
    CHECK_THROWS_AS((void)simulate_integrals(p, config(0, 10, 1.0, 1), {1.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)simulate_integrals(p, config(10, 0, 1.0, 1), {1.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)simulate_integrals(p, config(10, 10, 1.0, 1), {}),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)simulate_integrals(p, config(10, 10, 1.0, 1), {0.5, 0.4}),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)simulate_integrals(p, config(10, 10, 1.0, 1), {1.5}),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)empirical_cdf({}, 1.0), std::invalid_argument);
    const std::vector<double> samples{1.0, 2.0};
    CHECK_THROWS_AS((void)empirical_pdf(samples, 1.0, 0.0), std::invalid_argument);
}
