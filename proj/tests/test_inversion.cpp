#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "exfun/errors.hpp"
#include "exfun/inversion.hpp"
#include "exfun/quadrature.hpp"
#include "exfun/transforms.hpp"

using namespace exfun;

namespace {

InversionConfig config(InversionMethod m, int nodes, std::vector<double> ts,
                       double shift = 9.2) {
    InversionConfig cfg;
    cfg.method = m;
    cfg.nodes = nodes;
    cfg.contour_shift = shift;
    cfg.t_grid = std::move(ts);
    return cfg;
}

}  // namespace

TEST_CASE("stehfest weights sum to zero for N >= 4") {
    for (int n = 4; n <= 20; n += 2) {
        const auto& w = stehfest_weights(n);
        double sum = 0.0, scale = 0.0;
        for (double x : w) {
            sum += x;
            scale = std::max(scale, std::abs(x));
        }
        CHECK(std::abs(sum) <= 1e-12 * scale);
    }
    CHECK_THROWS_AS((void)stehfest_weights(3), std::invalid_argument);
    CHECK_THROWS_AS((void)stehfest_weights(0), std::invalid_argument);
}

TEST_CASE("classical pairs: step, exponential, ramp") {
    const TransformFn step = [](Complex z) { return 1.0 / z; };
    const TransformFn expo = [](Complex z) { return 1.0 / (z + 1.0); };
    const TransformFn ramp = [](Complex z) { return 1.0 / (z * z); };

    SUBCASE("gaver_stehfest N = 14 reaches 1e-7") {
        auto cfg = config(InversionMethod::gaver_stehfest, 14, {1.0});
        CHECK(std::abs(invert(step, cfg).front().value - 1.0) <= 1e-7);
        CHECK(std::abs(invert(expo, cfg).front().value - std::exp(-1.0)) <= 1e-7);
        cfg.t_grid = {2.5};
        CHECK(std::abs(invert(ramp, cfg).front().value - 2.5) <= 1e-7 * 2.5);
    }
    SUBCASE("talbot") {
        auto cfg = config(InversionMethod::talbot, 32, {1.0});
        CHECK(std::abs(invert(step, cfg).front().value - 1.0) <= 1e-8);
        CHECK(std::abs(invert(expo, cfg).front().value - std::exp(-1.0)) <= 1e-8);
        cfg.t_grid = {2.5};
        CHECK(std::abs(invert(ramp, cfg).front().value - 2.5) <= 1e-8 * 2.5);
    }
    SUBCASE("bromwich") {
        auto cfg = config(InversionMethod::bromwich, 48, {1.0});
        CHECK(std::abs(invert(step, cfg).front().value - 1.0) <= 1e-5);
        CHECK(std::abs(invert(expo, cfg).front().value - std::exp(-1.0)) <= 1e-5);
        cfg.t_grid = {2.5};
        cfg.contour_shift = 9.2 / 2.5;
        CHECK(std::abs(invert(ramp, cfg).front().value - 2.5) <= 1e-4 * 2.5);
    }
}

TEST_CASE("error estimates cover the observed error on the classical pairs") {
    const TransformFn expo = [](Complex z) { return 1.0 / (z + 1.0); };
    for (auto method : {InversionMethod::gaver_stehfest, InversionMethod::talbot,
                        InversionMethod::bromwich}) {
        const int nodes = method == InversionMethod::gaver_stehfest ? 14 : 32;
        const auto v = invert(expo, config(method, nodes, {0.7})).front();
        const double truth = std::exp(-0.7);
        CHECK(std::abs(v.value - truth) <= 10.0 * v.method_error_estimate + 1e-12);
    }
}

TEST_CASE("configuration validation") {
    const TransformFn step = [](Complex z) { return 1.0 / z; };
    CHECK_THROWS_AS((void)invert(step, config(InversionMethod::gaver_stehfest, 13, {1.0})),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)invert(step, config(InversionMethod::gaver_stehfest, 6, {1.0})),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)invert(step, config(InversionMethod::gaver_stehfest, 22, {1.0})),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)invert(step, config(InversionMethod::talbot, 7, {1.0})),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)invert(step, config(InversionMethod::bromwich, 48, {1.0}, 0.0)),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)invert(step, config(InversionMethod::gaver_stehfest, 14, {})),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)invert(step, config(InversionMethod::gaver_stehfest, 14, {0.0})),
                    std::invalid_argument);
}

TEST_CASE("node failure policy") {
    // a transform that always fails
    const TransformFn broken = [](Complex) -> Complex { throw BranchError("broken"); };
    CHECK_THROWS_AS((void)invert(broken, config(InversionMethod::gaver_stehfest, 14, {1.0})),
                    NodeFailure);
    CHECK_THROWS_AS((void)invert(broken, config(InversionMethod::talbot, 32, {1.0})),
                    NodeFailure);

    // a transform that fails once is rescued by the single perturbed retry
    int calls = 0;
    const TransformFn flaky = [&](Complex z) -> Complex {
        if (calls++ == 0) throw BranchError("first call");
        return 1.0 / z;
    };
    const auto v = invert(flaky, config(InversionMethod::talbot, 32, {1.0})).front();
    CHECK(std::abs(v.value - 1.0) <= 1e-4);
}

TEST_CASE("cdf_at clamps the report and keeps the raw value") {
    const GbmParams p(0.0, 1.0);
    const auto cfg = config(InversionMethod::gaver_stehfest, 14, {});
    // far left tail: Stehfest overshoots slightly negative
    const InvertedValue v = cdf_at(p, 0.5, 0.05, cfg);
    CHECK(v.value >= 0.0);
    CHECK(v.value <= 1.0);
    CHECK(v.raw < v.value + 1e-12);  // raw is the unclamped value
    CHECK_THROWS_AS((void)cdf_at(p, 0.0, 1.0, cfg), std::invalid_argument);
    CHECK_THROWS_AS((void)pdf_at(p, 1.0, 0.0, cfg), std::invalid_argument);
}

TEST_CASE("cdf boundary limits in y") {
    const GbmParams p(0.0, 1.0);
    const auto cfg = config(InversionMethod::gaver_stehfest, 14, {});
    CHECK(cdf_at(p, 1.0, 4096.0, cfg).value >= 1.0 - 1e-6);
    CHECK(cdf_at(p, 1.0, 0.02, cfg).value <= 1e-4);
}

TEST_CASE("method cross-agreement on a (t, y) grid") {
    const GbmParams sets[] = {GbmParams(0.0, 1.0), GbmParams(1.0, 1.0), GbmParams(-0.5, 0.8)};
    const auto steh = config(InversionMethod::gaver_stehfest, 14, {});
    const auto talb = config(InversionMethod::talbot, 32, {});
    for (const auto& p : sets) {
        for (int i = 0; i < 10; ++i) {
            const double t = 0.5 + 1.5 * i / 9.0;
            for (int j = 0; j < 10; ++j) {
                const double y = 0.3 * std::pow(10.0, j / 9.0);
                const InvertedValue a = cdf_at(p, t, y, steh);
                const InvertedValue b = cdf_at(p, t, y, talb);
                const double tol =
                    std::max(1e-5, a.method_error_estimate + b.method_error_estimate);
                CHECK(std::abs(a.raw - b.raw) <= tol);
            }
        }
    }
}

TEST_CASE("inverted cdf is monotone in y and t up to the error estimates") {
    const GbmParams p(1.0, 1.0);
    const auto cfg = config(InversionMethod::gaver_stehfest, 14, {});
    double prev = -1.0, prev_est = 0.0;
    for (double y : {0.2, 0.4, 0.8, 1.6, 3.2, 6.4}) {
        const InvertedValue v = cdf_at(p, 1.0, y, cfg);
        CHECK(v.raw >= prev - (v.method_error_estimate + prev_est));
        prev = v.raw;
        prev_est = v.method_error_estimate;
    }
    prev = 2.0;  // F decreasing in t for fixed y (I_t increasing)... complement check below
    for (double t : {0.5, 1.0, 2.0, 4.0}) {
        const InvertedValue v = cdf_at(p, t, 1.0, cfg);
        CHECK(v.raw <= prev + (v.method_error_estimate + prev_est));
        prev = v.raw;
        prev_est = v.method_error_estimate;
    }
}

TEST_CASE("pdf_at agrees with the y-derivative of cdf_at") {
    const GbmParams p(0.0, 1.0);
    const auto cfg = config(InversionMethod::gaver_stehfest, 14, {});
    for (double y : {0.5, 1.0, 2.0}) {
        const double h = 1e-3 * y;
        const double fd =
            (cdf_at(p, 1.0, y + h, cfg).raw - cdf_at(p, 1.0, y - h, cfg).raw) / (2.0 * h);
        const double pd = pdf_at(p, 1.0, y, cfg).value;
        CHECK(std::abs(fd - pd) <= 1e-3);
    }
}

TEST_CASE("round trip against the forward transform (light)") {
    const GbmParams p(0.0, 1.0);
    const double y = 1.0;
    const TransformFn pbar = [&](Complex z) { return ccdf_transform_complex(p, z, y).value; };
    for (double lam : {0.5, 2.0}) {
        const double ref = ccdf_transform(p, {y, Complex(lam, 0.0)}).value.real();
        const double horizon = std::log(1.0 / (1e-8 * lam)) / lam;
        const double quad = adaptive_simpson(
            [&](double t) {
                auto cfg = config(InversionMethod::gaver_stehfest, 20, {t});
                return std::exp(-lam * t) * invert(pbar, cfg).front().value;
            },
            1e-6, horizon, 5e-6 * ref);
        CHECK(std::abs(quad - ref) <= 1e-4 * ref);
    }
}
