#include "exfun/inversion.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "exfun/errors.hpp"
#include "exfun/parallel.hpp"

namespace exfun {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kLn2 = std::numbers::ln2;

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

BigInt factorial(int n) {
    BigInt r = 1;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

std::vector<double> compute_stehfest_weights(int n) {
    const int half = n / 2;
    std::vector<double> w(static_cast<std::size_t>(n));
    for (int i = 1; i <= n; ++i) {
        BigRat sum = 0;
        const int j_lo = (i + 1) / 2;
        const int j_hi = std::min(i, half);
        for (int j = j_lo; j <= j_hi; ++j) {
            const BigInt num = boost::multiprecision::pow(BigInt(j), static_cast<unsigned>(half)) *
                               factorial(2 * j);
            const BigInt den = factorial(half - j) * factorial(j) * factorial(j - 1) *
                               factorial(i - j) * factorial(2 * j - i);
            sum += BigRat(num, den);
        }
        if ((i + half) % 2 != 0) sum = -sum;
        w[static_cast<std::size_t>(i - 1)] = sum.convert_to<double>();
    }
    return w;
}

// Contour node evaluation with the retry policy: a numerical failure gets one
// perturbed attempt (1e-6 relative, pushed off the real axis) and then fails.
Complex eval_contour_node(const TransformFn& f, Complex s) {
    try {
        return f(s);
    } catch (const NumericalError&) {
    }
    const double mag = std::max(std::abs(s), 1.0);
    const double dir = s.imag() >= 0.0 ? 1.0 : -1.0;
    const Complex nudged = s * (1.0 + 1e-6) + Complex(0.0, dir * 1e-6 * mag);
    try {
        return f(nudged);
    } catch (const std::exception& e) {
        throw NodeFailure(std::string("inversion: transform failed at contour node after retry: ") +
                          e.what());
    }
}

Complex eval_real_node(const TransformFn& f, double x) {
    try {
        return f(Complex(x, 0.0));
    } catch (const std::exception& e) {
        throw NodeFailure(std::string("inversion: transform failed at real node: ") + e.what());
    }
}

InvertedValue stehfest_single(const TransformFn& f, double t, int n) {
    const double l = kLn2 / t;
    std::vector<double> fv(static_cast<std::size_t>(n));
    for (int i = 1; i <= n; ++i) {
        fv[static_cast<std::size_t>(i - 1)] = eval_real_node(f, i * l).real();
    }
    const auto& w_hi = stehfest_weights(n);
    const auto& w_lo = stehfest_weights(n - 2);
    double hi = 0.0, lo = 0.0;
    for (int i = 0; i < n; ++i) hi += w_hi[static_cast<std::size_t>(i)] * fv[static_cast<std::size_t>(i)];
    for (int i = 0; i < n - 2; ++i) lo += w_lo[static_cast<std::size_t>(i)] * fv[static_cast<std::size_t>(i)];
    const double value = l * hi;
    return {t, value, std::abs(value - l * lo), value};
}

double talbot_sum(const TransformFn& f, double t, int m) {
    // fixed Talbot contour s(theta) = r theta (cot theta + i), r = 2m/(5t)
    const double r = 2.0 * m / (5.0 * t);
    double acc = 0.5 * std::exp(r * t) * eval_contour_node(f, Complex(r, 0.0)).real();
    for (int j = 1; j < m; ++j) {
        const double theta = j * kPi / m;
        const double cot = std::cos(theta) / std::sin(theta);
        const Complex s(r * theta * cot, r * theta);
        const double sigma = theta + (theta * cot - 1.0) * cot;
        const Complex term = std::exp(t * s) * eval_contour_node(f, s) * Complex(1.0, sigma);
        acc += term.real();
    }
    return r / m * acc;
}

InvertedValue talbot_single(const TransformFn& f, double t, int m) {
    const double fine = talbot_sum(f, t, m);
    const double coarse = talbot_sum(f, t, m / 2);
    return {t, fine, std::abs(fine - coarse), fine};
}

InvertedValue bromwich_single(const TransformFn& f, double t, int n, double shift) {
    // truncated vertical-line trapezoid (step pi/t) with binomial (Euler)
    // averaging of the alternating tail
    constexpr int kEuler = 12;
    const double h = kPi / t;
    double partial = 0.5 * eval_contour_node(f, Complex(shift, 0.0)).real();
    for (int k = 1; k <= n; ++k) {
        const double sgn = (k % 2 == 0) ? 1.0 : -1.0;
        partial += sgn * eval_contour_node(f, Complex(shift, k * h)).real();
    }
    std::array<double, kEuler + 1> tail{};
    tail[0] = partial;
    for (int j = 1; j <= kEuler; ++j) {
        const int k = n + j;
        const double sgn = (k % 2 == 0) ? 1.0 : -1.0;
        partial += sgn * eval_contour_node(f, Complex(shift, k * h)).real();
        tail[static_cast<std::size_t>(j)] = partial;
    }
    double euler = 0.0, euler_prev = 0.0;
    double binom = 1.0;  // C(kEuler, j), updated multiplicatively
    for (int j = 0; j <= kEuler; ++j) {
        euler += binom * tail[static_cast<std::size_t>(j)];
        binom = binom * (kEuler - j) / (j + 1.0);
    }
    euler /= std::pow(2.0, kEuler);
    binom = 1.0;
    for (int j = 0; j <= kEuler - 1; ++j) {
        euler_prev += binom * tail[static_cast<std::size_t>(j)];
        binom = binom * (kEuler - 1 - j) / (j + 1.0);
    }
    euler_prev /= std::pow(2.0, kEuler - 1);
    const double scale = std::exp(shift * t) / t;
    const double value = scale * euler;
    return {t, value, scale * std::abs(euler - euler_prev), value};
}

void validate_config(const InversionConfig& cfg) {
    if (cfg.t_grid.empty()) throw std::invalid_argument("inversion: empty t_grid");
    for (double t : cfg.t_grid) {
        if (!(t > 0.0) || !std::isfinite(t)) {
            throw std::invalid_argument("inversion: t_grid entries must be finite and > 0");
        }
    }
    switch (cfg.method) {
        case InversionMethod::gaver_stehfest:
            if (cfg.nodes % 2 != 0 || cfg.nodes < 8 || cfg.nodes > 20) {
                throw std::invalid_argument(
                    "inversion: gaver_stehfest needs even nodes in [8, 20]");
            }
            break;
        case InversionMethod::talbot:
            if (cfg.nodes % 2 != 0 || cfg.nodes < 8) {
                throw std::invalid_argument("inversion: talbot needs even nodes >= 8");
            }
            break;
        case InversionMethod::bromwich:
            if (cfg.nodes < 8) throw std::invalid_argument("inversion: bromwich needs nodes >= 8");
            if (!(cfg.contour_shift > 0.0)) {
                throw std::invalid_argument("inversion: bromwich needs contour_shift > 0");
            }
            break;
    }
}

}  // namespace

const std::vector<double>& stehfest_weights(int n) {
    if (n < 2 || n % 2 != 0) {
        throw std::invalid_argument("stehfest_weights: order must be even and >= 2");
    }
    static std::mutex mutex;
    static std::map<int, std::vector<double>> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, compute_stehfest_weights(n)).first;
    return it->second;
}

std::vector<InvertedValue> invert(const TransformFn& transform, const InversionConfig& cfg) {
    validate_config(cfg);
    std::vector<InvertedValue> out(cfg.t_grid.size());
    parallel_for(cfg.t_grid.size(), [&](std::size_t i) {
        const double t = cfg.t_grid[i];
        switch (cfg.method) {
            case InversionMethod::gaver_stehfest:
                out[i] = stehfest_single(transform, t, cfg.nodes);
                break;
            case InversionMethod::talbot:
                out[i] = talbot_single(transform, t, cfg.nodes);
                break;
            case InversionMethod::bromwich:
                out[i] = bromwich_single(transform, t, cfg.nodes, cfg.contour_shift);
                break;
        }
    });
    return out;
}

InvertedValue cdf_at(const GbmParams& params, double t, double y, const InversionConfig& cfg,
                     const TransformOptions& topt) {
    if (!(t > 0.0) || !(y > 0.0)) {
        throw std::invalid_argument("cdf_at: t and y must be > 0");
    }
    InversionConfig local = cfg;
    local.t_grid = {t};
    const TransformFn fhat = [&](Complex z) {
        return 1.0 / z - ccdf_transform_complex(params, z, y, topt).value;
    };
    InvertedValue v = invert(fhat, local).front();
    v.value = std::clamp(v.raw, 0.0, 1.0);
    return v;
}

InvertedValue pdf_at(const GbmParams& params, double t, double y, const InversionConfig& cfg,
                     const TransformOptions& topt) {
    if (!(t > 0.0) || !(y > 0.0)) {
        throw std::invalid_argument("pdf_at: t and y must be > 0");
    }
    InversionConfig local = cfg;
    local.t_grid = {t};
    const TransformFn phat = [&](Complex z) {
        return pdf_transform_complex(params, z, y, topt).value;
    };
    return invert(phat, local).front();
}

}  // namespace exfun
