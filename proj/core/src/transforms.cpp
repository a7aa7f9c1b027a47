#include "exfun/transforms.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "exfun/errors.hpp"
#include "exfun/gamma.hpp"

namespace exfun {

namespace {

constexpr double kPi = std::numbers::pi;

struct CoreEval {
    Complex value;
    double abs_err;
    std::vector<KummerRegime> regimes;
};

void validate_level(double y) {
    if (!std::isfinite(y) || y < 0.0) {
        throw std::invalid_argument("transform: y must be finite and >= 0");
    }
}

void validate_real_frequency(Complex lambda) {
    if (!std::isfinite(lambda.real()) || !std::isfinite(lambda.imag()) || !(lambda.real() > 0.0)) {
        throw std::invalid_argument("transform: Re(lambda) must be > 0");
    }
}

void validate_extension_frequency(Complex z) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()) || z == Complex(0.0, 0.0)) {
        throw std::invalid_argument("transform: frequency must be finite and nonzero");
    }
}

// Derived frequency-domain quantities shared by P and phat.
struct Frame {
    Complex k;
    Complex beta;  // 1 - 2 mu / sigma^2 + 2k
    Complex gnum;  // 1 - 2 mu / sigma^2 + k  (= beta - k)
    double zm;     // Kummer argument -2/(y sigma^2) < 0
};

Frame make_frame(const GbmParams& p, double y, Complex lambda) {
    Frame f{};
    f.k = compute_k(p, lambda).value;
    f.beta = 1.0 - 2.0 * p.mu / p.sigma2() + 2.0 * f.k;
    f.gnum = f.beta - f.k;
    f.zm = -2.0 / (y * p.sigma2());
    return f;
}

bool usable_eval(const CoreEval& e) {
    return std::isfinite(e.value.real()) && std::isfinite(e.value.imag()) &&
           e.abs_err <= 1e-11 * std::abs(e.value);
}

// Scaled large-|zm| form: P = (S1 + correction)/lambda, so the power-times-M
// product never overflows as y -> 0.
CoreEval ccdf_asymptotic(const Frame& f, Complex inv_lambda) {
    const KummerAsymptoticSums sums = kummer_asymptotic_sums({f.k, f.beta, Complex(f.zm, 0.0)});
    Complex corr{0.0, 0.0};
    double corr_err = 0.0;
    try {
        const double lzm = std::log(-f.zm);
        const Complex log_pref =
            Complex(f.zm, 0.0) + f.k * lzm + (f.k - f.beta) * Complex(lzm, kPi);
        const Complex pref = gamma_ratio(f.gnum, f.k) * std::exp(log_pref);
        corr = pref * sums.s2;
        corr_err = std::abs(pref) * sums.err2;
    } catch (const PoleError&) {
        // 1/Gamma(k) at a pole: the exponentially small term vanishes
    }
    const Complex value = inv_lambda * (sums.s1 + corr);
    const double err = std::abs(inv_lambda) * (sums.err1 + corr_err);
    return {value, err, {KummerRegime::asymptotic}};
}

// P(y, lambda) for Im(lambda) >= 0.  The expansion is used only when its own
// error estimate says it converged; otherwise the transformed series carries
// on (safe in long double out to |zm| ~ 650, i.e. y down to ~3e-3/sigma^2).
CoreEval ccdf_core_upper(const GbmParams& p, double y, Complex lambda,
                         const TransformOptions& opt) {
    const Complex inv_lambda = 1.0 / lambda;
    if (y == 0.0) return {inv_lambda, 0.0, {}};

    const Frame f = make_frame(p, y, lambda);
    const double zmag = std::abs(f.zm);

    if (zmag > opt.kummer.z_switch) {
        CoreEval e = ccdf_asymptotic(f, inv_lambda);
        if (usable_eval(e) || zmag > 650.0) return e;
    }

    KummerOptions ko = opt.kummer;
    ko.z_switch = std::max(ko.z_switch, zmag + 1.0);
    const KummerEval m = kummer_m({f.k, f.beta, Complex(f.zm, 0.0)}, ko);
    // (2/(y sigma^2))^k * Gamma(gnum)/Gamma(beta) in one exp: the power alone
    // overflows for large |k| exactly when the gamma ratio underflows
    const Complex pref =
        inv_lambda * std::exp(f.k * std::log(-f.zm) + log_gamma(f.gnum) - log_gamma(f.beta));
    const Complex value = pref * m.value;
    const double err = std::abs(pref) * m.abs_error_estimate + 1e-15 * std::abs(value);
    return {value, err, {m.regime}};
}

// -d/dy of the scaled expansion: phat = -(s2/(2 lambda)) sum_{n>=1} n d_n w^{n-1}
// with d_n = (k)_n (1+k-beta)_n / n! and w = y s2/2 = 1/(-zm).
CoreEval pdf_asymptotic(const Frame& f, Complex inv_lambda, double y, double s2, Complex lambda) {
    const Complex w{1.0 / (-f.zm), 0.0};
    const Complex q = 1.0 + f.k - f.beta;
    Complex d{1.0, 0.0};
    Complex wpow{1.0, 0.0};
    Complex sum{0.0, 0.0};
    double omitted = 0.0;
    double prev_mag = 0.0;
    for (int n = 1; n < 64; ++n) {
        const double nd = static_cast<double>(n);
        d *= (f.k + (nd - 1.0)) * (q + (nd - 1.0)) / nd;
        const Complex term = nd * d * wpow;
        const double mag = std::abs(term);
        if (n > 1 && mag >= prev_mag) {
            omitted = mag;  // divergence onset of the Poincare tail
            break;
        }
        sum += term;
        omitted = mag;
        prev_mag = mag;
        wpow *= w;
        if (mag <= 1e-16 * std::abs(sum)) break;
    }
    const Complex scale = -s2 / 2.0 * inv_lambda;
    const Complex value = scale * sum;
    // dropped exponentially small correction, bounded via its prefactor
    double drop = 0.0;
    try {
        const double lzm = std::log(-f.zm);
        const Complex log_pref =
            Complex(f.zm, 0.0) + f.k * lzm + (f.k - f.beta) * Complex(lzm, kPi);
        drop = std::abs(gamma_ratio(f.gnum, f.k) * std::exp(log_pref)) *
               (std::abs(f.zm) + std::abs(f.k) + std::abs(f.beta)) / y / std::abs(lambda);
    } catch (const PoleError&) {
    }
    const double err = std::abs(scale) * omitted + drop;
    return {value, err, {KummerRegime::asymptotic}};
}

// phat(y, lambda) = -dP/dy for Im(lambda) >= 0.
CoreEval pdf_core_upper(const GbmParams& p, double y, Complex lambda,
                        const TransformOptions& opt) {
    const Complex inv_lambda = 1.0 / lambda;
    const double s2 = p.sigma2();
    const Frame f = make_frame(p, y, lambda);
    const double zmag = std::abs(f.zm);

    if (zmag > opt.kummer.z_switch) {
        CoreEval e = pdf_asymptotic(f, inv_lambda, y, s2, lambda);
        if (usable_eval(e) || zmag > 650.0) return e;
    }

    KummerOptions ko = opt.kummer;
    ko.z_switch = std::max(ko.z_switch, zmag + 1.0);
    const KummerEval m1 = kummer_m({f.k, f.beta, Complex(f.zm, 0.0)}, ko);
    const KummerEval m2 = kummer_m({f.k + 1.0, f.beta + 1.0, Complex(f.zm, 0.0)}, ko);
    const Complex combo = m1.value + f.zm * m2.value / f.beta;
    const Complex pref =
        inv_lambda *
        std::exp(f.k * std::log(-f.zm) + log_gamma(f.gnum) - log_gamma(f.beta)) * f.k / y;
    const Complex value = pref * combo;
    const double err =
        std::abs(pref) * (m1.abs_error_estimate + std::abs(f.zm / f.beta) * m2.abs_error_estimate +
                          1e-16 * (std::abs(m1.value) + std::abs(f.zm * m2.value / f.beta)));
    return {value, err, {m1.regime, m2.regime}};
}

template <class Core>
CoreEval reflected(Core&& core, const GbmParams& p, double y, Complex lambda,
                   const TransformOptions& opt) {
    // evaluate in the closed upper half-plane only; Schwarz reflection makes
    // conjugate symmetry exact by construction
    if (lambda.imag() < 0.0) {
        CoreEval e = core(p, y, std::conj(lambda), opt);
        e.value = std::conj(e.value);
        return e;
    }
    return core(p, y, lambda, opt);
}

TransformValue finish(CoreEval e, TransformKind kind, Complex lambda,
                      const TransformOptions& opt) {
    // scale floor keeps the relative-error gate meaningful when the value
    // itself sits at a zero of the transform (e.g. Fhat at y -> 0)
    const double scale = std::max(std::abs(e.value), 1e-9 / std::abs(lambda));
    if (e.abs_err > opt.target_rel_error * scale) {
        throw EvaluationError("transform: error estimate exceeds target relative error");
    }
    return {e.value, kind, std::move(e.regimes), e.abs_err};
}

}  // namespace

TransformValue ccdf_transform(const GbmParams& params, const LaplaceQuery& q,
                              const TransformOptions& opt) {
    validate_level(q.y);
    validate_real_frequency(q.lambda);
    return finish(reflected(ccdf_core_upper, params, q.y, q.lambda, opt), TransformKind::ccdf,
                  q.lambda, opt);
}

TransformValue cdf_transform(const GbmParams& params, const LaplaceQuery& q,
                             const TransformOptions& opt) {
    validate_level(q.y);
    validate_real_frequency(q.lambda);
    CoreEval e = reflected(ccdf_core_upper, params, q.y, q.lambda, opt);
    e.value = 1.0 / q.lambda - e.value;
    return finish(std::move(e), TransformKind::cdf, q.lambda, opt);
}

TransformValue pdf_transform(const GbmParams& params, const LaplaceQuery& q,
                             const TransformOptions& opt) {
    if (!(q.y > 0.0) || !std::isfinite(q.y)) {
        throw std::invalid_argument("pdf_transform: y must be finite and > 0");
    }
    validate_real_frequency(q.lambda);
    return finish(reflected(pdf_core_upper, params, q.y, q.lambda, opt), TransformKind::pdf,
                  q.lambda, opt);
}

TransformValue ccdf_transform_complex(const GbmParams& params, Complex z, double y,
                                      const TransformOptions& opt) {
    validate_level(y);
    validate_extension_frequency(z);
    return finish(reflected(ccdf_core_upper, params, y, z, opt), TransformKind::ccdf, z, opt);
}

TransformValue pdf_transform_complex(const GbmParams& params, Complex z, double y,
                                     const TransformOptions& opt) {
    if (!(y > 0.0) || !std::isfinite(y)) {
        throw std::invalid_argument("pdf_transform_complex: y must be finite and > 0");
    }
    validate_extension_frequency(z);
    return finish(reflected(pdf_core_upper, params, y, z, opt), TransformKind::pdf, z, opt);
}

double moment_first(const GbmParams& params, double t) {
    if (!(t >= 0.0) || !std::isfinite(t)) {
        throw std::invalid_argument("moment_first: t must be finite and >= 0");
    }
    const double a = derived_a(params);
    if (a == 0.0) return t;
    return std::expm1(a * t) / a;
}

}  // namespace exfun
