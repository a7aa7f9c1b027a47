#include "exfun/kummer.hpp"

#include <cmath>
#include <complex>

#include "exfun/errors.hpp"
#include "exfun/gamma.hpp"

namespace exfun {

namespace {

using CLD = std::complex<long double>;

CLD widen(Complex z) { return {static_cast<long double>(z.real()), static_cast<long double>(z.imag())}; }
Complex narrow(CLD z) { return {static_cast<double>(z.real()), static_cast<double>(z.imag())}; }

void check_b_pole(Complex b) {
    const double nearest = std::round(b.real());
    if (nearest <= 0.0 && std::abs(b - Complex(nearest, 0.0)) <= 1e-8) {
        throw PoleError("kummer_m: b within 1e-8 of a nonpositive integer");
    }
}

// Raw defining series in long-double precision.  Keeping the accumulator and
// the caller-side scale factors in long double lets the transformed route run
// out to |z| ~ 650, where intermediate sums overflow double.
struct SeriesLd {
    CLD sum;
    long double next_mag;     // first neglected term
    long double max_partial;  // cancellation tracking
    int terms;
};

SeriesLd series_core_ld(Complex a, Complex b, Complex z, const KummerOptions& opt) {
    if (z == Complex(0.0, 0.0)) return {CLD{1.0L, 0.0L}, 0.0L, 1.0L, 0};

    const CLD aw = widen(a), bw = widen(b), zw = widen(z);
    CLD term{1.0L, 0.0L};
    CLD sum{1.0L, 0.0L};
    long double max_partial = 1.0L;
    int consecutive_small = 0;
    int n = 0;
    bool converged = false;
    for (; n < opt.max_terms; ++n) {
        const long double nl = static_cast<long double>(n);
        term *= (aw + nl) / (bw + nl) * zw / (nl + 1.0L);
        sum += term;
        max_partial = std::max(max_partial, std::abs(sum));
        if (std::abs(term) <= opt.rel_tol * std::abs(sum)) {
            if (++consecutive_small >= 3) {
                converged = true;
                break;
            }
        } else {
            consecutive_small = 0;
        }
    }
    if (!converged) {
        throw NonConvergenceError("kummer_m: series did not converge within the iteration cap");
    }
    const long double next_mag =
        std::abs(term) * std::abs(aw + static_cast<long double>(n + 1)) /
        std::abs(bw + static_cast<long double>(n + 1)) * std::abs(zw) / (n + 2.0L);
    return {sum, next_mag, max_partial, n + 1};
}

// The error estimate is |first neglected term| plus a rounding floor
// proportional to the largest partial sum, so cancellation at Re(z) < 0 is
// reported, not hidden.
KummerEval series_core(Complex a, Complex b, Complex z, const KummerOptions& opt) {
    const SeriesLd s = series_core_ld(a, b, z, opt);
    const long double floor = 1.1e-19L * static_cast<long double>(s.terms) * s.max_partial;
    return {narrow(s.sum), KummerRegime::series, static_cast<double>(s.next_mag + floor)};
}

KummerEval transformed_core(Complex a, Complex b, Complex z, const KummerOptions& opt) {
    // M(a,b,z) = e^z M(b-a, b, -z); the reflected series runs at Re(-z) > 0
    // with positive-dominated terms, and the e^z product happens in long
    // double because the raw sum alone can exceed double range
    const SeriesLd inner = series_core_ld(b - a, b, -z, opt);
    const CLD ez = std::exp(widen(z));
    const long double ez_mag = std::abs(ez);
    const long double floor = 1.1e-19L * static_cast<long double>(inner.terms) * inner.max_partial;
    return {narrow(ez * inner.sum), KummerRegime::kummer_transformed,
            static_cast<double>(ez_mag * (inner.next_mag + floor))};
}

KummerEval asymptotic_core(Complex a, Complex b, Complex z, const KummerAsymptoticSums& sums) {
    const Complex lg_b = log_gamma(b);

    // The principal power (-z)^{-a} carries the e^{+-i pi a} phase of the
    // two-sided expansion continuously across the negative real axis and is
    // real on it, which is what reproduces the real restriction of the
    // transforms.  Terms whose gamma prefactor sits at a pole vanish.
    Complex t1{0.0, 0.0};
    double err1 = 0.0;
    try {
        const Complex pre1 = std::exp(lg_b - log_gamma(b - a) - a * std::log(-z));
        t1 = pre1 * sums.s1;
        err1 = std::abs(pre1) * sums.err1;
    } catch (const PoleError&) {
    }
    Complex t2{0.0, 0.0};
    double err2 = 0.0;
    try {
        const Complex pre2 = std::exp(lg_b - log_gamma(a) + z + (a - b) * std::log(z));
        t2 = pre2 * sums.s2;
        err2 = std::abs(pre2) * sums.err2;
    } catch (const PoleError&) {
    }
    return {t1 + t2, KummerRegime::asymptotic, err1 + err2};
}

// One Poincare sum: sum_n (p)_n (q)_n w^n / n!, cut at the smallest term.
void poincare_sum(Complex p, Complex q, Complex w, int max_terms, Complex& out, double& err) {
    CLD term{1.0L, 0.0L};
    CLD sum{1.0L, 0.0L};
    const CLD pw = widen(p), qw = widen(q), ww = widen(w);
    err = 0.0;
    for (int n = 0; n < max_terms; ++n) {
        const long double nl = static_cast<long double>(n);
        const CLD next = term * (pw + nl) * (qw + nl) / (nl + 1.0L) * ww;
        if (std::abs(next) >= std::abs(term)) {
            err = static_cast<double>(std::abs(next));  // divergence onset
            break;
        }
        term = next;
        sum += term;
        err = static_cast<double>(std::abs(term));
        if (std::abs(term) <= 1e-16L * std::abs(sum)) break;
    }
    out = narrow(sum);
}

}  // namespace

KummerAsymptoticSums kummer_asymptotic_sums(const KummerArgs& args, int max_terms) {
    KummerAsymptoticSums r{};
    poincare_sum(args.a, 1.0 + args.a - args.b, 1.0 / (-args.z), max_terms, r.s1, r.err1);
    poincare_sum(args.b - args.a, 1.0 - args.a, 1.0 / args.z, max_terms, r.s2, r.err2);
    return r;
}

KummerEval kummer_m(const KummerArgs& args, const KummerOptions& opt) {
    check_b_pole(args.b);
    if (args.z == Complex(0.0, 0.0)) return {Complex(1.0, 0.0), KummerRegime::series, 0.0};
    const double zmag = std::abs(args.z);
    if (zmag > opt.z_switch) {
        // The expansion is only usable once its own truncation error is
        // negligible (it diverges from the first term when |a(1+a-b)| ~ |z|);
        // the series routes remain exact up to the long-double range, so fall
        // back to them while they cannot overflow.
        const KummerAsymptoticSums sums = kummer_asymptotic_sums(args);
        KummerEval eval = asymptotic_core(args.a, args.b, args.z, sums);
        const bool usable = std::isfinite(eval.value.real()) && std::isfinite(eval.value.imag()) &&
                            eval.abs_error_estimate <= 1e-11 * std::abs(eval.value);
        if (usable || zmag > 650.0) return eval;
    }
    if (args.z.real() >= 0.0) return series_core(args.a, args.b, args.z, opt);
    return transformed_core(args.a, args.b, args.z, opt);
}

KummerEval kummer_m_series(const KummerArgs& args, const KummerOptions& opt) {
    check_b_pole(args.b);
    return series_core(args.a, args.b, args.z, opt);
}

KummerEval kummer_m_derivative(const KummerArgs& args, const KummerOptions& opt) {
    if (std::abs(args.b) < 1e-12) {
        throw PoleError("kummer_m_derivative: b must be nonzero");
    }
    if (args.a == Complex(0.0, 0.0)) {
        // M(0,b,z) == 1 identically
        return {Complex(0.0, 0.0), KummerRegime::series, 0.0};
    }
    const KummerEval shifted = kummer_m({args.a + 1.0, args.b + 1.0, args.z}, opt);
    const Complex factor = args.a / args.b;
    return {factor * shifted.value, shifted.regime,
            std::abs(factor) * shifted.abs_error_estimate};
}

}  // namespace exfun
