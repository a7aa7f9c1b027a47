#pragma once

#include "exfun/params.hpp"

namespace exfun {

/// Which evaluation route produced a Kummer-function value.
enum class KummerRegime { series, kummer_transformed, asymptotic };

/// Arguments of the confluent hypergeometric function of the first kind,
/// M(a, b, z) = sum_n (a)_n z^n / ((b)_n n!).
struct KummerArgs {
    Complex a;
    Complex b;
    Complex z;
};

struct KummerEval {
    Complex value;
    KummerRegime regime;
    double abs_error_estimate;  // >= 0; truncation + cancellation floor
};

struct KummerOptions {
    double z_switch = 40.0;  // |z| above which the large-argument expansion is used
    int max_terms = 10000;   // series iteration cap
    double rel_tol = 1e-16;  // term-ratio stopping threshold
};

/// Regime-selecting evaluation of M(a, b, z):
///   - defining power series for Re(z) >= 0, |z| <= z_switch,
///   - M(a,b,z) = e^z M(b-a, b, -z) for Re(z) < 0 (the raw series cancels
///     catastrophically there),
///   - large-|z| asymptotic expansion otherwise.
/// Throws PoleError when b is within 1e-8 of a nonpositive integer and
/// NonConvergenceError when the series misses its stopping rule.
[[nodiscard]] KummerEval kummer_m(const KummerArgs& args, const KummerOptions& opt = {});

/// Direct defining-series evaluation, regardless of regime.  Exposed as the
/// cross-check route for the transformed series; its error estimate includes
/// the cancellation floor, which grows like e^{|z|} for z far down the
/// negative real axis.  Prefer kummer_m.
[[nodiscard]] KummerEval kummer_m_series(const KummerArgs& args, const KummerOptions& opt = {});

/// dM/dz = (a/b) M(a+1, b+1, z).  Requires b != 0.
[[nodiscard]] KummerEval kummer_m_derivative(const KummerArgs& args, const KummerOptions& opt = {});

/// Truncated Poincare sums of the large-|z| expansion,
///   S1 = sum_n (a)_n (1+a-b)_n / (n! (-z)^n),
///   S2 = sum_n (b-a)_n (1-a)_n / (n! z^n),
/// each cut at its smallest term.  Exposed so transform evaluations can
/// combine them with prefactors in a scale-free way.
struct KummerAsymptoticSums {
    Complex s1;
    Complex s2;
    double err1;
    double err2;
};
[[nodiscard]] KummerAsymptoticSums kummer_asymptotic_sums(const KummerArgs& args,
                                                          int max_terms = 64);

}  // namespace exfun
