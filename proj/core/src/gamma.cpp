#include "exfun/gamma.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "exfun/errors.hpp"

namespace exfun {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kHalfLog2Pi = 0.91893853320467274178;  // ln(2*pi)/2

// Lanczos coefficients, g = 607/128, N = 15 (Godfrey 2001).  Gives ~15
// significant digits for double-precision arguments in the right half-plane.
constexpr std::array<double, 15> kLanczos = {
    0.99999999999999709182,
    57.156235665862923517,
    -59.597960355475491248,
    14.136097974741747174,
    -0.49191381609762019978,
    0.33994649984811888699e-4,
    0.46523628927048575665e-4,
    -0.98374475304879564677e-4,
    0.15808870322491248884e-3,
    -0.21026444172410488319e-3,
    0.21743961811521264320e-3,
    -0.16431810653676389022e-3,
    0.84418223983852743293e-4,
    -0.26190838401581408670e-4,
    0.36899182659531622704e-5,
};
constexpr double kLanczosG = 607.0 / 128.0;

void check_pole(Complex z) {
    const double nearest = std::round(z.real());
    if (nearest <= 0.0 && std::abs(z - Complex(nearest, 0.0)) < 1e-12) {
        throw PoleError("log_gamma: argument at a nonpositive integer pole");
    }
}

// Right half-plane core, Re(z) >= 0.5.
Complex log_gamma_core(Complex z) {
    const Complex x = z - 1.0;
    Complex acc = kLanczos[0];
    for (std::size_t i = 1; i < kLanczos.size(); ++i) {
        acc += kLanczos[i] / (x + static_cast<double>(i));
    }
    const Complex t = x + kLanczosG + 0.5;
    return kHalfLog2Pi + (x + 0.5) * std::log(t) - t + std::log(acc);
}

// log(sin(pi z)) without overflow for large |Im z|.  The imaginary part is
// only defined mod 2*pi*i, which is all exp() downstream needs.
Complex log_sin_pi(Complex z) {
    if (z.imag() < 0.0) return std::conj(log_sin_pi(std::conj(z)));
    if (z.imag() < 20.0) return std::log(std::sin(kPi * z));
    // sin(pi z) = e^{-i pi z} (e^{2 i pi z} - 1) / (2i), |e^{2 i pi z}| << 1
    const Complex w = std::exp(Complex(0.0, 2.0 * kPi) * z);
    return Complex(0.0, -kPi) * z + std::log(w - 1.0) - std::log(Complex(0.0, 2.0));
}

}  // namespace

Complex log_gamma(Complex z) {
    check_pole(z);
    if (z.real() >= 0.5) return log_gamma_core(z);
    // reflection: Gamma(z) Gamma(1-z) = pi / sin(pi z)
    return std::log(kPi) - log_sin_pi(z) - log_gamma_core(1.0 - z);
}

Complex gamma_ratio(Complex num, Complex den) {
    return std::exp(log_gamma(num) - log_gamma(den));
}

}  // namespace exfun
