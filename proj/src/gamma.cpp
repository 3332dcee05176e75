#include "lfn/gamma.hpp"

#include <cmath>
#include <numbers>

namespace lfn {

namespace {

using Complex = std::complex<double>;

constexpr double kPi = std::numbers::pi;

// g = 7, 9-term Lanczos coefficients
constexpr double kLanczos[9] = {
    0.99999999999980993,      676.5203681218851,     -1259.1392167224028,
    771.32342877765313,       -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,     9.9843695780195716e-6, 1.5056327351493116e-7,
};

Complex lanczos_lgamma_positive(Complex z) {
    // valid for Re z >= 0.5
    z -= 1.0;
    Complex x = kLanczos[0];
    for (int i = 1; i < 9; ++i) x += kLanczos[i] / (z + static_cast<double>(i));
    Complex t = z + 7.5;
    return 0.5 * std::log(2.0 * kPi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

}  // namespace

Complex clgamma(Complex z) {
    if (z.real() >= 0.5) return lanczos_lgamma_positive(z);
    // reflection: Gamma(z) Gamma(1-z) = pi / sin(pi z)
    return std::log(kPi) - std::log(std::sin(kPi * z)) - lanczos_lgamma_positive(1.0 - z);
}

Complex cgamma(Complex z) {
    if (z.real() < 0.5) return kPi / (std::sin(kPi * z) * cgamma(1.0 - z));
    return std::exp(lanczos_lgamma_positive(z));
}

Complex gamma_ratio(Complex a, Complex b) { return std::exp(clgamma(a) - clgamma(b)); }

}  // namespace lfn
