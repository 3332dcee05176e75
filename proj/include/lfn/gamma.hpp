#pragma once

#include <complex>

namespace lfn {

// Gamma(z) by Lanczos approximation, reflection formula for Re z < 0.5.
std::complex<double> cgamma(std::complex<double> z);

// A logarithm of Gamma(z); the branch is unspecified but consistent enough
// that exp(clgamma(a) - clgamma(b)) = Gamma(a)/Gamma(b).
std::complex<double> clgamma(std::complex<double> z);

// Gamma(a)/Gamma(b), stable when either argument sits near a pole.
std::complex<double> gamma_ratio(std::complex<double> a, std::complex<double> b);

}  // namespace lfn
