#pragma once

#include <complex>
#include <string>
#include <string_view>

#include "lfn/window.hpp"

namespace lfn {

// Parses "a+bi", "a-bi" or "a" (whitespace tolerated); locale-independent.
std::complex<double> parse_complex(std::string_view text);

// Parses "sigma0,sigma1,t0,t1".
Window parse_window(std::string_view text);

std::string format_complex(std::complex<double> z, int precision = 12);

}  // namespace lfn
