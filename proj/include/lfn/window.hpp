#pragma once

#include <algorithm>
#include <complex>

namespace lfn {

// Axis-aligned rectangle in the s-plane, sigma = Re s, t = Im s.
struct Window {
    double sigma_min = 0.0;
    double sigma_max = 0.0;
    double t_min = 0.0;
    double t_max = 0.0;

    double width() const { return sigma_max - sigma_min; }
    double height() const { return t_max - t_min; }
    bool degenerate() const { return sigma_max <= sigma_min || t_max <= t_min; }

    bool contains(std::complex<double> s) const {
        return s.real() >= sigma_min && s.real() <= sigma_max && s.imag() >= t_min &&
               s.imag() <= t_max;
    }

    Window expanded(double d_sigma, double d_t) const {
        return {sigma_min - d_sigma, sigma_max + d_sigma, t_min - d_t, t_max + d_t};
    }

    Window intersect(const Window& o) const {
        return {std::max(sigma_min, o.sigma_min), std::min(sigma_max, o.sigma_max),
                std::max(t_min, o.t_min), std::min(t_max, o.t_max)};
    }
};

}  // namespace lfn
