#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <vector>

#include "lfn/characters.hpp"
#include "lfn/preimage.hpp"
#include "lfn/window.hpp"
#include "lfn/zeros.hpp"

namespace lfn {

struct Rgb {
    uint8_t r = 0, g = 0, b = 0;
    bool operator==(const Rgb&) const = default;
};

struct RasterImage {
    int width = 0;
    int height = 0;
    Window window;
    std::vector<uint8_t> pixels;  // row-major RGB, top row first

    void set(int x, int y, Rgb c) {
        if (x < 0 || y < 0 || x >= width || y >= height) return;
        size_t i = 3 * (static_cast<size_t>(y) * width + x);
        pixels[i] = c.r;
        pixels[i + 1] = c.g;
        pixels[i + 2] = c.b;
    }
    Rgb get(int x, int y) const {
        size_t i = 3 * (static_cast<size_t>(y) * width + x);
        return {pixels[i], pixels[i + 1], pixels[i + 2]};
    }

    // pixel centers; the t grid is an affine mix of t_min/t_max so windows
    // symmetric about the real axis mirror bit-exactly
    double sigma_at(int x) const {
        return window.sigma_min + (x + 0.5) * (window.sigma_max - window.sigma_min) / width;
    }
    double t_at(int y) const {
        return (window.t_max * (2.0 * (height - y) - 1.0) + window.t_min * (2.0 * y + 1.0)) /
               (2.0 * height);
    }
};

struct ColorScheme {
    enum class Mode { two_color, mesh };
    Mode mode = Mode::two_color;
    Rgb pos_color{210, 59, 46};
    Rgb neg_color{47, 83, 200};
    int ray_count = 12;
    std::vector<double> circle_radii{0.25, 0.5, 1.0, 2.0, 4.0};

    static ColorScheme two_color_default() { return {}; }
    static ColorScheme mesh_default() {
        ColorScheme s;
        s.mode = Mode::mesh;
        return s;
    }
};

using ComplexMap = std::function<Complex(Complex)>;

/// Two-color plot of sign Re f with the pre-image of the real axis drawn as
/// a darkened band (|Im f| below 2.5 pixel-widths times a finite-difference
/// |f'| estimate). The pole pixel of a principal character is painted white.
RasterImage render_two_color(const DirichletCharacter& chi, const Window& window, int width,
                             int height, Target target = Target::L,
                             const ColorScheme& scheme = ColorScheme::two_color_default());

/// Same renderer over an arbitrary map (test hook; no pole handling).
RasterImage render_two_color_fn(const ComplexMap& f, const Window& window, int width, int height,
                                const ColorScheme& scheme = ColorScheme::two_color_default());

/// Orthogonal-mesh coloring: hue/saturation from arg f quantized into
/// ray_count sectors, brightness from |f| quantized by circle_radii.
RasterImage render_mesh(const DirichletCharacter& chi, const Window& window, int width,
                        int height, const ColorScheme& scheme = ColorScheme::mesh_default());

RasterImage render_mesh_fn(const ComplexMap& f, const Window& window, int width, int height,
                           const ColorScheme& scheme = ColorScheme::mesh_default());

/// Mesh quantization helpers (exposed so overlays and tests agree with the
/// renderer's sector/band boundaries).
int mesh_sector(Complex z, int ray_count);
int mesh_band(Complex z, const std::vector<double>& radii);
Rgb mesh_color(Complex z, const ColorScheme& scheme);

/// Draws 1-px Bresenham polylines and 3x3 zero markers over a copy of the
/// image; vertices outside the window are clipped silently.
RasterImage overlay_curves(const RasterImage& image, std::span<const CurveComponent> curves,
                           std::span<const Zero> zeros, Rgb curve_color = {0, 0, 0},
                           Rgb zero_color = {255, 230, 0});

/// Counterclockwise quarter turn (the paper-layout orientation).
RasterImage rotate_quarter(const RasterImage& image);

/// Binary PPM (P6): "P6\n<w> <h>\n255\n" + rows top-first. Deterministic.
void write_ppm(const RasterImage& image, const std::filesystem::path& path);

}  // namespace lfn
