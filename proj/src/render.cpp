#include "lfn/render.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>

#include "lfn/errors.hpp"
#include "lfn/lfunction.hpp"
#include "lfn/parallel.hpp"

namespace lfn {

namespace {

constexpr double kPi = std::numbers::pi;

Rgb darken(Rgb c) {
    return {static_cast<uint8_t>(c.r / 3), static_cast<uint8_t>(c.g / 3),
            static_cast<uint8_t>(c.b / 3)};
}

Rgb hsv_to_rgb(double h, double s, double v) {
    h = std::fmod(std::fmod(h, 360.0) + 360.0, 360.0);
    double c = v * s;
    double x = c * (1.0 - std::abs(std::fmod(h / 60.0, 2.0) - 1.0));
    double m = v - c;
    double r = 0, g = 0, b = 0;
    if (h < 60) {
        r = c; g = x;
    } else if (h < 120) {
        r = x; g = c;
    } else if (h < 180) {
        g = c; b = x;
    } else if (h < 240) {
        g = x; b = c;
    } else if (h < 300) {
        r = x; b = c;
    } else {
        r = c; b = x;
    }
    auto to8 = [&](double q) { return static_cast<uint8_t>(std::lround(255.0 * (q + m))); };
    return {to8(r), to8(g), to8(b)};
}

// shared two-color painter over a grid of precomputed values
RasterImage paint_two_color(const std::vector<Complex>& values, const Window& window, int width,
                            int height, const ColorScheme& scheme) {
    RasterImage img{width, height, window, {}};
    img.pixels.assign(static_cast<size_t>(width) * height * 3, 0);
    double px = window.width() / width;
    parallel::for_blocks(height, [&](int64_t y0, int64_t y1) {
        for (int64_t y = y0; y < y1; ++y) {
            for (int x = 0; x < width; ++x) {
                Complex f = values[y * width + x];
                Rgb base = f.real() > 0.0 ? scheme.pos_color : scheme.neg_color;
                // curve band: screen-space thickness from a horizontal
                // neighbor difference standing in for |f'|
                int xn = x + 1 < width ? x + 1 : x - 1;
                double deriv_est = std::abs(values[y * width + xn] - f) / px;
                if (deriv_est >= 1e-4 && std::abs(f.imag()) < 2.5 * px * deriv_est)
                    base = darken(base);
                img.set(x, static_cast<int>(y), base);
            }
        }
    });
    return img;
}

std::vector<Complex> sample_grid(const ComplexMap& f, const RasterImage& frame) {
    std::vector<Complex> values(static_cast<size_t>(frame.width) * frame.height);
    parallel::for_blocks(frame.height, [&](int64_t y0, int64_t y1) {
        for (int64_t y = y0; y < y1; ++y) {
            double t = frame.t_at(static_cast<int>(y));
            for (int x = 0; x < frame.width; ++x)
                values[y * frame.width + x] = f(Complex(frame.sigma_at(x), t));
        }
    });
    return values;
}

void check_raster_args(const Window& window, int width, int height) {
    if (window.degenerate()) throw DomainError("render window is degenerate");
    if (width < 1 || height < 1 || width > 8192 || height > 8192)
        throw DomainError("raster size out of range (1..8192 per side)");
}

}  // namespace

RasterImage render_two_color_fn(const ComplexMap& f, const Window& window, int width, int height,
                                const ColorScheme& scheme) {
    check_raster_args(window, width, height);
    RasterImage frame{width, height, window, {}};
    auto values = sample_grid(f, frame);
    return paint_two_color(values, window, width, height, scheme);
}

RasterImage render_two_color(const DirichletCharacter& chi, const Window& window, int width,
                             int height, Target target, const ColorScheme& scheme) {
    check_raster_args(window, width, height);
    RasterImage frame{width, height, window, {}};
    std::vector<Complex> values(static_cast<size_t>(width) * height);
    parallel::for_blocks(height, [&](int64_t y0, int64_t y1) {
        for (int64_t y = y0; y < y1; ++y) {
            double t = frame.t_at(static_cast<int>(y));
            for (int x = 0; x < width; ++x) {
                Complex s(frame.sigma_at(x), t);
                Complex v;
                try {
                    v = target_value(chi, s, target);
                } catch (const PoleAtOne&) {
                    v = Complex(std::numeric_limits<double>::infinity(), 0.0);
                }
                values[y * width + x] = v;
            }
        }
    });
    RasterImage img = paint_two_color(values, window, width, height, scheme);
    if (chi.is_principal() && window.contains(Complex(1.0, 0.0))) {
        int px = static_cast<int>((1.0 - window.sigma_min) / window.width() * width);
        int py = static_cast<int>((window.t_max - 0.0) / window.height() * height);
        img.set(px, py, {255, 255, 255});
    }
    return img;
}

int mesh_sector(Complex z, int ray_count) {
    double a = std::arg(z);  // (-pi, pi]
    int k = static_cast<int>(std::floor((a + kPi) / (2.0 * kPi) * ray_count));
    return std::clamp(k, 0, ray_count - 1);
}

int mesh_band(Complex z, const std::vector<double>& radii) {
    double m = std::abs(z);
    int band = 0;
    for (double r : radii)
        if (m >= r) ++band;
    return band;
}

Rgb mesh_color(Complex z, const ColorScheme& scheme) {
    int sector = mesh_sector(z, scheme.ray_count);
    int band = mesh_band(z, scheme.circle_radii);
    int bands = static_cast<int>(scheme.circle_radii.size()) + 1;
    double hue = 360.0 * sector / scheme.ray_count;
    double sat = 0.30 + 0.70 * (sector + 1.0) / scheme.ray_count;
    double val = 0.28 + 0.72 * band / std::max(1, bands - 1);
    return hsv_to_rgb(hue, sat, val);
}

RasterImage render_mesh_fn(const ComplexMap& f, const Window& window, int width, int height,
                           const ColorScheme& scheme) {
    check_raster_args(window, width, height);
    if (scheme.ray_count < 2) throw DomainError("mesh needs at least two rays");
    for (size_t i = 0; i + 1 < scheme.circle_radii.size(); ++i)
        if (scheme.circle_radii[i] >= scheme.circle_radii[i + 1])
            throw DomainError("mesh radii must be strictly increasing");
    RasterImage frame{width, height, window, {}};
    frame.pixels.assign(static_cast<size_t>(width) * height * 3, 0);
    parallel::for_blocks(height, [&](int64_t y0, int64_t y1) {
        for (int64_t y = y0; y < y1; ++y) {
            double t = frame.t_at(static_cast<int>(y));
            for (int x = 0; x < width; ++x)
                frame.set(x, static_cast<int>(y),
                          mesh_color(f(Complex(frame.sigma_at(x), t)), scheme));
        }
    });
    return frame;
}

RasterImage render_mesh(const DirichletCharacter& chi, const Window& window, int width,
                        int height, const ColorScheme& scheme) {
    return render_mesh_fn(
        [&chi](Complex s) {
            try {
                return eval(chi, s).value;
            } catch (const PoleAtOne&) {
                return Complex(std::numeric_limits<double>::infinity(), 0.0);
            }
        },
        window, width, height, scheme);
}

RasterImage overlay_curves(const RasterImage& image, std::span<const CurveComponent> curves,
                           std::span<const Zero> zeros, Rgb curve_color, Rgb zero_color) {
    RasterImage out = image;
    const Window& w = image.window;
    auto to_px = [&](Complex s, long* x, long* y) {
        *x = std::lround((s.real() - w.sigma_min) / w.width() * image.width - 0.5);
        *y = std::lround((w.t_max - s.imag()) / w.height() * image.height - 0.5);
    };
    long guard = 8L * std::max(image.width, image.height);
    for (const auto& c : curves) {
        for (size_t i = 0; i + 1 < c.vertices.size(); ++i) {
            if (!w.contains(c.vertices[i]) || !w.contains(c.vertices[i + 1])) continue;
            long x0, y0, x1, y1;
            to_px(c.vertices[i], &x0, &y0);
            to_px(c.vertices[i + 1], &x1, &y1);
            if (std::labs(x0) > guard || std::labs(x1) > guard || std::labs(y0) > guard ||
                std::labs(y1) > guard)
                continue;
            long dx = std::labs(x1 - x0), dy = -std::labs(y1 - y0);
            long sx = x0 < x1 ? 1 : -1, sy = y0 < y1 ? 1 : -1;
            long err = dx + dy;
            while (true) {
                out.set(static_cast<int>(x0), static_cast<int>(y0), curve_color);
                if (x0 == x1 && y0 == y1) break;
                long e2 = 2 * err;
                if (e2 >= dy) {
                    err += dy;
                    x0 += sx;
                }
                if (e2 <= dx) {
                    err += dx;
                    y0 += sy;
                }
            }
        }
    }
    for (const auto& z : zeros) {
        if (!w.contains(z.location)) continue;
        long x, y;
        to_px(z.location, &x, &y);
        out.set(static_cast<int>(x), static_cast<int>(y), zero_color);
        out.set(static_cast<int>(x - 1), static_cast<int>(y), zero_color);
        out.set(static_cast<int>(x + 1), static_cast<int>(y), zero_color);
        out.set(static_cast<int>(x), static_cast<int>(y - 1), zero_color);
        out.set(static_cast<int>(x), static_cast<int>(y + 1), zero_color);
    }
    return out;
}

RasterImage rotate_quarter(const RasterImage& image) {
    RasterImage out;
    out.width = image.height;
    out.height = image.width;
    out.window = Window{-image.window.t_max, -image.window.t_min, image.window.sigma_min,
                        image.window.sigma_max};
    out.pixels.assign(image.pixels.size(), 0);
    for (int y = 0; y < image.height; ++y)
        for (int x = 0; x < image.width; ++x)
            out.set(y, image.width - 1 - x, image.get(x, y));
    return out;
}

void write_ppm(const RasterImage& image, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << "P6\n" << image.width << " " << image.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(image.pixels.data()),
              static_cast<std::streamsize>(image.pixels.size()));
    if (!out) throw IoError("short write to " + path.string());
}

}  // namespace lfn
