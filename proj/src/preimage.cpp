#include "lfn/preimage.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numbers>

#include "lfn/errors.hpp"
#include "lfn/lfunction.hpp"
#include "lfn/parallel.hpp"

namespace lfn {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kOnCurveTol = 1e-8;

double sgn(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

struct ArmResult {
    std::vector<Complex> pts;  // excluding the start point
    std::vector<int8_t> color;
    TraceStop stop = TraceStop::none;
    std::optional<Complex> branch;
    double x_min = std::numeric_limits<double>::infinity();
    double x_max = -std::numeric_limits<double>::infinity();
};

// Newton corrector to f(s) = target.
bool correct_to(const DirichletCharacter& chi, Target t, Complex target, Complex* s,
                double tol, double leash) {
    Complex z = *s;
    Complex start = z;
    for (int iter = 0; iter < 6; ++iter) {
        Complex f = target_value(chi, z, t);
        if (std::abs(f - target) < tol * std::max(1.0, std::abs(target))) {
            *s = z;
            return true;
        }
        Complex df = target_derivative(chi, z, t);
        if (df == Complex(0.0, 0.0)) return false;
        z -= (f - target) / df;
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
        if (std::abs(z - start) > leash) return false;
    }
    return std::abs(target_value(chi, z, t) - target) < 10.0 * tol * std::max(1.0, std::abs(target))
               ? (*s = z, true)
               : false;
}

// One arm of the continuation of Im f = 0. dir = +1 follows increasing
// Re f, dir = -1 decreasing. loop_ref, when set, enables closed-loop
// detection against that point.
ArmResult trace_real_arm(const DirichletCharacter& chi, Target t, Complex start, int dir,
                         const Window& win, const TraceConfig& cfg,
                         std::optional<Complex> loop_ref = std::nullopt) {
    ArmResult out;
    Complex s = start;
    const bool principal_pole = chi.is_principal();
    double traveled = 0.0;
    while (static_cast<int>(out.pts.size()) < cfg.max_vertices) {
        Complex df = target_derivative(chi, s, t);
        double mag_df = std::abs(df);
        if (mag_df < cfg.branch_tol) {
            out.stop = TraceStop::branch_point;
            out.branch = s;
            return out;
        }
        Complex u = std::conj(df) / mag_df;  // unit tangent toward increasing Re f
        double h = cfg.max_step;
        if (mag_df < cfg.slow_derivative)
            h *= std::max(0.02, mag_df / cfg.slow_derivative);
        bool advanced = false;
        for (int halvings = 0; halvings < 16; ++halvings) {
            Complex pred = s + static_cast<double>(dir) * h * u;
            Complex f_pred = target_value(chi, pred, t);
            Complex z = pred;
            if (correct_to(chi, t, Complex(f_pred.real(), 0.0), &z, cfg.corrector_tol, 3.0 * h) &&
                std::abs(z - s) < 3.0 * h && std::abs(z - s) > 1e-14) {
                traveled += std::abs(z - s);
                s = z;
                advanced = true;
                break;
            }
            h *= 0.5;
        }
        if (!advanced) {
            out.stop = TraceStop::step_floor;
            return out;
        }
        if (!win.contains(s)) {
            out.stop = TraceStop::window_exit;
            return out;
        }
        Complex f = target_value(chi, s, t);
        out.pts.push_back(s);
        out.color.push_back(static_cast<int8_t>(sgn(f.real())));
        out.x_min = std::min(out.x_min, f.real());
        out.x_max = std::max(out.x_max, f.real());
        if (std::abs(f) > cfg.value_cap) {
            out.stop = TraceStop::value_cap;
            return out;
        }
        if (principal_pole && t == Target::L && std::abs(s - 1.0) < 1e-3 && std::abs(f) > 1e6) {
            out.stop = TraceStop::pole;
            return out;
        }
        if (loop_ref && out.pts.size() > 25 && traveled > 20.0 * cfg.max_step &&
            std::abs(s - *loop_ref) < 0.8 * cfg.max_step) {
            out.stop = TraceStop::closed_loop;
            return out;
        }
    }
    out.stop = TraceStop::max_vertices;
    return out;
}

CurveKind classify_real_curve(Target t, double x_min, double x_max) {
    if (t == Target::Lprime) return CurveKind::upsilon;
    if (x_min > 1.0) return CurveKind::gamma_prime;
    if (x_max < 1.0) return CurveKind::gamma_zero;
    return CurveKind::gamma_full;
}

CurveComponent assemble_two_arms(const DirichletCharacter& chi, Target t, Complex seed,
                                 const ArmResult& backward, const ArmResult& forward) {
    CurveComponent c;
    c.target = t;
    c.anchor = seed;
    c.vertices.reserve(backward.pts.size() + forward.pts.size() + 1);
    c.color.reserve(backward.pts.size() + forward.pts.size() + 1);
    for (size_t i = backward.pts.size(); i-- > 0;) {
        c.vertices.push_back(backward.pts[i]);
        c.color.push_back(backward.color[i]);
    }
    Complex f_seed = target_value(chi, seed, t);
    c.vertices.push_back(seed);
    c.color.push_back(static_cast<int8_t>(sgn(f_seed.real())));
    for (size_t i = 0; i < forward.pts.size(); ++i) {
        c.vertices.push_back(forward.pts[i]);
        c.color.push_back(forward.color[i]);
    }
    c.tail_stop = backward.stop;
    c.head_stop = forward.stop;
    if (backward.branch)
        c.branch_point = backward.branch;
    else if (forward.branch)
        c.branch_point = forward.branch;
    c.x_min = std::min({backward.x_min, forward.x_min, f_seed.real()});
    c.x_max = std::max({backward.x_max, forward.x_max, f_seed.real()});
    c.kind = classify_real_curve(t, c.x_min, c.x_max);
    return c;
}

// --- circle pre-image tracing ---------------------------------------------

ArmResult trace_circle_arm(const DirichletCharacter& chi, double r, Complex start, int dir,
                           const Window& win, const TraceConfig& cfg, Complex loop_ref) {
    ArmResult out;
    Complex s = start;
    Complex last_move(0.0, 0.0);
    double turning = 0.0;  // cumulative exterior angle, ~ +-2 pi on a closed loop
    while (static_cast<int>(out.pts.size()) < cfg.max_vertices) {
        Complex f = target_value(chi, s, Target::L);
        Complex df = target_derivative(chi, s, Target::L);
        double mag_df = std::abs(df);
        if (mag_df < cfg.branch_tol) {
            out.stop = TraceStop::branch_point;
            out.branch = s;
            return out;
        }
        Complex u = Complex(0.0, 1.0) * f / df;
        u /= std::abs(u);
        double h = cfg.max_step;
        if (mag_df < cfg.slow_derivative)
            h *= std::max(0.001, mag_df / cfg.slow_derivative);
        bool advanced = false;
        for (int halvings = 0; halvings < 18; ++halvings) {
            Complex pred = s + static_cast<double>(dir) * h * u;
            Complex f_pred = target_value(chi, pred, Target::L);
            if (f_pred == Complex(0.0, 0.0)) {
                h *= 0.5;
                continue;
            }
            Complex target = r * f_pred / std::abs(f_pred);
            Complex z = pred;
            if (correct_to(chi, Target::L, target, &z, cfg.corrector_tol, 3.0 * h) &&
                std::abs(z - s) < 3.0 * h && std::abs(z - s) > 1e-14) {
                Complex move = z - s;
                if (last_move != Complex(0.0, 0.0))
                    turning += std::arg(move * std::conj(last_move));
                last_move = move;
                s = z;
                advanced = true;
                break;
            }
            h *= 0.5;
        }
        if (!advanced) {
            out.stop = TraceStop::step_floor;
            return out;
        }
        if (!win.contains(s)) {
            out.stop = TraceStop::window_exit;
            return out;
        }
        Complex fz = target_value(chi, s, Target::L);
        out.pts.push_back(s);
        out.color.push_back(static_cast<int8_t>(sgn(fz.real())));
        out.x_min = std::min(out.x_min, fz.real());
        out.x_max = std::max(out.x_max, fz.real());
        if (out.pts.size() >= 6 && std::abs(turning) > 1.6 * kPi &&
            std::abs(s - loop_ref) < 1.5 * std::abs(last_move)) {
            out.stop = TraceStop::closed_loop;
            return out;
        }
    }
    out.stop = TraceStop::max_vertices;
    return out;
}

// Continuation from a zero to a point with L = sign * r on the real-axis
// pre-image through that zero.
std::optional<Complex> reach_circle(const DirichletCharacter& chi, Complex zero, double r,
                                    int sign, const Window& win) {
    Complex df0 = target_derivative(chi, zero, Target::L);
    if (df0 == Complex(0.0, 0.0)) return std::nullopt;
    double rho = std::min(r, 0.02 * std::abs(df0));
    if (rho <= 0.0) rho = r;
    Complex s = zero + static_cast<double>(sign) * rho / df0;
    Window grown = win.expanded(2.0, 2.0);
    while (true) {
        Complex target = Complex(static_cast<double>(sign) * rho, 0.0);
        if (!correct_to(chi, Target::L, target, &s, 1e-10, 10.0)) return std::nullopt;
        if (!grown.contains(s)) return std::nullopt;
        if (rho >= r) break;
        rho = std::min(r, rho * 1.3);
    }
    // one exact solve at |L| = r
    if (!correct_to(chi, Target::L, Complex(static_cast<double>(sign) * r, 0.0), &s, 1e-10, 10.0))
        return std::nullopt;
    return s;
}

// --- polygon / polyline helpers --------------------------------------------

double segment_distance(Complex a, Complex b, Complex p) {
    Complex ab = b - a;
    double len2 = std::norm(ab);
    if (len2 == 0.0) return std::abs(p - a);
    double t = std::clamp(((p - a) * std::conj(ab)).real() / len2, 0.0, 1.0);
    return std::abs(p - (a + t * ab));
}

}  // namespace

double polyline_distance(const std::vector<Complex>& pts, Complex p) {
    double best = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i + 1 < pts.size(); ++i)
        best = std::min(best, segment_distance(pts[i], pts[i + 1], p));
    if (pts.size() == 1) best = std::abs(p - pts[0]);
    return best;
}

bool point_in_polygon(const std::vector<Complex>& polygon, Complex p) {
    bool inside = false;
    size_t n = polygon.size();
    for (size_t i = 0, j = n - 1; i < n; j = i++) {
        double yi = polygon[i].imag(), yj = polygon[j].imag();
        double xi = polygon[i].real(), xj = polygon[j].real();
        if ((yi > p.imag()) != (yj > p.imag())) {
            double x_cross = xi + (p.imag() - yi) / (yj - yi) * (xj - xi);
            if (p.real() < x_cross) inside = !inside;
        }
    }
    return inside;
}

const char* to_string(CurveKind k) {
    switch (k) {
        case CurveKind::gamma_prime: return "gamma_prime";
        case CurveKind::gamma_zero: return "gamma_zero";
        case CurveKind::gamma_full: return "gamma_full";
        case CurveKind::upsilon: return "upsilon";
        case CurveKind::circle: return "circle";
        case CurveKind::segment_preimage: return "segment_preimage";
    }
    return "?";
}

const char* to_string(TraceStop s) {
    switch (s) {
        case TraceStop::none: return "none";
        case TraceStop::window_exit: return "window_exit";
        case TraceStop::closed_loop: return "closed_loop";
        case TraceStop::branch_point: return "branch_point";
        case TraceStop::pole: return "pole";
        case TraceStop::value_cap: return "value_cap";
        case TraceStop::step_floor: return "step_floor";
        case TraceStop::max_vertices: return "max_vertices";
    }
    return "?";
}

CurveComponent trace_real_preimage(const DirichletCharacter& chi, Complex seed, Target target,
                                   const Window& window, const TraceConfig& config) {
    if (!window.contains(seed)) throw SeedNotOnCurve("seed lies outside the window");
    Complex f0 = target_value(chi, seed, target);
    bool at_zero = std::abs(f0) < kOnCurveTol;
    if (!at_zero && std::abs(f0.imag()) >= kOnCurveTol)
        throw SeedNotOnCurve("Im f(seed) exceeds 1e-8 and seed is not a zero");
    ArmResult fwd = trace_real_arm(chi, target, seed, +1, window, config, seed);
    ArmResult bwd = trace_real_arm(chi, target, seed, -1, window, config, seed);
    return assemble_two_arms(chi, target, seed, bwd, fwd);
}

std::vector<Strip> find_strips(const DirichletCharacter& chi, const Window& window,
                               const TraceConfig& config) {
    if (window.degenerate()) throw WindowTooSmall("degenerate window");
    double sigma_seed = std::min(4.0, window.sigma_max - 0.25);
    if (sigma_seed <= window.sigma_min)
        throw WindowTooSmall("window too thin to seed the boundary curves");

    const double margin = 3.0;
    Window traced_win{window.sigma_min, window.sigma_max, window.t_min - margin,
                      window.t_max + margin};

    // seed scan: Im L = 0 with Re L > 1 along the vertical line
    std::vector<double> seed_ts;
    {
        const double step = 0.05;
        double t_lo = window.t_min - margin;
        double t_hi = window.t_max + margin;
        double prev_t = t_lo;
        Complex prev = target_value(chi, Complex(sigma_seed, prev_t), Target::L);
        for (double t = t_lo + step; t <= t_hi + 1e-12; t += step) {
            Complex cur = target_value(chi, Complex(sigma_seed, t), Target::L);
            if (sgn(prev.imag()) * sgn(cur.imag()) < 0.0) {
                double a = prev_t, b = t;
                Complex fa = prev;
                for (int i = 0; i < 60; ++i) {
                    double m = (a + b) / 2.0;
                    Complex fm = target_value(chi, Complex(sigma_seed, m), Target::L);
                    if (sgn(fm.imag()) == sgn(fa.imag())) {
                        a = m;
                        fa = fm;
                    } else {
                        b = m;
                    }
                }
                double c = (a + b) / 2.0;
                Complex fc = target_value(chi, Complex(sigma_seed, c), Target::L);
                if (fc.real() > 1.0) seed_ts.push_back(c);
            }
            prev = cur;
            prev_t = t;
        }
    }
    if (seed_ts.empty())
        throw WindowTooSmall("no boundary curve crosses the seed line in this window");

    std::vector<CurveComponent> primes(seed_ts.size());
    parallel::for_blocks(static_cast<int64_t>(seed_ts.size()), [&](int64_t b, int64_t e) {
        for (int64_t i = b; i < e; ++i)
            primes[i] =
                trace_real_preimage(chi, Complex(sigma_seed, seed_ts[i]), Target::L, traced_win,
                                    config);
    });

    // orient each curve left-to-right and sort by the seed height
    std::vector<CurveComponent> kept = std::move(primes);
    for (auto& c : kept)
        if (c.vertices.front().real() > c.vertices.back().real()) {
            std::reverse(c.vertices.begin(), c.vertices.end());
            std::reverse(c.color.begin(), c.color.end());
            std::swap(c.head_stop, c.tail_stop);
        }
    std::sort(kept.begin(), kept.end(), [](const CurveComponent& a, const CurveComponent& b) {
        return a.anchor.imag() < b.anchor.imag();
    });

    Window zero_rect{std::max(window.sigma_min, -1.0), std::min(window.sigma_max, 2.0),
                     window.t_min, window.t_max};
    std::vector<Zero> zeros = find_zeros_rect(chi, zero_rect, Target::L);
    std::vector<Zero> branches = find_zeros_rect(chi, window, Target::Lprime);

    std::vector<Strip> strips;
    for (size_t i = 0; i + 1 < kept.size(); ++i) {
        Strip strip;
        strip.lower = kept[i];
        strip.upper = kept[i + 1];
        strip.window = window;

        // skip strips whose band of heights misses the window entirely
        double band_lo = std::numeric_limits<double>::infinity();
        double band_hi = -band_lo;
        for (const Complex& v : strip.lower.vertices) band_lo = std::min(band_lo, v.imag());
        for (const Complex& v : strip.upper.vertices) band_hi = std::max(band_hi, v.imag());
        if (band_hi <= window.t_min || band_lo >= window.t_max) continue;

        std::vector<Complex> polygon = strip.lower.vertices;
        for (size_t j = strip.upper.vertices.size(); j-- > 0;)
            polygon.push_back(strip.upper.vertices[j]);

        for (const Zero& z : zeros)
            if (point_in_polygon(polygon, z.location)) strip.zeros_inside.push_back(z);
        for (const Zero& z : branches)
            if (point_in_polygon(polygon, z.location)) strip.branch_points_inside.push_back(z);

        // fully contained: boundaries stay in the window's t-range and span
        // its full width (sigma clipping is inherent, strips are infinite)
        auto contained = [&](const CurveComponent& c) {
            double re_lo = std::numeric_limits<double>::infinity(), re_hi = -re_lo;
            for (const Complex& v : c.vertices) {
                if (v.imag() <= window.t_min || v.imag() >= window.t_max) return false;
                re_lo = std::min(re_lo, v.real());
                re_hi = std::max(re_hi, v.real());
            }
            return re_lo <= window.sigma_min + 0.1 && re_hi >= window.sigma_max - 0.1;
        };
        strip.fully_contained = contained(strip.lower) && contained(strip.upper);

        for (const Zero& z : strip.zeros_inside) {
            CurveComponent c = trace_real_preimage(chi, z.location, Target::L, traced_win, config);
            strip.interior_curves.push_back(std::move(c));
        }
        strips.push_back(std::move(strip));
    }
    if (strips.empty()) throw WindowTooSmall("no strip intersects the window");
    return strips;
}

std::vector<CurveComponent> circle_preimage(const DirichletCharacter& chi, double r,
                                            const Window& window, const TraceConfig& config) {
    if (r <= 0.0) throw DomainError("circle radius must be positive");
    std::vector<Zero> branches = find_zeros_rect(chi, window, Target::Lprime);
    for (int guard = 0; guard < 64; ++guard) {
        bool clash = false;
        for (const Zero& v : branches) {
            double mag = std::abs(target_value(chi, v.location, Target::L));
            if (std::abs(mag - r) < 1e-6) clash = true;
        }
        if (!clash) break;
        r += 2e-6 * std::max(1.0, r);
    }

    Window zero_rect{std::max(window.sigma_min, -1.0), std::min(window.sigma_max, 2.0),
                     window.t_min, window.t_max};
    std::vector<Zero> zeros = find_zeros_rect(chi, zero_rect, Target::L);

    std::vector<CurveComponent> components;
    for (const Zero& z : zeros) {
        std::optional<Complex> start;
        for (int sign : {+1, -1}) {
            start = reach_circle(chi, z.location, r, sign, window);
            if (start && window.contains(*start)) break;
            start.reset();
        }
        if (!start) continue;
        bool duplicate = false;
        for (const auto& c : components)
            if (polyline_distance(c.vertices, *start) < 0.6 * config.max_step) duplicate = true;
        if (duplicate) continue;

        ArmResult fwd = trace_circle_arm(chi, r, *start, +1, window, config, *start);
        CurveComponent c;
        c.target = Target::L;
        c.kind = CurveKind::circle;
        c.anchor = z.location;
        if (fwd.stop == TraceStop::closed_loop) {
            c.vertices.push_back(*start);
            c.color.push_back(
                static_cast<int8_t>(sgn(target_value(chi, *start, Target::L).real())));
            c.vertices.insert(c.vertices.end(), fwd.pts.begin(), fwd.pts.end());
            c.color.insert(c.color.end(), fwd.color.begin(), fwd.color.end());
            c.vertices.push_back(*start);
            c.color.push_back(c.color.front());
            c.closed = true;
            c.head_stop = c.tail_stop = TraceStop::closed_loop;
            c.x_min = fwd.x_min;
            c.x_max = fwd.x_max;
        } else {
            ArmResult bwd = trace_circle_arm(chi, r, *start, -1, window, config, *start);
            c = assemble_two_arms(chi, Target::L, *start, bwd, fwd);
            c.kind = CurveKind::circle;
            c.anchor = z.location;
            c.closed = false;
        }
        components.push_back(std::move(c));
    }
    return components;
}

AlternationReport check_color_alternation(const DirichletCharacter& chi,
                                          const CurveComponent& curve) {
    AlternationReport rep;
    const auto& v = curve.vertices;
    if (v.size() < 3) return rep;
    auto im_at = [&](Complex p) { return target_value(chi, p, curve.target).imag(); };
    auto re_at = [&](Complex p) { return target_value(chi, p, curve.target).real(); };

    // closed components repeat the first vertex, so consecutive pairs cover
    // the wraparound crossing as well
    size_t n = v.size();
    for (size_t i = 0; i + 1 < n; ++i) {
        double a = im_at(v[i]);
        double b = im_at(v[i + 1]);
        if (sgn(a) * sgn(b) >= 0.0) continue;
        Complex lo = v[i], hi = v[i + 1];
        double f_lo = a;
        for (int k = 0; k < 50; ++k) {
            Complex mid = (lo + hi) / 2.0;
            double fm = im_at(mid);
            if (sgn(fm) == sgn(f_lo)) {
                lo = mid;
                f_lo = fm;
            } else {
                hi = mid;
            }
        }
        Complex crossing = (lo + hi) / 2.0;
        rep.crossing_points.push_back(crossing);
        rep.colors.push_back(re_at(crossing) > 0.0 ? +1 : -1);
    }
    rep.crossings = static_cast<int>(rep.colors.size());
    for (size_t i = 0; i + 1 < rep.colors.size(); ++i)
        if (rep.colors[i] == rep.colors[i + 1]) rep.pass = false;
    if (curve.closed && rep.colors.size() > 1 && rep.colors.front() == rep.colors.back())
        rep.pass = false;
    return rep;
}

IntertwineReport check_intertwining(const DirichletCharacter& chi, const CurveComponent& curve,
                                    const Window& window) {
    IntertwineReport rep;
    const auto& v = curve.vertices;
    if (v.size() < 5) return rep;

    // anchor abscissa for the color-matching restriction
    double anchor_re = curve.anchor.real();

    auto tangent_im_sign = [&](size_t i) {
        Complex t = v[i + 1] - v[i - 1];
        double m = std::abs(t);
        return m == 0.0 ? 0.0 : t.imag() / m;
    };

    for (size_t i = 1; i + 2 < v.size(); ++i) {
        double a = tangent_im_sign(i);
        double b = tangent_im_sign(i + 1);
        if (sgn(a) * sgn(b) >= 0.0) continue;

        // refine on the curve between v[i] and v[i+1] by bisection on the
        // secant tangent of nearby corrected points
        Complex lo = v[i], hi = v[i + 1];
        double sign_lo = sgn(a);
        Complex point = (lo + hi) / 2.0;
        Complex secant = hi - lo;
        for (int k = 0; k < 60; ++k) {
            Complex guess = (lo + hi) / 2.0;
            Complex z = guess;
            Complex f_g = target_value(chi, guess, curve.target);
            if (!correct_to(chi, curve.target, Complex(f_g.real(), 0.0), &z, 1e-12,
                            4.0 * std::abs(hi - lo) + 1e-9))
                break;
            point = z;
            if (std::abs(hi - lo) < 1e-9) break;
            // secant stride kept above the corrector noise floor so the
            // tangent sign stays readable as the bracket shrinks
            double eps = std::max(0.25 * std::abs(hi - lo), 1e-4);
            Complex dirn = (hi - lo) / std::abs(hi - lo);
            Complex zp = z + eps * dirn, zm = z - eps * dirn;
            Complex fzp = target_value(chi, zp, curve.target);
            Complex fzm = target_value(chi, zm, curve.target);
            correct_to(chi, curve.target, Complex(fzp.real(), 0.0), &zp, 1e-12, 4.0 * eps);
            correct_to(chi, curve.target, Complex(fzm.real(), 0.0), &zm, 1e-12, 4.0 * eps);
            secant = zp - zm;
            double s_mid = secant.imag() / std::abs(secant);
            if (sgn(s_mid) == 0.0) break;
            if (sgn(s_mid) == sign_lo)
                lo = z;
            else
                hi = z;
        }
        if (!window.contains(point)) continue;

        IntertwinePoint ip;
        ip.location = point;
        ip.tangent_im = std::abs(secant.imag() / std::abs(secant));
        Complex lp = curve.target == Target::L ? eval_derivative(chi, point).value
                                               : target_derivative(chi, point, curve.target);
        ip.l_prime = lp;
        rep.max_im_lprime = std::max(rep.max_im_lprime, std::abs(lp.imag()));
        if (std::abs(lp.imag()) >= 1e-6) rep.pass = false;
        if (curve.kind == CurveKind::gamma_prime) {
            ip.color_rule_applies = true;
            ip.color_rule_ok = lp.real() < 0.0;
            if (!ip.color_rule_ok) rep.pass = false;
        } else if (point.real() < anchor_re) {
            // left of the zero the colors must be opposite
            double re_f = target_value(chi, point, curve.target).real();
            ip.color_rule_applies = true;
            ip.color_rule_ok = sgn(re_f) * sgn(lp.real()) < 0.0;
            if (!ip.color_rule_ok) rep.pass = false;
        }
        rep.points.push_back(ip);
    }
    return rep;
}

namespace {

// Pre-image of the segment [L(v), 1] continued through the branch point v.
std::vector<CurveComponent> trace_branch_cut(const DirichletCharacter& chi, Complex v,
                                             const Window& win, const TraceConfig& cfg) {
    Complex zv = target_value(chi, v, Target::L);
    Complex u = Complex(1.0, 0.0) - zv;
    if (std::abs(u) < 1e-9) throw IncompleteStrip("branch image coincides with z = 1");

    const double rho = 1e-3;
    auto angle_misfit = [&](double theta) {
        Complex s = v + rho * Complex(std::cos(theta), std::sin(theta));
        Complex d = (target_value(chi, s, Target::L) - zv) / u;
        return std::arg(d);
    };
    // locate the directions mapped onto the segment (order-2: two of them)
    std::vector<double> roots;
    const int samples = 96;
    double prev = angle_misfit(0.0);
    for (int i = 1; i <= samples; ++i) {
        double th = 2.0 * kPi * i / samples;
        double cur = angle_misfit(th);
        if (std::abs(cur - prev) < kPi && sgn(prev) * sgn(cur) < 0.0) {
            double a = th - 2.0 * kPi / samples, b = th, fa = prev;
            for (int k = 0; k < 50; ++k) {
                double m = (a + b) / 2.0;
                double fm = angle_misfit(m);
                if (sgn(fm) == sgn(fa)) {
                    a = m;
                    fa = fm;
                } else {
                    b = m;
                }
            }
            roots.push_back((a + b) / 2.0);
        }
        prev = cur;
    }
    if (roots.size() < 2) throw IncompleteStrip("branch-point arcs could not be seeded");

    std::vector<CurveComponent> arms;
    for (double theta : roots) {
        CurveComponent arm;
        arm.kind = CurveKind::segment_preimage;
        arm.target = Target::L;
        arm.anchor = v;
        arm.branch_point = v;
        arm.vertices.push_back(v);
        arm.color.push_back(0);
        Complex s = v + rho * Complex(std::cos(theta), std::sin(theta));
        double tau = ((target_value(chi, s, Target::L) - zv) * std::conj(u)).real() / std::norm(u);
        arm.vertices.push_back(s);
        arm.color.push_back(static_cast<int8_t>(sgn(target_value(chi, s, Target::L).real())));
        int guard = 0;
        while (tau < 1.0 - 1e-9 && guard++ < cfg.max_vertices) {
            Complex df = target_derivative(chi, s, Target::L);
            double mag_df = std::abs(df);
            if (mag_df < cfg.branch_tol && std::abs(s - v) > 5.0 * rho) break;
            double d_tau = std::min(1.0 - tau, cfg.max_step * mag_df / std::abs(u));
            d_tau = std::max(d_tau, 1e-7);
            bool advanced = false;
            for (int halvings = 0; halvings < 20; ++halvings) {
                double tau_next = std::min(1.0, tau + d_tau);
                Complex target = zv + tau_next * u;
                Complex z = s + (target - (zv + tau * u)) / df;
                if (correct_to(chi, Target::L, target, &z, 1e-10,
                               5.0 * std::abs(target - (zv + tau * u)) / mag_df + 1e-6)) {
                    s = z;
                    tau = tau_next;
                    advanced = true;
                    break;
                }
                d_tau *= 0.5;
                if (d_tau < 1e-12) break;
            }
            if (!advanced) break;
            arm.vertices.push_back(s);
            arm.color.push_back(static_cast<int8_t>(sgn(target_value(chi, s, Target::L).real())));
            if (!win.contains(s)) break;
        }
        arm.head_stop = tau >= 1.0 - 1e-9 ? TraceStop::none : TraceStop::window_exit;
        arms.push_back(std::move(arm));
    }
    return arms;
}

struct GridLabels {
    int nx = 0, ny = 0;
    double x0 = 0, y0 = 0, dx = 0, dy = 0;
    std::vector<int> label;  // -2 blocked (cut), -1 outside, >= 0 component id
    int components = 0;

    int cell_of(Complex p) const {
        int ix = static_cast<int>((p.real() - x0) / dx);
        int iy = static_cast<int>((p.imag() - y0) / dy);
        if (ix < 0 || iy < 0 || ix >= nx || iy >= ny) return -1;
        return label[iy * nx + ix];
    }
};

GridLabels label_strip_grid(const Strip& strip, const std::vector<CurveComponent>& cuts) {
    std::vector<Complex> polygon = strip.lower.vertices;
    for (size_t j = strip.upper.vertices.size(); j-- > 0;)
        polygon.push_back(strip.upper.vertices[j]);

    double x_lo = strip.window.sigma_min, x_hi = strip.window.sigma_max;
    double y_lo = std::numeric_limits<double>::infinity(), y_hi = -y_lo;
    for (const Complex& p : polygon) {
        y_lo = std::min(y_lo, p.imag());
        y_hi = std::max(y_hi, p.imag());
    }
    GridLabels g;
    g.nx = 360;
    g.ny = std::clamp(static_cast<int>(g.nx * (y_hi - y_lo) / std::max(1e-9, x_hi - x_lo)), 60,
                      520);
    g.x0 = x_lo;
    g.y0 = y_lo;
    g.dx = (x_hi - x_lo) / g.nx;
    g.dy = (y_hi - y_lo) / g.ny;
    g.label.assign(static_cast<size_t>(g.nx) * g.ny, -1);

    for (int iy = 0; iy < g.ny; ++iy)
        for (int ix = 0; ix < g.nx; ++ix) {
            Complex c(g.x0 + (ix + 0.5) * g.dx, g.y0 + (iy + 0.5) * g.dy);
            if (point_in_polygon(polygon, c)) g.label[iy * g.nx + ix] = 0;
        }

    // block cells near the cuts
    double sub = 0.5 * std::min(g.dx, g.dy);
    for (const auto& cut : cuts)
        for (size_t i = 0; i + 1 < cut.vertices.size(); ++i) {
            Complex a = cut.vertices[i], b = cut.vertices[i + 1];
            int steps = std::max(1, static_cast<int>(std::abs(b - a) / sub));
            for (int k = 0; k <= steps; ++k) {
                Complex p = a + (b - a) * (static_cast<double>(k) / steps);
                int ix = static_cast<int>((p.real() - g.x0) / g.dx);
                int iy = static_cast<int>((p.imag() - g.y0) / g.dy);
                for (int oy = -1; oy <= 1; ++oy)
                    for (int ox = -1; ox <= 1; ++ox) {
                        int jx = ix + ox, jy = iy + oy;
                        if (jx >= 0 && jy >= 0 && jx < g.nx && jy < g.ny &&
                            g.label[jy * g.nx + jx] == 0)
                            g.label[jy * g.nx + jx] = -2;
                    }
            }
        }

    // connected components, 4-adjacency, deterministic sweep order
    int next = 0;
    std::deque<int> queue;
    for (size_t start = 0; start < g.label.size(); ++start) {
        if (g.label[start] != 0) continue;
        ++next;
        g.label[start] = next;
        queue.push_back(static_cast<int>(start));
        while (!queue.empty()) {
            int cell = queue.front();
            queue.pop_front();
            int cx = cell % g.nx, cy = cell / g.nx;
            const int off[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
            for (auto& o : off) {
                int jx = cx + o[0], jy = cy + o[1];
                if (jx < 0 || jy < 0 || jx >= g.nx || jy >= g.ny) continue;
                int idx = jy * g.nx + jx;
                if (g.label[idx] == 0) {
                    g.label[idx] = next;
                    queue.push_back(idx);
                }
            }
        }
    }
    g.components = next;
    return g;
}

}  // namespace

std::vector<FundamentalDomain> fundamental_domains(const DirichletCharacter& chi,
                                                   const Strip& strip,
                                                   const TraceConfig& config) {
    size_t j = strip.zeros_inside.size();
    if (j == 0) throw IncompleteStrip("strip holds no zero");
    if (strip.branch_points_inside.size() + 1 != j)
        throw IncompleteStrip("branch points do not match the zero count; window truncation?");

    std::vector<CurveComponent> cuts;
    for (const Zero& v : strip.branch_points_inside) {
        auto arms = trace_branch_cut(chi, v.location, strip.window, config);
        for (auto& a : arms) cuts.push_back(std::move(a));
    }

    // The sub-strip walls are the branch cuts together with the pieces of
    // the interior real-axis curves mapped into [1, +inf): each full curve
    // contributes the run from its L = 1 point out to the left window edge.
    std::vector<CurveComponent> interior = strip.interior_curves;
    if (interior.empty())
        for (const Zero& z : strip.zeros_inside)
            interior.push_back(
                trace_real_preimage(chi, z.location, Target::L, strip.window, config));
    for (const CurveComponent& curve : interior) {
        if (curve.kind != CurveKind::gamma_full && curve.kind != CurveKind::gamma_prime) continue;
        CurveComponent run;
        run.kind = curve.kind;
        run.target = curve.target;
        run.anchor = curve.anchor;
        bool active = false;
        for (const Complex& p : curve.vertices) {
            double x = target_value(chi, p, Target::L).real();
            if (x >= 0.98) {
                run.vertices.push_back(p);
                run.color.push_back(1);
                active = true;
            } else if (active) {
                if (run.vertices.size() >= 2) cuts.push_back(run);
                run.vertices.clear();
                run.color.clear();
                active = false;
            }
        }
        if (run.vertices.size() >= 2) cuts.push_back(std::move(run));
    }

    GridLabels grid = label_strip_grid(strip, cuts);

    // collect component sizes and keep the meaningful ones
    std::vector<int64_t> size_of(grid.components + 1, 0);
    for (int lbl : grid.label)
        if (lbl > 0) ++size_of[lbl];
    std::vector<int> keep;
    for (int c = 1; c <= grid.components; ++c)
        if (size_of[c] >= 40) keep.push_back(c);
    if (keep.size() != j)
        throw IncompleteStrip("sub-strip count does not match the zero count");

    std::vector<FundamentalDomain> domains;
    for (int lbl : keep) {
        FundamentalDomain dom;
        // bounding box of the component
        double x_lo = 1e300, x_hi = -1e300, y_lo = 1e300, y_hi = -1e300;
        Complex centroid(0, 0);
        int64_t count = 0;
        for (int iy = 0; iy < grid.ny; ++iy)
            for (int ix = 0; ix < grid.nx; ++ix)
                if (grid.label[iy * grid.nx + ix] == lbl) {
                    Complex c(grid.x0 + (ix + 0.5) * grid.dx, grid.y0 + (iy + 0.5) * grid.dy);
                    x_lo = std::min(x_lo, c.real());
                    x_hi = std::max(x_hi, c.real());
                    y_lo = std::min(y_lo, c.imag());
                    y_hi = std::max(y_hi, c.imag());
                    centroid += c;
                    ++count;
                }
        centroid /= static_cast<double>(count);

        // 50 x 50 interior mesh filtered to the component
        for (int iy = 0; iy < 50; ++iy)
            for (int ix = 0; ix < 50; ++ix) {
                Complex p(x_lo + (x_hi - x_lo) * (ix + 0.5) / 50.0,
                          y_lo + (y_hi - y_lo) * (iy + 0.5) / 50.0);
                if (grid.cell_of(p) == lbl && strip.window.contains(p))
                    dom.interior_mesh.push_back(p);
            }
        // witness: mesh point nearest the centroid
        double best = 1e300;
        for (const Complex& p : dom.interior_mesh) {
            double d = std::abs(p - centroid);
            if (d < best) {
                best = d;
                dom.witness = p;
            }
        }

        dom.boundary.push_back(strip.lower);
        for (const auto& cut : cuts) {
            // a cut borders this domain when a sample just off its midpoint
            // falls into the component
            if (cut.vertices.size() < 2) continue;
            Complex mid = cut.vertices[cut.vertices.size() / 2];
            Complex dir = cut.vertices[cut.vertices.size() / 2] -
                          cut.vertices[cut.vertices.size() / 2 - 1];
            double m = std::abs(dir);
            if (m == 0.0) continue;
            Complex normal = Complex(0, 1) * dir / m;
            double off = 2.5 * std::max(grid.dx, grid.dy);
            if (grid.cell_of(mid + off * normal) == lbl || grid.cell_of(mid - off * normal) == lbl)
                dom.boundary.push_back(cut);
        }
        dom.boundary.push_back(strip.upper);
        domains.push_back(std::move(dom));
    }
    return domains;
}

InjectivityReport check_domain_injectivity(const DirichletCharacter& chi,
                                           const FundamentalDomain& domain, double tol) {
    InjectivityReport rep;
    const auto& mesh = domain.interior_mesh;
    rep.samples = mesh.size();
    rep.min_image_gap = std::numeric_limits<double>::infinity();
    std::vector<Complex> images(mesh.size());
    parallel::for_blocks(static_cast<int64_t>(mesh.size()), [&](int64_t b, int64_t e) {
        for (int64_t i = b; i < e; ++i) images[i] = target_value(chi, mesh[i], Target::L);
    });
    for (size_t i = 0; i < images.size(); ++i)
        for (size_t k = i + 1; k < images.size(); ++k) {
            double d = std::abs(images[i] - images[k]);
            if (d < rep.min_image_gap) {
                rep.min_image_gap = d;
                rep.at_a = mesh[i];
                rep.at_b = mesh[k];
            }
        }
    if (mesh.size() < 2) rep.min_image_gap = 0.0;
    rep.pass = rep.min_image_gap > tol;
    return rep;
}

}  // namespace lfn
