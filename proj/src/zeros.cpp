#include "lfn/zeros.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>

#include "lfn/arith.hpp"
#include "lfn/errors.hpp"
#include "lfn/lfunction.hpp"
#include "lfn/parallel.hpp"

namespace lfn {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kGolden = 0.6180339887498949;  // irrational edge-nudging ratio
constexpr double kBoundaryAbsTol = 1e-8;
constexpr double kNewtonResidual = 1e-11;

Complex eval_target(const DirichletCharacter& chi, Complex s, Target t) {
    return t == Target::L ? eval(chi, s).value : eval_derivative(chi, s).value;
}

Complex eval_target_derivative(const DirichletCharacter& chi, Complex s, Target t) {
    if (t == Target::L) return eval_derivative(chi, s).value;
    const double h = 1e-6;
    Complex hi = eval_derivative(chi, s + h).value;
    Complex lo = eval_derivative(chi, s - h).value;
    return (hi - lo) / (2.0 * h);
}

int pole_order(const DirichletCharacter& chi, Target t) {
    if (!chi.is_principal()) return 0;
    return t == Target::L ? 1 : 2;
}

struct WalkResult {
    double phase_turns;  // total boundary phase / 2 pi
    double min_abs;
    Complex min_abs_at;
    bool suspect;  // a sample had |f| < tolerance, or the step floor was hit
};

// One counterclockwise boundary walk; interior sample positions are offset
// by `jitter` (fraction of the base step) so retries avoid a bad sample.
WalkResult walk_boundary(const DirichletCharacter& chi, const Window& r, Target target,
                         double jitter) {
    const Complex corners[5] = {{r.sigma_min, r.t_min},
                                {r.sigma_max, r.t_min},
                                {r.sigma_max, r.t_max},
                                {r.sigma_min, r.t_max},
                                {r.sigma_min, r.t_min}};
    WalkResult out{0.0, std::numeric_limits<double>::infinity(), Complex(0, 0), false};
    double total = 0.0;
    Complex f_prev = eval_target(chi, corners[0], target);
    out.min_abs = std::abs(f_prev);
    out.min_abs_at = corners[0];
    if (out.min_abs < kBoundaryAbsTol) out.suspect = true;

    for (int edge = 0; edge < 4; ++edge) {
        Complex a = corners[edge];
        Complex b = corners[edge + 1];
        double len = std::abs(b - a);
        if (len == 0.0) continue;
        Complex dir = (b - a) / len;
        double base = std::min(0.05, len / 16.0);
        double step = base * (1.0 - 0.45 * (jitter - std::floor(jitter)));
        double x = 0.0;
        while (x < len) {
            double next = std::min(len, x + step);
            Complex z = a + next * dir;
            Complex f = eval_target(chi, z, target);
            double mag = std::abs(f);
            if (mag < out.min_abs) {
                out.min_abs = mag;
                out.min_abs_at = z;
            }
            if (mag < kBoundaryAbsTol) out.suspect = true;
            double dphi = std::arg(f * std::conj(f_prev));
            if (std::abs(dphi) >= kPi / 2.0) {
                if (step > len * 1e-9) {
                    step *= 0.5;
                    continue;
                }
                out.suspect = true;  // cannot resolve the phase at the floor
            }
            total += dphi;
            f_prev = f;
            x = next;
            if (std::abs(dphi) < kPi / 8.0) step = std::min(base, step * 1.7);
        }
    }
    out.phase_turns = total / (2.0 * kPi);
    return out;
}

// Keep the pole of a principal L (or L') off the rectangle boundary: any
// edge passing within 1e-6 of s = 1 is pulled inward by 1e-4.
Window pull_edges_off_pole(const DirichletCharacter& chi, const Window& rect) {
    if (!chi.is_principal()) return rect;
    Window r = rect;
    const double near = 1e-6;
    const double push = 1e-4;
    if (0.0 >= r.t_min - near && 0.0 <= r.t_max + near) {
        if (std::abs(r.sigma_min - 1.0) < near) r.sigma_min = 1.0 + push;
        if (std::abs(r.sigma_max - 1.0) < near) r.sigma_max = 1.0 - push;
    }
    if (1.0 >= r.sigma_min - near && 1.0 <= r.sigma_max + near) {
        if (std::abs(r.t_min) < near && r.sigma_min < 1.0 && r.sigma_max > 1.0) r.t_min = push;
        if (std::abs(r.t_max) < near && r.sigma_min < 1.0 && r.sigma_max > 1.0) r.t_max = -push;
    }
    return r;
}

bool pole_strictly_inside(const DirichletCharacter& chi, const Window& r) {
    if (!chi.is_principal()) return false;
    return r.sigma_min < 1.0 && 1.0 < r.sigma_max && r.t_min < 0.0 && 0.0 < r.t_max;
}

RectCount count_rect(const DirichletCharacter& chi, const Window& rect, Target target) {
    if (rect.degenerate()) return {rect, 0, std::numeric_limits<double>::infinity()};
    Window r = pull_edges_off_pole(chi, rect);
    WalkResult w{};
    for (int attempt = 0; attempt < 5; ++attempt) {
        w = walk_boundary(chi, r, target, attempt * kGolden);
        double rounded = std::round(w.phase_turns);
        if (!w.suspect && std::abs(w.phase_turns - rounded) < 0.25) {
            int count = static_cast<int>(rounded);
            if (pole_strictly_inside(chi, r)) count += pole_order(chi, target);
            return {r, count, w.min_abs};
        }
    }
    throw BoundaryTooClose(w.min_abs_at, w.min_abs);
}

ZeroKind classify(Complex s) {
    if (std::abs(s.real()) < 1e-9) return ZeroKind::trivial_imaginary;
    if (std::abs(s.imag()) < 1e-9 && s.real() < 0.0) return ZeroKind::trivial_real;
    if (s.real() > 0.0 && s.real() < 1.0) return ZeroKind::nontrivial;
    return ZeroKind::trivial_real;
}

Zero make_zero(const DirichletCharacter& chi, Complex s, double residual, Target target) {
    Zero z;
    z.location = s;
    z.kind = classify(s);
    z.target = target;
    z.residual = residual;
    z.deriv_abs = std::abs(eval_target_derivative(chi, s, target));
    z.modulus = chi.modulus();
    z.index = chi.index();
    return z;
}

// Newton iteration from the cell center (plus perturbed restarts),
// accepting only roots inside a slightly grown copy of the cell.
bool newton_in_cell(const DirichletCharacter& chi, const Window& cell, Target target, Zero* out) {
    Complex center((cell.sigma_min + cell.sigma_max) / 2.0, (cell.t_min + cell.t_max) / 2.0);
    double diag = std::hypot(cell.width(), cell.height());
    Window grown = cell.expanded(1e-9 + 0.02 * cell.width(), 1e-9 + 0.02 * cell.height());
    for (int restart = 0; restart <= 8; ++restart) {
        Complex s = center;
        if (restart > 0) {
            double ang = 2.0 * kPi * kGolden * restart;
            double rad = 0.30 * diag * restart / 8.0;
            s += Complex(rad * std::cos(ang), rad * std::sin(ang));
        }
        for (int iter = 0; iter < 60; ++iter) {
            Complex f = eval_target(chi, s, target);
            double mag = std::abs(f);
            if (mag < kNewtonResidual) {
                if (!grown.contains(s)) break;
                *out = make_zero(chi, s, mag, target);
                return true;
            }
            Complex df = eval_target_derivative(chi, s, target);
            if (df == Complex(0.0, 0.0)) break;
            Complex step = f / df;
            if (std::abs(step) > 2.0 * diag) break;
            s -= step;
            if (!std::isfinite(s.real()) || !std::isfinite(s.imag())) break;
            if (std::abs(s - center) > 4.0 * diag) break;
        }
    }
    return false;
}

void scan_cell(const DirichletCharacter& chi, const Window& cell, Target target, int expect,
               int depth, std::vector<Zero>* out) {
    if (expect <= 0) return;
    if (depth > 64 || std::min(cell.width(), cell.height()) < 1e-9)
        throw NonConvergent("subdivision exhausted without isolating a zero");
    if (expect == 1) {
        Zero z;
        if (newton_in_cell(chi, cell, target, &z)) {
            out->push_back(z);
            return;
        }
    }
    // split the longer side; nudge the cut until both child counts resolve
    bool vertical = cell.width() >= cell.height();
    double lo = vertical ? cell.sigma_min : cell.t_min;
    double hi = vertical ? cell.sigma_max : cell.t_max;
    for (int attempt = 0; attempt < 6; ++attempt) {
        double frac = 0.5 + (attempt == 0 ? 0.0 : 0.04 * attempt * kGolden);
        double cut = lo + (hi - lo) * frac;
        Window c1 = cell, c2 = cell;
        if (vertical) {
            c1.sigma_max = cut;
            c2.sigma_min = cut;
        } else {
            c1.t_max = cut;
            c2.t_min = cut;
        }
        try {
            RectCount r1 = count_rect(chi, c1, target);
            RectCount r2 = count_rect(chi, c2, target);
            if (r1.winding + r2.winding != expect) continue;  // cut swallowed a zero
            scan_cell(chi, r1.rect, target, r1.winding, depth + 1, out);
            scan_cell(chi, r2.rect, target, r2.winding, depth + 1, out);
            return;
        } catch (const BoundaryTooClose&) {
            continue;
        }
    }
    throw NonConvergent("could not place a subdivision cut away from zeros");
}

}  // namespace

const char* to_string(Target t) { return t == Target::L ? "L" : "Lprime"; }

const char* to_string(ZeroKind k) {
    switch (k) {
        case ZeroKind::trivial_real: return "trivial_real";
        case ZeroKind::trivial_imaginary: return "trivial_imaginary";
        case ZeroKind::nontrivial: return "nontrivial";
    }
    return "?";
}

Complex target_value(const DirichletCharacter& chi, Complex s, Target target) {
    return eval_target(chi, s, target);
}

Complex target_derivative(const DirichletCharacter& chi, Complex s, Target target) {
    return eval_target_derivative(chi, s, target);
}

RectCount count_zeros_rect(const DirichletCharacter& chi, const Window& rect, Target target) {
    return count_rect(chi, rect, target);
}

std::vector<Zero> find_zeros_rect(const DirichletCharacter& chi, const Window& rect,
                                  Target target) {
    if (rect.degenerate()) return {};

    // Shrink the requested window inward until its boundary is clean; zeros
    // sitting exactly on the requested edges are deliberately excluded.
    Window outer = rect;
    RectCount total{outer, 0, 0.0};
    bool ok = false;
    for (int attempt = 0; attempt < 8 && !ok; ++attempt) {
        try {
            total = count_rect(chi, outer, target);
            ok = true;
        } catch (const BoundaryTooClose&) {
            double ds = 1e-6 * (attempt + 1) * (attempt + 1);
            outer = Window{outer.sigma_min + ds * kGolden, outer.sigma_max - ds,
                           outer.t_min + ds * kGolden, outer.t_max - ds};
            if (outer.degenerate()) return {};
        }
    }
    if (!ok) total = count_rect(chi, outer, target);
    outer = total.rect;
    if (total.winding == 0) return {};

    // Exact horizontal partition into slabs, cuts validated sequentially so the
    // expensive subdivision work can run in parallel per slab.
    struct Slab {
        Window rect;
        int count;
    };
    std::vector<Slab> slabs;
    double t_lo = outer.t_min;
    int sum = 0;
    while (t_lo < outer.t_max - 1e-12) {
        double t_hi = std::min(outer.t_max, t_lo + 5.0);
        Slab slab{};
        bool placed = false;
        for (int attempt = 0; attempt < 8 && !placed; ++attempt) {
            double cut = t_hi;
            if (attempt > 0 && t_hi < outer.t_max - 1e-12)
                cut = t_hi - 0.02 * attempt * kGolden;
            try {
                RectCount rc =
                    count_rect(chi, Window{outer.sigma_min, outer.sigma_max, t_lo, cut}, target);
                slab = {rc.rect, rc.winding};
                t_hi = cut;
                placed = true;
            } catch (const BoundaryTooClose&) {
                if (t_hi >= outer.t_max - 1e-12) throw;  // outer edge: nothing left to move
            }
        }
        if (!placed) throw NonConvergent("could not partition the scan window into slabs");
        slabs.push_back(slab);
        sum += slab.count;
        t_lo = t_hi;
    }
    if (sum != total.winding)
        throw NonConvergent("slab counts disagree with the whole-window count");

    std::vector<std::vector<Zero>> found(slabs.size());
    parallel::for_blocks(static_cast<int64_t>(slabs.size()), [&](int64_t b, int64_t e) {
        for (int64_t i = b; i < e; ++i)
            scan_cell(chi, slabs[i].rect, target, slabs[i].count, 0, &found[i]);
    });

    std::vector<Zero> zeros;
    for (auto& part : found) zeros.insert(zeros.end(), part.begin(), part.end());
    if (static_cast<int>(zeros.size()) != total.winding)
        throw NonConvergent("located zeros disagree with the argument-principle count");
    std::sort(zeros.begin(), zeros.end(), [](const Zero& a, const Zero& b) {
        if (a.location.imag() != b.location.imag()) return a.location.imag() < b.location.imag();
        return a.location.real() < b.location.real();
    });
    return zeros;
}

std::vector<Zero> find_zeros(const DirichletCharacter& chi, double t_min, double t_max,
                             Target target) {
    if (t_max <= t_min) return {};
    double sigma_hi = target == Target::L ? 2.0 : 5.0;
    return find_zeros_rect(chi, Window{-1.0, sigma_hi, t_min, t_max}, target);
}

Zero refine_zero(const DirichletCharacter& chi, Complex s0, Target target) {
    for (int restart = 0; restart <= 8; ++restart) {
        Complex s = s0;
        if (restart > 0) {
            double ang = 2.0 * kPi * kGolden * restart;
            double rad = 1e-3 * restart;
            s += Complex(rad * std::cos(ang), rad * std::sin(ang));
        }
        double best = std::numeric_limits<double>::infinity();
        int stalls = 0;
        for (int iter = 0; iter < 60; ++iter) {
            Complex f = eval_target(chi, s, target);
            double mag = std::abs(f);
            if (mag < kNewtonResidual) return make_zero(chi, s, mag, target);
            if (mag < best * 0.9) {
                best = mag;
                stalls = 0;
            } else if (++stalls > 5) {
                break;  // not contracting
            }
            Complex df = eval_target_derivative(chi, s, target);
            if (df == Complex(0.0, 0.0)) break;
            s -= f / df;
            if (!std::isfinite(s.real()) || !std::isfinite(s.imag())) break;
        }
    }
    throw NonConvergent("Newton refinement did not reach residual < 1e-11");
}

std::vector<Zero> trivial_zeros(const DirichletCharacter& chi, int count) {
    if (count <= 0) return {};
    const DirichletCharacter& prim = chi.primitive_part();
    std::vector<Complex> candidates;

    // real zeros from the Gamma/sine structure of the primitive part
    double first_real = prim.modulus() == 1 ? -2.0 : -static_cast<double>(prim.parity());
    for (int k = 0; k < count + 2; ++k) candidates.emplace_back(first_real - 2.0 * k, 0.0);

    // imaginary-axis zeros of the induced Euler factors: p^s = chi*(p)
    for (auto [p, e] : factorize(chi.modulus())) {
        (void)e;
        if (chi.conductor() % p == 0) continue;
        double lp = std::log(static_cast<double>(p));
        double theta = std::arg(prim(p));
        for (int k = -(count + 1); k <= count + 1; ++k) {
            double t = (theta + 2.0 * kPi * k) / lp;
            candidates.emplace_back(0.0, t);
        }
    }

    std::sort(candidates.begin(), candidates.end(), [](Complex a, Complex b) {
        double ma = std::abs(a), mb = std::abs(b);
        if (ma != mb) return ma < mb;
        if (a.imag() != b.imag()) return a.imag() < b.imag();
        return a.real() < b.real();
    });
    candidates.erase(std::unique(candidates.begin(), candidates.end(),
                                 [](Complex a, Complex b) { return std::abs(a - b) < 1e-12; }),
                     candidates.end());
    if (static_cast<int>(candidates.size()) > count) candidates.resize(count);

    std::vector<Zero> out;
    out.reserve(candidates.size());
    for (Complex s : candidates) {
        double residual = std::abs(eval(chi, s).value);
        Zero z = make_zero(chi, s, residual, Target::L);
        z.kind = std::abs(s.real()) < 1e-9 ? ZeroKind::trivial_imaginary : ZeroKind::trivial_real;
        out.push_back(z);
    }
    return out;
}

SimplicityReport verify_simple(const std::vector<Zero>& zeros, double threshold) {
    SimplicityReport rep;
    rep.min_deriv_abs = std::numeric_limits<double>::infinity();
    for (const Zero& z : zeros) {
        ++rep.checked;
        if (z.deriv_abs < rep.min_deriv_abs) {
            rep.min_deriv_abs = z.deriv_abs;
            rep.at = z.location;
        }
        if (z.deriv_abs <= threshold) rep.pass = false;
    }
    if (zeros.empty()) rep.min_deriv_abs = 0.0;
    return rep;
}

RhReport verify_rh(const std::vector<Zero>& zeros, double tol) {
    RhReport rep;
    std::map<std::pair<int64_t, int64_t>, DirichletCharacter> cache;
    for (const Zero& z : zeros) {
        if (z.kind != ZeroKind::nontrivial) continue;
        ++rep.checked;
        double dev = std::abs(z.location.real() - 0.5);
        if (dev > rep.max_deviation) {
            rep.max_deviation = dev;
            rep.worst = z.location;
        }
        if (dev >= tol) rep.pass = false;

        auto key = std::make_pair(z.modulus, z.index);
        auto it = cache.find(key);
        if (it == cache.end())
            it = cache.emplace(key, DirichletCharacter::from_index(z.modulus, z.index)).first;
        const DirichletCharacter& chi = it->second;
        if (chi.is_primitive() && chi.modulus() > 1) {
            Complex paired = 1.0 - std::conj(z.location);
            double res = std::abs(eval(chi.conjugate(), paired).value);
            if (res > rep.max_pairing_residual) {
                rep.max_pairing_residual = res;
                rep.worst_pairing = paired;
            }
            if (res >= 1e-7) rep.pass = false;
        }
    }
    return rep;
}

}  // namespace lfn
