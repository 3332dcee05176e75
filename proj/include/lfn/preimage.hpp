#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "lfn/characters.hpp"
#include "lfn/window.hpp"
#include "lfn/zeros.hpp"

namespace lfn {

enum class CurveKind {
    gamma_prime,       // real-axis pre-image mapped into (1, +inf)
    gamma_zero,        // mapped into (-inf, 1) through a zero
    gamma_full,        // mapped onto all of R
    upsilon,           // pre-image of R under L'
    circle,            // pre-image of |z| = r
    segment_preimage,  // pre-image of a segment [L(v), 1] through a branch point
};

enum class TraceStop {
    none,
    window_exit,
    closed_loop,
    branch_point,
    pole,
    value_cap,
    step_floor,
    max_vertices,
};

const char* to_string(CurveKind k);
const char* to_string(TraceStop s);

/// Polyline approximation of one pre-image component. Vertices satisfy the
/// defining equation (Im f = 0, |f| = r, ...) to the corrector tolerance;
/// color holds the sign of Re f per vertex (the two-color convention).
struct CurveComponent {
    std::vector<Complex> vertices;
    CurveKind kind = CurveKind::gamma_full;
    std::vector<int8_t> color;
    Complex anchor;  // seed, zero or branch point the trace started from
    Target target = Target::L;
    TraceStop head_stop = TraceStop::none;  // stop reason of the forward arm
    TraceStop tail_stop = TraceStop::none;  // stop reason of the backward arm
    std::optional<Complex> branch_point;
    double x_min = 0.0;  // range of Re f over the vertices
    double x_max = 0.0;
    bool closed = false;
};

struct TraceConfig {
    double max_step = 0.02;
    double corrector_tol = 1e-10;
    double slow_derivative = 1e-3;  // halve steps below this |f'|
    double branch_tol = 1e-6;       // |f'| that stops a trace at a branch point
    double value_cap = 1e8;
    int max_vertices = 200000;
};

/// Predictor-corrector continuation of Im f(s) = 0 from a seed with
/// f(seed) real within 1e-8 (both directions) or from a zero of f (the
/// trace splits into the two real directions). A branch point (|f'| below
/// branch_tol) stops the arm and is reported on the component.
CurveComponent trace_real_preimage(const DirichletCharacter& chi, Complex seed, Target target,
                                   const Window& window, const TraceConfig& config = {});

struct Strip {
    CurveComponent lower;  // gamma_prime boundary curves
    CurveComponent upper;
    std::vector<Zero> zeros_inside;
    std::vector<Zero> branch_points_inside;  // zeros of L' (target Lprime)
    std::vector<CurveComponent> interior_curves;
    Window window;
    bool fully_contained = false;  // both boundaries stay inside the window
};

/// Finds the gamma_prime components crossing the window (seeded on the
/// vertical line Re s = min(4, sigma_max - 1/4) where Im L = 0 and
/// Re L > 1), pairs consecutive ones into strips ordered by Im, and assigns
/// zeros, branch points and the traced curves through the zeros.
std::vector<Strip> find_strips(const DirichletCharacter& chi, const Window& window,
                               const TraceConfig& config = {});

/// Components of |L(s)| = r inside the window; r is nudged upward while it
/// collides with |L| at a branch point. Components are closed loops or open
/// arcs leaving the window.
std::vector<CurveComponent> circle_preimage(const DirichletCharacter& chi, double r,
                                            const Window& window, const TraceConfig& config = {});

struct AlternationReport {
    bool pass = true;
    int crossings = 0;
    std::vector<Complex> crossing_points;
    std::vector<int> colors;  // sign of Re f at each crossing of Im f = 0
};

/// Walks a circle-kind component and verifies that its crossings of the
/// real-axis pre-image alternate in color.
AlternationReport check_color_alternation(const DirichletCharacter& chi,
                                          const CurveComponent& curve);

struct IntertwinePoint {
    Complex location;
    Complex l_prime;
    double tangent_im = 0.0;  // |Im of the unit tangent| after refinement
    bool color_rule_applies = false;
    bool color_rule_ok = true;
};

struct IntertwineReport {
    bool pass = true;
    std::vector<IntertwinePoint> points;
    double max_im_lprime = 0.0;
};

/// Locates the horizontal-tangent points of a real-axis component by sign
/// changes of the polyline tangent, refines them on the curve, and verifies
/// |Im L'| < 1e-6 there. On gamma_prime curves additionally checks
/// Re L' < 0; on other curves the color-matching rule is checked only left
/// of the anchor zero.
IntertwineReport check_intertwining(const DirichletCharacter& chi, const CurveComponent& curve,
                                    const Window& window);

struct FundamentalDomain {
    std::vector<CurveComponent> boundary;  // strip boundaries and adjacent cuts
    Complex witness;
    std::vector<Complex> interior_mesh;  // sample points used by the injectivity check
};

/// Cuts the strip along the pre-images of the segments [L(v), 1] through its
/// branch points v and returns the resulting sub-strips, one per zero.
/// Throws IncompleteStrip when the branch structure is truncated by the
/// window (branch count != zero count - 1 or a cut leaves the strip open).
std::vector<FundamentalDomain> fundamental_domains(const DirichletCharacter& chi,
                                                   const Strip& strip,
                                                   const TraceConfig& config = {});

struct InjectivityReport {
    bool pass = true;
    double min_image_gap = 0.0;
    Complex at_a, at_b;
    size_t samples = 0;
};

/// Pairwise-distinct-images check of L on the domain's interior mesh.
InjectivityReport check_domain_injectivity(const DirichletCharacter& chi,
                                           const FundamentalDomain& domain, double tol = 1e-8);

// geometry helpers shared with the tests
double polyline_distance(const std::vector<Complex>& pts, Complex p);
bool point_in_polygon(const std::vector<Complex>& polygon, Complex p);

}  // namespace lfn
