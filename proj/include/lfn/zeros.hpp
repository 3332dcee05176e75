#pragma once

#include <complex>
#include <vector>

#include "lfn/characters.hpp"
#include "lfn/window.hpp"

namespace lfn {

enum class Target { L, Lprime };

const char* to_string(Target t);

/// Value of the scanned function (L or L') at s.
Complex target_value(const DirichletCharacter& chi, Complex s, Target target);

/// Derivative of the scanned function: L' analytically, L'' by a central
/// difference of L' at h = 1e-6.
Complex target_derivative(const DirichletCharacter& chi, Complex s, Target target);

enum class ZeroKind { trivial_real, trivial_imaginary, nontrivial };

const char* to_string(ZeroKind k);

struct Zero {
    Complex location;
    ZeroKind kind = ZeroKind::nontrivial;
    Target target = Target::L;
    double residual = 0.0;   // |f(location)|
    double deriv_abs = 0.0;  // |f'(location)|
    int64_t modulus = 1;
    int64_t index = 1;
};

struct RectCount {
    Window rect;
    int winding = 0;  // zeros inside, with multiplicity (pole-corrected for principal chi)
    double boundary_min_abs = 0.0;
};

/// Argument-principle count of zeros in a rectangle: the boundary phase of f
/// is tracked with adaptive steps keeping each increment below pi/2. For
/// principal characters the pole at s = 1 is kept off the boundary (edges
/// within 1e-6 of it are pulled inward by 1e-4) and its order is added back
/// when it lies inside, so the count is always the number of zeros.
/// Throws BoundaryTooClose when |f| < 1e-8 persists on the boundary after
/// 5 sampling perturbations.
RectCount count_zeros_rect(const DirichletCharacter& chi, const Window& rect, Target target);

/// All zeros with t_min < Im s < t_max inside the scan strip
/// sigma in [-1, 2] (L) or [-1, 5] (L'), by adaptive rectangle subdivision
/// until each cell holds one zero, then Newton refinement. Cell counts are
/// cross-checked against the whole-window count. Sorted by Im, then Re.
std::vector<Zero> find_zeros(const DirichletCharacter& chi, double t_min, double t_max,
                             Target target = Target::L);

/// Same scan over an explicit rectangle.
std::vector<Zero> find_zeros_rect(const DirichletCharacter& chi, const Window& rect,
                                  Target target);

/// Newton refinement from s0 to residual < 1e-11 (at most 60 iterations,
/// 8 perturbed restarts). Never fabricates: throws NonConvergent instead of
/// returning a point with residual >= 1e-11.
Zero refine_zero(const DirichletCharacter& chi, Complex s0, Target target = Target::L);

/// The first `count` trivial zeros ordered by |location|: the real ones
/// forced by the Gamma/sine factors of the functional equation of the
/// primitive part, plus, for imprimitive chi, the imaginary-axis solutions
/// of p^s = chi*(p) for p | q. Residuals are verified by evaluation.
std::vector<Zero> trivial_zeros(const DirichletCharacter& chi, int count);

struct SimplicityReport {
    bool pass = true;
    double min_deriv_abs = 0.0;
    Complex at;
    size_t checked = 0;
};

/// PASS iff every zero has |f'| above the threshold.
SimplicityReport verify_simple(const std::vector<Zero>& zeros, double threshold = 1e-6);

struct RhReport {
    bool pass = true;
    double max_deviation = 0.0;  // worst |Re rho - 1/2|
    Complex worst;
    double max_pairing_residual = 0.0;  // worst |L(1 - conj rho; conj chi)|
    Complex worst_pairing;
    size_t checked = 0;
};

/// Critical-line check on nontrivial zeros: |Re rho - 1/2| < tol, plus the
/// functional-equation pairing |L(1 - conj rho; conj chi)| < 1e-7 for
/// primitive characters.
RhReport verify_rh(const std::vector<Zero>& zeros, double tol = 1e-8);

}  // namespace lfn
