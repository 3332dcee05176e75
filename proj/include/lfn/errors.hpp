#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace lfn {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DomainError : Error {
    using Error::Error;
};

// L(s; chi0) has a simple pole at s = 1; carries the residue prod_{p|q}(1 - 1/p).
struct PoleAtOne : Error {
    double residue;
    explicit PoleAtOne(double res)
        : Error("simple pole at s = 1 (residue " + std::to_string(res) + ")"), residue(res) {}
};

struct NotPrimitive : Error {
    using Error::Error;
};

struct BadModulus : Error {
    using Error::Error;
};

struct BoundaryTooClose : Error {
    std::complex<double> where;
    double abs_value;
    BoundaryTooClose(std::complex<double> w, double v)
        : Error("zero too close to a contour boundary"), where(w), abs_value(v) {}
};

struct NonConvergent : Error {
    using Error::Error;
};

struct SeedNotOnCurve : Error {
    using Error::Error;
};

struct WindowTooSmall : Error {
    using Error::Error;
};

struct IncompleteStrip : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

}  // namespace lfn
