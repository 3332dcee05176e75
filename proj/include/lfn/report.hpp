#pragma once

#include <complex>
#include <string>
#include <vector>

namespace lfn {

struct VerificationSummary {
    std::string name;
    bool pass = true;
    double worst_value = 0.0;
    std::complex<double> worst_location;
    std::string params;
};

/// Batch verification over every character of every modulus q <= q_max:
/// factorization identities, functional-equation and conjugation residuals,
/// a zero scan to t_max with the critical-line and simplicity checks, strip
/// and branch-point counts, and intertwining spot checks. Individual
/// failures are recorded, never thrown.
std::vector<VerificationSummary> report_suite(int q_max, double t_max);

std::string report_to_json(const std::vector<VerificationSummary>& summaries, int q_max,
                           double t_max);

}  // namespace lfn
