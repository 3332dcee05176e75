#pragma once

#include <complex>

#include "lfn/characters.hpp"

namespace lfn {

enum class EvalMethod { series, euler_product, euler_maclaurin, factorization };

const char* to_string(EvalMethod m);

struct EvalResult {
    Complex value;
    double est_error = 0.0;  // heuristic absolute bound
    EvalMethod method = EvalMethod::euler_maclaurin;
};

struct EvalOptions {
    // Euler-Maclaurin truncation; 0 picks max(20, ceil(2|Im s|)) initial terms.
    int em_terms = 0;
    // number of Bernoulli correction terms, at most 12
    int bernoulli_terms = 12;
    // Left of Re s = 0 the continuation may route through the completed-form
    // reflection; disable to force the direct Euler-Maclaurin path (used to
    // keep the two sides of the functional-equation check independent).
    bool allow_reflection = true;
};

/// Partial sum of sum chi(n) n^{-s}; requires Re s > 1. est_error is the
/// integral tail bound terms^{1-sigma}/(sigma-1).
EvalResult eval_series(const DirichletCharacter& chi, Complex s, int64_t terms);

/// Truncated Euler product over primes p <= prime_bound; requires Re s > 1.
EvalResult eval_euler(const DirichletCharacter& chi, Complex s, int64_t prime_bound);

/// Hurwitz zeta(s, a) for a in (0, 1], Euler-Maclaurin continuation.
/// Throws PoleAtOne when |s - 1| < 1e-12.
EvalResult hurwitz_zeta(Complex s, double a, const EvalOptions& options = {});

/// L(s; chi) anywhere in the plane. Principal characters are evaluated as
/// zeta(s) * prod_{p|q}(1 - p^{-s}) and have a simple pole at s = 1
/// (PoleAtOne carries the residue). Imprimitive characters factor through
/// their primitive part.
EvalResult eval(const DirichletCharacter& chi, Complex s, const EvalOptions& options = {});

/// L'(s; chi), term-by-term differentiated continuation.
EvalResult eval_derivative(const DirichletCharacter& chi, Complex s,
                           const EvalOptions& options = {});

EvalResult zeta(Complex s, const EvalOptions& options = {});
EvalResult zeta_derivative(Complex s, const EvalOptions& options = {});

struct FunctionalEquationReport {
    Complex s;
    Complex lhs;
    Complex rhs;
    double residual;  // |lhs - rhs|
    Complex epsilon_chi;
    int kappa;
};

/// Two-path check of L(s;chi) = eps(chi) L(1-s;conj chi) 2^s pi^{s-1}
/// q^{1/2-s} Gamma(1-s) sin(pi (s+kappa) / 2) for primitive chi, q > 1.
/// Both sides are evaluated on the direct continuation route.
FunctionalEquationReport functional_equation_check(const DirichletCharacter& chi, Complex s);

/// eps(chi) = tau(chi) / (i^kappa sqrt q); unit modulus for primitive chi.
Complex epsilon_factor(const DirichletCharacter& chi);

/// |L(conj s; chi) - conj L(s; conj chi)|.
double conjugation_check(const DirichletCharacter& chi, Complex s);

}  // namespace lfn
