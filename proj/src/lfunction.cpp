#include "lfn/lfunction.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "lfn/arith.hpp"
#include "lfn/errors.hpp"
#include "lfn/gamma.hpp"

namespace lfn {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEps = std::numeric_limits<double>::epsilon();

// B_{2k} / (2k)!  for the Euler-Maclaurin tail, k = 1..13 (13th feeds the
// error estimate only)
constexpr double kBern[14] = {
    0.0,
    8.3333333333333333e-02,   // 1/12
    -1.3888888888888889e-03,  // -1/720
    3.3068783068783069e-05,
    -8.2671957671957672e-07,
    2.0876756987868099e-08,
    -5.2841901386874932e-10,
    1.3382536530684679e-11,
    -3.3896802963225829e-13,
    8.5860620562778446e-15,
    -2.1748686985580619e-16,
    5.5090028283602295e-18,
    -1.3954464685812523e-19,
    3.5347070396294675e-21,
};

inline Complex ipow_neg(double log_base, Complex s) {
    // base^{-s} from a precomputed real log
    double mag = std::exp(-s.real() * log_base);
    double ph = -s.imag() * log_base;
    return {mag * std::cos(ph), mag * std::sin(ph)};
}

// (e^w - 1)/w and (e^w - 1 - w)/w^2, series near 0
Complex expm1_over(Complex w) {
    if (std::abs(w) < 0.5) {
        Complex sum(0.0, 0.0), term(1.0, 0.0);
        for (int k = 1; k <= 16; ++k) {
            sum += term;
            term *= w / static_cast<double>(k + 1);
        }
        return sum;
    }
    return (std::exp(w) - 1.0) / w;
}

Complex expm1m_over2(Complex w) {
    if (std::abs(w) < 0.5) {
        Complex sum(0.0, 0.0), term(0.5, 0.0);
        for (int k = 1; k <= 16; ++k) {
            sum += term;
            term *= w / static_cast<double>(k + 2);
        }
        return sum;
    }
    return (std::exp(w) - 1.0 - w) / (w * w);
}

struct EmParams {
    int n_terms;
    int k_bern;
};

EmParams em_params(Complex s, const EvalOptions& o) {
    int n = o.em_terms > 0
                ? o.em_terms
                : std::max<int>(20, static_cast<int>(std::ceil(2.0 * std::abs(s.imag()))));
    int k = std::clamp(o.bernoulli_terms, 1, 12);
    return {n, k};
}

// rising factorials s(s+1)...(s+m-1) for m = 2k-1, with derivatives
struct Pochhammer {
    std::array<Complex, 14> p;
    std::array<Complex, 14> dp;
    Pochhammer(Complex s, int k_max) {
        Complex prod(1.0, 0.0), dprod(0.0, 0.0);
        int factors = 0;
        for (int k = 1; k <= k_max; ++k) {
            while (factors < 2 * k - 1) {
                Complex f = s + static_cast<double>(factors);
                dprod = dprod * f + prod;
                prod *= f;
                ++factors;
            }
            p[k] = prod;
            dp[k] = dprod;
        }
    }
};

// Hurwitz zeta and its s-derivative for a single offset; the pole term is
// evaluated directly, so callers must keep s away from 1.
void hurwitz_em(Complex s, double a, const EvalOptions& o, bool want_deriv, EvalResult* val,
                EvalResult* der) {
    auto [n_terms, k_bern] = em_params(s, o);
    Complex sum(0.0, 0.0), dsum(0.0, 0.0);
    double abs_sum = 0.0;
    for (int n = 0; n < n_terms; ++n) {
        double lg = std::log(n + a);
        Complex t = ipow_neg(lg, s);
        sum += t;
        abs_sum += std::abs(t);
        if (want_deriv) dsum -= lg * t;
    }
    double x = n_terms + a;
    double lx = std::log(x);
    Complex inv_sm1 = 1.0 / (s - 1.0);
    Complex x_pow = ipow_neg(lx, s);         // x^{-s}
    Complex pole = x * x_pow * inv_sm1;      // x^{1-s}/(s-1)
    Complex half = 0.5 * x_pow;
    Complex bern(0.0, 0.0), dbern(0.0, 0.0);
    Pochhammer poch(s, k_bern);
    Complex xp = x_pow / x;  // x^{-s-1}
    double abs_tail = std::abs(pole) + std::abs(half);
    for (int k = 1; k <= k_bern; ++k) {
        Complex term = kBern[k] * poch.p[k] * xp;
        bern += term;
        abs_tail += std::abs(term);
        if (want_deriv) dbern += kBern[k] * (poch.dp[k] - lx * poch.p[k]) * xp;
        xp /= x * x;
    }
    // error: first omitted correction plus a rounding floor
    Complex next = s;
    {
        Complex prod(1.0, 0.0);
        for (int j = 0; j < 2 * k_bern + 1; ++j) prod *= s + static_cast<double>(j);
        next = prod;
    }
    double omitted = std::abs(kBern[k_bern + 1]) * std::abs(next) * std::abs(xp);
    double floor_err = 8.0 * kEps * (abs_sum + abs_tail);
    if (val) *val = {sum + pole + half + bern, omitted + floor_err, EvalMethod::euler_maclaurin};
    if (der && want_deriv) {
        Complex dpole = -x * x_pow * (lx * inv_sm1 + inv_sm1 * inv_sm1);
        Complex dhalf = -0.5 * lx * x_pow;
        double dfloor = 8.0 * kEps * (abs_sum + abs_tail) * (lx + 1.0);
        *der = {dsum + dpole + dhalf + dbern, omitted * (lx + 2.0 * k_bern + 2.0) + dfloor,
                EvalMethod::euler_maclaurin};
    }
}

// Merged Euler-Maclaurin route for nonprincipal chi:
//   L(s) = sum_{m<=qN} chi(m) m^{-s} + q^{-s} sum_a chi(a) T_a(s)
// The (N+a/q)^{1-s}/(s-1) pole pieces are summed against chi with the
// 1/(s-1) singularity cancelled analytically (sum_a chi(a) = 0), so the
// route is smooth through s = 1.
void l_nonprincipal_em(const DirichletCharacter& chi, Complex s, const EvalOptions& o,
                       bool want_deriv, EvalResult* val, EvalResult* der) {
    auto [n_terms, k_bern] = em_params(s, o);
    const int64_t q = chi.modulus();
    Complex main(0.0, 0.0), dmain(0.0, 0.0);
    double abs_main = 0.0;
    const int64_t m_max = q * n_terms;
    for (int64_t m = 1; m <= m_max; ++m) {
        Complex c = chi(m);
        if (c == Complex(0.0, 0.0)) continue;
        double lm = std::log(static_cast<double>(m));
        Complex t = c * ipow_neg(lm, s);
        main += t;
        abs_main += std::abs(t);
        if (want_deriv) dmain -= lm * t;
    }

    Pochhammer poch(s, k_bern);
    Complex tail(0.0, 0.0), dtail(0.0, 0.0);
    double abs_tail = 0.0;
    double omitted = 0.0;
    for (int64_t a = 1; a <= q; ++a) {
        Complex c = chi(a);
        if (c == Complex(0.0, 0.0)) continue;
        double x = n_terms + static_cast<double>(a) / static_cast<double>(q);
        double lx = std::log(x);
        Complex w = (1.0 - s) * lx;
        Complex e1 = expm1_over(w);
        Complex pole = -lx * e1;  // (x^{1-s} - 1)/(s-1)
        Complex x_pow = ipow_neg(lx, s);
        Complex half = 0.5 * x_pow;
        Complex bern(0.0, 0.0), dbern(0.0, 0.0);
        Complex xp = x_pow / x;
        for (int k = 1; k <= k_bern; ++k) {
            bern += kBern[k] * poch.p[k] * xp;
            if (want_deriv) dbern += kBern[k] * (poch.dp[k] - lx * poch.p[k]) * xp;
            xp /= x * x;
        }
        Complex t_a = pole + half + bern;
        tail += c * t_a;
        abs_tail += std::abs(t_a);
        omitted += std::abs(kBern[k_bern + 1] * poch.p[k_bern]) * std::abs(xp) *
                   std::norm(s + 2.0 * static_cast<double>(k_bern));
        if (want_deriv) {
            Complex e2 = expm1m_over2(w);
            Complex dpole = lx * lx * (e1 - e2);
            Complex dhalf = -0.5 * lx * x_pow;
            dtail += c * (dpole + dhalf + dbern);
        }
    }
    double lq = std::log(static_cast<double>(q));
    Complex q_pow = ipow_neg(lq, s);
    Complex value = main + q_pow * tail;
    double floor_err = 8.0 * kEps * (abs_main + std::abs(q_pow) * abs_tail + std::abs(value));
    if (val) *val = {value, omitted * std::abs(q_pow) + floor_err, EvalMethod::euler_maclaurin};
    if (der && want_deriv) {
        Complex dvalue = dmain + q_pow * (dtail - lq * tail);
        *der = {dvalue, (omitted * std::abs(q_pow) + floor_err) * (lq + std::log(2.0 + std::abs(s)) + 6.0),
                EvalMethod::euler_maclaurin};
    }
}

// prod_{p | q}(1 - p^{-s}) and its derivative, by the product rule
void principal_factor(int64_t q, Complex s, Complex* f, Complex* df) {
    Complex prod(1.0, 0.0), dprod(0.0, 0.0);
    for (auto [p, e] : factorize(q)) {
        (void)e;
        double lp = std::log(static_cast<double>(p));
        Complex pw = ipow_neg(lp, s);
        Complex fac = 1.0 - pw;
        Complex dfac = lp * pw;
        dprod = dprod * fac + prod * dfac;
        prod *= fac;
    }
    *f = prod;
    if (df) *df = dprod;
}

// prod_{p | q, p not | d}(1 - chi*(p) p^{-s}) for the induced-character
// factorization, with derivative
void induced_factor(const DirichletCharacter& chi, Complex s, Complex* f, Complex* df) {
    const DirichletCharacter& prim = chi.primitive_part();
    Complex prod(1.0, 0.0), dprod(0.0, 0.0);
    for (auto [p, e] : factorize(chi.modulus())) {
        (void)e;
        if (chi.conductor() % p == 0) continue;
        double lp = std::log(static_cast<double>(p));
        Complex pw = prim(p) * ipow_neg(lp, s);
        Complex fac = 1.0 - pw;
        Complex dfac = lp * pw;
        dprod = dprod * fac + prod * dfac;
        prod *= fac;
    }
    *f = prod;
    if (df) *df = dprod;
}

double principal_residue(int64_t q) {
    double r = 1.0;
    for (auto [p, e] : factorize(q)) {
        (void)e;
        r *= 1.0 - 1.0 / static_cast<double>(p);
    }
    return r;
}

// completed-form prefactor: L(s) = C(s) L(1-s; conj chi) with
// C(s) = eps(chi) pi^{s-1/2} q^{1/2-s} Gamma((1-s+kappa)/2) / Gamma((s+kappa)/2)
Complex reflection_prefactor(Complex s, int64_t q, int kappa, Complex eps) {
    Complex pi_pow = std::exp((s - 0.5) * std::log(kPi));
    Complex q_pow = std::exp((0.5 - s) * std::log(static_cast<double>(q)));
    double k = static_cast<double>(kappa);
    Complex ratio = gamma_ratio((1.0 - s + k) / 2.0, (s + k) / 2.0);
    return eps * pi_pow * q_pow * ratio;
}

EvalResult zeta_em(Complex s, const EvalOptions& o) {
    EvalResult v;
    hurwitz_em(s, 1.0, o, false, &v, nullptr);
    return v;
}

EvalResult zeta_impl(Complex s, const EvalOptions& o) {
    if (std::abs(s - 1.0) < 1e-12) throw PoleAtOne(1.0);
    if (s.real() >= 0.0 || !o.allow_reflection) return zeta_em(s, o);
    Complex pref = reflection_prefactor(s, 1, 0, Complex(1.0, 0.0));
    EvalResult far = zeta_em(1.0 - s, o);
    double mag = std::abs(pref);
    return {pref * far.value, mag * far.est_error + 8.0 * kEps * mag * std::abs(far.value),
            EvalMethod::euler_maclaurin};
}

EvalResult eval_impl(const DirichletCharacter& chi, Complex s, const EvalOptions& o) {
    if (chi.is_principal()) {
        if (std::abs(s - 1.0) < 1e-12) throw PoleAtOne(principal_residue(chi.modulus()));
        EvalResult z = zeta_impl(s, o);
        if (chi.modulus() == 1) return z;
        Complex f;
        principal_factor(chi.modulus(), s, &f, nullptr);
        return {z.value * f, z.est_error * std::abs(f) + 8.0 * kEps * std::abs(z.value * f),
                EvalMethod::factorization};
    }
    if (!chi.is_primitive()) {
        EvalResult base = eval_impl(chi.primitive_part(), s, o);
        Complex f;
        induced_factor(chi, s, &f, nullptr);
        return {base.value * f, base.est_error * std::abs(f) + 8.0 * kEps * std::abs(base.value * f),
                EvalMethod::factorization};
    }
    if (s.real() >= 0.0 || !o.allow_reflection) {
        EvalResult v;
        l_nonprincipal_em(chi, s, o, false, &v, nullptr);
        return v;
    }
    Complex eps = epsilon_factor(chi);
    Complex pref = reflection_prefactor(s, chi.modulus(), chi.parity(), eps);
    EvalResult far;
    l_nonprincipal_em(chi.conjugate(), 1.0 - s, o, false, &far, nullptr);
    double mag = std::abs(pref);
    return {pref * far.value, mag * far.est_error + 8.0 * kEps * mag * std::abs(far.value),
            EvalMethod::euler_maclaurin};
}

EvalResult eval_derivative_impl(const DirichletCharacter& chi, Complex s, const EvalOptions& o) {
    if (chi.is_principal()) {
        if (std::abs(s - 1.0) < 1e-12) throw PoleAtOne(principal_residue(chi.modulus()));
        EvalResult z, dz;
        hurwitz_em(s, 1.0, o, true, &z, &dz);
        if (chi.modulus() == 1) return dz;
        Complex f, df;
        principal_factor(chi.modulus(), s, &f, &df);
        Complex value = dz.value * f + z.value * df;
        return {value,
                dz.est_error * std::abs(f) + z.est_error * std::abs(df) + 8.0 * kEps * std::abs(value),
                EvalMethod::factorization};
    }
    if (!chi.is_primitive()) {
        EvalResult base, dbase;
        l_nonprincipal_em(chi.primitive_part(), s, o, true, &base, &dbase);
        Complex f, df;
        induced_factor(chi, s, &f, &df);
        Complex value = dbase.value * f + base.value * df;
        return {value,
                dbase.est_error * std::abs(f) + base.est_error * std::abs(df) +
                    8.0 * kEps * std::abs(value),
                EvalMethod::factorization};
    }
    EvalResult v, dv;
    l_nonprincipal_em(chi, s, o, true, &v, &dv);
    return dv;
}

}  // namespace

const char* to_string(EvalMethod m) {
    switch (m) {
        case EvalMethod::series: return "series";
        case EvalMethod::euler_product: return "euler_product";
        case EvalMethod::euler_maclaurin: return "euler_maclaurin";
        case EvalMethod::factorization: return "factorization";
    }
    return "?";
}

EvalResult eval_series(const DirichletCharacter& chi, Complex s, int64_t terms) {
    if (s.real() <= 1.0)
        throw DomainError("eval_series requires Re s > 1 (abscissa of absolute convergence)");
    if (terms < 1) throw DomainError("eval_series requires at least one term");
    Complex sum(0.0, 0.0);
    for (int64_t n = 1; n <= terms; ++n) {
        Complex c = chi(n);
        if (c == Complex(0.0, 0.0)) continue;
        sum += c * ipow_neg(std::log(static_cast<double>(n)), s);
    }
    double sigma = s.real();
    double tail = std::pow(static_cast<double>(terms), 1.0 - sigma) / (sigma - 1.0);
    return {sum, tail + 8.0 * kEps * std::abs(sum), EvalMethod::series};
}

EvalResult eval_euler(const DirichletCharacter& chi, Complex s, int64_t prime_bound) {
    if (s.real() <= 1.0) throw DomainError("eval_euler requires Re s > 1");
    Complex prod(1.0, 0.0);
    if (prime_bound >= 2) {
        for (int32_t p : primes_up_to(prime_bound)) {
            Complex c = chi(p);
            if (c == Complex(0.0, 0.0)) continue;
            prod /= 1.0 - c * ipow_neg(std::log(static_cast<double>(p)), s);
        }
    }
    double sigma = s.real();
    double log_tail =
        std::min(1.0, std::pow(static_cast<double>(std::max<int64_t>(prime_bound, 2)), 1.0 - sigma) /
                          (sigma - 1.0));
    return {prod, 2.0 * std::abs(prod) * log_tail + 8.0 * kEps * std::abs(prod),
            EvalMethod::euler_product};
}

EvalResult hurwitz_zeta(Complex s, double a, const EvalOptions& options) {
    if (!(a > 0.0) || a > 1.0) throw DomainError("hurwitz_zeta requires a in (0, 1]");
    if (std::abs(s - 1.0) < 1e-12) throw PoleAtOne(1.0);
    EvalResult v;
    hurwitz_em(s, a, options, false, &v, nullptr);
    return v;
}

EvalResult eval(const DirichletCharacter& chi, Complex s, const EvalOptions& options) {
    return eval_impl(chi, s, options);
}

EvalResult eval_derivative(const DirichletCharacter& chi, Complex s, const EvalOptions& options) {
    return eval_derivative_impl(chi, s, options);
}

EvalResult zeta(Complex s, const EvalOptions& options) { return zeta_impl(s, options); }

EvalResult zeta_derivative(Complex s, const EvalOptions& options) {
    if (std::abs(s - 1.0) < 1e-12) throw PoleAtOne(1.0);
    EvalResult z, dz;
    hurwitz_em(s, 1.0, options, true, &z, &dz);
    return dz;
}

Complex epsilon_factor(const DirichletCharacter& chi) {
    Complex tau = chi.gauss_sum();
    Complex i_kappa = chi.parity() == 0 ? Complex(1.0, 0.0) : Complex(0.0, 1.0);
    return tau / (i_kappa * std::sqrt(static_cast<double>(chi.modulus())));
}

FunctionalEquationReport functional_equation_check(const DirichletCharacter& chi, Complex s) {
    if (!chi.is_primitive() || chi.modulus() == 1)
        throw NotPrimitive("functional equation applies to primitive characters mod q > 1");
    EvalOptions direct;
    direct.allow_reflection = false;
    Complex lhs = eval_impl(chi, s, direct).value;
    Complex far = eval_impl(chi.conjugate(), 1.0 - s, direct).value;
    Complex eps = epsilon_factor(chi);
    Complex rhs = reflection_prefactor(s, chi.modulus(), chi.parity(), eps) * far;
    return {s, lhs, rhs, std::abs(lhs - rhs), eps, chi.parity()};
}

double conjugation_check(const DirichletCharacter& chi, Complex s) {
    Complex a = eval(chi, std::conj(s)).value;
    Complex b = std::conj(eval(chi.conjugate(), s).value);
    return std::abs(a - b);
}

}  // namespace lfn
