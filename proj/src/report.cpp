#include "lfn/report.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "lfn/arith.hpp"
#include "lfn/characters.hpp"
#include "lfn/errors.hpp"
#include "lfn/lfunction.hpp"
#include "lfn/preimage.hpp"
#include "lfn/zeros.hpp"

namespace lfn {

namespace {

double uniform(std::mt19937_64& rng, double lo, double hi) {
    // 53-bit mantissa draw, identical across platforms
    double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
}

struct Worst {
    double value = 0.0;
    Complex at;
    void feed(double v, Complex where) {
        if (v > value) {
            value = v;
            at = where;
        }
    }
};

std::vector<Complex> identity_grid() {
    std::vector<Complex> grid;
    for (double re : {-1.0, 0.5, 1.5, 2.0, 3.0})
        for (double im : {0.0, 1.0, 10.0, -10.0}) grid.emplace_back(re, im);
    return grid;
}

}  // namespace

std::vector<VerificationSummary> report_suite(int q_max, double t_max) {
    std::vector<VerificationSummary> out;
    auto push = [&](const std::string& name, bool pass, const Worst& w, std::string params) {
        out.push_back({name, pass, w.value, w.at, std::move(params)});
    };

    for (int64_t q = 1; q <= q_max; ++q) {
        auto chars = DirichletCharacter::enumerate(q);
        for (const auto& chi : chars) {
            std::ostringstream tag;
            tag << "q=" << q << " j=" << chi.index();

            // factorization identities
            try {
                Worst w;
                for (Complex s : identity_grid()) {
                    if (chi.is_principal() && std::abs(s - 1.0) < 1e-9) continue;
                    Complex lhs = eval(chi, s).value;
                    Complex rhs;
                    if (chi.is_principal()) {
                        Complex f(1.0, 0.0);
                        for (auto [p, e] : factorize(q)) {
                            (void)e;
                            f *= 1.0 - std::exp(-s * std::log(static_cast<double>(p)));
                        }
                        rhs = zeta(s).value * f;
                    } else if (!chi.is_primitive()) {
                        const auto& prim = chi.primitive_part();
                        Complex f(1.0, 0.0);
                        for (auto [p, e] : factorize(q)) {
                            (void)e;
                            if (chi.conductor() % p == 0) continue;
                            f *= 1.0 - prim(p) * std::exp(-s * std::log(static_cast<double>(p)));
                        }
                        rhs = eval(prim, s).value * f;
                    } else {
                        continue;  // primitive non-principal: identity is trivial
                    }
                    w.feed(std::abs(lhs - rhs), s);
                }
                if (q > 1 && (chi.is_principal() || !chi.is_primitive()))
                    push("factorization " + tag.str(), w.value < 1e-9, w, "tol=1e-9, 20-point grid");
            } catch (const Error& err) {
                push("factorization " + tag.str(), false, {}, err.what());
            }

            // functional equation, primitive characters only
            if (chi.is_primitive() && q > 1) {
                try {
                    Worst w;
                    std::mt19937_64 rng(20240001ull + static_cast<uint64_t>(q) * 97 +
                                        chi.index());
                    for (int i = 0; i < 25; ++i) {
                        Complex s(uniform(rng, -2.0, 3.0), uniform(rng, -30.0, 30.0));
                        auto rep = functional_equation_check(chi, s);
                        w.feed(rep.residual, s);
                    }
                    bool eps_ok =
                        std::abs(std::abs(epsilon_factor(chi)) - 1.0) < 1e-10;
                    push("functional_equation " + tag.str(), w.value < 1e-7 && eps_ok, w,
                         "tol=1e-7, 25 seeded points");
                } catch (const Error& err) {
                    push("functional_equation " + tag.str(), false, {}, err.what());
                }
            }

            // conjugation identity
            try {
                Worst w;
                std::mt19937_64 rng(555000ull + static_cast<uint64_t>(q) * 31 + chi.index());
                for (int i = 0; i < 10; ++i) {
                    Complex s(uniform(rng, -1.5, 3.0), uniform(rng, -20.0, 20.0));
                    if (chi.is_principal() && std::abs(s - 1.0) < 0.05) continue;
                    w.feed(conjugation_check(chi, s), s);
                }
                push("conjugation " + tag.str(), w.value < 1e-9, w, "tol=1e-9, 10 seeded points");
            } catch (const Error& err) {
                push("conjugation " + tag.str(), false, {}, err.what());
            }

            // zero scan with critical-line and simplicity checks
            if (t_max > 0.0) {
                try {
                    auto zeros = find_zeros(chi, 0.0, t_max, Target::L);
                    auto rh = verify_rh(zeros, 1e-8);
                    Worst w;
                    w.feed(rh.max_deviation, rh.worst);
                    push("critical_line " + tag.str(), rh.pass, w,
                         "|Re-1/2|<1e-8, pairing<1e-7, " + std::to_string(rh.checked) + " zeros");
                    auto lzeros = find_zeros(chi, 0.0, t_max, Target::Lprime);
                    std::vector<Zero> all = zeros;
                    all.insert(all.end(), lzeros.begin(), lzeros.end());
                    auto simple = verify_simple(all, 1e-6);
                    Worst ws;
                    ws.feed(simple.min_deriv_abs, simple.at);
                    push("simple_zeros " + tag.str(), simple.pass, ws,
                         "threshold=1e-6, " + std::to_string(simple.checked) + " zeros");
                } catch (const Error& err) {
                    push("zero_scan " + tag.str(), false, {}, err.what());
                }
            }
        }

        // strip structure and intertwining spot check, once per modulus on
        // the first non-principal character (or zeta for q = 1)
        if (t_max >= 20.0) {
            try {
                const DirichletCharacter& probe = chars.size() > 1 ? chars[1] : chars[0];
                Window win{-2.0, 6.0, 5.0, std::min(40.0, t_max)};
                auto strips = find_strips(probe, win);
                Worst w;
                bool ok = true;
                int full = 0;
                for (const auto& strip : strips) {
                    if (!strip.fully_contained) continue;
                    ++full;
                    if (strip.zeros_inside.empty()) ok = false;
                    if (strip.branch_points_inside.size() + 1 != strip.zeros_inside.size())
                        ok = false;
                }
                std::ostringstream params;
                params << full << " full strips of " << strips.size();
                push("strip_structure q=" + std::to_string(q), ok && full > 0, w, params.str());

                bool twine_ok = true;
                double worst_im = 0.0;
                for (const auto& strip : strips) {
                    auto rep = check_intertwining(probe, strip.lower, win);
                    twine_ok = twine_ok && rep.pass;
                    worst_im = std::max(worst_im, rep.max_im_lprime);
                    break;  // spot check: first boundary curve
                }
                Worst wt;
                wt.value = worst_im;
                push("intertwining q=" + std::to_string(q), twine_ok, wt,
                     "|Im L'|<1e-6 at horizontal tangents");
            } catch (const Error& err) {
                push("strip_structure q=" + std::to_string(q), false, {}, err.what());
            }
        }
    }
    return out;
}

std::string report_to_json(const std::vector<VerificationSummary>& summaries, int q_max,
                           double t_max) {
    std::ostringstream out;
    out.precision(15);
    out << "{\n  \"schema_version\": 1,\n  \"q_max\": " << q_max << ",\n  \"t_max\": " << t_max
        << ",\n  \"checks\": [\n";
    for (size_t i = 0; i < summaries.size(); ++i) {
        const auto& s = summaries[i];
        out << "    {\"name\": \"" << s.name << "\", \"status\": \""
            << (s.pass ? "PASS" : "FAIL") << "\", \"worst_value\": " << s.worst_value
            << ", \"worst_location\": {\"re\": " << s.worst_location.real()
            << ", \"im\": " << s.worst_location.imag() << "}, \"params\": \"" << s.params << "\"}"
            << (i + 1 < summaries.size() ? "," : "") << "\n";
    }
    out << "  ]\n}\n";
    return out.str();
}

}  // namespace lfn
