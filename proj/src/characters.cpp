#include "lfn/characters.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

#include "lfn/arith.hpp"
#include "lfn/errors.hpp"

namespace lfn {

namespace {

int64_t crt_lift(int64_t g, int64_t pe, int64_t q) {
    // residue mod q that is g mod pe and 1 mod q/pe
    int64_t rest = q / pe;
    if (rest == 1) return g % q;
    for (int64_t x = g % q; ; x += pe) {
        if (x % rest == 1) return x % q;
    }
}

std::vector<int32_t> dlog_table_cyclic(int64_t g, int64_t order, int64_t pe) {
    std::vector<int32_t> table(pe, -1);
    __int128 v = 1;
    for (int64_t k = 0; k < order; ++k) {
        table[static_cast<int64_t>(v)] = static_cast<int32_t>(k);
        v = (v * g) % pe;
    }
    return table;
}

}  // namespace

std::shared_ptr<const UnitGroup> UnitGroup::get(int64_t q) {
    if (q < 1) throw BadModulus("modulus must be >= 1");
    auto group = std::make_shared<UnitGroup>();
    group->modulus = q;
    group->exponent = 1;

    for (auto [p, e] : factorize(q)) {
        int64_t pe = 1;
        for (int i = 0; i < e; ++i) pe *= p;
        if (p == 2) {
            if (e == 1) continue;  // (Z/2)^* is trivial
            if (e == 2) {
                Factor f{p, pe, crt_lift(3, pe, q), 2, dlog_table_cyclic(3, 2, pe)};
                group->factors.push_back(std::move(f));
            } else {
                // (Z/2^e)^* = <-1> x <5>
                int64_t half_order = pe / 4;
                std::vector<int32_t> dlog_sign(pe, -1), dlog_five(pe, -1);
                __int128 v5 = 1;
                for (int64_t j = 0; j < half_order; ++j) {
                    int64_t a = static_cast<int64_t>(v5);
                    int64_t b = pe - a;  // -5^j
                    dlog_sign[a] = 0;
                    dlog_five[a] = static_cast<int32_t>(j);
                    dlog_sign[b] = 1;
                    dlog_five[b] = static_cast<int32_t>(j);
                    v5 = (v5 * 5) % pe;
                }
                group->factors.push_back({p, pe, crt_lift(pe - 1, pe, q), 2, std::move(dlog_sign)});
                group->factors.push_back({p, pe, crt_lift(5, pe, q), half_order, std::move(dlog_five)});
            }
        } else {
            int64_t g = smallest_primitive_root(pe);
            int64_t order = euler_phi(pe);
            group->factors.push_back({p, pe, crt_lift(g, pe, q), order, dlog_table_cyclic(g, order, pe)});
        }
    }
    for (const auto& f : group->factors)
        group->exponent = std::lcm(group->exponent, f.order);
    return group;
}

DirichletCharacter::DirichletCharacter(std::shared_ptr<const UnitGroup> g,
                                       std::vector<int64_t> exps_on_gens)
    : group_(std::move(g)),
      modulus_(group_->modulus),
      root_order_(group_->exponent),
      exps_on_generators_(std::move(exps_on_gens)) {
    if (exps_on_generators_.size() != group_->factors.size())
        throw Error("exponent vector does not match the unit group");
    index_ = 1;
    for (size_t i = 0; i < group_->factors.size(); ++i) {
        int64_t m = group_->factors[i].order;
        int64_t a = exps_on_generators_[i];
        if (a < 0 || a >= m) throw Error("generator exponent out of range");
        index_ = (index_ - 1) * m + a + 1;
    }
    build_table();
    parity_ = (exponents_[reduce(modulus_ - 1)] == 0) ? 0 : 1;
    compute_conductor();
    if (conductor_ < modulus_) {
        // recover the inducing character mod conductor from the value table
        auto sub = UnitGroup::get(conductor_);
        std::vector<int64_t> sub_exps;
        sub_exps.reserve(sub->factors.size());
        for (const auto& f : sub->factors) {
            int64_t n = f.generator;
            while (std::gcd(n, modulus_) != 1) n += conductor_;
            int64_t k = exponents_[reduce(n)];
            // chi(g)^order(g) = 1, so k * order is a multiple of root_order_
            sub_exps.push_back((k * f.order / root_order_) % f.order);
        }
        primitive_ = std::make_shared<const DirichletCharacter>(
            DirichletCharacter(std::move(sub), std::move(sub_exps)));
    }
}

void DirichletCharacter::build_table() {
    const int64_t q = modulus_;
    const int64_t lam = root_order_;
    exponents_.assign(q, -1);
    values_.assign(q, Complex(0.0, 0.0));
    const double two_pi = 2.0 * std::numbers::pi;
    for (int64_t n = 0; n < q; ++n) {
        if (std::gcd(n == 0 && q == 1 ? 1 : n, q) != 1) continue;
        int64_t k = 0;
        bool unit = true;
        for (size_t i = 0; i < group_->factors.size(); ++i) {
            const auto& f = group_->factors[i];
            int32_t d = f.dlog[n % f.prime_power];
            if (d < 0) {
                unit = false;
                break;
            }
            k = (k + exps_on_generators_[i] * d % lam * (lam / f.order)) % lam;
        }
        if (!unit) continue;
        exponents_[n] = static_cast<int32_t>(k);
        double angle = two_pi * static_cast<double>(k) / static_cast<double>(lam);
        values_[n] = Complex(std::cos(angle), std::sin(angle));
    }
}

void DirichletCharacter::compute_conductor() {
    // smallest d | q for which chi is constant on coprime residues in each
    // class mod d; such classes define the inducing character mod d
    for (int64_t d : divisors(modulus_)) {
        std::vector<int32_t> rep(d, -2);
        bool ok = true;
        for (int64_t n = 0; n < modulus_ && ok; ++n) {
            if (exponents_[n] < 0) continue;
            int64_t r = n % d;
            if (rep[r] == -2)
                rep[r] = exponents_[n];
            else if (rep[r] != exponents_[n])
                ok = false;
        }
        if (ok) {
            conductor_ = d;
            return;
        }
    }
    conductor_ = modulus_;
}

std::vector<DirichletCharacter> DirichletCharacter::enumerate(int64_t q) {
    auto group = UnitGroup::get(q);
    int64_t count = 1;
    for (const auto& f : group->factors) count *= f.order;
    std::vector<DirichletCharacter> out;
    out.reserve(count);
    std::vector<int64_t> exps(group->factors.size(), 0);
    for (int64_t idx = 0; idx < count; ++idx) {
        int64_t rem = idx;
        for (size_t i = group->factors.size(); i-- > 0;) {
            exps[i] = rem % group->factors[i].order;
            rem /= group->factors[i].order;
        }
        out.push_back(DirichletCharacter(group, exps));
    }
    return out;
}

DirichletCharacter DirichletCharacter::principal(int64_t q) {
    auto group = UnitGroup::get(q);
    return DirichletCharacter(group, std::vector<int64_t>(group->factors.size(), 0));
}

DirichletCharacter DirichletCharacter::from_index(int64_t q, int64_t index) {
    auto group = UnitGroup::get(q);
    int64_t count = 1;
    for (const auto& f : group->factors) count *= f.order;
    if (index < 1 || index > count)
        throw DomainError("character index out of range 1..phi(q)");
    std::vector<int64_t> exps(group->factors.size(), 0);
    int64_t rem = index - 1;
    for (size_t i = group->factors.size(); i-- > 0;) {
        exps[i] = rem % group->factors[i].order;
        rem /= group->factors[i].order;
    }
    return DirichletCharacter(group, std::move(exps));
}

bool DirichletCharacter::is_real() const {
    for (int64_t n = 0; n < modulus_; ++n) {
        int32_t k = exponents_[n];
        if (k > 0 && 2 * static_cast<int64_t>(k) != root_order_) return false;
    }
    return true;
}

DirichletCharacter DirichletCharacter::conjugate() const {
    std::vector<int64_t> exps(exps_on_generators_.size());
    for (size_t i = 0; i < exps.size(); ++i) {
        int64_t m = group_->factors[i].order;
        exps[i] = (m - exps_on_generators_[i]) % m;
    }
    return DirichletCharacter(group_, std::move(exps));
}

DirichletCharacter DirichletCharacter::induce_to(int64_t q) const {
    if (q < 1 || q % modulus_ != 0)
        throw BadModulus("induce: target modulus must be a multiple of the character modulus");
    auto group = UnitGroup::get(q);
    std::vector<int64_t> exps;
    exps.reserve(group->factors.size());
    for (const auto& f : group->factors) {
        int64_t k = exponents_[reduce(f.generator)];
        exps.push_back((k * f.order / root_order_) % f.order);
    }
    return DirichletCharacter(std::move(group), std::move(exps));
}

const DirichletCharacter& DirichletCharacter::primitive_part() const {
    return primitive_ ? *primitive_ : *this;
}

Complex DirichletCharacter::gauss_sum() const {
    const double two_pi = 2.0 * std::numbers::pi;
    Complex sum(0.0, 0.0);
    for (int64_t a = 1; a <= modulus_; ++a) {
        Complex v = values_[a % modulus_];
        if (v == Complex(0.0, 0.0)) continue;
        double angle = two_pi * static_cast<double>(a) / static_cast<double>(modulus_);
        sum += v * Complex(std::cos(angle), std::sin(angle));
    }
    return sum;
}

bool DirichletCharacter::same_table(const DirichletCharacter& o, double tol) const {
    if (modulus_ != o.modulus_) return false;
    if (tol == 0.0) return exponents_ == o.exponents_ && root_order_ == o.root_order_;
    for (int64_t n = 0; n < modulus_; ++n)
        if (std::abs(values_[n] - o.values_[n]) > tol) return false;
    return true;
}

}  // namespace lfn
