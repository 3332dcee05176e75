#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <vector>

namespace lfn {

using Complex = std::complex<double>;

/// Cyclic decomposition of the unit group (Z/qZ)^* with fixed generators:
/// the factor of an odd prime power p^e is generated by the smallest
/// primitive root mod p^e; for 2^e with e >= 3 the two factors are
/// generated by -1 and 5; 2^2 is generated by 3. Generators are lifted
/// to residues mod q by the Chinese remainder theorem.
struct UnitGroup {
    struct Factor {
        int64_t prime;        // p of the p^e block this factor belongs to
        int64_t prime_power;  // p^e
        int64_t generator;    // generator lifted mod q
        int64_t order;        // order of the generator
        std::vector<int32_t> dlog;  // residue mod p^e -> exponent, -1 for non-units
    };
    int64_t modulus = 1;
    int64_t exponent = 1;  // lcm of factor orders
    std::vector<Factor> factors;

    static std::shared_ptr<const UnitGroup> get(int64_t q);
};

/// A Dirichlet character mod q, held as a dense value table on residues
/// 0..q-1. Values are stored both as exact root-of-unity exponents
/// (k with chi(n) = e^{2 pi i k / root_order()}) and as complex doubles,
/// so products and conjugation are exact.
///
/// Characters are immutable after construction; every method is const and
/// safe to call concurrently.
class DirichletCharacter {
  public:
    /// All phi(q) characters mod q in canonical order: characters are
    /// indexed 1..phi(q) lexicographically by their exponent vector on the
    /// UnitGroup generators; index 1 is the principal character.
    static std::vector<DirichletCharacter> enumerate(int64_t q);

    static DirichletCharacter principal(int64_t q);
    static DirichletCharacter from_index(int64_t q, int64_t index);

    int64_t modulus() const { return modulus_; }
    int64_t index() const { return index_; }

    /// Smallest d | q such that a character mod d induces this one.
    int64_t conductor() const { return conductor_; }
    bool is_primitive() const { return conductor_ == modulus_; }
    bool is_principal() const { return index_ == 1; }
    bool is_real() const;

    /// kappa in the functional equation: 0 when chi(-1) = 1, else 1.
    int parity() const { return parity_; }

    int64_t root_order() const { return root_order_; }

    /// chi(n); n may be negative, it is reduced mod q.
    Complex operator()(int64_t n) const { return values_[reduce(n)]; }

    /// Exact exponent k of chi(n) = e^{2 pi i k / root_order()}, or -1 when
    /// chi(n) = 0.
    int64_t exponent_at(int64_t n) const { return exponents_[reduce(n)]; }

    DirichletCharacter conjugate() const;

    /// The character mod q induced by this one; requires modulus() | q.
    DirichletCharacter induce_to(int64_t q) const;

    /// The primitive character mod conductor() inducing this one
    /// (the character itself when already primitive).
    const DirichletCharacter& primitive_part() const;

    /// Gauss sum tau(chi) = sum_{a=1..q} chi(a) e^{2 pi i a / q}.
    Complex gauss_sum() const;

    const std::vector<Complex>& values() const { return values_; }
    const std::vector<int64_t>& generator_exponents() const { return exps_on_generators_; }

    bool same_table(const DirichletCharacter& o, double tol = 0.0) const;

  private:
    DirichletCharacter(std::shared_ptr<const UnitGroup> g, std::vector<int64_t> exps_on_gens);

    int64_t reduce(int64_t n) const {
        int64_t r = n % modulus_;
        return r < 0 ? r + modulus_ : r;
    }

    void build_table();
    void compute_conductor();

    std::shared_ptr<const UnitGroup> group_;
    int64_t modulus_ = 1;
    int64_t index_ = 1;
    int64_t root_order_ = 1;
    std::vector<int64_t> exps_on_generators_;
    std::vector<int32_t> exponents_;  // size q, -1 at non-coprime residues
    std::vector<Complex> values_;     // size q
    int64_t conductor_ = 1;
    int parity_ = 0;
    std::shared_ptr<const DirichletCharacter> primitive_;  // null when primitive
};

}  // namespace lfn
