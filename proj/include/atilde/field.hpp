#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace atilde {

/// Description of a finite field GF(p^e). Elements of GF(p^e) are encoded as
/// integers 0..q-1 whose base-p digits are polynomial coefficients, low first.
struct FieldSpec {
    int p = 2;
    int e = 1;
    std::vector<int> modulus;  // c_0..c_e, monic; empty when e == 1

    int order() const;
    bool operator==(const FieldSpec&) const = default;

    /// Field of order q using a built-in modulus (q prime, or q in {4, 8, 9}).
    static FieldSpec for_order(int q);
    /// Field of order q = p^e with an explicit modulus (coefficients low to high).
    static FieldSpec with_modulus(int q, std::vector<int> modulus);
};

bool is_prime(int n);

/// Splits q into (p, e) with q = p^e; throws ValidationError if q is not a prime power.
std::pair<int, int> prime_power(int q);

/// True iff the monic polynomial (coefficients low to high) is irreducible over GF(p).
/// Trial division by every monic polynomial of degree 1..deg/2.
bool is_irreducible(const std::vector<int>& poly, int p);

/// Table-driven arithmetic in GF(q), q <= 256.
class GaloisField {
public:
    using Elem = std::uint8_t;

    explicit GaloisField(FieldSpec spec);

    const FieldSpec& spec() const { return spec_; }
    int order() const { return q_; }

    Elem add(Elem a, Elem b) const { return add_[a * q_ + b]; }
    Elem sub(Elem a, Elem b) const { return add_[a * q_ + neg_[b]]; }
    Elem mul(Elem a, Elem b) const { return mul_[a * q_ + b]; }
    Elem neg(Elem a) const { return neg_[a]; }
    /// Multiplicative inverse; a must be nonzero.
    Elem inv(Elem a) const { return inv_[a]; }

private:
    FieldSpec spec_;
    int q_;
    std::vector<Elem> add_, mul_, neg_, inv_;
};

}  // namespace atilde
