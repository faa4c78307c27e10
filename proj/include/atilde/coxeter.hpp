#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace atilde {

/// Symmetric Coxeter matrix. Off-diagonal entries are ≥ 2, with kInfinity for ∞.
class CoxeterMatrix {
public:
    static constexpr int kInfinity = 0;

    /// Validates symmetry, unit diagonal and off-diagonal entries (≥ 2 or 0).
    explicit CoxeterMatrix(std::vector<std::vector<int>> m);

    int rank() const { return static_cast<int>(m_.size()); }
    int operator()(int s, int t) const { return m_[s][t]; }
    const std::vector<std::vector<int>>& entries() const { return m_; }

    /// Triangle group (p, q, r): m_01 = p, m_12 = q, m_02 = r.
    static CoxeterMatrix triangle(int p, int q, int r);

private:
    std::vector<std::vector<int>> m_;
};

/// "coxeter r" then r rows of r integers; 0 means ∞.
CoxeterMatrix read_coxeter(std::istream& in);
CoxeterMatrix read_coxeter_file(const std::string& path);
void write_coxeter(std::ostream& out, const CoxeterMatrix& m);

/// Z[ζ] for ζ = exp(iπ/N), elements stored as integer polynomials reduced
/// modulo the cyclotomic polynomial Φ_{2N}. Zero tests are exact.
class CyclotomicRing {
public:
    using Elem = std::vector<mpz_class>;

    explicit CyclotomicRing(int n);

    int n() const { return n_; }
    int degree() const { return static_cast<int>(phi_.size()) - 1; }
    const std::vector<mpz_class>& modulus() const { return phi_; }

    Elem zero() const { return Elem(degree(), 0); }
    Elem integer(long v) const;
    Elem zeta_power(int k) const;
    /// 2 cos(kπ/N) = ζ^k + ζ^{-k}.
    Elem two_cos(int k) const;

    Elem add(const Elem& a, const Elem& b) const;
    Elem sub(const Elem& a, const Elem& b) const;
    Elem mul(const Elem& a, const Elem& b) const;
    bool is_zero(const Elem& a) const;

    /// Sign of a real element, by interval evaluation of Σ c_k cos(kπ/N) with
    /// directed rounding at increasing precision. Exact: zero is decided first.
    int sign(const Elem& a) const;
    /// Nearest double, for display only.
    double approx(const Elem& a) const;

private:
    int n_;
    std::vector<mpz_class> phi_;
};

/// Integer coefficients of the n-th cyclotomic polynomial, constant term first.
std::vector<mpz_class> cyclotomic_polynomial(int n);

enum class CoxeterClass { Finite, Affine, Indefinite };

const char* class_name(CoxeterClass c);

struct SubsystemVerdict {
    std::vector<int> subset;
    CoxeterClass classification = CoxeterClass::Finite;
    bool connected = true;
    std::vector<std::vector<int>> components;
    std::vector<CoxeterClass> component_classes;
    /// Signs of the leading principal minors of the cosine matrix, subset order.
    std::vector<int> minor_signs;
    double determinant = 0;  // display only
};

/// Classifies the sub-Coxeter system on `subset` (nonempty, indices into the
/// matrix) by the cosine matrix B_st = -cos(π/m_st).
SubsystemVerdict classify_subsystem(const CoxeterMatrix& m, const std::vector<int>& subset);

struct HyperbolicityVerdict {
    bool hyperbolic = true;
    enum class Reason { None, AffineSubsystem, CommutingInfinitePair } reason = Reason::None;
    std::vector<int> witness;       // affine subset, or first of the pair
    std::vector<int> witness_pair;  // second of the pair
    std::vector<SubsystemVerdict> certificate;
    std::size_t subsets_classified = 0;
};

/// Moussong's criterion: hyperbolic iff there is no connected affine subsystem of
/// rank ≥ 3 and no pair of disjoint, mutually commuting, infinite subsystems.
/// Witnesses are the first in (size, bitmask) order. Throws CapExceeded above rank_cap.
HyperbolicityVerdict is_word_hyperbolic(const CoxeterMatrix& m, int rank_cap = 14);

}  // namespace atilde
