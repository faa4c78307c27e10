#include "atilde/field.hpp"

#include "atilde/errors.hpp"

#include <string>

namespace atilde {

namespace {

using Poly = std::vector<int>;  // coefficients low to high, over GF(p)

void trim(Poly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

int inverse_mod(int a, int p) {
    for (int x = 1; x < p; ++x)
        if (a * x % p == 1) return x;
    throw std::logic_error("no inverse mod p");
}

// Remainder of a modulo b over GF(p); b must be nonzero.
Poly poly_mod(Poly a, const Poly& b, int p) {
    trim(a);
    const int db = static_cast<int>(b.size()) - 1;
    const int lead_inv = inverse_mod(b.back(), p);
    while (static_cast<int>(a.size()) - 1 >= db && !a.empty()) {
        const int shift = static_cast<int>(a.size()) - 1 - db;
        const int factor = a.back() * lead_inv % p;
        for (int i = 0; i <= db; ++i) {
            a[shift + i] = ((a[shift + i] - factor * b[i]) % p + p) % p;
        }
        trim(a);
    }
    return a;
}

Poly from_digits(int value, int p, int len) {
    Poly out(len, 0);
    for (int i = 0; i < len; ++i) {
        out[i] = value % p;
        value /= p;
    }
    return out;
}

int to_digits(const Poly& a, int p) {
    int value = 0;
    for (int i = static_cast<int>(a.size()) - 1; i >= 0; --i) value = value * p + a[i];
    return value;
}

int ipow(int b, int e) {
    int r = 1;
    while (e-- > 0) r *= b;
    return r;
}

}  // namespace

bool is_prime(int n) {
    if (n < 2) return false;
    for (int d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

std::pair<int, int> prime_power(int q) {
    if (q < 2) throw ValidationError("field order must be at least 2, got " + std::to_string(q));
    int p = 2;
    while (q % p != 0) ++p;
    int e = 0;
    int rest = q;
    while (rest % p == 0) {
        rest /= p;
        ++e;
    }
    if (rest != 1) throw ValidationError("field order " + std::to_string(q) + " is not a prime power");
    return {p, e};
}

bool is_irreducible(const std::vector<int>& poly, int p) {
    Poly f = poly;
    trim(f);
    const int deg = static_cast<int>(f.size()) - 1;
    if (deg < 1) return false;
    for (int d = 1; d <= deg / 2; ++d) {
        // monic divisors of degree d: free low coefficients, leading 1
        const int count = ipow(p, d);
        for (int low = 0; low < count; ++low) {
            Poly g = from_digits(low, p, d);
            g.push_back(1);
            if (poly_mod(f, g, p).empty()) return false;
        }
    }
    return true;
}

int FieldSpec::order() const { return ipow(p, e); }

FieldSpec FieldSpec::for_order(int q) {
    auto [p, e] = prime_power(q);
    if (e == 1) return FieldSpec{p, 1, {}};
    switch (q) {
        case 4: return FieldSpec{2, 2, {1, 1, 1}};     // x^2 + x + 1
        case 8: return FieldSpec{2, 3, {1, 1, 0, 1}};  // x^3 + x + 1
        case 9: return FieldSpec{3, 2, {1, 0, 1}};     // x^2 + 1
        default:
            throw ValidationError("no built-in modulus for q = " + std::to_string(q) +
                                  "; supply one explicitly");
    }
}

FieldSpec FieldSpec::with_modulus(int q, std::vector<int> modulus) {
    auto [p, e] = prime_power(q);
    if (e == 1) {
        if (!modulus.empty() && !(modulus.size() == 2 && modulus[1] == 1))
            throw ValidationError("prime field GF(" + std::to_string(q) + ") takes no modulus");
        return FieldSpec{p, 1, {}};
    }
    if (static_cast<int>(modulus.size()) != e + 1)
        throw ValidationError("modulus for q = " + std::to_string(q) + " needs " +
                              std::to_string(e + 1) + " coefficients");
    for (int c : modulus)
        if (c < 0 || c >= p) throw ValidationError("modulus coefficient out of range 0.." + std::to_string(p - 1));
    if (modulus.back() != 1) throw ValidationError("modulus must be monic");
    if (!is_irreducible(modulus, p)) throw ValidationError("modulus is reducible over GF(" + std::to_string(p) + ")");
    return FieldSpec{p, e, std::move(modulus)};
}

GaloisField::GaloisField(FieldSpec spec) : spec_(std::move(spec)), q_(spec_.order()) {
    const int p = spec_.p;
    const int e = spec_.e;
    if (!is_prime(p) || e < 1) throw ValidationError("invalid field characteristic/degree");
    if (q_ > 256) throw ValidationError("field order above 256 is not supported");
    if (e > 1) {
        if (static_cast<int>(spec_.modulus.size()) != e + 1 || spec_.modulus.back() != 1 ||
            !is_irreducible(spec_.modulus, p))
            throw ValidationError("invalid modulus for GF(" + std::to_string(q_) + ")");
    }

    add_.resize(q_ * q_);
    mul_.resize(q_ * q_);
    neg_.resize(q_);
    inv_.assign(q_, 0);
    for (int a = 0; a < q_; ++a) {
        const Poly pa = from_digits(a, p, e);
        for (int b = 0; b < q_; ++b) {
            const Poly pb = from_digits(b, p, e);
            Poly sum(e);
            for (int i = 0; i < e; ++i) sum[i] = (pa[i] + pb[i]) % p;
            add_[a * q_ + b] = static_cast<Elem>(to_digits(sum, p));

            Poly prod(2 * e, 0);
            for (int i = 0; i < e; ++i)
                for (int j = 0; j < e; ++j) prod[i + j] = (prod[i + j] + pa[i] * pb[j]) % p;
            if (e > 1) prod = poly_mod(prod, spec_.modulus, p);
            prod.resize(e, 0);
            mul_[a * q_ + b] = static_cast<Elem>(to_digits(prod, p));
        }
    }
    for (int a = 0; a < q_; ++a) {
        for (int b = 0; b < q_; ++b) {
            if (add_[a * q_ + b] == 0) neg_[a] = static_cast<Elem>(b);
            if (mul_[a * q_ + b] == 1) inv_[a] = static_cast<Elem>(b);
        }
        if (a != 0 && mul_[a * q_ + inv_[a]] != 1)
            throw ValidationError("field axioms fail: element " + std::to_string(a) + " has no inverse");
    }
}

}  // namespace atilde
