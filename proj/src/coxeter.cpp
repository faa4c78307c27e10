#include "atilde/coxeter.hpp"

#include "atilde/errors.hpp"
#include "atilde/geometry.hpp"

#include <mpfr.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace atilde {

CoxeterMatrix::CoxeterMatrix(std::vector<std::vector<int>> m) : m_(std::move(m)) {
    const std::size_t r = m_.size();
    if (r == 0) throw ValidationError("Coxeter matrix must have rank at least 1");
    for (std::size_t s = 0; s < r; ++s) {
        if (m_[s].size() != r) throw ValidationError("Coxeter matrix row " + std::to_string(s) + " has wrong length");
        if (m_[s][s] != 1) throw ValidationError("Coxeter matrix diagonal entry " + std::to_string(s) + " must be 1");
    }
    for (std::size_t s = 0; s < r; ++s)
        for (std::size_t t = 0; t < r; ++t) {
            if (s == t) continue;
            if (m_[s][t] != m_[t][s])
                throw ValidationError("Coxeter matrix not symmetric at " + std::to_string(s) + " " + std::to_string(t));
            if (m_[s][t] != kInfinity && m_[s][t] < 2)
                throw ValidationError("Coxeter matrix entry at " + std::to_string(s) + " " + std::to_string(t) +
                                      " must be >= 2 or 0 for infinity");
        }
}

CoxeterMatrix CoxeterMatrix::triangle(int p, int q, int r) {
    return CoxeterMatrix({{1, p, r}, {p, 1, q}, {r, q, 1}});
}

CoxeterMatrix read_coxeter(std::istream& in) {
    LineReader reader(in);
    std::vector<std::string> tok;
    if (!reader.next(tok)) throw ParseError("empty Coxeter file", reader.line());
    auto to_int = [&](const std::string& s) {
        try {
            std::size_t used = 0;
            int v = std::stoi(s, &used);
            if (used != s.size()) throw std::invalid_argument(s);
            return v;
        } catch (const std::exception&) {
            throw ParseError("expected an integer, got '" + s + "'", reader.line());
        }
    };
    if (tok.size() != 2 || tok[0] != "coxeter") throw ParseError("expected 'coxeter r'", reader.line());
    int r = to_int(tok[1]);
    if (r <= 0) throw ParseError("rank must be positive", reader.line());
    std::vector<std::vector<int>> m;
    for (int i = 0; i < r; ++i) {
        if (!reader.next(tok)) throw ParseError("expected " + std::to_string(r) + " matrix rows", reader.line());
        if (static_cast<int>(tok.size()) != r)
            throw ParseError("row has " + std::to_string(tok.size()) + " entries, expected " + std::to_string(r),
                             reader.line());
        std::vector<int> row;
        for (const auto& t : tok) row.push_back(to_int(t));
        m.push_back(std::move(row));
    }
    if (reader.next(tok)) throw ParseError("unexpected trailing content", reader.line());
    return CoxeterMatrix(std::move(m));
}

CoxeterMatrix read_coxeter_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return read_coxeter(in);
}

void write_coxeter(std::ostream& out, const CoxeterMatrix& m) {
    out << "coxeter " << m.rank() << '\n';
    for (const auto& row : m.entries()) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? " " : "") << row[i];
        out << '\n';
    }
}

// ---------------------------------------------------------------------------
// Cyclotomic arithmetic

namespace {

using Poly = std::vector<mpz_class>;  // constant term first

Poly poly_mul(const Poly& a, const Poly& b) {
    Poly c(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != 0)
            for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
    return c;
}

// Exact quotient by a monic divisor.
Poly poly_div_exact(Poly a, const Poly& d) {
    const std::size_t dd = d.size() - 1;
    Poly q(a.size() - dd, 0);
    for (std::size_t i = a.size(); i-- > dd;) {
        mpz_class c = a[i];
        q[i - dd] = c;
        if (c != 0)
            for (std::size_t j = 0; j <= dd; ++j) a[i - dd + j] -= c * d[j];
    }
    for (std::size_t i = 0; i < dd; ++i)
        if (a[i] != 0) throw std::logic_error("cyclotomic division left a remainder");
    return q;
}

}  // namespace

std::vector<mpz_class> cyclotomic_polynomial(int n) {
    if (n <= 0) throw std::invalid_argument("cyclotomic index must be positive");
    static std::map<int, Poly> cache;
    if (auto it = cache.find(n); it != cache.end()) return it->second;
    Poly p(n + 1, 0);
    p[0] = -1;
    p[n] = 1;
    for (int d = 1; d < n; ++d)
        if (n % d == 0) p = poly_div_exact(p, cyclotomic_polynomial(d));
    cache[n] = p;
    return p;
}

CyclotomicRing::CyclotomicRing(int n) : n_(n), phi_(cyclotomic_polynomial(2 * n)) {}

CyclotomicRing::Elem CyclotomicRing::integer(long v) const {
    Elem e = zero();
    e[0] = v;
    return e;
}

CyclotomicRing::Elem CyclotomicRing::zeta_power(int k) const {
    k %= 2 * n_;
    if (k < 0) k += 2 * n_;
    Poly p(k + 1, 0);
    p[k] = 1;
    // reduce x^k mod Φ
    const int d = degree();
    for (int i = k; i >= d; --i) {
        mpz_class c = p[i];
        if (c == 0) continue;
        for (int j = 0; j <= d; ++j) p[i - d + j] -= c * phi_[j];
    }
    p.resize(d, 0);
    return p;
}

CyclotomicRing::Elem CyclotomicRing::two_cos(int k) const { return add(zeta_power(k), zeta_power(-k)); }

CyclotomicRing::Elem CyclotomicRing::add(const Elem& a, const Elem& b) const {
    Elem c(degree());
    for (int i = 0; i < degree(); ++i) c[i] = a[i] + b[i];
    return c;
}

CyclotomicRing::Elem CyclotomicRing::sub(const Elem& a, const Elem& b) const {
    Elem c(degree());
    for (int i = 0; i < degree(); ++i) c[i] = a[i] - b[i];
    return c;
}

CyclotomicRing::Elem CyclotomicRing::mul(const Elem& a, const Elem& b) const {
    const int d = degree();
    Poly p = poly_mul(a, b);
    for (int i = static_cast<int>(p.size()) - 1; i >= d; --i) {
        mpz_class c = p[i];
        if (c == 0) continue;
        for (int j = 0; j <= d; ++j) p[i - d + j] -= c * phi_[j];
    }
    p.resize(d, 0);
    return p;
}

bool CyclotomicRing::is_zero(const Elem& a) const {
    return std::all_of(a.begin(), a.end(), [](const mpz_class& c) { return c == 0; });
}

namespace {

struct Mpfr {
    mpfr_t v;
    explicit Mpfr(mpfr_prec_t prec) { mpfr_init2(v, prec); }
    ~Mpfr() { mpfr_clear(v); }
    Mpfr(const Mpfr&) = delete;
    Mpfr& operator=(const Mpfr&) = delete;
};

// Bounds on cos(kπ/n) at the given precision.
void cos_bounds(int k, int n, mpfr_prec_t prec, mpfr_t lo, mpfr_t hi) {
    k %= 2 * n;
    if (k < 0) k += 2 * n;
    if (k > n) k = 2 * n - k;
    if (k == 0 || k == n || 2 * k == n) {
        long v = k == 0 ? 1 : (k == n ? -1 : 0);
        mpfr_set_si(lo, v, MPFR_RNDN);
        mpfr_set_si(hi, v, MPFR_RNDN);
        return;
    }
    // cos is decreasing on [0, π]
    Mpfr xlo(prec), xhi(prec);
    mpfr_const_pi(xlo.v, MPFR_RNDD);
    mpfr_const_pi(xhi.v, MPFR_RNDU);
    mpfr_mul_si(xlo.v, xlo.v, k, MPFR_RNDD);
    mpfr_mul_si(xhi.v, xhi.v, k, MPFR_RNDU);
    mpfr_div_si(xlo.v, xlo.v, n, MPFR_RNDD);
    mpfr_div_si(xhi.v, xhi.v, n, MPFR_RNDU);
    mpfr_cos(lo, xhi.v, MPFR_RNDD);
    mpfr_cos(hi, xlo.v, MPFR_RNDU);
}

}  // namespace

int CyclotomicRing::sign(const Elem& a) const {
    if (is_zero(a)) return 0;
    for (mpfr_prec_t prec = 64; prec <= (1 << 20); prec *= 2) {
        Mpfr lo(prec), hi(prec), clo(prec), chi(prec), t(prec);
        mpfr_set_zero(lo.v, 1);
        mpfr_set_zero(hi.v, 1);
        for (int k = 0; k < degree(); ++k) {
            if (a[k] == 0) continue;
            cos_bounds(k, n_, prec, clo.v, chi.v);
            const bool pos = a[k] > 0;
            mpfr_mul_z(t.v, pos ? clo.v : chi.v, a[k].get_mpz_t(), MPFR_RNDD);
            mpfr_add(lo.v, lo.v, t.v, MPFR_RNDD);
            mpfr_mul_z(t.v, pos ? chi.v : clo.v, a[k].get_mpz_t(), MPFR_RNDU);
            mpfr_add(hi.v, hi.v, t.v, MPFR_RNDU);
        }
        if (mpfr_sgn(lo.v) > 0) return 1;
        if (mpfr_sgn(hi.v) < 0) return -1;
    }
    throw std::logic_error("sign of a nonzero cyclotomic element could not be separated from zero");
}

double CyclotomicRing::approx(const Elem& a) const {
    Mpfr lo(128), hi(128), s(128), t(128);
    mpfr_set_zero(s.v, 1);
    for (int k = 0; k < degree(); ++k) {
        if (a[k] == 0) continue;
        cos_bounds(k, n_, 128, lo.v, hi.v);
        mpfr_mul_z(t.v, lo.v, a[k].get_mpz_t(), MPFR_RNDN);
        mpfr_add(s.v, s.v, t.v, MPFR_RNDN);
    }
    return mpfr_get_d(s.v, MPFR_RNDN);
}

// ---------------------------------------------------------------------------
// Classification

const char* class_name(CoxeterClass c) {
    switch (c) {
        case CoxeterClass::Finite: return "finite";
        case CoxeterClass::Affine: return "affine";
        case CoxeterClass::Indefinite: return "indefinite";
    }
    return "?";
}

namespace {

using Elem = CyclotomicRing::Elem;

// Determinants of the leading principal submatrices, by Berkowitz's division-free method.
std::vector<Elem> leading_minors(const CyclotomicRing& R, const std::vector<std::vector<Elem>>& A) {
    const int n = static_cast<int>(A.size());
    std::vector<Elem> dets;
    std::vector<Elem> vect{R.integer(1), R.sub(R.zero(), A[0][0])};
    dets.push_back(A[0][0]);
    for (int r = 1; r < n; ++r) {
        std::vector<Elem> c(r + 2, R.zero());
        c[0] = R.integer(1);
        c[1] = R.sub(R.zero(), A[r][r]);
        std::vector<Elem> x(r);
        for (int i = 0; i < r; ++i) x[i] = A[i][r];
        for (int k = 0; k < r; ++k) {
            Elem dot = R.zero();
            for (int i = 0; i < r; ++i) dot = R.add(dot, R.mul(A[r][i], x[i]));
            c[k + 2] = R.sub(R.zero(), dot);
            if (k + 1 < r) {
                std::vector<Elem> y(r, R.zero());
                for (int i = 0; i < r; ++i)
                    for (int j = 0; j < r; ++j) y[i] = R.add(y[i], R.mul(A[i][j], x[j]));
                x = std::move(y);
            }
        }
        std::vector<Elem> next(r + 2, R.zero());
        for (int i = 0; i <= r + 1; ++i)
            for (int j = 0; j <= std::min(i, r); ++j) next[i] = R.add(next[i], R.mul(c[i - j], vect[j]));
        vect = std::move(next);
        dets.push_back((r + 1) % 2 ? R.sub(R.zero(), vect[r + 1]) : vect[r + 1]);
    }
    return dets;
}

class Classifier {
public:
    explicit Classifier(const CoxeterMatrix& m) : m_(m) {}

    const CyclotomicRing& ring(const std::vector<int>& subset) {
        int n = 1;
        for (int s : subset)
            for (int t : subset)
                if (s != t && m_(s, t) != CoxeterMatrix::kInfinity && m_(s, t) > 2) n = std::lcm(n, m_(s, t));
        auto it = rings_.find(n);
        if (it == rings_.end()) it = rings_.emplace(n, CyclotomicRing(n)).first;
        return it->second;
    }

    // 2B restricted to the subset.
    std::vector<std::vector<Elem>> gram(const CyclotomicRing& R, const std::vector<int>& subset) {
        const std::size_t k = subset.size();
        std::vector<std::vector<Elem>> A(k, std::vector<Elem>(k));
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j) {
                int s = subset[i], t = subset[j];
                if (s == t)
                    A[i][j] = R.integer(2);
                else if (m_(s, t) == CoxeterMatrix::kInfinity)
                    A[i][j] = R.integer(-2);
                else if (m_(s, t) == 2)
                    A[i][j] = R.zero();
                else
                    A[i][j] = R.sub(R.zero(), R.two_cos(R.n() / m_(s, t)));
            }
        return A;
    }

    std::vector<int> minor_signs(const std::vector<int>& subset, double* det = nullptr) {
        const CyclotomicRing& R = ring(subset);
        auto dets = leading_minors(R, gram(R, subset));
        std::vector<int> signs;
        for (const auto& d : dets) signs.push_back(R.sign(d));
        if (det) *det = R.approx(dets.back()) / std::pow(2.0, static_cast<double>(subset.size()));
        return signs;
    }

    int det_sign(const std::vector<int>& subset) { return minor_signs(subset).back(); }

    bool positive_definite(const std::vector<int>& subset) {
        auto s = minor_signs(subset);
        return std::all_of(s.begin(), s.end(), [](int x) { return x > 0; });
    }

    std::vector<std::vector<int>> components(const std::vector<int>& subset) {
        std::vector<std::vector<int>> out;
        std::vector<bool> seen(subset.size(), false);
        for (std::size_t i = 0; i < subset.size(); ++i) {
            if (seen[i]) continue;
            std::vector<std::size_t> stack{i};
            seen[i] = true;
            std::vector<int> comp;
            while (!stack.empty()) {
                std::size_t a = stack.back();
                stack.pop_back();
                comp.push_back(subset[a]);
                for (std::size_t b = 0; b < subset.size(); ++b)
                    if (!seen[b] && m_(subset[a], subset[b]) != 2) {
                        seen[b] = true;
                        stack.push_back(b);
                    }
            }
            std::sort(comp.begin(), comp.end());
            out.push_back(std::move(comp));
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    CoxeterClass classify_connected(const std::vector<int>& comp) {
        if (positive_definite(comp)) return CoxeterClass::Finite;
        if (det_sign(comp) != 0) return CoxeterClass::Indefinite;
        for (std::size_t drop = 0; drop < comp.size(); ++drop) {
            std::vector<int> rest;
            for (std::size_t i = 0; i < comp.size(); ++i)
                if (i != drop) rest.push_back(comp[i]);
            if (!positive_definite(rest)) return CoxeterClass::Indefinite;
        }
        return CoxeterClass::Affine;
    }

private:
    const CoxeterMatrix& m_;
    std::map<int, CyclotomicRing> rings_;
};

std::vector<int> mask_to_subset(std::uint32_t mask) {
    std::vector<int> s;
    for (int i = 0; mask; ++i, mask >>= 1)
        if (mask & 1) s.push_back(i);
    return s;
}

// Nonzero submasks of `mask` in (popcount, value) order.
std::vector<std::uint32_t> ordered_submasks(std::uint32_t mask) {
    std::vector<std::uint32_t> out;
    for (std::uint32_t s = mask; s; s = (s - 1) & mask) out.push_back(s);
    std::sort(out.begin(), out.end(), [](std::uint32_t a, std::uint32_t b) {
        int pa = std::popcount(a), pb = std::popcount(b);
        return pa != pb ? pa < pb : a < b;
    });
    return out;
}

}  // namespace

SubsystemVerdict classify_subsystem(const CoxeterMatrix& m, const std::vector<int>& subset) {
    if (subset.empty()) throw std::invalid_argument("subset must be nonempty");
    std::vector<int> sorted = subset;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw std::invalid_argument("subset has repeated generators");
    if (sorted.front() < 0 || sorted.back() >= m.rank()) throw std::invalid_argument("subset index out of range");

    Classifier c(m);
    SubsystemVerdict v;
    v.subset = subset;
    v.minor_signs = c.minor_signs(subset, &v.determinant);
    v.components = c.components(subset);
    v.connected = v.components.size() == 1;
    bool any_affine = false, any_indefinite = false;
    for (const auto& comp : v.components) {
        CoxeterClass k = c.classify_connected(comp);
        v.component_classes.push_back(k);
        any_affine |= k == CoxeterClass::Affine;
        any_indefinite |= k == CoxeterClass::Indefinite;
    }
    v.classification = any_indefinite ? CoxeterClass::Indefinite
                       : any_affine   ? CoxeterClass::Affine
                                      : CoxeterClass::Finite;
    return v;
}

HyperbolicityVerdict is_word_hyperbolic(const CoxeterMatrix& m, int rank_cap) {
    const int r = m.rank();
    if (r > rank_cap || r > 30)
        throw CapExceeded("rank " + std::to_string(r) + " exceeds the cap of " + std::to_string(rank_cap));
    const std::uint32_t full = (std::uint32_t{1} << r) - 1;
    Classifier c(m);

    std::vector<std::int8_t> det(full + 1, 0);
    std::vector<std::uint8_t> finite(full + 1, 0), connected(full + 1, 0);
    finite[0] = 1;
    for (std::uint32_t mask = 1; mask <= full; ++mask) {
        std::vector<int> s = mask_to_subset(mask);
        det[mask] = static_cast<std::int8_t>(c.det_sign(s));
        std::uint32_t top = std::uint32_t{1} << (31 - std::countl_zero(mask));
        finite[mask] = finite[mask ^ top] && det[mask] > 0;
        connected[mask] = c.components(s).size() == 1;
    }

    HyperbolicityVerdict v;
    v.subsets_classified = full;
    auto order = ordered_submasks(full);

    for (std::uint32_t mask : order) {
        if (std::popcount(mask) < 3 || !connected[mask] || det[mask] != 0) continue;
        bool affine = true;
        for (std::uint32_t rest = mask; rest; rest &= rest - 1)
            if (!finite[mask ^ (rest & -rest)]) affine = false;
        if (!affine) continue;
        v.hyperbolic = false;
        v.reason = HyperbolicityVerdict::Reason::AffineSubsystem;
        v.witness = mask_to_subset(mask);
        v.certificate.push_back(classify_subsystem(m, v.witness));
        return v;
    }

    for (std::uint32_t a : order) {
        if (finite[a]) continue;
        std::uint32_t commuting = 0;
        for (int t = 0; t < r; ++t) {
            if (a >> t & 1) continue;
            bool ok = true;
            for (int s : mask_to_subset(a)) ok &= m(s, t) == 2;
            if (ok) commuting |= std::uint32_t{1} << t;
        }
        if (!commuting || finite[commuting]) continue;
        for (std::uint32_t b : ordered_submasks(commuting)) {
            if (finite[b]) continue;
            v.hyperbolic = false;
            v.reason = HyperbolicityVerdict::Reason::CommutingInfinitePair;
            v.witness = mask_to_subset(a);
            v.witness_pair = mask_to_subset(b);
            v.certificate.push_back(classify_subsystem(m, v.witness));
            v.certificate.push_back(classify_subsystem(m, v.witness_pair));
            return v;
        }
    }
    return v;
}

}  // namespace atilde
