#include "doctest.h"
#include "todd_coxeter.hpp"

#include "atilde/errors.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

using namespace atilde;
using test_support::ToddCoxeter;

namespace {

CoxeterMatrix commuting_dihedral_pair() {
    return CoxeterMatrix({{1, 0, 2, 2}, {0, 1, 2, 2}, {2, 2, 1, 0}, {2, 2, 0, 1}});
}

}  // namespace

TEST_CASE("cyclotomic polynomials") {
    CHECK(cyclotomic_polynomial(1) == std::vector<mpz_class>{-1, 1});
    CHECK(cyclotomic_polynomial(2) == std::vector<mpz_class>{1, 1});
    CHECK(cyclotomic_polynomial(6) == std::vector<mpz_class>{1, -1, 1});
    CHECK(cyclotomic_polynomial(12) == std::vector<mpz_class>{1, 0, -1, 0, 1});
    // degree is Euler's totient
    for (int n : {5, 7, 9, 10, 14, 15, 42, 84}) {
        int phi = 0;
        for (int k = 1; k <= n; ++k) phi += std::gcd(k, n) == 1;
        CHECK(static_cast<int>(cyclotomic_polynomial(n).size()) - 1 == phi);
    }
}

TEST_CASE("cyclotomic ring arithmetic against floating point") {
    for (int n : {1, 3, 4, 5, 6, 7, 12, 42}) {
        CyclotomicRing R(n);
        CHECK(R.is_zero(R.sub(R.zeta_power(2 * n), R.integer(1))));
        CHECK(R.is_zero(R.add(R.zeta_power(n), R.integer(1))));
        for (int k = 0; k < 2 * n; ++k) {
            double expect = 2 * std::cos(M_PI * k / n);
            CHECK(R.approx(R.two_cos(k)) == doctest::Approx(expect).epsilon(1e-12));
            int s = std::abs(expect) < 1e-12 ? 0 : (expect > 0 ? 1 : -1);
            CHECK(R.sign(R.two_cos(k)) == s);
        }
    }
    // (2cos(π/5))² = 2cos(π/5) + 1, golden ratio identity
    CyclotomicRing R(5);
    auto c = R.two_cos(1);
    CHECK(R.is_zero(R.sub(R.mul(c, c), R.add(c, R.integer(1)))));
    // tiny but nonzero: 2cos(π/7) - 1.8019377358... is separated from zero
    CyclotomicRing S(7);
    CHECK(S.sign(S.sub(S.two_cos(1), S.integer(2))) == -1);
}

TEST_CASE("rank one and two classifications") {
    CoxeterMatrix m(std::vector<std::vector<int>>{{1}});
    CHECK(classify_subsystem(m, {0}).classification == CoxeterClass::Finite);
    for (int k : {2, 3, 4, 5, 6, 7, 12}) {
        CoxeterMatrix d({{1, k}, {k, 1}});
        CHECK(classify_subsystem(d, {0, 1}).classification == CoxeterClass::Finite);
    }
    CoxeterMatrix inf({{1, 0}, {0, 1}});
    auto v = classify_subsystem(inf, {0, 1});
    CHECK(v.classification == CoxeterClass::Affine);
    CHECK(v.minor_signs == std::vector<int>{1, 0});
}

TEST_CASE("triangle (3,3,3) is affine with a rank one kernel") {
    auto v = classify_subsystem(CoxeterMatrix::triangle(3, 3, 3), {0, 1, 2});
    CHECK(v.classification == CoxeterClass::Affine);
    CHECK(v.connected);
    CHECK(v.minor_signs == std::vector<int>{1, 1, 0});
    CHECK(v.determinant == doctest::Approx(0));
}

TEST_CASE("spherical, affine and hyperbolic triangles") {
    struct Case {
        int p, q, r;
        CoxeterClass expect;
    };
    for (Case c : {Case{2, 3, 3, CoxeterClass::Finite}, Case{2, 3, 4, CoxeterClass::Finite},
                   Case{2, 3, 5, CoxeterClass::Finite}, Case{2, 4, 4, CoxeterClass::Affine},
                   Case{2, 3, 6, CoxeterClass::Affine}, Case{3, 3, 3, CoxeterClass::Affine},
                   Case{2, 3, 7, CoxeterClass::Indefinite}, Case{3, 3, 4, CoxeterClass::Indefinite},
                   Case{2, 0, 2, CoxeterClass::Affine}}) {
        INFO(c.p << " " << c.q << " " << c.r);
        CHECK(classify_subsystem(CoxeterMatrix::triangle(c.p, c.q, c.r), {0, 1, 2}).classification == c.expect);
    }
}

TEST_CASE("disconnected subsets classify componentwise") {
    auto m = commuting_dihedral_pair();
    auto v = classify_subsystem(m, {0, 1, 2, 3});
    CHECK_FALSE(v.connected);
    CHECK(v.components.size() == 2);
    CHECK(v.classification == CoxeterClass::Affine);
    auto w = classify_subsystem(m, {0, 2});
    CHECK(w.classification == CoxeterClass::Finite);
}

TEST_CASE("hyperbolicity verdicts") {
    auto t333 = is_word_hyperbolic(CoxeterMatrix::triangle(3, 3, 3));
    CHECK_FALSE(t333.hyperbolic);
    CHECK(t333.reason == HyperbolicityVerdict::Reason::AffineSubsystem);
    CHECK(t333.witness == std::vector<int>{0, 1, 2});

    CHECK(is_word_hyperbolic(CoxeterMatrix::triangle(2, 3, 7)).hyperbolic);
    for (auto [p, q, r] : {std::tuple{2, 4, 4}, std::tuple{2, 3, 6}}) {
        auto v = is_word_hyperbolic(CoxeterMatrix::triangle(p, q, r));
        CHECK_FALSE(v.hyperbolic);
        CHECK(v.reason == HyperbolicityVerdict::Reason::AffineSubsystem);
    }

    auto dd = is_word_hyperbolic(commuting_dihedral_pair());
    CHECK_FALSE(dd.hyperbolic);
    CHECK(dd.reason == HyperbolicityVerdict::Reason::CommutingInfinitePair);
    CHECK(dd.witness == std::vector<int>{0, 1});
    CHECK(dd.witness_pair == std::vector<int>{2, 3});

    // finite groups and the free product of involutions are hyperbolic
    CHECK(is_word_hyperbolic(CoxeterMatrix::triangle(2, 3, 5)).hyperbolic);
    CHECK(is_word_hyperbolic(CoxeterMatrix({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}})).hyperbolic);
}

TEST_CASE("certificates reclassify to their claim") {
    for (const auto& m : {CoxeterMatrix::triangle(3, 3, 3), CoxeterMatrix::triangle(2, 4, 4), commuting_dihedral_pair()}) {
        auto v = is_word_hyperbolic(m);
        REQUIRE_FALSE(v.hyperbolic);
        if (v.reason == HyperbolicityVerdict::Reason::AffineSubsystem) {
            auto c = classify_subsystem(m, v.witness);
            CHECK(c.classification == CoxeterClass::Affine);
            CHECK(c.connected);
            CHECK(v.witness.size() >= 3);
        } else {
            CHECK(classify_subsystem(m, v.witness).classification != CoxeterClass::Finite);
            CHECK(classify_subsystem(m, v.witness_pair).classification != CoxeterClass::Finite);
            for (int a : v.witness)
                for (int b : v.witness_pair) CHECK(m(a, b) == 2);
        }
    }
}

TEST_CASE("witnesses survive in supersets") {
    // extend each non-hyperbolic matrix by one generator, in every way with entries {2, 3, 0}
    for (const auto& base : {CoxeterMatrix::triangle(3, 3, 3), CoxeterMatrix::triangle(2, 3, 6), commuting_dihedral_pair()}) {
        const int r = base.rank();
        std::vector<int> choices{2, 3, 0};
        int combos = 1;
        for (int i = 0; i < r; ++i) combos *= 3;
        for (int code = 0; code < combos; ++code) {
            auto e = base.entries();
            int c = code;
            for (int i = 0; i < r; ++i) {
                e[i].push_back(choices[c % 3]);
                c /= 3;
            }
            std::vector<int> last;
            for (int i = 0; i < r; ++i) last.push_back(e[i].back());
            last.push_back(1);
            e.push_back(last);
            CHECK_FALSE(is_word_hyperbolic(CoxeterMatrix(e)).hyperbolic);
        }
    }
}

TEST_CASE("finite orders from coset enumeration") {
    CHECK(ToddCoxeter(CoxeterMatrix::triangle(2, 3, 3), 10000).order() == 24);
    CHECK(ToddCoxeter(CoxeterMatrix::triangle(2, 3, 4), 10000).order() == 48);
    CHECK(ToddCoxeter(CoxeterMatrix::triangle(2, 3, 5), 10000).order() == 120);
    CHECK(ToddCoxeter(CoxeterMatrix({{1, 6}, {6, 1}}), 10000).order() == 12);
    CHECK_FALSE(ToddCoxeter(CoxeterMatrix::triangle(3, 3, 3), 5000).order().has_value());
}

TEST_CASE("classification agrees with coset enumeration on rank at most 3") {
    const std::vector<int> entries{2, 3, 4, 5, 6, 0};
    int checked = 0;
    for (int p : entries) {
        CoxeterMatrix d({{1, p}, {p, 1}});
        bool finite = classify_subsystem(d, {0, 1}).classification == CoxeterClass::Finite;
        CHECK(finite == ToddCoxeter(d, 5000).order().has_value());
        for (int q : entries)
            for (int r : entries) {
                CoxeterMatrix m = CoxeterMatrix::triangle(p, q, r);
                bool fin = classify_subsystem(m, {0, 1, 2}).classification == CoxeterClass::Finite;
                INFO(p << " " << q << " " << r);
                CHECK(fin == ToddCoxeter(m, 5000).order().has_value());
                ++checked;
            }
    }
    CHECK(checked == 216);
}

TEST_CASE("matrix files") {
    std::istringstream in("# comment\ncoxeter 3\n1 3 3\n3 1 3\n3 3 1\n");
    CoxeterMatrix m = read_coxeter(in);
    CHECK(m.rank() == 3);
    std::ostringstream out;
    write_coxeter(out, m);
    std::istringstream back(out.str());
    CHECK(read_coxeter(back).entries() == m.entries());

    std::istringstream bad_token("coxeter 2\n1 x\n3 1\n");
    CHECK_THROWS_AS(read_coxeter(bad_token), ParseError);
    std::istringstream short_row("coxeter 2\n1\n3 1\n");
    CHECK_THROWS_AS(read_coxeter(short_row), ParseError);
    std::istringstream asym("coxeter 2\n1 3\n4 1\n");
    CHECK_THROWS_AS(read_coxeter(asym), ValidationError);
    std::istringstream one("coxeter 2\n1 1\n1 1\n");
    CHECK_THROWS_AS(read_coxeter(one), ValidationError);
}

TEST_CASE("rank cap refuses") {
    std::vector<std::vector<int>> e(5, std::vector<int>(5, 2));
    for (int i = 0; i < 5; ++i) e[i][i] = 1;
    CHECK_THROWS_AS(is_word_hyperbolic(CoxeterMatrix(e), 4), CapExceeded);
    CHECK(is_word_hyperbolic(CoxeterMatrix(e), 5).hyperbolic);
}
