#include "doctest.h"

#include "atilde/errors.hpp"
#include "atilde/field.hpp"
#include "atilde/geometry.hpp"

#include <algorithm>
#include <set>
#include <sstream>

using namespace atilde;

namespace {

using VectorSet = std::set<std::vector<int>>;

// Every vector of GF(q)^cols spanned by `gens`, by summing all coefficient tuples.
VectorSet closure(const GaloisField& f, const std::vector<std::vector<int>>& gens, int cols) {
    const int q = f.order();
    VectorSet out;
    std::vector<int> coeff(gens.size(), 0);
    for (;;) {
        std::vector<int> v(cols, 0);
        for (std::size_t i = 0; i < gens.size(); ++i)
            for (int c = 0; c < cols; ++c) v[c] = f.add(v[c], f.mul(coeff[i], gens[i][c]));
        out.insert(v);
        std::size_t i = 0;
        while (i < coeff.size() && ++coeff[i] == q) coeff[i++] = 0;
        if (i == coeff.size()) break;
    }
    return out;
}

std::vector<std::vector<int>> rows(const Geometry& g, int id) {
    const int cols = g.ambient_dim();
    auto b = g.basis(id);
    std::vector<std::vector<int>> out;
    for (int r = 0; r < g.dim(id); ++r) out.emplace_back(b.begin() + r * cols, b.begin() + (r + 1) * cols);
    return out;
}

VectorSet vectors_of(const Geometry& g, int id) { return closure(g.field(), rows(g, id), g.ambient_dim()); }

int power(int b, int e) {
    int r = 1;
    while (e--) r *= b;
    return r;
}

// Subspaces of each dimension 1..n built up one vector at a time.
std::vector<std::set<VectorSet>> brute_force_subspaces(const GaloisField& f, int n) {
    const int cols = n + 1, q = f.order();
    std::vector<std::vector<int>> all;
    for (int code = 1; code < power(q, cols); ++code) {
        std::vector<int> v(cols);
        for (int c = 0, x = code; c < cols; ++c, x /= q) v[c] = x % q;
        all.push_back(v);
    }
    std::vector<std::set<VectorSet>> by_dim(n + 1);
    by_dim[0].insert(VectorSet{std::vector<int>(cols, 0)});
    for (int k = 1; k <= n; ++k)
        for (const VectorSet& w : by_dim[k - 1])
            for (const auto& v : all) {
                if (w.count(v)) continue;
                VectorSet s;
                for (const auto& x : w)
                    for (int a = 0; a < q; ++a) {
                        std::vector<int> y(cols);
                        for (int c = 0; c < cols; ++c) y[c] = f.add(x[c], f.mul(a, v[c]));
                        s.insert(y);
                    }
                by_dim[k].insert(s);
            }
    return by_dim;
}

bool is_rref(const Geometry& g, int id) {
    auto r = rows(g, id);
    int last_pivot = -1;
    for (std::size_t i = 0; i < r.size(); ++i) {
        int p = 0;
        while (p < g.ambient_dim() && r[i][p] == 0) ++p;
        if (p == g.ambient_dim() || p <= last_pivot || r[i][p] != 1) return false;
        for (std::size_t j = 0; j < r.size(); ++j)
            if (j != i && r[j][p] != 0) return false;
        last_pivot = p;
    }
    return true;
}

}  // namespace

TEST_CASE("prime fields match modular arithmetic") {
    for (int p : {2, 3, 5, 7, 11}) {
        GaloisField f(FieldSpec::for_order(p));
        for (int a = 0; a < p; ++a)
            for (int b = 0; b < p; ++b) {
                CHECK(f.add(a, b) == (a + b) % p);
                CHECK(f.mul(a, b) == (a * b) % p);
                CHECK(f.sub(a, b) == ((a - b) % p + p) % p);
            }
        for (int a = 1; a < p; ++a) CHECK(f.mul(a, f.inv(a)) == 1);
    }
}

TEST_CASE("extension fields satisfy the field axioms") {
    for (int q : {4, 8, 9}) {
        GaloisField f(FieldSpec::for_order(q));
        REQUIRE(f.order() == q);
        for (int a = 0; a < q; ++a) {
            CHECK(f.add(a, 0) == a);
            CHECK(f.mul(a, 1) == a);
            CHECK(f.add(a, f.neg(a)) == 0);
            if (a) CHECK(f.mul(a, f.inv(a)) == 1);
            for (int b = 0; b < q; ++b) {
                CHECK(f.add(a, b) == f.add(b, a));
                CHECK(f.mul(a, b) == f.mul(b, a));
                if (a && b) CHECK(f.mul(a, b) != 0);
                for (int c = 0; c < q; ++c) {
                    CHECK(f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c)));
                    CHECK(f.mul(a, f.mul(b, c)) == f.mul(f.mul(a, b), c));
                }
            }
        }
    }
}

TEST_CASE("field specs and moduli") {
    CHECK(prime_power(8) == std::pair{2, 3});
    CHECK(prime_power(49) == std::pair{7, 2});
    CHECK_THROWS_AS(prime_power(12), ValidationError);
    CHECK_THROWS_AS(prime_power(1), ValidationError);
    CHECK(is_irreducible({1, 1, 1}, 2));
    CHECK_FALSE(is_irreducible({1, 0, 1}, 2));  // (x+1)^2
    CHECK(is_irreducible({1, 0, 1}, 3));
    CHECK_FALSE(is_irreducible({2, 0, 1}, 3));  // x^2 - 1 splits
    CHECK_THROWS_AS(FieldSpec::with_modulus(4, {1, 0, 1}), ValidationError);
    CHECK_THROWS_AS(FieldSpec::with_modulus(4, {1, 1}), ValidationError);
    CHECK_THROWS_AS(FieldSpec::for_order(16), ValidationError);
    auto f16 = FieldSpec::with_modulus(16, {1, 1, 0, 0, 1});
    CHECK(f16.order() == 16);
    GaloisField gf16(f16);
    for (int a = 1; a < 16; ++a) CHECK(gf16.mul(a, gf16.inv(a)) == 1);
}

TEST_CASE("enumeration matches brute-force subspace counts") {
    struct Case {
        int n, q;
    };
    for (Case c : {Case{2, 2}, Case{2, 3}, Case{2, 4}, Case{3, 2}, Case{3, 3}}) {
        INFO("n=" << c.n << " q=" << c.q);
        auto g = Geometry::enumerate(c.n, FieldSpec::for_order(c.q));
        auto oracle = brute_force_subspaces(g->field(), c.n);
        std::vector<std::set<VectorSet>> mine(c.n + 1);
        for (int id = 0; id < g->size(); ++id) {
            CHECK(g->dim(id) >= 1);
            CHECK(g->dim(id) <= c.n);
            CHECK(is_rref(*g, id));
            VectorSet s = vectors_of(*g, id);
            CHECK(static_cast<int>(s.size()) == power(c.q, g->dim(id)));
            mine[g->dim(id)].insert(s);
        }
        std::size_t total = 0;
        for (int k = 1; k <= c.n; ++k) {
            CHECK(mine[k] == oracle[k]);
            total += oracle[k].size();
        }
        CHECK(static_cast<std::size_t>(g->size()) == total);
    }
    CHECK(Geometry::enumerate(2, FieldSpec::for_order(2))->size() == 14);
    CHECK(Geometry::enumerate(2, FieldSpec::for_order(3))->size() == 26);
}

TEST_CASE("ids follow dimension then basis order") {
    for (int q : {2, 3}) {
        auto g = Geometry::enumerate(3, FieldSpec::for_order(q));
        for (int id = 1; id < g->size(); ++id) {
            if (g->dim(id) != g->dim(id - 1)) {
                CHECK(g->dim(id) == g->dim(id - 1) + 1);
                continue;
            }
            auto a = g->basis(id - 1), b = g->basis(id);
            CHECK(std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end()));
        }
    }
}

TEST_CASE("sum and incidence agree with the span oracle") {
    for (auto [n, q] : {std::pair{2, 2}, std::pair{2, 3}, std::pair{3, 2}}) {
        auto g = Geometry::enumerate(n, FieldSpec::for_order(q));
        std::vector<VectorSet> vs;
        for (int id = 0; id < g->size(); ++id) vs.push_back(vectors_of(*g, id));
        const std::size_t full = power(q, n + 1);
        for (int x = 0; x < g->size(); ++x)
            for (int y = 0; y < g->size(); ++y) {
                auto gx = rows(*g, x), gy = rows(*g, y);
                gx.insert(gx.end(), gy.begin(), gy.end());
                VectorSet s = closure(g->field(), gx, n + 1);
                Span got = sum(g->subspace(x), g->subspace(y));
                if (s.size() == full) {
                    CHECK(is_full(got));
                } else {
                    REQUIRE_FALSE(is_full(got));
                    CHECK(vs[std::get<Subspace>(got).id()] == s);
                }
                const bool x_in_y = std::includes(vs[y].begin(), vs[y].end(), vs[x].begin(), vs[x].end());
                const bool y_in_x = std::includes(vs[x].begin(), vs[x].end(), vs[y].begin(), vs[y].end());
                Incidence inc = incident(g->subspace(x), g->subspace(y));
                CHECK(inc.incident == (x_in_y || y_in_x));
                CHECK(inc.x_strictly_in_y == (x_in_y && x != y));
                CHECK(inc.y_strictly_in_x == (y_in_x && x != y));
            }
    }
}

TEST_CASE("sum is a semilattice and incidence a partial order") {
    for (auto [n, q] : {std::pair{2, 2}, std::pair{2, 3}, std::pair{3, 2}}) {
        auto g = Geometry::enumerate(n, FieldSpec::for_order(q));
        const int s = g->size();
        auto join = [&](int a, int b) { return a == Geometry::kFull || b == Geometry::kFull ? Geometry::kFull : g->join(a, b); };
        for (int x = 0; x < s; ++x) {
            CHECK(g->join(x, x) == x);
            CHECK(g->contains(x, x));
            for (int y = 0; y < s; ++y) {
                CHECK(g->join(x, y) == g->join(y, x));
                if (g->contains(x, y) && g->contains(y, x)) CHECK(x == y);
                for (int z = 0; z < s; ++z) {
                    CHECK(join(join(x, y), z) == join(x, join(y, z)));
                    if (g->contains(x, y) && g->contains(y, z)) CHECK(g->contains(x, z));
                    // monotone: y ⊆ z implies x + y ⊆ x + z
                    if (g->contains(z, y)) {
                        int a = g->join(x, y), b = g->join(x, z);
                        CHECK((b == Geometry::kFull || (a != Geometry::kFull && g->contains(b, a))));
                    }
                }
            }
        }
    }
}

TEST_CASE("sum and prime_sum examples") {
    auto g = Geometry::enumerate(2, FieldSpec::for_order(2));
    auto lambda = perp_correlation(*g);
    for (int x = 0; x < g->size(); ++x) {
        auto sx = g->subspace(x);
        CHECK(std::get<Subspace>(sum(sx, sx)) == sx);
        CHECK_FALSE(prime_sum(sx, sx).has_value());
        if (g->dim(x) == 1 && g->contains(lambda(x), x)) CHECK(std::get<Subspace>(sum(sx, lambda(sx))) == lambda(sx));
    }
    // distinct points of the Fano plane span the unique line through them
    for (int x = 0; x < g->size(); ++x)
        for (int y = 0; y < g->size(); ++y) {
            if (x == y || g->dim(x) != 1 || g->dim(y) != 1) continue;
            int line = std::get<Subspace>(sum(g->subspace(x), g->subspace(y))).id();
            CHECK(g->dim(line) == 2);
            int through = 0;
            for (int l = 0; l < g->size(); ++l) through += g->dim(l) == 2 && g->contains(l, x) && g->contains(l, y);
            CHECK(through == 1);
            CHECK(g->contains(line, x));
        }
    for (int l = 0; l < g->size(); ++l) {
        if (g->dim(l) != 2) continue;
        int pts = 0;
        for (int x = 0; x < g->size(); ++x) {
            pts += g->dim(x) == 1 && g->contains(l, x);
            if (g->contains(l, x) && l != x) CHECK_FALSE(prime_sum(g->subspace(x), g->subspace(l)).has_value());
        }
        CHECK(pts == 3);
    }
    CHECK(g->points_per_line() == 3);

    auto g3 = Geometry::enumerate(3, FieldSpec::for_order(2));
    int checked = 0;
    for (int x = 0; x < g3->size(); ++x)
        for (int y = 0; y < g3->size(); ++y)
            if (x != y && g3->dim(x) == 1 && g3->dim(y) == 1) {
                auto z = prime_sum(g3->subspace(x), g3->subspace(y));
                REQUIRE(z.has_value());
                auto zs = std::get<Subspace>(*z);
                CHECK(zs.dim() == 2);
                VectorSet expect = closure(g3->field(), {rows(*g3, x)[0], rows(*g3, y)[0]}, 4);
                CHECK(vectors_of(*g3, zs.id()) == expect);
                ++checked;
            }
    CHECK(checked == 15 * 14);

    auto other = Geometry::enumerate(2, FieldSpec::for_order(2));
    CHECK_THROWS_AS(sum(g->subspace(0), other->subspace(1)), std::invalid_argument);
    CHECK_THROWS_AS(incident(g->subspace(0), other->subspace(1)), std::invalid_argument);
    CHECK_THROWS_AS(prime_sum(g->subspace(0), other->subspace(1)), std::invalid_argument);
}

TEST_CASE("perp correlation is the orthogonal complement") {
    for (auto [n, q] : {std::pair{2, 2}, std::pair{2, 3}, std::pair{2, 4}, std::pair{3, 2}, std::pair{3, 3}}) {
        auto g = Geometry::enumerate(n, FieldSpec::for_order(q));
        const GaloisField& f = g->field();
        auto lambda = perp_correlation(*g);
        CHECK(lambda.is_perp());
        CHECK(lambda.reverses_incidence());
        for (int x = 0; x < g->size(); ++x) {
            CHECK(lambda(lambda(x)) == x);
            CHECK(g->dim(lambda(x)) == n + 1 - g->dim(x));
            for (const auto& w : vectors_of(*g, lambda(x)))
                for (const auto& v : rows(*g, x)) {
                    int dot = 0;
                    for (int c = 0; c <= n; ++c) dot = f.add(dot, f.mul(w[c], v[c]));
                    CHECK(dot == 0);
                }
        }
    }
    auto g = Geometry::enumerate(2, FieldSpec::for_order(2));
    auto lambda = perp_correlation(*g);
    std::set<int> lines;
    for (int x = 0; x < g->size(); ++x)
        if (g->dim(x) == 1) lines.insert(lambda(x));
    CHECK(lines.size() == 7);
}

TEST_CASE("Singer correlation") {
    for (int q : {2, 3, 4, 5}) {
        auto g = Geometry::enumerate(2, FieldSpec::for_order(q));
        auto lambda = singer_correlation(*g);
        CHECK_FALSE(lambda.is_perp());
        for (int x = 0; x < g->size(); ++x) {
            CHECK(lambda(lambda(x)) == x);
            CHECK(g->dim(lambda(x)) == 3 - g->dim(x));
        }
    }
    CHECK_THROWS_AS(singer_correlation(*Geometry::enumerate(3, FieldSpec::for_order(2))), ValidationError);
}

TEST_CASE("correlations from permutations are validated") {
    auto g = Geometry::enumerate(2, FieldSpec::for_order(2));
    auto perp = perp_correlation(*g);
    auto map = perp.map();
    CHECK(Correlation::from_permutation(*g, map) == perp);
    std::swap(map[0], map[1]);
    try {
        Correlation::from_permutation(*g, map);
        FAIL("expected a validation error");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("lambda pair 0") != std::string::npos);
    }
    std::vector<int> identity(g->size());
    for (int i = 0; i < g->size(); ++i) identity[i] = i;
    CHECK_THROWS_AS(Correlation::from_permutation(*g, identity), ValidationError);
    CHECK_THROWS_AS(Correlation::from_permutation(*g, {0, 1}), ValidationError);
}

TEST_CASE("geometry files round-trip canonically") {
    for (auto [n, q] : {std::pair{2, 2}, std::pair{2, 4}, std::pair{3, 3}, std::pair{2, 9}}) {
        auto g = Geometry::enumerate(n, FieldSpec::for_order(q));
        auto lambda = perp_correlation(*g);
        std::ostringstream out;
        write_geometry_header(out, *g, lambda);
        write_geometry_listing(out, *g);
        std::istringstream in(out.str());
        auto [h, mu] = realize(read_geometry_spec(in));
        REQUIRE(h->size() == g->size());
        for (int id = 0; id < g->size(); ++id) {
            auto a = g->basis(id), b = h->basis(id);
            CHECK(std::equal(a.begin(), a.end(), b.begin(), b.end()));
        }
        CHECK(mu.map() == lambda.map());
    }
    auto g = Geometry::enumerate(2, FieldSpec::for_order(3));
    auto singer = singer_correlation(*g);
    std::ostringstream out;
    write_geometry_header(out, *g, singer);
    std::istringstream in(out.str());
    CHECK(realize(read_geometry_spec(in)).second.map() == singer.map());
}

TEST_CASE("geometry file errors") {
    auto parse_line = [](const std::string& text) {
        std::istringstream in(text);
        try {
            realize(read_geometry_spec(in));
        } catch (const ParseError& e) {
            return e.line();
        }
        return -1;
    };
    CHECK(parse_line("geometry 1 2\n") == 1);
    CHECK(parse_line("geometry 2 6\n") == 1);
    CHECK(parse_line("# header\ngeometry 2 4\nmodulus 1 0 1\n") == 3);
    CHECK(parse_line("geometry 2 2\nlambda sideways\n") == 2);
    CHECK(parse_line("geom 2 2\n") == 1);
    CHECK(parse_line("") == 0);
    std::istringstream partial("geometry 2 2\nlambda perm\n0 12\n12 0\n");
    CHECK_THROWS_AS(realize(read_geometry_spec(partial)), ValidationError);
    CHECK_THROWS_AS(Geometry::enumerate(1, FieldSpec::for_order(2)), ValidationError);
}
