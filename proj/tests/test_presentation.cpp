#include "doctest.h"
#include "support.hpp"

#include "atilde/errors.hpp"
#include "atilde/presentation.hpp"

#include <random>
#include <set>
#include <sstream>

using namespace atilde;

namespace {

struct Setup {
    std::shared_ptr<const Geometry> g;
    Correlation lambda;
};

Setup singer(int q) {
    auto g = Geometry::enumerate(2, FieldSpec::for_order(q));
    return {g, singer_correlation(*g)};
}

bool distinct_incident(const Geometry& g, int a, int b) { return a != b && (g.contains(a, b) || g.contains(b, a)); }

std::set<int> failing(const TrianglePresentation& tp) {
    std::set<int> out;
    for (const auto& r : validate(tp).results)
        if (!r.pass) out.insert(static_cast<int>(r.axiom));
    return out;
}

std::string saved(const TrianglePresentation& tp) {
    std::ostringstream out;
    save_presentation(out, tp);
    return out.str();
}

}  // namespace

TEST_CASE("empty presentation fails axiom A") {
    auto s = singer(2);
    TrianglePresentation empty(s.g, s.lambda, {});
    auto rep = validate(empty);
    CHECK_FALSE(rep[Axiom::A].pass);
    CHECK(rep[Axiom::A].witness.size() == 2);
    CHECK_FALSE(rep.all_pass());
}

TEST_CASE("fixture passes every axiom") {
    auto tp = test_support::load_tp("a2_q2.tp");
    auto rep = validate(*tp);
    for (const auto& r : rep.results) {
        INFO("axiom " << axiom_letter(r.axiom) << ": " << r.detail);
        CHECK(r.pass);
    }
    CHECK(rep.all_pass());
}

TEST_CASE("search finds valid presentations for the Singer correlation") {
    for (int q : {2, 3}) {
        INFO("q=" << q);
        auto s = singer(q);
        SearchOptions opts;
        opts.limit = 100;
        auto res = search(s.g, s.lambda, opts);
        CHECK(res.exhausted);
        REQUIRE_FALSE(res.presentations.empty());
        const Geometry& g = *s.g;
        const int flags = (q * q + q + 1) * (q + 1);
        for (const auto& tp : res.presentations) {
            CHECK(validate(tp).all_pass());
            CHECK(tp.half_prime().size() == static_cast<std::size_t>(flags));
            CHECK(tp.half_prime().size() + tp.half_double_prime().size() == tp.triples().size());

            std::set<Triple> T(tp.triples().begin(), tp.triples().end());
            for (const auto& t : tp.triples()) {
                CHECK(T.count({t.v, t.w, t.u}));
                CHECK(T.count({s.lambda(t.w), s.lambda(t.v), s.lambda(t.u)}));
            }
            // the (D) reflection swaps T' and T''
            for (const auto& t : tp.half_prime()) {
                Triple r{s.lambda(t.w), s.lambda(t.v), s.lambda(t.u)};
                CHECK_FALSE(tp.is_prime(r));
            }
            for (int u = 0; u < g.size(); ++u)
                for (int v = 0; v < g.size(); ++v) {
                    const auto& w = tp.thirds(u, v);
                    CHECK(w.size() == (distinct_incident(g, s.lambda(u), v) ? 1u : 0u));
                    bool prime = !w.empty() && tp.is_prime({u, v, w[0]});
                    CHECK(prime == (g.contains(s.lambda(u), v) && s.lambda(u) != v));
                }
        }
        auto again = search(s.g, s.lambda, opts);
        REQUIRE(again.presentations.size() == res.presentations.size());
        for (std::size_t i = 0; i < res.presentations.size(); ++i)
            CHECK(saved(again.presentations[i]) == saved(res.presentations[i]));
    }
}

TEST_CASE("T' has one triple per flag") {
    auto tp = test_support::load_tp("a2_q2.tp");
    // 7 lines with q+1 = 3 points each, for the pairs (u, v) with λ(u) ⊋ v
    CHECK(tp->half_prime().size() == 21);
    CHECK(tp->half_double_prime().size() == 21);
}

TEST_CASE("perp correlation admits no presentation") {
    for (int q : {2, 3}) {
        auto g = Geometry::enumerate(2, FieldSpec::for_order(q));
        auto res = search(g, perp_correlation(*g), {});
        CHECK(res.exhausted);
        CHECK(res.presentations.empty());
    }
}

TEST_CASE("search limits") {
    auto s = singer(3);
    SearchOptions one;
    one.limit = 1;
    auto r = search(s.g, s.lambda, one);
    CHECK(r.presentations.size() == 1);
    SearchOptions none;
    none.limit = 0;
    CHECK(search(s.g, s.lambda, none).presentations.empty());
    SearchOptions tiny;
    tiny.limit = 10;
    tiny.node_limit = 2;
    auto t = search(s.g, s.lambda, tiny);
    CHECK_FALSE(t.exhausted);
}

TEST_CASE("single-triple mutations break the axioms") {
    auto tp = test_support::load_tp("a2_q2.tp");
    const auto& base = tp->triples();
    const int size = tp->geometry().size();
    std::mt19937 rng(20240601);
    int replaced = 0, added = 0;
    for (int k = 0; k < 50; ++k) {
        auto triples = base;
        std::size_t i = rng() % triples.size();
        int w = static_cast<int>(rng() % (size - 1));
        if (w >= triples[i].w) ++w;  // a different subspace
        Triple mutated{triples[i].u, triples[i].v, w};

        triples[i] = mutated;
        TrianglePresentation r(tp->geometry_ptr(), tp->lambda(), triples);
        CHECK_FALSE(validate(r).all_pass());
        replaced += !validate(r).all_pass();

        // keeping the original as well gives two thirds for one pair
        auto both = base;
        both.push_back(mutated);
        TrianglePresentation b(tp->geometry_ptr(), tp->lambda(), both);
        auto f = failing(b);
        CHECK(f.count(static_cast<int>(Axiom::C)));
        added += f.count(static_cast<int>(Axiom::C)) > 0;
    }
    CHECK(replaced == 50);
    CHECK(added == 50);
}

TEST_CASE("individual axioms detect targeted damage") {
    auto tp = test_support::load_tp("a2_q2.tp");
    const auto& T = tp->triples();
    const Geometry& g = tp->geometry();
    int point = 0, line = 0;
    while (g.dim(point) != 1) ++point;
    while (g.dim(line) != 2) ++line;

    // dimension sum 1 + 1 + 2 is neither 3 nor 6
    auto e = T;
    e.push_back({point, point, line});
    CHECK(failing(TrianglePresentation(tp->geometry_ptr(), tp->lambda(), e)).count(static_cast<int>(Axiom::E)));

    // remove a triple: its rotation partner loses closure under (B)
    auto b = T;
    b.erase(b.begin());
    auto fb = failing(TrianglePresentation(tp->geometry_ptr(), tp->lambda(), b));
    CHECK(fb.count(static_cast<int>(Axiom::B)));
    CHECK(fb.count(static_cast<int>(Axiom::A)));
}

TEST_CASE("files round-trip and report errors") {
    auto tp = test_support::load_tp("a2_q2.tp");
    std::string once = saved(*tp);
    std::istringstream in(once);
    CHECK(saved(load_presentation(in)) == once);

    // reversed triple order still saves canonically
    std::ostringstream shuffled;
    write_geometry_header(shuffled, tp->geometry(), tp->lambda());
    shuffled << "triples:\n";
    for (auto it = tp->triples().rbegin(); it != tp->triples().rend(); ++it)
        shuffled << it->u << ' ' << it->v << ' ' << it->w << '\n';
    std::istringstream back(shuffled.str());
    CHECK(saved(load_presentation(back)) == once);

    auto line_of = [](const std::string& text) {
        std::istringstream s(text);
        try {
            read_presentation(s);
        } catch (const ParseError& e) {
            return e.line();
        }
        return -1;
    };
    CHECK(line_of("geometry 2 2\nlambda singer\ntriples:\n0 1\n") == 4);
    CHECK(line_of("geometry 2 2\nlambda singer\ntriples:\n0 1 99\n") == 4);
    CHECK(line_of("geometry 2 2\nlambda singer\n# comment\n\n0 1 2\n") == 5);
    // λ block that is not an involution: the error names the pair
    std::istringstream bad("geometry 2 2\nlambda perm\n0 12\n1 13\n2 11\n3 7\n4 9\n5 10\n6 8\n7 3\n8 6\n9 4\n10 5\n11 2\n12 1\n13 0\ntriples:\n");
    try {
        read_presentation(bad);
        FAIL("expected an error");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("lambda pair 0 12") != std::string::npos);
    }
    // loading refuses an invalid presentation
    std::istringstream empty("geometry 2 2\nlambda singer\ntriples:\n");
    CHECK_THROWS_AS(load_presentation(empty), ValidationError);
    CHECK_THROWS_AS(TrianglePresentation(tp->geometry_ptr(), tp->lambda(), {{0, 1, 14}}), ValidationError);
}
