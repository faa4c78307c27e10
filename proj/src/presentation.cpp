#include "atilde/presentation.hpp"

#include "atilde/errors.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace atilde {

TrianglePresentation::TrianglePresentation(std::shared_ptr<const Geometry> geometry, Correlation lambda,
                                           std::vector<Triple> triples)
    : geometry_(std::move(geometry)), lambda_(std::move(lambda)), triples_(std::move(triples)) {
    if (&lambda_.geometry() != geometry_.get())
        throw std::invalid_argument("correlation belongs to a different geometry");
    const int size = geometry_->size();
    for (const auto& t : triples_) {
        for (int id : {t.u, t.v, t.w})
            if (id < 0 || id >= size)
                throw ValidationError("triple (" + std::to_string(t.u) + " " + std::to_string(t.v) + " " +
                                      std::to_string(t.w) + ") has dangling id " + std::to_string(id));
    }
    std::sort(triples_.begin(), triples_.end());
    triples_.erase(std::unique(triples_.begin(), triples_.end()), triples_.end());
    thirds_.assign(static_cast<std::size_t>(size) * size, {});
    for (const auto& t : triples_) thirds_[t.u * size + t.v].push_back(t.w);
}

bool TrianglePresentation::is_prime(const Triple& t) const {
    const Geometry& g = *geometry_;
    return g.dim(t.u) + g.dim(t.v) + g.dim(t.w) == g.n() + 1;
}

std::vector<Triple> TrianglePresentation::half_prime() const {
    std::vector<Triple> out;
    for (const auto& t : triples_)
        if (is_prime(t)) out.push_back(t);
    return out;
}

std::vector<Triple> TrianglePresentation::half_double_prime() const {
    std::vector<Triple> out;
    for (const auto& t : triples_)
        if (!is_prime(t)) out.push_back(t);
    return out;
}

bool TrianglePresentation::contains(const Triple& t) const {
    const auto& w = thirds(t.u, t.v);
    return std::binary_search(w.begin(), w.end(), t.w);
}

// ---------------------------------------------------------------------------

char axiom_letter(Axiom a) { return static_cast<char>('A' + static_cast<int>(a)); }

bool ValidationReport::all_pass() const {
    return std::all_of(results.begin(), results.end(), [](const AxiomResult& r) { return r.pass; });
}

namespace {

void fail(AxiomResult& r, std::vector<int> witness, std::string detail) {
    if (!r.pass) return;
    r.pass = false;
    r.witness = std::move(witness);
    r.detail = std::move(detail);
}

std::string tuple_str(std::initializer_list<int> ids) {
    std::string s = "(";
    bool first = true;
    for (int i : ids) {
        if (!first) s += ' ';
        s += std::to_string(i);
        first = false;
    }
    return s + ")";
}

}  // namespace

ValidationReport validate(const TrianglePresentation& tp) {
    const Geometry& g = tp.geometry();
    const Correlation& lam = tp.lambda();
    const int size = g.size();
    ValidationReport rep;
    for (int i = 0; i < 6; ++i) rep.results[i].axiom = static_cast<Axiom>(i);
    auto& A = rep.results[0];
    auto& B = rep.results[1];
    auto& C = rep.results[2];
    auto& D = rep.results[3];
    auto& E = rep.results[4];
    auto& F = rep.results[5];

    for (int u = 0; u < size && A.pass; ++u) {
        for (int v = 0; v < size; ++v) {
            const bool has = !tp.thirds(u, v).empty();
            const int lu = lam(u);
            const bool should = lu != v && (g.contains(lu, v) || g.contains(v, lu));
            if (has && !should) {
                fail(A, {u, v, tp.thirds(u, v).front()},
                     "triple " + tuple_str({u, v, tp.thirds(u, v).front()}) +
                         " although lambda(u) and v are not distinct and incident");
                break;
            }
            if (!has && should) {
                fail(A, {u, v}, "no triple for pair " + tuple_str({u, v}) + " with lambda(u), v distinct and incident");
                break;
            }
        }
    }

    for (const auto& t : tp.triples()) {
        if (!tp.contains({t.v, t.w, t.u}))
            fail(B, {t.u, t.v, t.w}, tuple_str({t.u, t.v, t.w}) + " in T but rotation " + tuple_str({t.v, t.w, t.u}) + " is not");
        if (tp.thirds(t.u, t.v).size() > 1) {
            const auto& ws = tp.thirds(t.u, t.v);
            fail(C, {t.u, t.v, ws[0], ws[1]},
                 "pair " + tuple_str({t.u, t.v}) + " has thirds " + std::to_string(ws[0]) + " and " + std::to_string(ws[1]));
        }
        const Triple image{lam(t.w), lam(t.v), lam(t.u)};
        if (!tp.contains(image))
            fail(D, {t.u, t.v, t.w}, tuple_str({t.u, t.v, t.w}) + " in T but " + tuple_str({image.u, image.v, image.w}) + " is not");
        const int s = g.dim(t.u) + g.dim(t.v) + g.dim(t.w);
        if (s != g.n() + 1 && s != 2 * (g.n() + 1))
            fail(E, {t.u, t.v, t.w}, tuple_str({t.u, t.v, t.w}) + " has dimension sum " + std::to_string(s));
    }

    // (F): (x,y,u), (x',y',λ(u)) ∈ T' ⇒ ∃w: (y',x,w) ∈ T' and (y,x',λ(w)) ∈ T'.
    const auto prime = tp.half_prime();
    std::vector<std::vector<std::pair<int, int>>> by_third(size);
    for (const auto& t : prime) by_third[t.w].emplace_back(t.u, t.v);
    for (const auto& t1 : prime) {
        if (!F.pass) break;
        const int x = t1.u, y = t1.v, u = t1.w;
        for (auto [x2, y2] : by_third[lam(u)]) {
            bool ok = false;
            for (int w : tp.thirds(y2, x)) {
                const Triple first{y2, x, w};
                const Triple second{y, x2, lam(w)};
                if (tp.is_prime(first) && tp.contains(second) && tp.is_prime(second)) {
                    ok = true;
                    break;
                }
            }
            if (!ok) {
                fail(F, {x, y, u, x2, y2},
                     "premises " + tuple_str({x, y, u}) + ", " + tuple_str({x2, y2, lam(u)}) +
                         " have no w with " + tuple_str({y2, x}) + "w and " + tuple_str({y, x2}) + "lambda(w) in T'");
                break;
            }
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------

namespace {

class Backtracker {
public:
    Backtracker(std::shared_ptr<const Geometry> geometry, const Correlation& lambda, const SearchOptions& opts)
        : geometry_(std::move(geometry)), g_(*geometry_), lam_(lambda), opts_(opts), size_(g_.size()) {
        assigned_.assign(static_cast<std::size_t>(size_) * size_, -1);
        by_third_.assign(size_, {});
        for (int u = 0; u < size_; ++u)
            for (int v = 0; v < size_; ++v)
                if (prime_pair(u, v)) pairs_.emplace_back(u, v);
    }

    SearchResult run() {
        dfs(0);
        result_.exhausted = !stopped_;
        return std::move(result_);
    }

private:
    struct Placed {
        int a, b;
    };

    bool prime_pair(int u, int v) const { return g_.relation(lam_(u), v) == Relation::Contains; }
    int& slot(int a, int b) { return assigned_[a * size_ + b]; }

    bool f_instance_ok(int x, int y, int x2, int y2) {
        if (!prime_pair(y2, x) || !prime_pair(y, x2)) return false;
        const int w = slot(y2, x);
        if (w < 0) return true;
        const int z = slot(y, x2);
        return z < 0 || z == lam_(w);
    }

    // Places the (B)-orbit of (u,v,w); returns false on conflict. Changes are
    // recorded on the trail for undo.
    bool place(int u, int v, int w) {
        const std::size_t first_new = trail_.size();
        const std::array<std::array<int, 3>, 3> rot{{{u, v, w}, {v, w, u}, {w, u, v}}};
        for (const auto& [a, b, c] : rot) {
            int& s = slot(a, b);
            if (s == c) continue;
            if (s != -1) return false;
            s = c;
            trail_.push_back({a, b});
            by_third_[c].push_back({a, b});
        }
        for (std::size_t i = first_new; i < trail_.size(); ++i) {
            const auto [a, b] = trail_[i];
            const int c = slot(a, b);
            for (const auto& p : by_third_[lam_(c)])
                if (!f_instance_ok(a, b, p.a, p.b)) return false;
            const int u1 = lam_(c);
            for (const auto& p : by_third_[u1])
                if (!f_instance_ok(p.a, p.b, a, b)) return false;
        }
        return true;
    }

    void undo(std::size_t mark) {
        while (trail_.size() > mark) {
            const auto [a, b] = trail_.back();
            trail_.pop_back();
            const int c = slot(a, b);
            by_third_[c].pop_back();
            slot(a, b) = -1;
        }
    }

    void dfs(std::size_t idx) {
        if (stopped_) return;
        while (idx < pairs_.size() && slot(pairs_[idx].first, pairs_[idx].second) != -1) ++idx;
        if (idx == pairs_.size()) {
            emit();
            return;
        }
        const auto [u, v] = pairs_[idx];
        const int want_dim = g_.n() + 1 - g_.dim(u) - g_.dim(v);
        for (int w = 0; w < size_ && !stopped_; ++w) {
            if (g_.dim(w) != want_dim || !prime_pair(v, w) || !prime_pair(w, u)) continue;
            const int s1 = slot(v, w), s2 = slot(w, u);
            if ((s1 != -1 && s1 != u) || (s2 != -1 && s2 != v)) continue;
            if (++result_.nodes, opts_.node_limit && result_.nodes > opts_.node_limit) {
                stopped_ = true;
                return;
            }
            const std::size_t mark = trail_.size();
            if (place(u, v, w)) dfs(idx + 1);
            undo(mark);
        }
    }

    void emit() {
        std::vector<Triple> triples;
        for (auto [u, v] : pairs_) {
            const int w = slot(u, v);
            triples.push_back({u, v, w});
            triples.push_back({lam_(w), lam_(v), lam_(u)});
        }
        TrianglePresentation tp(geometry_, lam_, std::move(triples));
        if (!validate(tp).all_pass()) return;
        result_.presentations.push_back(std::move(tp));
        if (result_.presentations.size() >= opts_.limit) stopped_ = true;
    }

    std::shared_ptr<const Geometry> geometry_;
    const Geometry& g_;
    const Correlation& lam_;
    SearchOptions opts_;
    int size_;
    std::vector<std::pair<int, int>> pairs_;
    std::vector<int> assigned_;
    std::vector<std::vector<Placed>> by_third_;
    std::vector<Placed> trail_;
    SearchResult result_;
    bool stopped_ = false;
};

int parse_id(const std::string& tok, int line, int size) {
    int v = 0;
    try {
        std::size_t pos = 0;
        v = std::stoi(tok, &pos);
        if (pos != tok.size()) throw ParseError("expected id, got '" + tok + "'", line);
    } catch (const std::logic_error&) {
        throw ParseError("expected id, got '" + tok + "'", line);
    }
    if (v < 0 || v >= size) throw ParseError("subspace id " + tok + " out of range 0.." + std::to_string(size - 1), line);
    return v;
}

}  // namespace

SearchResult search(std::shared_ptr<const Geometry> geometry, const Correlation& lambda, const SearchOptions& options) {
    if (options.limit == 0) return SearchResult{{}, false, 0};
    return Backtracker(std::move(geometry), lambda, options).run();
}

TrianglePresentation read_presentation(std::istream& in) {
    LineReader reader(in);
    const GeometrySpec spec = read_geometry_spec(reader);
    const int header_end = reader.line();
    std::shared_ptr<const Geometry> geometry;
    std::optional<Correlation> lambda;
    try {
        auto [g, l] = realize(spec);
        geometry = g;
        lambda = l;
    } catch (const ValidationError& e) {
        throw ParseError(e.what(), header_end);
    }
    std::vector<std::string> tok;
    if (!reader.next(tok) || tok.size() != 1 || tok[0] != "triples:")
        throw ParseError("expected 'triples:'", reader.line());
    std::vector<Triple> triples;
    while (reader.next(tok)) {
        if (tok.size() != 3) throw ParseError("expected 'u v w'", reader.line());
        const int size = geometry->size();
        triples.push_back({parse_id(tok[0], reader.line(), size), parse_id(tok[1], reader.line(), size),
                           parse_id(tok[2], reader.line(), size)});
    }
    return TrianglePresentation(geometry, *lambda, std::move(triples));
}

TrianglePresentation load_presentation(std::istream& in) {
    TrianglePresentation tp = read_presentation(in);
    const auto rep = validate(tp);
    if (!rep.all_pass()) {
        std::string msg = "presentation fails axiom";
        for (const auto& r : rep.results)
            if (!r.pass) msg += std::string(" (") + axiom_letter(r.axiom) + "): " + r.detail + ";";
        throw ValidationError(msg);
    }
    return tp;
}

TrianglePresentation load_presentation_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    return load_presentation(in);
}

void save_presentation(std::ostream& out, const TrianglePresentation& tp) {
    write_geometry_header(out, tp.geometry(), tp.lambda());
    out << "triples:\n";
    for (const auto& t : tp.triples()) out << t.u << ' ' << t.v << ' ' << t.w << '\n';
}

}  // namespace atilde
