#include "atilde/probe.hpp"

#include "atilde/errors.hpp"
#include "atilde/geometry.hpp"
#include "atilde/parallel.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <limits>
#include <ostream>
#include <random>
#include <stdexcept>

namespace atilde {

FiniteGraph::FiniteGraph(int vertices, const std::vector<std::pair<int, int>>& edges) : adj_(vertices) {
    if (vertices < 0) throw std::invalid_argument("vertex count must be non-negative");
    for (auto [i, j] : edges) {
        if (i < 0 || j < 0 || i >= vertices || j >= vertices)
            throw ValidationError("edge " + std::to_string(i) + " " + std::to_string(j) + " has an endpoint out of range");
        if (i == j) continue;
        edges_.emplace_back(std::min(i, j), std::max(i, j));
    }
    std::sort(edges_.begin(), edges_.end());
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
    for (auto [i, j] : edges_) {
        adj_[i].push_back(j);
        adj_[j].push_back(i);
    }
    for (auto& a : adj_) std::sort(a.begin(), a.end());
}

std::vector<int> FiniteGraph::bfs(int source) const {
    std::vector<int> dist(adj_.size(), -1);
    std::deque<int> queue{source};
    dist[source] = 0;
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        for (int w : adj_[v])
            if (dist[w] < 0) {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
    }
    return dist;
}

FiniteGraph FiniteGraph::from_ball(const Ball& ball) {
    return FiniteGraph(static_cast<int>(ball.vertices.size()), ball.edges);
}

FiniteGraph read_graph(std::istream& in) {
    LineReader reader(in);
    std::vector<std::string> tok;
    auto to_int = [&](const std::string& s) {
        try {
            std::size_t used = 0;
            long v = std::stol(s, &used);
            if (used != s.size() || v < 0 || v > std::numeric_limits<int>::max()) throw std::invalid_argument(s);
            return static_cast<int>(v);
        } catch (const std::exception&) {
            throw ParseError("expected a non-negative integer, got '" + s + "'", reader.line());
        }
    };
    if (!reader.next(tok)) throw ParseError("empty graph file", reader.line());
    if (!tok.empty() && tok[0] == "graph") tok.erase(tok.begin());
    if (tok.size() != 2) throw ParseError("expected 'graph v e'", reader.line());
    const int v = to_int(tok[0]);
    const int e = to_int(tok[1]);
    std::vector<std::pair<int, int>> edges;
    for (int k = 0; k < e; ++k) {
        if (!reader.next(tok)) throw ParseError("expected " + std::to_string(e) + " edge lines", reader.line());
        if (tok.size() != 2) throw ParseError("edge line needs two vertex ids", reader.line());
        int i = to_int(tok[0]), j = to_int(tok[1]);
        if (i >= v || j >= v) throw ParseError("edge endpoint out of range", reader.line());
        edges.emplace_back(i, j);
    }
    if (reader.next(tok)) throw ParseError("unexpected trailing content", reader.line());
    return FiniteGraph(v, edges);
}

FiniteGraph read_graph_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return read_graph(in);
}

void write_graph(std::ostream& out, const FiniteGraph& g) {
    out << "graph " << g.vertices() << ' ' << g.edges().size() << '\n';
    for (auto [i, j] : g.edges()) out << i << ' ' << j << '\n';
}

int GraphMetric::distance(int u, int v) const {
    std::shared_ptr<const std::vector<int>> row;
    {
        std::lock_guard lock(mutex_);
        auto it = rows_.find(u);
        if (it != rows_.end()) row = it->second;
    }
    if (!row) {
        row = std::make_shared<const std::vector<int>>(g_.bfs(u));
        std::lock_guard lock(mutex_);
        rows_.emplace(u, row);
    }
    return (*row)[v];
}

int CayleyMetric::distance(int u, int v) const {
    thread_local std::vector<int> buf;
    const auto& a = ball_.vertices[u].letters();
    const auto& b = ball_.vertices[v].letters();
    buf.clear();
    for (auto it = a.rbegin(); it != a.rend(); ++it) buf.push_back(group_.lambda(*it));
    for (int x : b) group_.multiply(buf, x);
    return static_cast<int>(buf.size());
}

std::vector<int> first_geodesic(const FiniteGraph& g, int a, int b) {
    std::vector<int> db = g.bfs(b);
    if (db[a] < 0) return {};
    std::vector<int> path{a};
    int v = a;
    while (v != b) {
        for (int w : g.neighbors(v))
            if (db[w] == db[v] - 1) {
                v = w;
                break;
            }
        path.push_back(v);
    }
    return path;
}

std::vector<std::vector<int>> all_geodesics(const FiniteGraph& g, int a, int b, std::size_t cap) {
    std::vector<int> db = g.bfs(b);
    if (db[a] < 0) throw std::invalid_argument("vertices " + std::to_string(a) + " and " + std::to_string(b) +
                                               " are in different components");
    // count first so the cap fails before any enumeration
    std::vector<std::size_t> count(g.vertices(), 0);
    std::vector<int> order;
    for (int v = 0; v < g.vertices(); ++v)
        if (db[v] >= 0 && db[v] <= db[a]) order.push_back(v);
    std::sort(order.begin(), order.end(), [&](int x, int y) { return db[x] < db[y]; });
    for (int v : order) {
        if (v == b) {
            count[v] = 1;
            continue;
        }
        std::size_t c = 0;
        for (int w : g.neighbors(v))
            if (db[w] == db[v] - 1) c = std::min(cap + 1, c + count[w]);
        count[v] = c;
    }
    if (count[a] > cap)
        throw CapExceeded("more than " + std::to_string(cap) + " geodesics between " + std::to_string(a) + " and " +
                          std::to_string(b));

    std::vector<std::vector<int>> out;
    std::vector<int> path{a};
    auto dfs = [&](auto&& self, int v) -> void {
        if (v == b) {
            out.push_back(path);
            return;
        }
        for (int w : g.neighbors(v))
            if (db[w] == db[v] - 1) {
                path.push_back(w);
                self(self, w);
                path.pop_back();
            }
    };
    dfs(dfs, a);
    return out;
}

namespace {

struct PairResult {
    bool probed = false;
    bool skipped = false;
    std::size_t geodesics = 0;
    int K = 0;
    int Kp = 0;
    int p_star = -1;                  // vertex of σ farthest from some σ'
    std::vector<int> sigma_prime;     // that σ'
    int u_star = -1, v_star = -1;     // same-layer pair realizing K'
};

// Exact maxima over all pairs of a-b geodesics without enumerating them.
PairResult probe_pair(const FiniteGraph& g, const Metric& metric, const std::vector<int>& da, int a, int b,
                      std::size_t cap) {
    PairResult r;
    const int d = da[b];
    if (a == b || d < 0) return r;
    r.probed = true;
    if (metric.distance(a, b) != d) {
        r.skipped = true;
        return r;
    }

    // Interval I(a, b): walk down from b through neighbors one step closer to a.
    std::unordered_map<int, int> index;
    std::vector<int> I;
    std::vector<int> stack{b};
    index.emplace(b, 0);
    I.push_back(b);
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int w : g.neighbors(v))
            if (da[w] == da[v] - 1 && !index.count(w)) {
                index.emplace(w, static_cast<int>(I.size()));
                I.push_back(w);
                stack.push_back(w);
            }
    }
    std::sort(I.begin(), I.end(), [&](int x, int y) { return da[x] != da[y] ? da[x] < da[y] : x < y; });
    for (std::size_t i = 0; i < I.size(); ++i) index[I[i]] = static_cast<int>(i);
    const int n = static_cast<int>(I.size());

    std::vector<std::vector<int>> succ(n);
    for (int i = 0; i < n; ++i)
        for (int w : g.neighbors(I[i])) {
            auto it = index.find(w);
            if (it != index.end() && da[w] == da[I[i]] + 1) succ[i].push_back(it->second);
        }

    std::vector<std::size_t> paths(n, 0);
    paths[0] = 1;  // I[0] == a
    for (int i = 0; i < n; ++i)
        for (int j : succ[i]) paths[j] = std::min(cap + 1, paths[j] + paths[i]);
    r.geodesics = paths[n - 1];
    if (r.geodesics > cap)
        throw CapExceeded("more than " + std::to_string(cap) + " geodesics between " + std::to_string(a) + " and " +
                          std::to_string(b));

    std::vector<int> D(static_cast<std::size_t>(n) * n, 0);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) D[i * n + j] = D[j * n + i] = metric.distance(I[i], I[j]);

    // K': widest layer
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n && da[I[j]] == da[I[i]]; ++j)
            if (D[i * n + j] > r.Kp) {
                r.Kp = D[i * n + j];
                r.u_star = I[i];
                r.v_star = I[j];
            }

    // K: for each p, the geodesic that stays farthest from p (bottleneck DP).
    std::vector<int> best(n), choice(n);
    for (int p = 0; p < n; ++p) {
        for (int i = n - 1; i >= 0; --i) {
            int via = succ[i].empty() ? std::numeric_limits<int>::max() : -1;
            choice[i] = -1;
            for (int j : succ[i])
                if (best[j] > via) {
                    via = best[j];
                    choice[i] = j;
                }
            best[i] = std::min(D[p * n + i], via);
        }
        if (best[0] > r.K || r.p_star < 0) {
            r.K = best[0];
            r.p_star = I[p];
            r.sigma_prime.clear();
            for (int i = 0; i >= 0; i = choice[i]) r.sigma_prime.push_back(I[i]);
        }
    }
    if (r.K == 0) r.p_star = -1;
    return r;
}

int hausdorff_one_sided(const Metric& m, const std::vector<int>& s, const std::vector<int>& t) {
    int h = 0;
    for (int p : s) {
        int best = std::numeric_limits<int>::max();
        for (int q : t) best = std::min(best, m.distance(p, q));
        h = std::max(h, best);
    }
    return h;
}

void fill_witness(const Metric& m, BigonWitness& w) {
    w.hausdorff = std::max(hausdorff_one_sided(m, w.sigma, w.sigma_prime), hausdorff_one_sided(m, w.sigma_prime, w.sigma));
    w.pointwise = 0;
    for (std::size_t t = 0; t < w.sigma.size() && t < w.sigma_prime.size(); ++t)
        w.pointwise = std::max(w.pointwise, m.distance(w.sigma[t], w.sigma_prime[t]));
}

std::vector<int> geodesic_through(const FiniteGraph& g, int a, int p, int b) {
    std::vector<int> s = first_geodesic(g, a, p);
    std::vector<int> t = first_geodesic(g, p, b);
    s.insert(s.end(), t.begin() + 1, t.end());
    return s;
}

std::vector<int> ball_vertices(const FiniteGraph& g, int basepoint, int radius, std::vector<int>& dist) {
    if (basepoint < 0 || basepoint >= g.vertices()) throw std::invalid_argument("basepoint out of range");
    if (radius < 0) throw std::invalid_argument("radius must be non-negative");
    dist = g.bfs(basepoint);
    std::vector<int> out;
    for (int v = 0; v < g.vertices(); ++v)
        if (dist[v] >= 0 && dist[v] <= radius) out.push_back(v);
    return out;
}

}  // namespace

ThinnessReport bigon_thinness(const FiniteGraph& g, const Metric& metric, const BigonOptions& o) {
    ThinnessReport rep;
    rep.radius = o.radius;
    rep.basepoint = o.basepoint;
    std::vector<int> d0;
    std::vector<int> ball = ball_vertices(g, o.basepoint, o.radius, d0);
    rep.vertices_in_ball = ball.size();

    struct Item {
        int a;
        std::vector<PairResult> results;
        std::vector<int> partners;
    };
    std::vector<Item> items;
    if (o.scope == BigonScope::FromBasepoint) {
        items.push_back({o.basepoint, {}, ball});
    } else {
        for (std::size_t i = 0; i < ball.size(); ++i)
            items.push_back({ball[i], {}, std::vector<int>(ball.begin() + i + 1, ball.end())});
    }

    // One task per (a, b) pair keeps the work balanced for the basepoint scope.
    std::vector<std::pair<std::size_t, std::size_t>> tasks;
    for (std::size_t i = 0; i < items.size(); ++i) {
        items[i].results.resize(items[i].partners.size());
        for (std::size_t k = 0; k < items[i].partners.size(); ++k) tasks.emplace_back(i, k);
    }
    std::vector<std::shared_ptr<const std::vector<int>>> rows(items.size());
    for (std::size_t i = 0; i < items.size(); ++i)
        rows[i] = std::make_shared<const std::vector<int>>(items[i].a == o.basepoint ? d0 : g.bfs(items[i].a));
    parallel_for(tasks.size(), o.workers, [&](std::size_t t) {
        auto [i, k] = tasks[t];
        items[i].results[k] = probe_pair(g, metric, *rows[i], items[i].a, items[i].partners[k], o.geodesic_cap);
    });

    const PairResult* best_K = nullptr;
    const PairResult* best_Kp = nullptr;
    int aK = -1, bK = -1, aKp = -1, bKp = -1;
    for (const Item& it : items)
        for (std::size_t k = 0; k < it.partners.size(); ++k) {
            const PairResult& r = it.results[k];
            if (!r.probed) continue;
            if (r.skipped) {
                ++rep.pairs_skipped;
                continue;
            }
            ++rep.pairs_probed;
            rep.geodesics += r.geodesics;
            if (r.Kp > 2 * r.K) ++rep.kprime_violations;
            if (r.K > rep.bigon_K) {
                rep.bigon_K = r.K;
                best_K = &r;
                aK = it.a;
                bK = it.partners[k];
            }
            if (r.Kp > rep.pointwise_Kprime) {
                rep.pointwise_Kprime = r.Kp;
                best_Kp = &r;
                aKp = it.a;
                bKp = it.partners[k];
            }
        }

    if (best_K) {
        BigonWitness& w = rep.witness_K;
        w.a = aK;
        w.b = bK;
        w.sigma = geodesic_through(g, aK, best_K->p_star, bK);
        w.sigma_prime = best_K->sigma_prime;
        fill_witness(metric, w);
        if (w.pointwise > 2 * w.hausdorff) ++rep.kprime_violations;
    }
    if (best_Kp) {
        BigonWitness& w = rep.witness_Kprime;
        w.a = aKp;
        w.b = bKp;
        w.sigma = geodesic_through(g, aKp, best_Kp->u_star, bKp);
        w.sigma_prime = geodesic_through(g, aKp, best_Kp->v_star, bKp);
        fill_witness(metric, w);
        if (w.pointwise > 2 * w.hausdorff) ++rep.kprime_violations;
    }
    return rep;
}

ThinnessReport triangle_thinness(const FiniteGraph& g, const Metric& metric, const TriangleOptions& o) {
    ThinnessReport rep;
    rep.radius = o.radius;
    rep.basepoint = o.basepoint;
    rep.seed = o.seed;
    std::vector<int> d0;
    std::vector<int> ball = ball_vertices(g, o.basepoint, o.radius, d0);
    rep.vertices_in_ball = ball.size();

    std::vector<std::pair<int, int>> pairs;
    const std::size_t m = ball.size();
    const std::size_t total = m * (m - 1) / 2;
    if (total <= o.sample) {
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = i + 1; j < m; ++j) pairs.emplace_back(ball[i], ball[j]);
    } else {
        rep.exhaustive = false;
        std::mt19937_64 rng(o.seed);
        while (pairs.size() < o.sample) {
            // plain modulo keeps the sequence identical across standard libraries
            std::size_t i = rng() % m, j = rng() % m;
            if (i == j) continue;
            pairs.emplace_back(ball[std::min(i, j)], ball[std::max(i, j)]);
        }
    }

    struct TriResult {
        bool skipped = false;
        int delta = 0;
        std::vector<std::vector<int>> sides;
    };
    std::vector<TriResult> results(pairs.size());
    const int a = o.basepoint;
    parallel_for(pairs.size(), o.workers, [&](std::size_t t) {
        auto [b, c] = pairs[t];
        TriResult& r = results[t];
        r.sides = {first_geodesic(g, a, b), first_geodesic(g, b, c), first_geodesic(g, c, a)};
        const int ends[3][2] = {{a, b}, {b, c}, {c, a}};
        for (int s = 0; s < 3; ++s)
            if (r.sides[s].empty() ||
                static_cast<int>(r.sides[s].size()) - 1 != metric.distance(ends[s][0], ends[s][1])) {
                r.skipped = true;
                return;
            }
        for (int s = 0; s < 3; ++s) {
            const auto& x = r.sides[(s + 1) % 3];
            const auto& y = r.sides[(s + 2) % 3];
            for (int p : r.sides[s]) {
                int near = std::numeric_limits<int>::max();
                for (int q : x) near = std::min(near, metric.distance(p, q));
                for (int q : y) near = std::min(near, metric.distance(p, q));
                r.delta = std::max(r.delta, near);
            }
        }
    });

    for (std::size_t t = 0; t < pairs.size(); ++t) {
        if (results[t].skipped) {
            ++rep.sides_skipped;
            continue;
        }
        ++rep.triangles;
        if (results[t].delta > rep.triangle_delta || rep.witness_triangle.empty()) {
            rep.triangle_delta = results[t].delta;
            rep.witness_triangle = {a, pairs[t].first, pairs[t].second};
            rep.witness_sides = results[t].sides;
        }
    }
    return rep;
}

}  // namespace atilde
