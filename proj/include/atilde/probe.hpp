#pragma once

#include "atilde/word.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace atilde {

/// Simple undirected graph on vertices 0..n-1. Loops and repeated edges are
/// dropped on construction; adjacency lists are sorted.
class FiniteGraph {
public:
    FiniteGraph(int vertices, const std::vector<std::pair<int, int>>& edges);

    int vertices() const { return static_cast<int>(adj_.size()); }
    const std::vector<int>& neighbors(int v) const { return adj_[v]; }
    /// Sorted (i, j) with i < j.
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }

    /// Unit-weight distances from source; -1 where unreachable.
    std::vector<int> bfs(int source) const;

    static FiniteGraph from_ball(const Ball& ball);

private:
    std::vector<std::vector<int>> adj_;
    std::vector<std::pair<int, int>> edges_;
};

/// Accepts "graph v e" or "v e", then e lines "i j".
FiniteGraph read_graph(std::istream& in);
FiniteGraph read_graph_file(const std::string& path);
void write_graph(std::ostream& out, const FiniteGraph& g);

/// Distance between graph vertices used when measuring thinness.
class Metric {
public:
    virtual ~Metric() = default;
    virtual int distance(int u, int v) const = 0;
};

/// Path metric of the graph itself; BFS rows are cached.
class GraphMetric : public Metric {
public:
    explicit GraphMetric(const FiniteGraph& g) : g_(g) {}
    int distance(int u, int v) const override;

private:
    const FiniteGraph& g_;
    mutable std::mutex mutex_;
    mutable std::unordered_map<int, std::shared_ptr<const std::vector<int>>> rows_;
};

/// Word metric of the group on the vertices of a Cayley ball; exact even when a
/// geodesic between two ball vertices leaves the ball.
class CayleyMetric : public Metric {
public:
    CayleyMetric(const TriangleGroup& group, const Ball& ball) : group_(group), ball_(ball) {}
    int distance(int u, int v) const override;

private:
    const TriangleGroup& group_;
    const Ball& ball_;
};

/// All shortest a-b paths as vertex sequences, lexicographic order. Throws
/// CapExceeded naming the pair when there are more than cap.
std::vector<std::vector<int>> all_geodesics(const FiniteGraph& g, int a, int b, std::size_t cap);

/// Lexicographically first shortest path, or empty if b is unreachable.
std::vector<int> first_geodesic(const FiniteGraph& g, int a, int b);

enum class BigonScope {
    FromBasepoint,  // pairs (basepoint, v) with d(basepoint, v) ≤ radius
    AllPairs,       // all pairs inside the radius ball
};

struct BigonWitness {
    int a = -1, b = -1;
    std::vector<int> sigma, sigma_prime;
    int hausdorff = 0;  // K of this pair of geodesics
    int pointwise = 0;  // K' of this pair
};

struct ThinnessReport {
    int radius = 0;
    int basepoint = 0;
    std::size_t vertices_in_ball = 0;

    // bigons
    std::size_t pairs_probed = 0;
    std::size_t pairs_skipped = 0;  // graph distance differed from the metric
    std::size_t geodesics = 0;      // total over pairs
    int bigon_K = 0;
    int pointwise_Kprime = 0;
    BigonWitness witness_K;
    BigonWitness witness_Kprime;
    std::size_t kprime_violations = 0;  // pairs with K' > 2K

    // triangles
    std::size_t triangles = 0;
    std::size_t sides_skipped = 0;
    bool exhaustive = true;
    std::uint64_t seed = 0;
    int triangle_delta = 0;
    std::vector<int> witness_triangle;  // a, b, c
    std::vector<std::vector<int>> witness_sides;
};

struct BigonOptions {
    int basepoint = 0;
    int radius = 0;
    std::size_t geodesic_cap = 1000000;  // per pair
    BigonScope scope = BigonScope::FromBasepoint;
    unsigned workers = 1;
};

/// Maxima over every pair of geodesics with common endpoints in scope of the
/// one-sided Hausdorff distance (K) and the synchronized distance max_t
/// d(σ(t), σ'(t)) (K'). Finite-ball values are lower bounds for the infinite graph.
ThinnessReport bigon_thinness(const FiniteGraph& g, const Metric& metric, const BigonOptions& options);

struct TriangleOptions {
    int basepoint = 0;
    int radius = 0;
    std::size_t sample = 2000;  // triangles; exhaustive when the pair count is at most this
    std::uint64_t seed = 1;
    unsigned workers = 1;
};

/// Triangles (basepoint, b, c) with b, c in the ball; each side is the
/// lexicographically first graph geodesic. δ is the largest distance from a
/// side vertex to the union of the other two sides.
ThinnessReport triangle_thinness(const FiniteGraph& g, const Metric& metric, const TriangleOptions& options);

}  // namespace atilde
