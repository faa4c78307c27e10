#pragma once

#include "atilde/geometry.hpp"

#include <array>
#include <compare>
#include <cstddef>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

namespace atilde {

/// (u, v, w) with a_u a_v a_w = 1 in the group.
struct Triple {
    int u = 0, v = 0, w = 0;
    auto operator<=>(const Triple&) const = default;
};

/// A set T of triples over the geometry together with the correlation λ it is
/// meant to be compatible with. Construction only checks that ids are in range;
/// call validate() for the axioms.
class TrianglePresentation {
public:
    TrianglePresentation(std::shared_ptr<const Geometry> geometry, Correlation lambda,
                         std::vector<Triple> triples);

    const Geometry& geometry() const { return *geometry_; }
    const std::shared_ptr<const Geometry>& geometry_ptr() const { return geometry_; }
    const Correlation& lambda() const { return lambda_; }

    /// Sorted by (u, v, w), duplicates removed.
    const std::vector<Triple>& triples() const { return triples_; }
    /// T': dim(u) + dim(v) + dim(w) = n + 1.
    std::vector<Triple> half_prime() const;
    /// T'' = T \ T'.
    std::vector<Triple> half_double_prime() const;

    bool contains(const Triple& t) const;
    bool is_prime(const Triple& t) const;
    /// All w with (u, v, w) in T, ascending.
    const std::vector<int>& thirds(int u, int v) const { return thirds_[u * geometry_->size() + v]; }
    /// The unique w with (u, v, w) in T, or -1.
    int third(int u, int v) const {
        const auto& t = thirds(u, v);
        return t.size() == 1 ? t.front() : -1;
    }

private:
    std::shared_ptr<const Geometry> geometry_;
    Correlation lambda_;
    std::vector<Triple> triples_;
    std::vector<std::vector<int>> thirds_;
};

enum class Axiom { A, B, C, D, E, F };

char axiom_letter(Axiom a);

struct AxiomResult {
    Axiom axiom = Axiom::A;
    bool pass = true;
    std::vector<int> witness;  // first violating tuple, in scan order
    std::string detail;
};

struct ValidationReport {
    std::array<AxiomResult, 6> results;

    bool all_pass() const;
    const AxiomResult& operator[](Axiom a) const { return results[static_cast<int>(a)]; }
};

/// Checks axioms (A)-(F) independently. (A) is checked in both directions over all
/// ordered pairs; (F) by exhaustive scan over pairs of T' triples whose third
/// letters are u and λ(u).
ValidationReport validate(const TrianglePresentation& tp);

struct SearchOptions {
    std::size_t limit = 1;       // stop after this many presentations
    std::size_t node_limit = 0;  // 0 = unbounded
};

struct SearchResult {
    std::vector<TrianglePresentation> presentations;
    bool exhausted = false;  // the whole tree was explored
    std::size_t nodes = 0;
};

/// Backtracking over the ordered pairs (u, v) with λ(u) ⊋ v in (u, v) order; each
/// choice of w places the whole (B)-orbit, T'' is the (D)-image of T', and (F) is
/// checked as soon as both premises and a conclusion pair are placed. Every
/// returned presentation passes validate().
SearchResult search(std::shared_ptr<const Geometry> geometry, const Correlation& lambda,
                    const SearchOptions& options = {});

/// Reads a presentation file without checking the axioms.
TrianglePresentation read_presentation(std::istream& in);
/// Reads a presentation file and rejects it unless all axioms hold.
TrianglePresentation load_presentation(std::istream& in);
TrianglePresentation load_presentation_file(const std::string& path);
/// Canonical form: geometry header, then "triples:" and the sorted triples.
void save_presentation(std::ostream& out, const TrianglePresentation& tp);

}  // namespace atilde
