#pragma once

#include "atilde/field.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <variant>
#include <vector>

namespace atilde {

class Geometry;

/// Element of the projective geometry: a nontrivial proper subspace of V = GF(q)^{n+1}.
/// A lightweight handle (geometry, id); the basis lives in the geometry.
class Subspace {
public:
    Subspace(const Geometry& geometry, int id);

    int id() const { return id_; }
    int dim() const;
    /// Reduced row echelon basis, dim() rows of n+1 entries, row-major.
    std::span<const std::uint8_t> basis() const;
    const Geometry& geometry() const { return *geometry_; }

    bool operator==(const Subspace& other) const {
        return geometry_ == other.geometry_ && id_ == other.id_;
    }

private:
    const Geometry* geometry_;
    int id_;
};

/// The whole space V. Not a member of the geometry.
struct FullSpace {
    bool operator==(const FullSpace&) const = default;
};

/// Result of a join: either an element of the geometry or V itself.
using Span = std::variant<FullSpace, Subspace>;

inline bool is_full(const Span& s) { return std::holds_alternative<FullSpace>(s); }

/// Containment between two subspaces x and y.
struct Incidence {
    bool incident = false;      // x ⊆ y or y ⊆ x
    bool x_strictly_in_y = false;
    bool y_strictly_in_x = false;
};

/// The five mutually exclusive relations between two elements a, b of the geometry.
enum class Relation : std::uint8_t {
    Equal,        // a = b
    SpanFull,     // a + b = V
    Contains,     // a ⊋ b
    ContainedIn,  // a ⊊ b
    Skew,         // distinct, nonincident, a + b ≠ V
};

/// Enumerated projective geometry Π(V) for V = GF(q)^{n+1}, with precomputed
/// join and relation tables. Subspace ids follow the canonical order: dimension
/// ascending, then reduced echelon bases compared lexicographically.
class Geometry {
public:
    static constexpr int kFull = -1;

    static std::shared_ptr<const Geometry> enumerate(int n, const FieldSpec& field);

    int n() const { return n_; }
    int ambient_dim() const { return n_ + 1; }
    const GaloisField& field() const { return field_; }
    int q() const { return field_.order(); }
    int size() const { return static_cast<int>(dims_.size()); }

    int dim(int id) const { return dims_[id]; }
    std::span<const std::uint8_t> basis(int id) const;
    Subspace subspace(int id) const;
    std::vector<Subspace> subspaces() const;

    /// Join of two ids; kFull when the span is V.
    int join(int a, int b) const { return join_[a * size() + b]; }
    /// small ⊆ big (non-strict).
    bool contains(int big, int small) const { return join(big, small) == big; }
    Relation relation(int a, int b) const { return relation_[a * size() + b]; }
    /// Standard dot-product orthogonal complement.
    int perp(int id) const { return perp_[id]; }

    /// Canonical id of the span of the given rows (each of n+1 entries), kFull for V.
    /// Throws ValidationError when the rows span the zero subspace.
    int span_of(const std::vector<std::vector<std::uint8_t>>& rows) const;
    /// Id of the subspace whose canonical basis equals the given rows, if any.
    std::optional<int> find(const std::vector<std::uint8_t>& rref_rows) const;

    /// Image of a subspace under an invertible (n+1)x(n+1) matrix acting on column vectors.
    int apply(const std::vector<std::vector<std::uint8_t>>& matrix, int id) const;

    /// Number of dim-1 subspaces incident with any dim-2 subspace (equals q + 1).
    int points_per_line() const;

private:
    Geometry(int n, const FieldSpec& field);

    int n_;
    GaloisField field_;
    std::vector<int> dims_;
    std::vector<std::vector<std::uint8_t>> bases_;
    std::map<std::vector<std::uint8_t>, int> index_;
    std::vector<int> join_;
    std::vector<Relation> relation_;
    std::vector<int> perp_;
};

/// Row-reduces the matrix in place to reduced row echelon form, drops zero rows,
/// and returns the rank.
int rref(const GaloisField& field, std::vector<std::vector<std::uint8_t>>& rows);

Span sum(const Subspace& x, const Subspace& y);
Incidence incident(const Subspace& x, const Subspace& y);
/// x +' y: the join when x, y are distinct and nonincident, otherwise nothing.
std::optional<Span> prime_sum(const Subspace& x, const Subspace& y);

/// Dimension-reversing involution of the geometry, stored as a permutation of ids.
class Correlation {
public:
    /// Validates involution and dimension reversal; throws ValidationError naming
    /// the first offending id pair.
    static Correlation from_permutation(const Geometry& geometry, std::vector<int> map);

    const Geometry& geometry() const { return *geometry_; }
    int operator()(int id) const { return map_[id]; }
    Subspace operator()(const Subspace& x) const;
    const std::vector<int>& map() const { return map_; }

    /// y ⊆ x implies λ(x) ⊆ λ(y) for all x, y (true for perp; not required in general).
    bool reverses_incidence() const;
    bool is_perp() const;

    bool operator==(const Correlation& other) const {
        return geometry_ == other.geometry_ && map_ == other.map_;
    }

private:
    Correlation(const Geometry& geometry, std::vector<int> map)
        : geometry_(&geometry), map_(std::move(map)) {}

    const Geometry* geometry_;
    std::vector<int> map_;
};

Correlation perp_correlation(const Geometry& geometry);

/// For n = 2: the correlation induced by a Singer cycle σ of PG(2, q). With
/// p_i = σ^i(p_0) and ℓ_0 the kernel of the trace form, λ(p_i) = σ^i(ℓ_0) and λ
/// maps each line back to its point. Not incidence-reversing.
Correlation singer_correlation(const Geometry& geometry);

/// Contents of a geometry spec file.
struct GeometrySpec {
    int n = 2;
    FieldSpec field;
    enum class Lambda { Perp, Singer, Perm };
    Lambda lambda = Lambda::Perp;
    std::vector<int> lambda_map;  // full permutation for Lambda::Perm
};

/// Line-oriented reader shared by the geometry and presentation formats: strips
/// '#' comments and blank lines, tracks line numbers.
class LineReader {
public:
    explicit LineReader(std::istream& in) : in_(in) {}
    /// Next non-empty line split into tokens; false at end of input.
    bool next(std::vector<std::string>& tokens);
    /// Puts the last line back so the next call returns it again.
    void unread() { pushed_back_ = true; }
    int line() const { return line_; }

private:
    std::istream& in_;
    int line_ = 0;
    bool pushed_back_ = false;
    std::vector<std::string> last_;
};

/// Parses the geometry header (and optional modulus / lambda block). Stops before
/// any line it does not own (e.g. "triples:").
GeometrySpec read_geometry_spec(LineReader& reader);
GeometrySpec read_geometry_spec(std::istream& in);

/// Builds the geometry and correlation described by a spec.
std::pair<std::shared_ptr<const Geometry>, Correlation> realize(const GeometrySpec& spec);

/// Writes the header lines; lambda is written as "perp" when it equals the perp map.
void write_geometry_header(std::ostream& out, const Geometry& geometry, const Correlation& lambda);
/// Header followed by a commented listing "# id dim basis-rows" of every subspace.
void write_geometry_listing(std::ostream& out, const Geometry& geometry);

}  // namespace atilde
