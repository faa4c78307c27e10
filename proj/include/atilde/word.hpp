#pragma once

#include "atilde/automaton.hpp"
#include "atilde/presentation.hpp"

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace atilde {

class TriangleGroup;

/// Element of Γ_T in normal form: a word u_1 ... u_ℓ in L (possibly empty).
/// Only a TriangleGroup can create one, so the letters are always in L.
class NormalForm {
public:
    const std::vector<int>& letters() const { return letters_; }
    std::size_t length() const { return letters_.size(); }
    bool empty() const { return letters_.empty(); }
    const TriangleGroup& group() const { return *group_; }

    bool operator==(const NormalForm& other) const {
        return group_ == other.group_ && letters_ == other.letters_;
    }
    /// Length-lexicographic order on letter ids.
    bool operator<(const NormalForm& other) const;

private:
    friend class TriangleGroup;
    NormalForm(const TriangleGroup* group, std::vector<int> letters)
        : group_(group), letters_(std::move(letters)) {}

    const TriangleGroup* group_;
    std::vector<int> letters_;
};

/// The word acceptor M: states Π ∪ {s0, s1}, accept set Π ∪ {s0}.
class Acceptor {
public:
    explicit Acceptor(const TrianglePresentation& tp);

    int s0() const { return s0_; }
    int s1() const { return s1_; }
    const Automaton& automaton() const { return dfa_; }
    /// Throws std::out_of_range on a letter outside Π.
    bool accepts(std::span<const int> word) const { return dfa_.accepts(word); }
    int step(int state, int letter) const { return dfa_.next(state, letter); }

private:
    int s0_;
    int s1_;
    Automaton dfa_;
};

/// One cascade rewrite at prefix position `level` (1-based): u_level · carry_in
/// becomes carry_out · v, with λ(u_level) + carry_in = λ(s).
struct CascadeStep {
    int level = 0;
    int u = 0;
    int carry_in = 0;
    int s = 0;
    int carry_out = 0;
    int v = 0;
};

enum class Ending { Append, Replace, Cancel };

/// Record of one right multiplication u · a_x.
struct RightMultTrace {
    std::string tag;             // "1", "2", "3", "4a".."4c", "5a".."5c"
    Relation relation = Relation::SpanFull;  // of λ(u_ℓ) and x; SpanFull when u is empty
    int length = 0;              // ℓ
    int double_prime_w = -1;     // case 4: (u_ℓ, x, λ(w)) ∈ T''
    std::vector<CascadeStep> steps;  // in order of descending level
    Ending ending = Ending::Append;
    int end_level = 0;           // Append: letters kept before the carry; Replace: replaced position
    int end_carry = -1;          // appended or absorbed carry
    int replacement = -1;        // new letter on Replace
    std::vector<Triple> triples;   // every triple consumed, in order
    /// u(t)^{-1} v(t) for t = 0 .. max(|u|, |v|); -1 is the identity, otherwise a generator id.
    std::vector<int> differences;

    int cascade_steps() const { return static_cast<int>(steps.size()); }
    int length_change() const;
};

/// Exact arithmetic in Γ_T via the one-letter extension rule.
class TriangleGroup {
public:
    /// Throws ValidationError if the presentation fails an axiom.
    explicit TriangleGroup(std::shared_ptr<const TrianglePresentation> tp);

    const TrianglePresentation& presentation() const { return *tp_; }
    const Geometry& geometry() const { return tp_->geometry(); }
    const Acceptor& acceptor() const { return acceptor_; }
    int generators() const { return geometry().size(); }
    int lambda(int x) const { return tp_->lambda()(x); }

    bool in_language(std::span<const int> word) const { return acceptor_.accepts(word); }

    NormalForm identity() const { return NormalForm(this, {}); }
    /// Wraps a word already in L; throws std::invalid_argument otherwise.
    NormalForm normal_form(std::vector<int> letters) const;

    /// Normal form of u · a_x, optionally with the full trace.
    NormalForm right_mult(const NormalForm& u, int x, RightMultTrace* trace = nullptr) const;
    /// In-place variant on a word known to be in L. No validation.
    void multiply(std::vector<int>& letters, int x, RightMultTrace* trace = nullptr) const;

    /// Left fold of right_mult from the identity.
    NormalForm reduce(std::span<const int> word) const;
    /// λ(u_ℓ) ... λ(u_1).
    NormalForm inverse(const NormalForm& u) const;
    /// |g^{-1} h|.
    int dist(const NormalForm& g, const NormalForm& h) const;

    /// λ-reversal of an arbitrary word.
    std::vector<int> reversal(std::span<const int> word) const;

private:
    void check_generator(int x) const;
    void check_same(const NormalForm& g) const;
    int required_third(int a, int b, const char* what) const;

    std::shared_ptr<const TrianglePresentation> tp_;
    Acceptor acceptor_;
};

/// Words of L with length ≤ max_len in length-lexicographic order, generated
/// by walking the acceptor.
std::vector<std::vector<int>> language_words(const TriangleGroup& group, int max_len);

/// Cayley ball: vertices in length-lexicographic order, sorted undirected edges.
struct Ball {
    std::vector<NormalForm> vertices;
    std::vector<std::pair<int, int>> edges;
    int radius = 0;

    int index_of(const NormalForm& g) const;
};

/// Throws CapExceeded if more than vertex_cap vertices would be produced.
Ball ball(const TriangleGroup& group, int radius, std::size_t vertex_cap);

/// "v e" then "i j" per edge.
void write_ball(std::ostream& out, const Ball& b);

}  // namespace atilde
