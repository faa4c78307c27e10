#pragma once

#include "atilde/automaton.hpp"
#include "atilde/word.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

namespace atilde {

/// A fellow-traveller failure: d(u(t), v(t)) > 1, or the trace disagrees with the metric.
struct FellowViolation {
    std::vector<int> u;
    int x = 0;
    int t = 0;
    int distance = 0;        // measured through dist()
    int trace_difference = -1;
    std::vector<int> measured;  // normal form of u(t)^{-1} v(t)
};

struct FellowReport {
    int max_len = 0;
    std::size_t words = 0;       // |{u ∈ L : |u| ≤ max_len}|
    std::size_t instances = 0;   // words × generators
    int max_k_trace = 0;         // largest difference length recorded in traces
    int max_k_dist = 0;          // largest d(u(t), v(t)) measured independently
    std::size_t nontrivial_instances = 0;  // instances whose difference leaves the identity before the end
    std::vector<int> witness_u;  // first such instance, if any
    int witness_x = -1;
    int witness_t = -1;
    std::vector<FellowViolation> violations;  // at most 16 kept
    std::size_t violation_count = 0;

    bool ok() const { return violation_count == 0 && max_k_dist <= 1 && max_k_trace <= 1; }
};

/// For every u ∈ L with |u| ≤ max_len and every x: compare the trace's word
/// differences with dist(u(t), v(t)) for all t.
FellowReport fellow_traveller_check(const TriangleGroup& group, int max_len, unsigned workers = 1);

/// Two-tape automaton accepting (u, v) iff u, v ∈ L and v = nf(u · a_x). States
/// are (difference, u-acceptor state, v-acceptor state) triples plus a fail state.
class Multiplier {
public:
    static constexpr int kPad = -1;
    /// Track state after the track has read its padding.
    int ended_state() const { return generators_ + 1; }

    struct State {
        int difference = -1;  // -1 identity, else a generator
        int u_state = 0;      // acceptor state, or ended_state()
        int v_state = 0;
    };

    int generator() const { return x_; }  // -1 for the equality recogniser
    const Automaton& automaton() const { return dfa_; }
    const std::vector<State>& states() const { return states_; }
    int fail_state() const { return fail_; }

    /// Letter of the pair alphabet for (a, b), each a generator or kPad.
    int encode(int a, int b) const { return (a + 1) * (generators_ + 1) + (b + 1); }
    std::pair<int, int> decode(int letter) const {
        return {letter / (generators_ + 1) - 1, letter % (generators_ + 1) - 1};
    }

    /// Runs the padded pair; words of different length are padded on the right.
    bool accepts(std::span<const int> u, std::span<const int> v) const;
    /// Distinct differences over live states, plus one for the fail state.
    std::size_t difference_states() const;

private:
    friend Multiplier build_multiplier(const TriangleGroup& group, int x);
    Multiplier(int generators, int x, Automaton dfa, std::vector<State> states, int fail)
        : generators_(generators), x_(x), dfa_(std::move(dfa)), states_(std::move(states)), fail_(fail) {}

    int generators_;
    int x_;
    Automaton dfa_;
    std::vector<State> states_;
    int fail_;
};

/// x = -1 builds the equality recogniser (accepts exactly (u, u), u ∈ L).
Multiplier build_multiplier(const TriangleGroup& group, int x);

/// Text export: header, accept list, then "state a b state'" for every
/// transition not into the fail state (pad written as -1).
void write_multiplier(std::ostream& out, const Multiplier& m);

using BigInt = boost::multiprecision::cpp_int;

struct GrowthSeries {
    std::vector<BigInt> coefficients;  // b_0 .. b_L
    std::vector<BigInt> cumulative;    // b_0 + ... + b_ℓ
    /// b_k = Σ_{i=1..d} c_i b_{k-i} for k ≥ d.
    std::vector<BigInt> recurrence;
    /// Σ b_k z^k = numerator / denominator, denominator = 1 - Σ c_i z^i.
    std::vector<BigInt> numerator;
    std::vector<BigInt> denominator;
    bool recurrence_verified = false;
};

/// Counts words of L by transfer matrix, and extracts the recurrence from the
/// Krylov sequence of the start vector with exact rational elimination.
GrowthSeries growth(const TriangleGroup& group, int max_len);

}  // namespace atilde
