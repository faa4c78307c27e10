#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace atilde {

/// Complete deterministic finite automaton over the alphabet 0..alphabet-1,
/// stored as a dense transition table.
class Automaton {
public:
    Automaton(int states, int alphabet, int start);

    int states() const { return states_; }
    int alphabet() const { return alphabet_; }
    int start() const { return start_; }

    int next(int state, int letter) const { return table_[state * alphabet_ + letter]; }
    void set(int state, int letter, int target) { table_[state * alphabet_ + letter] = target; }

    bool accepting(int state) const { return accept_[state] != 0; }
    void set_accepting(int state, bool on = true) { accept_[state] = on ? 1 : 0; }

    /// State reached after reading the word from the start state.
    int run(std::span<const int> word) const;
    bool accepts(std::span<const int> word) const { return accepting(run(word)); }

    /// "automaton S A start" header, "accept ..." line, then "s a t" transition lines.
    void write(std::ostream& out) const;

private:
    int states_;
    int alphabet_;
    int start_;
    std::vector<int> table_;
    std::vector<std::uint8_t> accept_;
};

}  // namespace atilde
