#include "atilde/automaton.hpp"

#include <ostream>
#include <stdexcept>
#include <string>

namespace atilde {

Automaton::Automaton(int states, int alphabet, int start)
    : states_(states), alphabet_(alphabet), start_(start),
      table_(static_cast<std::size_t>(states) * alphabet, 0), accept_(states, 0) {
    if (states <= 0 || alphabet <= 0 || start < 0 || start >= states)
        throw std::invalid_argument("automaton needs positive sizes and a valid start state");
}

int Automaton::run(std::span<const int> word) const {
    int s = start_;
    for (int a : word) {
        if (a < 0 || a >= alphabet_) throw std::out_of_range("letter " + std::to_string(a) + " not in alphabet");
        s = next(s, a);
    }
    return s;
}

void Automaton::write(std::ostream& out) const {
    out << "automaton " << states_ << ' ' << alphabet_ << ' ' << start_ << '\n';
    out << "accept";
    for (int s = 0; s < states_; ++s)
        if (accepting(s)) out << ' ' << s;
    out << '\n';
    for (int s = 0; s < states_; ++s)
        for (int a = 0; a < alphabet_; ++a) out << s << ' ' << a << ' ' << next(s, a) << '\n';
}

}  // namespace atilde
