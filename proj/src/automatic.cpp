#include "atilde/automatic.hpp"

#include "atilde/parallel.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <stdexcept>
#include <tuple>

namespace atilde {

namespace {

struct WordResult {
    int max_k_trace = 0;
    int max_k_dist = 0;
    std::size_t nontrivial = 0;
    int first_nontrivial_x = -1;
    int first_nontrivial_t = -1;
    std::vector<FellowViolation> violations;
    std::size_t violation_count = 0;
};

WordResult check_word(const TriangleGroup& G, const std::vector<int>& u) {
    WordResult r;
    NormalForm nu = G.normal_form(u);
    RightMultTrace tr;
    std::vector<int> diff;
    for (int x = 0; x < G.generators(); ++x) {
        NormalForm v = G.right_mult(nu, x, &tr);
        const int n = static_cast<int>(tr.differences.size()) - 1;
        bool counted = false;
        for (int t = 0; t <= n; ++t) {
            // u(t)^{-1} v(t), computed from scratch
            diff = G.reversal(std::span<const int>(u.data(), std::min<std::size_t>(t, u.size())));
            for (std::size_t k = 0; k < std::min<std::size_t>(t, v.length()); ++k) G.multiply(diff, v.letters()[k]);
            const int d = static_cast<int>(diff.size());
            const int recorded = tr.differences[t];
            r.max_k_dist = std::max(r.max_k_dist, d);
            if (recorded >= 0) r.max_k_trace = 1;
            bool agrees = recorded < 0 ? d == 0 : (d == 1 && diff[0] == recorded);
            if (d > 1 || !agrees) {
                ++r.violation_count;
                if (r.violations.size() < 16) r.violations.push_back({u, x, t, d, recorded, diff});
            }
            if (t < n && recorded >= 0 && !counted) {
                counted = true;
                ++r.nontrivial;
                if (r.first_nontrivial_x < 0) {
                    r.first_nontrivial_x = x;
                    r.first_nontrivial_t = t;
                }
            }
        }
    }
    return r;
}

}  // namespace

FellowReport fellow_traveller_check(const TriangleGroup& group, int max_len, unsigned workers) {
    FellowReport report;
    report.max_len = max_len;
    std::vector<std::vector<int>> words = language_words(group, max_len);
    report.words = words.size();
    report.instances = words.size() * static_cast<std::size_t>(group.generators());

    std::vector<WordResult> results(words.size());
    parallel_for(words.size(), workers, [&](std::size_t i) { results[i] = check_word(group, words[i]); });

    for (std::size_t i = 0; i < words.size(); ++i) {
        WordResult& r = results[i];
        report.max_k_trace = std::max(report.max_k_trace, r.max_k_trace);
        report.max_k_dist = std::max(report.max_k_dist, r.max_k_dist);
        report.nontrivial_instances += r.nontrivial;
        if (report.witness_x < 0 && r.first_nontrivial_x >= 0) {
            report.witness_u = words[i];
            report.witness_x = r.first_nontrivial_x;
            report.witness_t = r.first_nontrivial_t;
        }
        report.violation_count += r.violation_count;
        for (auto& v : r.violations)
            if (report.violations.size() < 16) report.violations.push_back(std::move(v));
    }
    return report;
}

bool Multiplier::accepts(std::span<const int> u, std::span<const int> v) const {
    const std::size_t n = std::max(u.size(), v.size());
    int s = dfa_.start();
    for (std::size_t i = 0; i < n; ++i) {
        int a = i < u.size() ? u[i] : kPad;
        int b = i < v.size() ? v[i] : kPad;
        if (a < kPad || a >= generators_ || b < kPad || b >= generators_)
            throw std::out_of_range("letter outside the generator set");
        s = dfa_.next(s, encode(a, b));
    }
    return dfa_.accepting(s);
}

std::size_t Multiplier::difference_states() const {
    std::set<int> d;
    for (std::size_t i = 0; i < states_.size(); ++i)
        if (static_cast<int>(i) != fail_) d.insert(states_[i].difference);
    return d.size() + 1;
}

Multiplier build_multiplier(const TriangleGroup& group, int x) {
    const int p = group.generators();
    if (x < -1 || x >= p) throw std::invalid_argument("multiplier generator out of range");
    const Acceptor& acc = group.acceptor();
    const int ended = p + 1;  // acceptor s1 is never a live track state, so its index is free
    const int alphabet = (p + 1) * (p + 1);

    using Key = std::tuple<int, int, int>;
    std::map<Key, int> index;
    std::vector<Multiplier::State> states;
    std::vector<std::vector<int>> next;  // -1 = fail, filled below
    auto intern = [&](int d, int su, int sv) {
        auto [it, fresh] = index.emplace(Key{d, su, sv}, static_cast<int>(states.size()));
        if (fresh) {
            states.push_back({d, su, sv});
            next.emplace_back();
        }
        return it->second;
    };
    auto advance = [&](int track, int letter) -> std::optional<int> {
        if (letter == Multiplier::kPad) return ended;
        if (track == ended) return std::nullopt;
        int t = acc.step(track, letter);
        if (t == acc.s1()) return std::nullopt;
        return t;
    };

    intern(-1, acc.s0(), acc.s0());
    std::vector<int> word;
    for (std::size_t i = 0; i < states.size(); ++i) {
        next[i].assign(alphabet, -1);
        const Multiplier::State st = states[i];
        for (int a = -1; a < p; ++a)
            for (int b = -1; b < p; ++b) {
                if (a == Multiplier::kPad && b == Multiplier::kPad) continue;
                auto su = advance(st.u_state, a);
                auto sv = advance(st.v_state, b);
                if (!su || !sv) continue;
                word.clear();
                if (a >= 0) word.push_back(group.lambda(a));
                if (st.difference >= 0) word.push_back(st.difference);
                if (b >= 0) word.push_back(b);
                NormalForm d = group.reduce(word);
                if (d.length() > 1) continue;
                int target = intern(d.empty() ? -1 : d.letters()[0], *su, *sv);
                next[i][(a + 1) * (p + 1) + (b + 1)] = target;
            }
    }

    const int fail = static_cast<int>(states.size());
    Automaton dfa(fail + 1, alphabet, 0);
    for (int s = 0; s < fail; ++s) {
        for (int l = 0; l < alphabet; ++l) dfa.set(s, l, next[s][l] < 0 ? fail : next[s][l]);
        dfa.set_accepting(s, states[s].difference == x);
    }
    for (int l = 0; l < alphabet; ++l) dfa.set(fail, l, fail);
    states.push_back({-2, ended, ended});
    return Multiplier(p, x, std::move(dfa), std::move(states), fail);
}

void write_multiplier(std::ostream& out, const Multiplier& m) {
    const Automaton& a = m.automaton();
    out << "multiplier " << m.generator() << '\n';
    out << "states " << a.states() << " start " << a.start() << " fail " << m.fail_state() << '\n';
    out << "accept";
    for (int s = 0; s < a.states(); ++s)
        if (a.accepting(s)) out << ' ' << s;
    out << '\n';
    for (int s = 0; s < a.states(); ++s) {
        if (s == m.fail_state()) continue;
        const auto& st = m.states()[s];
        out << "# state " << s << " difference " << st.difference << " u " << st.u_state << " v " << st.v_state
            << '\n';
        for (int l = 0; l < a.alphabet(); ++l) {
            int t = a.next(s, l);
            if (t == m.fail_state()) continue;
            auto [x, y] = m.decode(l);
            out << s << ' ' << x << ' ' << y << ' ' << t << '\n';
        }
    }
}

namespace {

using Rational = boost::multiprecision::cpp_rational;

/// Coefficients a with Σ a_i cols[i] = target, if the system is consistent.
std::optional<std::vector<Rational>> solve(const std::vector<std::vector<BigInt>>& cols,
                                           const std::vector<BigInt>& target) {
    const std::size_t rows = target.size(), k = cols.size();
    std::vector<std::vector<Rational>> m(rows, std::vector<Rational>(k + 1));
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < k; ++c) m[r][c] = Rational(cols[c][r]);
        m[r][k] = Rational(target[r]);
    }
    std::vector<int> pivot_col;
    std::size_t row = 0;
    for (std::size_t c = 0; c < k && row < rows; ++c) {
        std::size_t piv = row;
        while (piv < rows && m[piv][c] == 0) ++piv;
        if (piv == rows) continue;
        std::swap(m[piv], m[row]);
        for (std::size_t r = 0; r < rows; ++r) {
            if (r == row || m[r][c] == 0) continue;
            Rational f = m[r][c] / m[row][c];
            for (std::size_t cc = c; cc <= k; ++cc) m[r][cc] -= f * m[row][cc];
        }
        pivot_col.push_back(static_cast<int>(c));
        ++row;
    }
    for (std::size_t r = row; r < rows; ++r)
        if (m[r][k] != 0) return std::nullopt;
    std::vector<Rational> a(k, Rational(0));
    for (std::size_t r = 0; r < pivot_col.size(); ++r) a[pivot_col[r]] = m[r][k] / m[r][pivot_col[r]];
    return a;
}

}  // namespace

GrowthSeries growth(const TriangleGroup& group, int max_len) {
    if (max_len < 0) throw std::invalid_argument("growth length must be non-negative");
    const Acceptor& acc = group.acceptor();
    const int p = group.generators();
    const int dim = p + 1;  // Π ∪ {s0}; s1 carries no accepted words

    auto apply = [&](const std::vector<BigInt>& v) {
        std::vector<BigInt> out(dim);
        for (int s = 0; s < dim; ++s) {
            if (v[s] == 0) continue;
            for (int y = 0; y < p; ++y)
                if (acc.step(s, y) == y) out[y] += v[s];
        }
        return out;
    };
    auto total = [](const std::vector<BigInt>& v) {
        BigInt t = 0;
        for (const auto& x : v) t += x;
        return t;
    };

    // Krylov sequence of the start vector until the first dependency.
    std::vector<std::vector<BigInt>> krylov;
    std::vector<BigInt> v(dim);
    v[p] = 1;
    std::vector<Rational> dependency;
    for (;;) {
        if (auto a = solve(krylov, v)) {
            dependency = *a;
            break;
        }
        krylov.push_back(v);
        v = apply(v);
    }
    const int order = static_cast<int>(krylov.size());

    GrowthSeries g;
    for (int i = 1; i <= order; ++i) {
        const Rational& c = dependency[order - i];
        if (denominator(c) != 1) throw std::logic_error("non-integral growth recurrence");
        g.recurrence.push_back(numerator(c));
    }

    const int terms = std::max(max_len, order) + order + 1;
    std::vector<BigInt> b;
    std::vector<BigInt> w(dim);
    w[p] = 1;
    for (int k = 0; k < terms; ++k) {
        b.push_back(total(w));
        w = apply(w);
    }

    g.recurrence_verified = true;
    for (int k = order; k < terms; ++k) {
        BigInt s = 0;
        for (int i = 1; i <= order; ++i) s += g.recurrence[i - 1] * b[k - i];
        if (s != b[k]) g.recurrence_verified = false;
    }

    g.denominator.push_back(1);
    for (const auto& c : g.recurrence) g.denominator.push_back(-c);
    for (int k = 0; k < order; ++k) {
        BigInt s = 0;
        for (int i = 0; i <= k; ++i) s += g.denominator[i] * b[k - i];
        g.numerator.push_back(s);
    }
    while (g.numerator.size() > 1 && g.numerator.back() == 0) g.numerator.pop_back();
    // a zero eigenvalue only delays the recurrence; it is not part of the rational function
    while (g.denominator.size() > 1 && g.denominator.back() == 0) g.denominator.pop_back();

    BigInt run = 0;
    for (int k = 0; k <= max_len; ++k) {
        g.coefficients.push_back(b[k]);
        run += b[k];
        g.cumulative.push_back(run);
    }
    return g;
}

}  // namespace atilde
