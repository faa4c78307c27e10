#include "atilde/word.hpp"

#include "atilde/errors.hpp"

#include <algorithm>
#include <map>
#include <ostream>
#include <stdexcept>

namespace atilde {

bool NormalForm::operator<(const NormalForm& other) const {
    if (letters_.size() != other.letters_.size()) return letters_.size() < other.letters_.size();
    return letters_ < other.letters_;
}

Acceptor::Acceptor(const TrianglePresentation& tp)
    : s0_(tp.geometry().size()), s1_(tp.geometry().size() + 1),
      dfa_(tp.geometry().size() + 2, tp.geometry().size(), tp.geometry().size()) {
    const Geometry& g = tp.geometry();
    const int p = g.size();
    for (int x = 0; x < p; ++x) {
        dfa_.set(s0_, x, x);
        dfa_.set(s1_, x, s1_);
        for (int y = 0; y < p; ++y)
            dfa_.set(x, y, g.join(tp.lambda()(x), y) == Geometry::kFull ? y : s1_);
        dfa_.set_accepting(x);
    }
    dfa_.set_accepting(s0_);
}

int RightMultTrace::length_change() const {
    switch (ending) {
        case Ending::Cancel: return -1;
        case Ending::Replace: return double_prime_w >= 0 ? -1 : 0;
        case Ending::Append: return double_prime_w >= 0 ? 0 : 1;
    }
    return 0;
}

TriangleGroup::TriangleGroup(std::shared_ptr<const TrianglePresentation> tp)
    : tp_(std::move(tp)), acceptor_(*tp_) {
    ValidationReport report = validate(*tp_);
    if (!report.all_pass()) {
        std::string failed;
        for (const auto& r : report.results)
            if (!r.pass) failed += axiom_letter(r.axiom);
        throw ValidationError("presentation fails axioms " + failed);
    }
}

void TriangleGroup::check_generator(int x) const {
    if (x < 0 || x >= generators())
        throw std::invalid_argument("letter " + std::to_string(x) + " is not a generator id");
}

void TriangleGroup::check_same(const NormalForm& g) const {
    if (g.group_ != this) throw std::invalid_argument("normal form belongs to a different presentation");
}

NormalForm TriangleGroup::normal_form(std::vector<int> letters) const {
    for (int x : letters) check_generator(x);
    if (!in_language(letters)) throw std::invalid_argument("word is not in L");
    return NormalForm(this, std::move(letters));
}

int TriangleGroup::required_third(int a, int b, const char* what) const {
    int c = tp_->third(a, b);
    if (c < 0)
        throw std::logic_error(std::string("no unique triple for ") + what + " (" + std::to_string(a) + ", " +
                               std::to_string(b) + ")");
    return c;
}

void TriangleGroup::multiply(std::vector<int>& letters, int x, RightMultTrace* trace) const {
    const Geometry& g = geometry();
    const int l = static_cast<int>(letters.size());
    RightMultTrace local;
    RightMultTrace& tr = trace ? *trace : local;
    const bool record = trace != nullptr;
    if (record) tr = RightMultTrace{};
    tr.length = l;

    char case_no = '1';
    int top = l;    // highest level the cascade can touch
    int level = l;  // current level
    int carry = x;
    Relation rel = Relation::SpanFull;
    if (l > 0) {
        int last = letters.back();
        rel = g.relation(lambda(last), x);
        switch (rel) {
            case Relation::SpanFull:
                break;
            case Relation::Equal:
                case_no = '2';
                letters.pop_back();
                tr.ending = Ending::Cancel;
                tr.end_level = l;
                tr.end_carry = x;
                break;
            case Relation::Contains: {
                case_no = '3';
                int t = required_third(last, x, "case 3");
                if (record) tr.triples.push_back({last, x, t});
                letters.back() = lambda(t);
                tr.ending = Ending::Replace;
                tr.end_level = l;
                tr.end_carry = x;
                tr.replacement = letters.back();
                break;
            }
            case Relation::ContainedIn: {
                case_no = '4';
                int t = required_third(last, x, "case 4");
                if (record) tr.triples.push_back({last, x, t});
                tr.double_prime_w = lambda(t);
                letters.pop_back();
                top = level = l - 1;
                carry = tr.double_prime_w;
                break;
            }
            case Relation::Skew:
                case_no = '5';
                break;
        }
    }
    tr.relation = rel;

    if (case_no == '1') {
        letters.push_back(x);
        tr.ending = Ending::Append;
        tr.end_level = l;
        tr.end_carry = x;
    } else if (case_no == '4' || case_no == '5') {
        // Push the carry down the prefix with triple rewrites until it joins
        // to V (append) or is properly contained (replace).
        std::vector<int> emitted;
        for (;;) {
            if (level == 0) {
                tr.ending = Ending::Append;
                break;
            }
            int u = letters[level - 1];
            int lu = lambda(u);
            Relation r = g.relation(lu, carry);
            if (r == Relation::SpanFull) {
                tr.ending = Ending::Append;
                break;
            }
            if (r == Relation::Contains) {
                int t = required_third(u, carry, "replace");
                if (record) tr.triples.push_back({u, carry, t});
                tr.ending = Ending::Replace;
                tr.replacement = lambda(t);
                break;
            }
            if (r != Relation::Skew)
                throw std::logic_error("cascade reached an excluded relation at level " + std::to_string(level));
            if (static_cast<int>(emitted.size()) >= top)
                throw std::logic_error("cascade exceeded the prefix length");
            int s = lambda(g.join(lu, carry));
            int next = required_third(s, lu, "cascade");
            int tv = required_third(s, carry, "cascade");
            if (record) {
                tr.triples.push_back({s, lu, next});
                tr.triples.push_back({s, carry, tv});
                tr.steps.push_back({level, u, carry, s, next, lambda(tv)});
            }
            emitted.push_back(lambda(tv));
            carry = next;
            --level;
        }
        tr.end_level = level;
        tr.end_carry = carry;
        letters.resize(level);
        if (tr.ending == Ending::Append)
            letters.push_back(carry);
        else
            letters.back() = tr.replacement;
        letters.insert(letters.end(), emitted.rbegin(), emitted.rend());
        if (record) {
            int i = static_cast<int>(emitted.size());
            bool appended = tr.ending == Ending::Append;
            char sub = case_no == '4' ? (i == 0 ? (appended ? 'a' : 'b') : 'c')
                                      : (i == 1 ? (appended ? 'a' : 'b') : 'c');
            tr.tag = std::string{case_no, sub};
        }
    }
    if (!record) return;
    if (tr.tag.empty()) tr.tag = std::string{case_no};

    const int n = std::max(l, static_cast<int>(letters.size()));
    tr.differences.assign(n + 1, -1);
    const int j = tr.end_level;
    for (int t = 0; t <= n; ++t) {
        int& d = tr.differences[t];
        if (tr.ending == Ending::Cancel) {
            d = t < l ? -1 : x;
        } else if (t > top) {
            d = x;
        } else if (tr.ending == Ending::Replace) {
            if (t < j)
                d = -1;
            else
                d = t == j ? tr.end_carry : tr.steps[top - t].carry_in;
        } else {
            d = t <= j ? -1 : lambda(tr.steps[top - t].s);
        }
    }
}

NormalForm TriangleGroup::right_mult(const NormalForm& u, int x, RightMultTrace* trace) const {
    check_same(u);
    check_generator(x);
    std::vector<int> letters = u.letters();
    multiply(letters, x, trace);
    return NormalForm(this, std::move(letters));
}

NormalForm TriangleGroup::reduce(std::span<const int> word) const {
    for (int x : word) check_generator(x);
    std::vector<int> letters;
    letters.reserve(word.size());
    for (int x : word) multiply(letters, x);
    return NormalForm(this, std::move(letters));
}

std::vector<int> TriangleGroup::reversal(std::span<const int> word) const {
    std::vector<int> out(word.rbegin(), word.rend());
    for (int& x : out) x = lambda(x);
    return out;
}

NormalForm TriangleGroup::inverse(const NormalForm& u) const {
    check_same(u);
    return NormalForm(this, reversal(u.letters()));
}

int TriangleGroup::dist(const NormalForm& g, const NormalForm& h) const {
    check_same(g);
    check_same(h);
    std::vector<int> letters = reversal(g.letters());
    for (int x : h.letters()) multiply(letters, x);
    return static_cast<int>(letters.size());
}

int Ball::index_of(const NormalForm& g) const {
    auto it = std::lower_bound(vertices.begin(), vertices.end(), g);
    if (it == vertices.end() || !(*it == g)) return -1;
    return static_cast<int>(it - vertices.begin());
}

namespace {

std::vector<std::vector<int>> enumerate_words(const TriangleGroup& group, int max_len, std::size_t cap) {
    const Acceptor& acc = group.acceptor();
    const int p = group.generators();
    std::vector<std::vector<int>> words{{}};
    std::vector<int> states{acc.s0()};
    std::size_t layer_begin = 0;
    for (int k = 1; k <= max_len; ++k) {
        std::size_t layer_end = words.size();
        for (std::size_t i = layer_begin; i < layer_end; ++i) {
            for (int y = 0; y < p; ++y) {
                int next = acc.step(states[i], y);
                if (next == acc.s1()) continue;
                if (words.size() >= cap)
                    throw CapExceeded("ball of radius " + std::to_string(max_len) + " exceeds vertex cap " +
                                      std::to_string(cap));
                std::vector<int> w = words[i];
                w.push_back(y);
                words.push_back(std::move(w));
                states.push_back(next);
            }
        }
        layer_begin = layer_end;
    }
    if (words.size() > cap) throw CapExceeded("ball exceeds vertex cap " + std::to_string(cap));
    return words;
}

}  // namespace

std::vector<std::vector<int>> language_words(const TriangleGroup& group, int max_len) {
    if (max_len < 0) throw std::invalid_argument("length must be non-negative");
    return enumerate_words(group, max_len, static_cast<std::size_t>(-1));
}

Ball ball(const TriangleGroup& group, int radius, std::size_t vertex_cap) {
    if (radius < 0) throw std::invalid_argument("radius must be non-negative");
    const int p = group.generators();
    std::vector<std::vector<int>> words = enumerate_words(group, radius, vertex_cap);

    std::map<std::vector<int>, int> index;
    for (std::size_t i = 0; i < words.size(); ++i) index.emplace(words[i], static_cast<int>(i));

    Ball b;
    b.radius = radius;
    for (std::size_t i = 0; i < words.size(); ++i) {
        std::vector<int> h;
        for (int x = 0; x < p; ++x) {
            h = words[i];
            group.multiply(h, x);
            if (static_cast<int>(h.size()) > radius) continue;
            int j = index.at(h);
            if (static_cast<int>(i) < j) b.edges.emplace_back(static_cast<int>(i), j);
        }
    }
    std::sort(b.edges.begin(), b.edges.end());
    b.edges.erase(std::unique(b.edges.begin(), b.edges.end()), b.edges.end());
    b.vertices.reserve(words.size());
    for (auto& w : words) b.vertices.push_back(group.normal_form(std::move(w)));
    return b;
}

void write_ball(std::ostream& out, const Ball& b) {
    out << b.vertices.size() << ' ' << b.edges.size() << '\n';
    for (auto [i, j] : b.edges) out << i << ' ' << j << '\n';
}

}  // namespace atilde
