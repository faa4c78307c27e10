#pragma once

// Coset enumeration (HLT with coincidences) for Coxeter presentations over the
// trivial subgroup: an oracle for finiteness that shares nothing with the
// cosine-matrix classifier.

#include "atilde/coxeter.hpp"

#include <deque>
#include <optional>
#include <vector>

namespace test_support {

class ToddCoxeter {
public:
    ToddCoxeter(const atilde::CoxeterMatrix& m, std::size_t cap) : r_(m.rank()), cap_(cap) {
        for (int s = 0; s < r_; ++s)
            for (int t = s + 1; t < r_; ++t) {
                int k = m(s, t);
                if (k == atilde::CoxeterMatrix::kInfinity) continue;
                std::vector<int> w;
                for (int i = 0; i < k; ++i) {
                    w.push_back(s);
                    w.push_back(t);
                }
                relators_.push_back(w);
            }
    }

    /// Group order, or nothing if the enumeration exceeded the cap.
    std::optional<std::size_t> order() {
        new_coset();
        for (std::size_t c = 0; c < table_.size(); ++c) {
            for (const auto& w : relators_) {
                if (!alive(c)) break;
                scan_and_fill(static_cast<int>(c), w);
                if (table_.size() > cap_) return std::nullopt;
            }
            for (int g = 0; g < r_ && alive(c); ++g)
                if (table_[c][g] < 0) {
                    define(static_cast<int>(c), g);
                    if (table_.size() > cap_) return std::nullopt;
                }
        }
        std::size_t live = 0;
        for (std::size_t c = 0; c < table_.size(); ++c) live += alive(c);
        return live;
    }

private:
    bool alive(std::size_t c) const { return parent_[c] == static_cast<int>(c); }

    int new_coset() {
        table_.emplace_back(r_, -1);
        parent_.push_back(static_cast<int>(parent_.size()));
        return static_cast<int>(table_.size()) - 1;
    }

    void define(int c, int g) {
        int d = new_coset();
        table_[c][g] = d;
        table_[d][g] = c;  // generators are involutions
    }

    int rep(int c) {
        int r = c;
        while (parent_[r] != r) r = parent_[r];
        while (parent_[c] != r) {
            int n = parent_[c];
            parent_[c] = r;
            c = n;
        }
        return r;
    }

    void merge(int a, int b, std::deque<int>& queue) {
        a = rep(a);
        b = rep(b);
        if (a == b) return;
        if (a > b) std::swap(a, b);
        parent_[b] = a;
        queue.push_back(b);
    }

    void coincidence(int a, int b) {
        std::deque<int> queue;
        merge(a, b, queue);
        while (!queue.empty()) {
            int e = queue.front();
            queue.pop_front();
            for (int g = 0; g < r_; ++g) {
                int f = table_[e][g];
                if (f < 0) continue;
                table_[f][g] = -1;
                int e1 = rep(e), f1 = rep(f);
                if (table_[e1][g] >= 0)
                    merge(f1, table_[e1][g], queue);
                else if (table_[f1][g] >= 0)
                    merge(e1, table_[f1][g], queue);
                else {
                    table_[e1][g] = f1;
                    table_[f1][g] = e1;
                }
            }
        }
    }

    void scan_and_fill(int c, const std::vector<int>& w) {
        int f = c, b = c;
        int i = 0, j = static_cast<int>(w.size()) - 1;
        for (;;) {
            while (i <= j && table_[f][w[i]] >= 0) f = table_[f][w[i++]];
            if (i > j) {
                if (f != b) coincidence(f, b);
                return;
            }
            while (j >= i && table_[b][w[j]] >= 0) b = table_[b][w[j--]];
            if (j < i) {
                coincidence(f, b);
                return;
            }
            if (i == j) {
                table_[f][w[i]] = b;
                table_[b][w[i]] = f;
                return;
            }
            define(f, w[i]);
        }
    }

    int r_;
    std::size_t cap_;
    std::vector<std::vector<int>> relators_;
    std::vector<std::vector<int>> table_;
    std::vector<int> parent_;
};

}  // namespace test_support
