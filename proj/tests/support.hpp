#pragma once

#include "atilde/presentation.hpp"
#include "atilde/word.hpp"

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace test_support {

inline std::string fixture(const std::string& name) { return std::string(ATILDE_FIXTURES) + "/" + name; }

inline std::shared_ptr<const atilde::TrianglePresentation> load_tp(const std::string& name) {
    return std::make_shared<const atilde::TrianglePresentation>(atilde::load_presentation_file(fixture(name)));
}

inline const atilde::TriangleGroup& q2_group() {
    static const atilde::TriangleGroup g(load_tp("a2_q2.tp"));
    return g;
}

/// Every word over 0..p-1 of length exactly len, lexicographic.
inline void for_each_word(int p, int len, const std::function<void(const std::vector<int>&)>& f) {
    std::vector<int> w(len, 0);
    for (;;) {
        f(w);
        int i = len - 1;
        while (i >= 0 && ++w[i] == p) w[i--] = 0;
        if (i < 0) return;
    }
}

/// Words of L with length ≤ max_len, built by the pairwise predicate (not the acceptor).
inline std::vector<std::vector<int>> language_words(const atilde::TrianglePresentation& tp, int max_len) {
    const auto& g = tp.geometry();
    std::vector<std::vector<int>> out{{}};
    std::size_t begin = 0;
    for (int k = 1; k <= max_len; ++k) {
        std::size_t end = out.size();
        for (std::size_t i = begin; i < end; ++i) {
            const std::vector<int> w = out[i];
            for (int y = 0; y < g.size(); ++y) {
                if (!w.empty() && g.join(tp.lambda()(w.back()), y) != atilde::Geometry::kFull) continue;
                auto next = w;
                next.push_back(y);
                out.push_back(std::move(next));
            }
        }
        begin = end;
    }
    return out;
}

}  // namespace test_support
