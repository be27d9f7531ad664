#pragma once

// Stagewise diagonalization over injective words: grow a chain of injective
// words whose ranges avoid an expanding promise set, preferring members of
// the given antichains whenever one is admissible.

#include "treeord/rational.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace treeord {

using InjWord = std::vector<std::uint32_t>;

inline bool injective(const InjWord& w) {
    std::set<std::uint32_t> seen;
    for (auto v : w)
        if (!seen.insert(v).second) return false;
    return true;
}

inline bool is_prefix(const InjWord& a, const InjWord& b) {
    if (a.size() > b.size()) return false;
    return std::equal(a.begin(), a.end(), b.begin());
}

inline std::string word_str(const InjWord& w) {
    std::string s = "(";
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(w[i]);
    }
    return s + ")";
}

// longest common prefix; the meet under the prefix order
inline InjWord lcp_meet(const InjWord& a, const InjWord& b) {
    std::size_t k = 0;
    while (k < a.size() && k < b.size() && a[k] == b[k]) ++k;
    return InjWord(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(k));
}

// true, or a witness pair where one word extends the other
inline std::optional<std::pair<InjWord, InjWord>> antichain_witness(const std::vector<InjWord>& words) {
    for (std::size_t i = 0; i < words.size(); ++i)
        for (std::size_t j = 0; j < words.size(); ++j) {
            if (i == j || words[i] == words[j]) continue;
            if (is_prefix(words[i], words[j])) return std::make_pair(words[i], words[j]);
        }
    return std::nullopt;
}

inline bool verify_antichain(const std::vector<InjWord>& words) {
    return !antichain_witness(words).has_value();
}

struct PromiseState {
    std::vector<InjWord> chain;            // f_0 = () up to f_k
    std::vector<std::uint32_t> promises;   // x_1 .. x_k
    std::vector<bool> preference_fired;    // per stage: did A_n supply f_n?
};

namespace detail {

inline std::uint32_t least_not_in(const std::set<std::uint32_t>& taken) {
    std::uint32_t v = 0;
    while (taken.count(v)) ++v;
    return v;
}

inline bool length_lex_less(const InjWord& a, const InjWord& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
}

}  // namespace detail

// Stage n: if some member of A_n properly extends the current word while its
// range avoids all promises made so far, take the length-lex-least such
// member; otherwise append the least natural that is neither used nor
// promised. Afterwards promise the least natural outside the new range and
// the previous promises.
inline PromiseState diag_run(const std::vector<std::vector<InjWord>>& family) {
    for (std::size_t n = 0; n < family.size(); ++n)
        for (std::size_t i = 0; i < family[n].size(); ++i)
            if (!injective(family[n][i]))
                throw domain_error("word " + std::to_string(i) + " in antichain " +
                                   std::to_string(n + 1) + " is not injective: " +
                                   word_str(family[n][i]));

    PromiseState st;
    st.chain.push_back({});
    for (std::size_t n = 0; n < family.size(); ++n) {
        const InjWord& prev = st.chain.back();
        std::set<std::uint32_t> promised(st.promises.begin(), st.promises.end());
        const InjWord* pick = nullptr;
        for (const InjWord& w : family[n]) {
            if (w.size() <= prev.size() || !is_prefix(prev, w)) continue;
            bool clean = true;
            for (auto v : w)
                if (promised.count(v)) {
                    clean = false;
                    break;
                }
            if (!clean) continue;
            if (!pick || detail::length_lex_less(w, *pick)) pick = &w;
        }
        InjWord next;
        if (pick) {
            next = *pick;
            st.preference_fired.push_back(true);
        } else {
            next = prev;
            std::set<std::uint32_t> taken(next.begin(), next.end());
            taken.insert(promised.begin(), promised.end());
            next.push_back(detail::least_not_in(taken));
            st.preference_fired.push_back(false);
        }
        st.chain.push_back(next);
        std::set<std::uint32_t> taken(next.begin(), next.end());
        taken.insert(promised.begin(), promised.end());
        st.promises.push_back(detail::least_not_in(taken));
    }
    return st;
}

}  // namespace treeord
