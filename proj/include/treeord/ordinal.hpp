#pragma once

// Ordinals below omega^omega in Cantor normal form, with exact addition,
// comparison, and the incremental order-embedding into the rationals.

#include "treeord/rational.hpp"

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

namespace treeord {

// Cantor normal form: sum of w^exponent * coefficient with exponents
// strictly decreasing and coefficients >= 1. The empty sum is 0.
struct Ordinal {
    std::vector<std::pair<std::uint64_t, std::uint64_t>> terms;

    static Ordinal zero() { return Ordinal{}; }
    static Ordinal nat(std::uint64_t n) {
        Ordinal o;
        if (n > 0) o.terms.push_back({0, n});
        return o;
    }
    static Ordinal omega() { return Ordinal{{{1, 1}}}; }

    bool is_zero() const { return terms.empty(); }
    bool operator==(const Ordinal& other) const { return terms == other.terms; }
};

inline int ord_compare(const Ordinal& a, const Ordinal& b) {
    std::size_t k = std::min(a.terms.size(), b.terms.size());
    for (std::size_t i = 0; i < k; ++i) {
        if (a.terms[i].first != b.terms[i].first)
            return a.terms[i].first < b.terms[i].first ? -1 : 1;
        if (a.terms[i].second != b.terms[i].second)
            return a.terms[i].second < b.terms[i].second ? -1 : 1;
    }
    if (a.terms.size() != b.terms.size())
        return a.terms.size() < b.terms.size() ? -1 : 1;
    return 0;
}

inline bool ord_less(const Ordinal& a, const Ordinal& b) { return ord_compare(a, b) < 0; }

// Ordinal addition: terms of the left operand with exponent below the
// leading exponent of the right operand are absorbed.
inline Ordinal ord_add(const Ordinal& a, const Ordinal& b) {
    if (b.is_zero()) return a;
    std::uint64_t lead = b.terms.front().first;
    Ordinal result;
    for (const auto& t : a.terms) {
        if (t.first > lead) {
            result.terms.push_back(t);
        } else if (t.first == lead) {
            // coefficients add at the shared exponent
            result.terms.push_back({lead, t.second + b.terms.front().second});
            result.terms.insert(result.terms.end(), b.terms.begin() + 1, b.terms.end());
            return result;
        } else {
            break;
        }
    }
    result.terms.insert(result.terms.end(), b.terms.begin(), b.terms.end());
    return result;
}

// 0 counts as not a limit; otherwise a is a limit iff its last term has
// exponent >= 1 (no finite part).
inline bool is_limit(const Ordinal& a) {
    return !a.is_zero() && a.terms.back().first >= 1;
}

inline std::string ord_str(const Ordinal& a) {
    if (a.is_zero()) return "0";
    std::string out;
    for (std::size_t i = 0; i < a.terms.size(); ++i) {
        auto [e, c] = a.terms[i];
        if (i) out += "+";
        if (e == 0) {
            out += std::to_string(c);
        } else {
            out += "w";
            if (e > 1) out += "^" + std::to_string(e);
            if (c > 1) out += "*" + std::to_string(c);
        }
    }
    return out;
}

// Textual syntax: terms joined by '+', each "w^E*C", "w^E", "w*C", "w" or a
// plain natural. Terms are accumulated with ord_add, so non-canonical input
// normalizes (e.g. "1+w" parses to w).
inline Ordinal parse_ord(const std::string& text) {
    if (text.empty()) throw parse_error("empty ordinal literal");
    Ordinal acc = Ordinal::zero();
    std::size_t pos = 0;
    auto read_nat = [&]() -> std::uint64_t {
        std::size_t start = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        if (pos == start) throw parse_error("expected natural in ordinal literal: '" + text + "'");
        return std::stoull(text.substr(start, pos - start));
    };
    while (true) {
        std::uint64_t exponent = 0, coeff = 0;
        if (pos < text.size() && text[pos] == 'w') {
            ++pos;
            exponent = 1;
            if (pos < text.size() && text[pos] == '^') {
                ++pos;
                exponent = read_nat();
            }
            coeff = 1;
            if (pos < text.size() && text[pos] == '*') {
                ++pos;
                coeff = read_nat();
            }
        } else {
            coeff = read_nat();
        }
        Ordinal term;
        if (coeff > 0) term.terms.push_back({exponent, coeff});
        acc = ord_add(acc, term);
        if (pos == text.size()) break;
        if (text[pos] != '+') throw parse_error("unexpected character in ordinal literal: '" + text + "'");
        ++pos;
    }
    return acc;
}

// Order embedding of a finite enumeration of pairwise-distinct ordinals into
// the rationals, built incrementally so that images already assigned never
// move. Placement of the n-th element (n >= 1):
//   * upper and lower neighbour among placed images: U - min(U-L, 1/(n+1))/2
//   * upper neighbour only:                          U - 1/(2(n+1))
//   * lower neighbour only:                          L + 1
// The first element maps to 0. Whenever the new image has an immediate
// successor U among the earlier ones, the gap to U stays below 1/(n+1),
// which is what keeps limits limits when the enumeration is extended.
inline std::vector<Rat> embed_q(const std::vector<Ordinal>& seq) {
    std::vector<Rat> images;
    images.reserve(seq.size());
    for (std::size_t n = 0; n < seq.size(); ++n) {
        const Ordinal& beta = seq[n];
        bool have_upper = false, have_lower = false;
        Rat upper, lower;
        for (std::size_t i = 0; i < n; ++i) {
            int c = ord_compare(seq[i], beta);
            if (c == 0)
                throw domain_error("duplicate ordinal at index " + std::to_string(n) +
                                   ": " + ord_str(beta));
            if (c > 0) {
                if (!have_upper || images[i] < upper) upper = images[i], have_upper = true;
            } else {
                if (!have_lower || images[i] > lower) lower = images[i], have_lower = true;
            }
        }
        if (n == 0) {
            images.push_back(Rat(0));
        } else if (have_upper && have_lower) {
            Rat cap(1, static_cast<Int>(n + 1));
            Rat gap = upper - lower;
            images.push_back(upper - (gap < cap ? gap : cap) / 2);
        } else if (have_upper) {
            images.push_back(upper - Rat(1, static_cast<Int>(2 * (n + 1))));
        } else {
            images.push_back(lower + 1);
        }
    }
    return images;
}

}  // namespace treeord
