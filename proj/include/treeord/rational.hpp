#pragma once

// Exact rational arithmetic used throughout the library.
//
// Values are boost::multiprecision::cpp_rational, which keeps numerator and
// denominator coprime with a positive denominator, so equality is structural
// and every comparison below is exact. This header adds parsing ("a/b",
// integer, or exact decimal "a.b"), canonical formatting, the
// minimal-denominator selection rule for half-open intervals, and the fixed
// enumeration of the rationals in [0,1].

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <stdexcept>
#include <string>

namespace treeord {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

struct domain_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct parse_error : std::runtime_error {
    explicit parse_error(const std::string& msg, std::size_t line = 0)
        : std::runtime_error(msg), line_number(line) {}
    std::size_t line_number;  // 1-based; 0 when not tied to a document line
};

inline Int rat_num(const Rat& r) { return numerator(r); }
inline Int rat_den(const Rat& r) { return denominator(r); }

inline Rat make_rat(const Int& num, const Int& den) {
    if (den == 0) throw domain_error("rational with zero denominator");
    return Rat(num, den);
}

inline std::string rat_str(const Rat& r) {
    std::string s = rat_num(r).str();
    if (rat_den(r) != 1) s += "/" + rat_den(r).str();
    return s;
}

// floor(r) as an integer, correct for negatives
inline Int rat_floor(const Rat& r) {
    Int q = rat_num(r) / rat_den(r);
    if (rat_num(r) < 0 && q * rat_den(r) != rat_num(r)) --q;
    return q;
}

// Accepts "a", "a/b" and exact decimals "a.b" (e.g. "3.25" = 13/4).
inline Rat parse_rat(const std::string& text) {
    if (text.empty()) throw parse_error("empty rational literal");
    std::size_t pos = 0;
    bool negative = false;
    if (text[pos] == '-' || text[pos] == '+') {
        negative = (text[pos] == '-');
        ++pos;
    }
    auto read_digits = [&](const char* what) {
        std::size_t start = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        if (pos == start) throw parse_error(std::string("expected digits in ") + what + ": '" + text + "'");
        return Int(text.substr(start, pos - start));
    };
    Int intpart = read_digits("rational literal");
    Rat value(intpart);
    if (pos < text.size() && text[pos] == '.') {
        ++pos;
        std::size_t start = pos;
        Int frac = read_digits("decimal fraction");
        Int scale = 1;
        for (std::size_t i = start; i < pos; ++i) scale *= 10;
        value += Rat(frac, scale);
    } else if (pos < text.size() && text[pos] == '/') {
        ++pos;
        Int den = read_digits("denominator");
        if (den == 0) throw parse_error("zero denominator: '" + text + "'");
        value = Rat(intpart, den);
    }
    if (pos != text.size()) throw parse_error("trailing characters in rational literal: '" + text + "'");
    return negative ? Rat(-value) : value;
}

// The rational of minimal denominator in the half-open interval (lo, hi],
// ties broken by smaller numerator (for a fixed denominator the smallest
// admissible numerator is taken). The degenerate input lo == hi yields hi.
inline Rat min_den_in_interval(const Rat& lo, const Rat& hi) {
    if (lo > hi) throw domain_error("empty interval (" + rat_str(lo) + ", " + rat_str(hi) + "]");
    if (lo == hi) return hi;
    // A mediant-style bound: some denominator <= den(lo)+den(hi) always works.
    Int limit = rat_den(lo) + rat_den(hi);
    for (Int d = 1; d <= limit; ++d) {
        Int n = rat_floor(lo * d) + 1;  // least n with n/d > lo
        Rat candidate = Rat(n, d);
        if (candidate <= hi) return candidate;
    }
    throw domain_error("no rational found in (" + rat_str(lo) + ", " + rat_str(hi) + "]");  // unreachable
}

// Fixed enumeration of Q cap [0,1]: 0, 1, 1/2, 1/3, 2/3, 1/4, 3/4, 1/5, ...
// (ascending denominator, then ascending numerator, reduced fractions only).
inline Rat unit_rational(std::size_t index) {
    if (index == 0) return Rat(0);
    if (index == 1) return Rat(1);
    std::size_t seen = 2;
    for (Int d = 2;; ++d) {
        for (Int n = 1; n < d; ++n) {
            if (gcd(n, d) != 1) continue;
            if (seen == index) return Rat(n, d);
            ++seen;
        }
    }
}

// Index of q in the enumeration above; nullopt when q is outside [0,1].
inline std::optional<std::size_t> unit_rational_index(const Rat& q) {
    if (q < 0 || q > 1) return std::nullopt;
    if (q == 0) return 0;
    if (q == 1) return 1;
    std::size_t idx = 2;
    for (Int d = 2; d <= rat_den(q); ++d) {
        for (Int n = 1; n < d; ++n) {
            if (gcd(n, d) != 1) continue;
            if (Rat(n, d) == q) return idx;
            ++idx;
        }
    }
    return std::nullopt;  // unreachable for reduced q in (0,1)
}

}  // namespace treeord
