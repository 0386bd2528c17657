#pragma once

// Arbitrary-precision exact arithmetic aliases, typed errors shared by every
// module, and small deterministic helpers (formatting, checksums, rounding).

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cubic {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

// Base class of all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Input outside an operation's mathematical domain (non-admissible
// polynomial, rank-deficient basis, out-of-range parameter, ...).
struct DomainError : Error {
    explicit DomainError(const std::string& msg) : Error(msg) {}
};

// Exact value does not fit the requested fixed-width type, or an
// enumeration bound left the supported range.
struct OverflowError : Error {
    explicit OverflowError(const std::string& msg) : Error(msg) {}
};

// Persistent cache file is malformed; message names the offending line.
struct CacheError : Error {
    explicit CacheError(const std::string& msg) : Error(msg) {}
};

// Factoring budget exhausted; carries the partial factorization found so far
// and the unfactored remainder.
struct FactorBudgetError : Error {
    std::vector<std::pair<Int, int>> partial;
    Int remainder;
    FactorBudgetError(const std::string& msg, std::vector<std::pair<Int, int>> part, Int rem)
        : Error(msg), partial(std::move(part)), remainder(std::move(rem)) {}
};

inline std::int64_t checked_i64(const Int& v, const char* what = "value") {
    if (v > Int(INT64_MAX) || v < Int(INT64_MIN))
        throw OverflowError(std::string(what) + " exceeds 64-bit range: " + v.str());
    return v.convert_to<std::int64_t>();
}

inline Int rat_num(const Rat& q) { return Int(boost::multiprecision::numerator(q)); }
inline Int rat_den(const Rat& q) { return Int(boost::multiprecision::denominator(q)); }

// Floor division for exact integers (rounds toward -inf, unlike cpp_int '/').
inline Int floor_div(const Int& a, const Int& b) {
    Int q = a / b, r = a % b;
    if (r != 0 && ((r < 0) != (b < 0))) --q;
    return q;
}

inline Int ceil_div(const Int& a, const Int& b) { return -floor_div(-a, b); }

inline Int floor_rat(const Rat& q) { return floor_div(rat_num(q), rat_den(q)); }
inline Int ceil_rat(const Rat& q) { return ceil_div(rat_num(q), rat_den(q)); }

// All floating-point output is printed with 12 significant digits so that
// byte-level reproducibility of reports is a format guarantee.
inline std::string fmt12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

// Lossless round-trip formatting for configuration echoes.
inline std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// CRC-32 (reflected, polynomial 0xEDB88320), used for cache line checksums.
inline std::uint32_t crc32(const std::string& data) {
    static const auto table = [] {
        std::vector<std::uint32_t> t(256);
        for (std::uint32_t i = 0; i < 256; ++i) {
            std::uint32_t c = i;
            for (int k = 0; k < 8; ++k) c = (c & 1) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
            t[i] = c;
        }
        return t;
    }();
    std::uint32_t crc = 0xFFFFFFFFu;
    for (unsigned char ch : data) crc = table[(crc ^ ch) & 0xFFu] ^ (crc >> 8);
    return crc ^ 0xFFFFFFFFu;
}

}  // namespace cubic
