#pragma once

// Line-delimited, checksummed census cache.
//
// Every line is "<payload>#<crc>" with the CRC-32 of the payload in fixed
// 8-digit lowercase hex.  The first line is the metadata payload
//   meta|r_max=<%.17g>|precision=<num>/<den>
// and each following line one geodesic-class record
//   t,s|R|l|ft,fs|d|h11,h12,h13;h22,h23;h33|class_index|primitive|mu|rt,rs
// where fields 4-6 form the canonical order key (field polynomial plus
// order-lattice serialization), R and l use %.17g so doubles round-trip
// exactly, and primitive is 0/1.  Files are append-only; merging is
// idempotent full-line dedup.
//
// A census is fully reconstructible from its cache: class numbers come back
// from the records themselves (h_proper(O) = number of primitive records
// carrying O, one per proper class; h_total(O) = sum of h_proper over the
// cached overorders of O, which are always all present because a unit lies
// in every overorder of its order), discriminants and maximal-order indices
// are recomputed, and structural invariants are revalidated, so a corrupt
// or hand-edited cache fails loudly with CacheError.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "cubic/census.hpp"

namespace cubic {

namespace detail {

inline std::string crc_hex(const std::string& payload) {
    char buf[9];
    std::snprintf(buf, sizeof buf, "%08x", static_cast<unsigned>(crc32(payload)));
    return std::string(buf);
}

inline std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= text.size(); ++i)
        if (i == text.size() || text[i] == sep) {
            out.push_back(text.substr(start, i - start));
            start = i + 1;
        }
    return out;
}

inline Int parse_cache_int(const std::string& text, const char* what) {
    std::size_t k = !text.empty() && text[0] == '-' ? 1 : 0;
    if (k == text.size()) throw CacheError(std::string(what) + ": bad integer \"" + text + "\"");
    for (; k < text.size(); ++k)
        if (text[k] < '0' || text[k] > '9')
            throw CacheError(std::string(what) + ": bad integer \"" + text + "\"");
    return Int(text);
}

inline double parse_cache_double(const std::string& text, const char* what) {
    try {
        std::size_t used = 0;
        double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::logic_error&) {
        throw CacheError(std::string(what) + ": bad number \"" + text + "\"");
    }
}

}  // namespace detail

inline std::string cache_checksum_line(const std::string& payload) {
    return payload + "#" + detail::crc_hex(payload);
}

// Strips and verifies "<payload>#<crc>"; `lineno` names the line in errors.
inline std::string cache_verify_line(const std::string& line, std::size_t lineno) {
    auto hash = line.rfind('#');
    if (hash == std::string::npos || line.size() - hash - 1 != 8)
        throw CacheError("cache line " + std::to_string(lineno) + " has no checksum: " + line);
    std::string payload = line.substr(0, hash);
    if (line.substr(hash + 1) != detail::crc_hex(payload))
        throw CacheError("cache line " + std::to_string(lineno) + " fails its checksum: " + line);
    return payload;
}

inline std::string cache_meta_payload(double r_max, const Rat& precision) {
    return "meta|r_max=" + fmt17(r_max) + "|precision=" + rat_num(precision).str() + "/" +
           rat_den(precision).str();
}

inline std::string cache_record_payload(const GeodesicClass& rec, const std::string& order_key) {
    return to_string(rec.poly) + "|" + fmt17(rec.R) + "|" + fmt17(rec.l) + "|" + order_key + "|" +
           std::to_string(rec.class_index) + "|" + (rec.primitive ? "1" : "0") + "|" +
           std::to_string(rec.mu) + "|" + to_string(rec.root_poly);
}

struct CacheFile {
    double r_max = 0;
    Rat precision = default_precision();
    std::vector<std::string> lines;  // record lines with checksums, file order
};

inline CacheFile cache_from_census(const Census& c, const Rat& precision) {
    CacheFile f;
    f.r_max = c.r_max;
    f.precision = precision;
    f.lines.reserve(c.records.size());
    for (const auto& rec : c.records)
        f.lines.push_back(
            cache_checksum_line(cache_record_payload(rec, c.orders.at(rec.order_id).key)));
    return f;
}

inline void write_cache(std::ostream& out, const CacheFile& f) {
    out << cache_checksum_line(cache_meta_payload(f.r_max, f.precision)) << "\n";
    for (const auto& line : f.lines) out << line << "\n";
}

inline CacheFile parse_cache(std::istream& in) {
    CacheFile f;
    std::string line;
    std::size_t lineno = 0;
    bool have_meta = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::string payload = cache_verify_line(line, lineno);
        if (!have_meta) {
            auto parts = detail::split(payload, '|');
            if (parts.size() != 3 || parts[0] != "meta" || parts[1].rfind("r_max=", 0) != 0 ||
                parts[2].rfind("precision=", 0) != 0)
                throw CacheError("cache line " + std::to_string(lineno) +
                                 " is not a meta line: " + line);
            f.r_max = detail::parse_cache_double(parts[1].substr(6), "cache meta r_max");
            auto frac = detail::split(parts[2].substr(10), '/');
            if (frac.size() != 2)
                throw CacheError("cache meta precision is malformed: " + line);
            Int num = detail::parse_cache_int(frac[0], "cache meta precision");
            Int den = detail::parse_cache_int(frac[1], "cache meta precision");
            if (num <= 0 || den <= 0)
                throw CacheError("cache meta precision must be positive: " + line);
            f.precision = Rat(num, den);
            if (!(f.r_max > 0)) throw CacheError("cache meta r_max must be positive: " + line);
            have_meta = true;
            continue;
        }
        f.lines.push_back(line);
    }
    if (!have_meta) throw CacheError("cache has no meta line");
    return f;
}

inline CacheFile load_cache(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CacheError("cannot open cache file: " + path);
    return parse_cache(in);
}

inline void save_cache(const std::string& path, const CacheFile& f) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw CacheError("cannot write cache file: " + path);
    write_cache(out, f);
    out.flush();
    if (!out) throw CacheError("failed while writing cache file: " + path);
}

// Append-style merge: identical metadata required; lines of b that a lacks
// keep their relative order after a's lines; duplicates drop (idempotent).
inline CacheFile merge_caches(const CacheFile& a, const CacheFile& b) {
    if (fmt17(a.r_max) != fmt17(b.r_max) || a.precision != b.precision)
        throw CacheError("cannot merge caches with different metadata");
    CacheFile f = a;
    std::set<std::string> seen(a.lines.begin(), a.lines.end());
    for (const auto& line : b.lines)
        if (seen.insert(line).second) f.lines.push_back(line);
    return f;
}

struct CacheRecord {
    UnitPoly poly;
    double R = 0, l = 0;
    UnitPoly field_poly;
    Lat order_lat;
    std::string order_key;
    int class_index = 0;
    bool primitive = false;
    std::int64_t mu = 1;
    UnitPoly root_poly;
};

inline CacheRecord parse_cache_record(const std::string& payload) {
    auto parts = detail::split(payload, '|');
    if (parts.size() != 10) throw CacheError("cache record needs 10 fields: " + payload);
    CacheRecord r;
    try {
        r.poly = parse_poly(parts[0]);
        r.field_poly = parse_poly(parts[3]);
        r.root_poly = parse_poly(parts[9]);
    } catch (const DomainError& e) {
        throw CacheError(std::string("cache record: ") + e.what());
    }
    r.R = detail::parse_cache_double(parts[1], "cache record R");
    r.l = detail::parse_cache_double(parts[2], "cache record l");
    Int den = detail::parse_cache_int(parts[4], "cache record order denominator");
    auto rows = detail::split(parts[5], ';');
    if (rows.size() != 3) throw CacheError("cache record order rows are malformed: " + payload);
    auto r1 = detail::split(rows[0], ','), r2 = detail::split(rows[1], ','),
         r3 = detail::split(rows[2], ',');
    if (r1.size() != 3 || r2.size() != 2 || r3.size() != 1)
        throw CacheError("cache record order rows are malformed: " + payload);
    const char* what = "cache record order entry";
    Mat3 h{detail::parse_cache_int(r1[0], what), detail::parse_cache_int(r1[1], what),
           detail::parse_cache_int(r1[2], what), Int(0),
           detail::parse_cache_int(r2[0], what), detail::parse_cache_int(r2[1], what),
           Int(0),        Int(0),
           detail::parse_cache_int(r3[0], what)};
    Lat L{h, den};
    Lat canon = lat_canon({Vec3{h[0], h[1], h[2]}, Vec3{h[3], h[4], h[5]}, Vec3{h[6], h[7], h[8]}},
                          den);
    if (!(canon == L))
        throw CacheError("cache record order lattice is not in canonical form: " + payload);
    r.order_lat = L;
    r.order_key = parts[3] + "|" + parts[4] + "|" + parts[5];
    Int ci = detail::parse_cache_int(parts[6], "cache record class_index");
    if (ci < 0 || ci > 1000000000)
        throw CacheError("cache record class_index out of range: " + payload);
    r.class_index = static_cast<int>(ci.convert_to<long long>());
    if (parts[7] != "0" && parts[7] != "1")
        throw CacheError("cache record primitive flag must be 0 or 1: " + payload);
    r.primitive = parts[7] == "1";
    Int mu = detail::parse_cache_int(parts[8], "cache record mu");
    if (mu < 1 || mu > 1000000000) throw CacheError("cache record mu out of range: " + payload);
    r.mu = mu.convert_to<long long>();
    return r;
}

// Rebuild a full census from a cache.  Derived data (discriminants, indices,
// class numbers, ladder powers) is recomputed from scratch and checked
// against the records; any inconsistency raises CacheError.
inline Census census_from_cache(const CacheFile& f) {
    Census c;
    c.r_max = f.r_max;
    c.box = sweep_box(f.r_max);

    // Parse and validate records; duplicate full lines are benign (same file
    // appended twice), conflicting identities are not.
    std::vector<CacheRecord> recs;
    std::set<std::string> line_seen;
    std::set<std::tuple<UnitPoly, std::string, int>> identity_seen;
    for (std::size_t i = 0; i < f.lines.size(); ++i) {
        if (!line_seen.insert(f.lines[i]).second) continue;
        std::string payload = cache_verify_line(f.lines[i], i + 2);  // line 1 is the meta line
        CacheRecord r = parse_cache_record(payload);
        if (!is_admissible(r.poly) || !is_canonical(r.poly) || !is_admissible(r.root_poly) ||
            !is_canonical(r.root_poly) || !is_admissible(r.field_poly) ||
            !is_canonical(r.field_poly))
            throw CacheError("cache record polynomial is not canonical admissible: " + payload);
        if (!(r.R > 0) || !(r.l > 0))
            throw CacheError("cache record has nonpositive length data: " + payload);
        if (r.R > f.r_max + 1e-6 || r.l > 3 * f.r_max + 1e-6)
            throw CacheError("cache record exceeds the cache regulator bound: " + payload);
        if (r.primitive != (r.mu == 1) || r.primitive != (r.poly == r.root_poly))
            throw CacheError("cache record primitivity is inconsistent: " + payload);
        if (newton_power(r.root_poly, static_cast<unsigned>(r.mu)) != r.poly)
            throw CacheError("cache record is not the stated power of its root: " + payload);
        if (std::fabs(r.l - 3.0 * r.R * static_cast<double>(r.mu)) >
            1e-9 * std::max(1.0, std::fabs(r.l)))
            throw CacheError("cache record length disagrees with R and mu: " + payload);
        if (!identity_seen.insert({r.poly, r.order_key, r.class_index}).second)
            throw CacheError("cache contains conflicting duplicate records: " + payload);
        recs.push_back(std::move(r));
    }

    // Aggregate per order key (std::map: keys come out sorted, which is the
    // canonical order of the census summary table).
    struct OrderAgg {
        UnitPoly field_poly;
        Lat L;
        UnitPoly fund_poly;
        double R = 0;
        Int h_proper = 0;
        bool primitive_seen = false;
    };
    std::map<std::string, OrderAgg> agg;
    for (const auto& r : recs) {
        auto [it, fresh] = agg.try_emplace(r.order_key);
        OrderAgg& a = it->second;
        if (fresh) {
            a.field_poly = r.field_poly;
            a.L = r.order_lat;
            a.fund_poly = r.root_poly;
            a.R = r.R;
        } else {
            if (a.fund_poly != r.root_poly)
                throw CacheError("cache records disagree on the fundamental unit of " +
                                 r.order_key);
            if (a.R != r.R)
                throw CacheError("cache records disagree on the regulator of " + r.order_key);
        }
        if (r.primitive) {
            a.h_proper += 1;
            a.primitive_seen = true;
        }
    }

    // Build order summaries, recomputing derived data per distinct field.
    std::map<UnitPoly, std::pair<FieldCtx, Lat>> field_data;  // ctx + maximal order
    std::map<std::string, std::size_t> order_of_key;
    for (auto& [key, a] : agg) {
        if (!a.primitive_seen)
            throw CacheError("cache order has no primitive record: " + key);
        auto fit = field_data.find(a.field_poly);
        if (fit == field_data.end()) {
            FieldCtx F{a.field_poly};
            Lat maxL = maximal_order(F).L;
            fit = field_data.emplace(a.field_poly, std::make_pair(F, maxL)).first;
        }
        const FieldCtx& F = fit->second.first;
        if (!is_ring(F, a.L)) throw CacheError("cache order is not a ring: " + key);
        OrderSummary os;
        os.field_poly = a.field_poly;
        os.L = a.L;
        os.key = key;
        os.disc = order_disc(F, a.L);
        if (os.disc >= 0) throw CacheError("cache order has nonnegative discriminant: " + key);
        os.index_in_maximal = lat_index_int(a.L, fit->second.second);
        os.min_power = find_window_unit(F, a.L).k;
        os.fund_poly = newton_power(a.field_poly, static_cast<unsigned>(os.min_power));
        if (os.fund_poly != a.fund_poly)
            throw CacheError("cache records disagree with the recomputed fundamental unit of " +
                             key);
        os.R = a.R;
        os.h_proper = a.h_proper;
        order_of_key.emplace(key, c.orders.size());
        c.orders.push_back(std::move(os));
    }

    // h_total(O) = sum of h_proper over cached overorders of O (same field).
    for (auto& os : c.orders) {
        for (const auto& other : c.orders)
            if (os.field_poly == other.field_poly && lat_subset(os.L, other.L))
                os.h_total += other.h_proper;
        if (os.h_total < os.h_proper)
            throw CacheError("cache class numbers are inconsistent for " + os.key);
    }

    // Materialize records.
    c.records.reserve(recs.size());
    for (const auto& r : recs) {
        GeodesicClass g;
        g.poly = r.poly;
        g.order_id = order_of_key.at(r.order_key);
        g.class_index = r.class_index;
        g.R = r.R;
        g.l = r.l;
        g.N = std::exp(r.l);
        g.primitive = r.primitive;
        g.mu = r.mu;
        g.root_poly = r.root_poly;
        c.records.push_back(g);
    }
    std::sort(c.records.begin(), c.records.end(),
              [](const GeodesicClass& a, const GeodesicClass& b) {
                  return std::tie(a.l, a.poly, a.order_id, a.class_index) <
                         std::tie(b.l, b.poly, b.order_id, b.class_index);
              });
    return c;
}

}  // namespace cubic
