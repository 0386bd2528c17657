// Command-line front end for the exact census of complex cubic orders:
// resumable sweeps into a checksummed cache, counting tables against the
// e^{3x}/(3x) main term, geodesic-counting ratios, length Dirichlet series,
// kernel-transform evaluation, representation-identity verification, and
// per-order reports.  A fixed configuration yields byte-identical output;
// all work is offline and all floating output uses 12 significant digits.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include "cubic/cache.hpp"
#include "cubic/report.hpp"

namespace {

using nlohmann::ordered_json;

// Thrown for command-level misuse that CLI11's own parser cannot see
// (for example a subcommand missing a flag that is global by contract).
struct UsageError {
    std::string msg;
};

struct Ctx {
    double r_max = 0;
    bool have_r_max = false;
    std::string precision_text = "1/1000000000000";
    std::string cache_path = "census.cache";
    std::string format = "csv";
    int shards = 1;
    std::uint64_t seed = 12345;

    cubic::Rat precision() const { return cubic::parse_precision(precision_text); }
    bool json() const { return format == "json"; }
    std::string cache() const {
        if (const char* env = std::getenv("CUBIC_CENSUS_CACHE"); env && *env) return env;
        return cache_path;
    }
};

// Integers enter JSON as numbers when they fit 64 bits and as decimal
// strings beyond that; floating values are always fmt12 strings so the
// 12-significant-digit contract holds in both output formats.
ordered_json json_int(const cubic::Int& v) {
    if (v >= INT64_MIN && v <= INT64_MAX) return v.convert_to<std::int64_t>();
    return v.str();
}

void emit_csv(const std::vector<std::string>& header,
              const std::vector<std::vector<std::string>>& rows) {
    for (std::size_t i = 0; i < header.size(); ++i)
        std::cout << (i ? "," : "") << header[i];
    std::cout << "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) std::cout << (i ? "," : "") << row[i];
        std::cout << "\n";
    }
}

void emit_json(const ordered_json& j) { std::cout << j.dump(2) << "\n"; }

cubic::Census load_census(const Ctx& ctx) {
    return cubic::census_from_cache(cubic::load_cache(ctx.cache()));
}

// --- sweep -----------------------------------------------------------------

int cmd_sweep(const Ctx& ctx) {
    using namespace cubic;
    if (!ctx.have_r_max) throw UsageError{"sweep: --r-max is required"};
    const double r_max = ctx.r_max;
    const Rat precision = ctx.precision();
    const std::string path = ctx.cache();

    bool existed = std::filesystem::exists(path);
    CacheFile old;
    if (existed) {
        old = load_cache(path);
        if (old.precision != precision)
            throw CacheError("cache " + path + " was written with precision " +
                             fmt_rat(old.precision) + "; rerun with --precision " +
                             fmt_rat(old.precision) + " or point --cache at a fresh file");
    }

    Census census;
    CacheFile out;
    std::size_t new_records = 0;
    if (!existed) {
        census = run_sweep(r_max, precision, ctx.shards);
        out = cache_from_census(census, precision);
        new_records = out.lines.size();
    } else if (!(r_max > old.r_max) || fmt17(r_max) == fmt17(old.r_max)) {
        // The cache already covers the request: verify it end to end.
        census = census_from_cache(old);
        out = old;
    } else {
        census = run_sweep(r_max, precision, ctx.shards);
        CacheFile fresh = cache_from_census(census, precision);
        std::set<std::string> fresh_set(fresh.lines.begin(), fresh.lines.end());
        for (const auto& line : old.lines)
            if (!fresh_set.count(line))
                throw CacheError("existing cache record was not reproduced by the wider sweep: " +
                                 line);
        // Extend append-only: keep the old file's lines in place and add the
        // strictly new ones in sweep order.
        std::set<std::string> old_set(old.lines.begin(), old.lines.end());
        out = old;
        out.r_max = fresh.r_max;
        for (const auto& line : fresh.lines)
            if (!old_set.count(line)) {
                out.lines.push_back(line);
                ++new_records;
            }
    }
    save_cache(path, out);

    SweepSummary s = summarize_census(census, new_records, r_max, precision);
    if (ctx.json()) {
        ordered_json j;
        j["r_max"] = fmt12(s.r_max);
        j["requested_r_max"] = fmt12(s.requested_r_max);
        j["precision"] = fmt_rat(s.precision);
        j["records"] = s.records;
        j["new_records"] = s.new_records;
        j["primitive_classes"] = s.primitive_classes;
        j["orders"] = s.orders;
        j["sum_h_total"] = json_int(s.sum_h_total);
        j["sum_h_proper"] = json_int(s.sum_h_proper);
        j["cache"] = path;
        emit_json(j);
    } else {
        std::cout << sweep_summary_text(s) << "cache: " << path << "\n";
    }
    return 0;
}

// --- census table ------------------------------------------------------------

const std::vector<std::string> kCensusHeader = {
    "x",         "pi",          "sum_h_total",  "sum_h_proper",
    "main_term", "ratio_total", "ratio_proper", "adjudication"};

int cmd_census(const Ctx& ctx, const std::vector<double>& grid) {
    using namespace cubic;
    if (grid.empty()) {
        if (ctx.json())
            emit_json(ordered_json::array());
        else
            emit_csv(kCensusHeader, {});
        return 0;
    }
    Census c = load_census(ctx);
    std::vector<CensusRow> rows = census_report(c, grid);
    if (ctx.json()) {
        ordered_json arr = ordered_json::array();
        for (const CensusRow& r : rows) {
            ordered_json j;
            j["x"] = fmt12(r.x);
            j["pi"] = json_int(r.pi);
            j["sum_h_total"] = json_int(r.sum_h_total);
            j["sum_h_proper"] = json_int(r.sum_h_proper);
            j["main_term"] = fmt12(r.main_term);
            j["ratio_total"] = fmt12(r.ratio_total);
            j["ratio_proper"] = fmt12(r.ratio_proper);
            j["adjudication"] = r.adjudication;
            arr.push_back(std::move(j));
        }
        emit_json(arr);
    } else {
        std::vector<std::vector<std::string>> cells;
        for (const CensusRow& r : rows)
            cells.push_back({fmt12(r.x), r.pi.str(), r.sum_h_total.str(), r.sum_h_proper.str(),
                             fmt12(r.main_term), fmt12(r.ratio_total), fmt12(r.ratio_proper),
                             r.adjudication});
        emit_csv(kCensusHeader, cells);
    }
    return 0;
}

// --- geodesic counting ratios -------------------------------------------------

int cmd_pgt(const Ctx& ctx, const std::vector<double>& xs) {
    using namespace cubic;
    const std::vector<std::string> header = {"x", "value", "reference", "ratio"};
    if (xs.empty()) {
        if (ctx.json())
            emit_json(ordered_json::array());
        else
            emit_csv(header, {});
        return 0;
    }
    Census c = load_census(ctx);
    std::vector<PgtRow> rows = pgt_report(c, xs);
    if (ctx.json()) {
        ordered_json arr = ordered_json::array();
        for (const PgtRow& r : rows) {
            ordered_json j;
            j["x"] = fmt12(r.x);
            j["value"] = json_int(r.pi);
            j["reference"] = fmt12(r.reference);
            j["ratio"] = fmt12(r.ratio);
            arr.push_back(std::move(j));
        }
        emit_json(arr);
    } else {
        std::vector<std::vector<std::string>> cells;
        for (const PgtRow& r : rows)
            cells.push_back({fmt12(r.x), r.pi.str(), fmt12(r.reference), fmt12(r.ratio)});
        emit_csv(header, cells);
    }
    return 0;
}

// --- length Dirichlet series ---------------------------------------------------

int cmd_lseries(const Ctx& ctx, const std::vector<double>& ss) {
    using namespace cubic;
    const std::vector<std::string> header = {"s",     "value",    "reference", "ratio",
                                             "tail_low", "tail_high", "L_cut"};
    if (ss.empty()) {
        if (ctx.json())
            emit_json(ordered_json::array());
        else
            emit_csv(header, {});
        return 0;
    }
    Census c = load_census(ctx);
    std::vector<LSeriesRow> rows = lseries_report(c, ss);
    if (ctx.json()) {
        ordered_json arr = ordered_json::array();
        for (const LSeriesRow& r : rows) {
            ordered_json j;
            j["s"] = fmt12(r.s);
            j["value"] = fmt12(r.value);
            j["reference"] = fmt12(r.reference);
            j["ratio"] = fmt12(r.ratio);
            j["tail_low"] = fmt12(r.tail_low);
            j["tail_high"] = fmt12(r.tail_high);
            j["L_cut"] = fmt12(r.L_cut);
            arr.push_back(std::move(j));
        }
        emit_json(arr);
    } else {
        std::vector<std::vector<std::string>> cells;
        for (const LSeriesRow& r : rows)
            cells.push_back({fmt12(r.s), fmt12(r.value), fmt12(r.reference), fmt12(r.ratio),
                             fmt12(r.tail_low), fmt12(r.tail_high), fmt12(r.L_cut)});
        emit_csv(header, cells);
    }
    return 0;
}

// --- kernel transform ----------------------------------------------------------

int cmd_kernel(const Ctx& ctx, int N, const std::vector<double>& lambdas,
               const std::vector<double>& xs) {
    using namespace cubic;
    if (!xs.empty()) {
        std::vector<KernelPointRow> rows = kernel_point_report(N, lambdas, xs);
        if (ctx.json()) {
            ordered_json arr = ordered_json::array();
            for (const KernelPointRow& r : rows) {
                ordered_json j;
                j["lambda"] = fmt12(r.lambda);
                j["N"] = r.N;
                j["x"] = fmt12(r.x);
                j["value"] = fmt12(r.value);
                j["reference"] = fmt12(r.reference);
                j["ratio"] = fmt12(r.ratio);
                arr.push_back(std::move(j));
            }
            emit_json(arr);
        } else {
            std::vector<std::vector<std::string>> cells;
            for (const KernelPointRow& r : rows)
                cells.push_back({fmt12(r.lambda), std::to_string(r.N), fmt12(r.x), fmt12(r.value),
                                 fmt12(r.reference), fmt12(r.ratio)});
            emit_csv({"lambda", "N", "x", "value", "reference", "ratio"}, cells);
        }
        return 0;
    }
    // No evaluation points: census-weighted kernel sum over the cached
    // classes, with the truncation-tail band.
    Census c = load_census(ctx);
    std::vector<KernelSumRow> rows = kernel_sum_report(c, N, lambdas);
    if (ctx.json()) {
        ordered_json arr = ordered_json::array();
        for (const KernelSumRow& r : rows) {
            ordered_json j;
            j["lambda"] = fmt12(r.lambda);
            j["N"] = r.N;
            j["value"] = fmt12(r.value);
            j["tail_low"] = fmt12(r.tail_low);
            j["tail_high"] = fmt12(r.tail_high);
            j["L_cut"] = fmt12(r.L_cut);
            arr.push_back(std::move(j));
        }
        emit_json(arr);
    } else {
        std::vector<std::vector<std::string>> cells;
        for (const KernelSumRow& r : rows)
            cells.push_back({fmt12(r.lambda), std::to_string(r.N), fmt12(r.value),
                             fmt12(r.tail_low), fmt12(r.tail_high), fmt12(r.L_cut)});
        emit_csv({"lambda", "N", "value", "tail_low", "tail_high", "L_cut"}, cells);
    }
    return 0;
}

// --- representation verification -------------------------------------------------

int cmd_reps(const Ctx& ctx) {
    using namespace cubic;
    RepsReport rep = verify_reps(ctx.seed);
    if (ctx.json()) {
        ordered_json j;
        ordered_json items = ordered_json::array();
        for (const RepsItem& it : rep.items) {
            ordered_json ji;
            ji["name"] = it.name;
            ji["computed"] = it.computed;
            ji["expected"] = it.expected;
            ji["match"] = it.match;
            items.push_back(std::move(ji));
        }
        j["items"] = std::move(items);
        ordered_json audit = ordered_json::array();
        for (const auto& [label, text] : rep.audit) {
            ordered_json ja;
            ja["label"] = label;
            ja["text"] = text;
            audit.push_back(std::move(ja));
        }
        j["audit"] = std::move(audit);
        j["all_match"] = rep.all_match;
        emit_json(j);
    } else {
        std::cout << reps_report_text(rep);
    }
    return rep.all_match ? 0 : 1;
}

// --- per-order reports --------------------------------------------------------

int cmd_order(const Ctx& ctx, std::int64_t t, std::int64_t s, bool classes_only) {
    using namespace cubic;
    const UnitPoly input{t, s};
    // Z[theta] and Z[theta^{-1}] coincide, so the canonical presentation
    // (dominant root > 1) loses nothing.
    const UnitPoly p = canonicalize(input);
    require_admissible(p, classes_only ? "class-number" : "order");
    FieldCtx F(p);
    ModuleClasses mc = module_classes(F, lat_identity());

    if (classes_only) {
        if (ctx.json()) {
            ordered_json j;
            j["t"] = t;
            j["s"] = s;
            j["h_total"] = json_int(mc.h_total);
            j["h_proper"] = json_int(mc.h_proper);
            emit_json(j);
        } else {
            emit_csv({"t", "s", "h_total", "h_proper"},
                     {{std::to_string(t), std::to_string(s), mc.h_total.str(), mc.h_proper.str()}});
        }
        return 0;
    }

    Order maximal = maximal_order(F);
    Int fdisc = order_disc(F, maximal.L);
    Int index = lat_index_int(lat_identity(), maximal.L);

    // theta is a power of the fundamental norm-one unit of the field; the
    // order's own fundamental unit is the least power of that unit lying in
    // Z[theta].
    auto [root, mu] = power_decompose(p, 0.25);
    FieldCtx Fq(root);
    Lat OL = lat_identity();
    if (mu > 1) {
        std::vector<Vec3> rows;
        for (int i = 0; i < 3; ++i)
            rows.push_back(detail::elem_int_vec(detail::elem_power(Fq, mu * i), "order basis"));
        OL = lat_canon(rows, Int(1));
    }
    std::int64_t k = find_window_unit(Fq, OL).k;
    UnitPoly fund = newton_power(root, static_cast<unsigned>(k));
    double R_order =
        static_cast<double>(k) * regulator_and_length(root, ctx.precision()).first.mid();

    if (ctx.json()) {
        ordered_json j;
        j["t"] = t;
        j["s"] = s;
        j["disc"] = json_int(disc_cubic(p));
        j["field_t"] = root.t;
        j["field_s"] = root.s;
        j["field_disc"] = json_int(fdisc);
        j["index_in_maximal"] = json_int(index);
        j["theta_power"] = mu;
        j["fund_t"] = fund.t;
        j["fund_s"] = fund.s;
        j["regulator"] = fmt12(R_order);
        j["h_total"] = json_int(mc.h_total);
        j["h_proper"] = json_int(mc.h_proper);
        emit_json(j);
    } else {
        emit_csv({"t", "s", "disc", "field_t", "field_s", "field_disc", "index_in_maximal",
                  "theta_power", "fund_t", "fund_s", "regulator", "h_total", "h_proper"},
                 {{std::to_string(t), std::to_string(s), disc_cubic(p).str(),
                   std::to_string(root.t), std::to_string(root.s), fdisc.str(), index.str(),
                   std::to_string(mu), std::to_string(fund.t), std::to_string(fund.s),
                   fmt12(R_order), mc.h_total.str(), mc.h_proper.str()}});
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact verification census for unit lattices of complex cubic orders"};
    app.fallthrough(true);
    app.require_subcommand(1);

    Ctx ctx;
    app.add_option("--r-max", ctx.r_max, "sweep extent in regulator scale")
        ->check(CLI::PositiveNumber)
        ->each([&](const std::string&) { ctx.have_r_max = true; });
    app.add_option("--precision", ctx.precision_text,
                   "certified bracket width as a rational num/den");
    app.add_option("--cache", ctx.cache_path,
                   "cache file path (env CUBIC_CENSUS_CACHE overrides)");
    app.add_option("--format", ctx.format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--shards", ctx.shards, "worker threads for the sweep")
        ->check(CLI::PositiveNumber);
    app.add_option("--seed", ctx.seed, "seed for randomized verification samples");

    CLI::App* sweep = app.add_subcommand("sweep", "enumerate unit classes up to --r-max");

    std::vector<double> census_grid;
    CLI::App* census = app.add_subcommand("census", "counting table against e^{3x}/(3x)");
    census->add_option("--x", census_grid, "regulator-scale grid points")->delimiter(',');

    std::vector<double> pgt_xs;
    CLI::App* pgt = app.add_subcommand("pgt", "counting ratio pi(x) log(x) / x");
    pgt->add_option("--x", pgt_xs, "norm-scale evaluation points")->delimiter(',');

    std::vector<double> lseries_ss;
    CLI::App* lseries = app.add_subcommand("lseries", "length Dirichlet series partial sums");
    lseries->add_option("--s", lseries_ss, "evaluation points, each > 1")->delimiter(',');

    int kernel_N = 1;
    std::vector<double> kernel_lambdas, kernel_xs;
    CLI::App* kernel = app.add_subcommand(
        "kernel", "resolvent kernel transform: point values, or census sums without --x");
    kernel->add_option("--N", kernel_N, "resolvent power, >= 1")->required();
    kernel->add_option("--lambda", kernel_lambdas, "spectral parameters, each > 0")
        ->required()
        ->delimiter(',');
    kernel->add_option("--x", kernel_xs, "evaluation points")->delimiter(',');

    CLI::App* reps = app.add_subcommand("reps", "verify the representation-identity table");

    std::int64_t order_t = 0, order_s = 0;
    CLI::App* order = app.add_subcommand("order", "report on the monogenic order Z[theta_{t,s}]");
    order->add_option("--t", order_t, "trace coefficient t")->required();
    order->add_option("--s", order_s, "second coefficient s")->required();

    std::int64_t cn_t = 0, cn_s = 0;
    CLI::App* cn = app.add_subcommand("class-number", "class numbers of Z[theta_{t,s}]");
    cn->add_option("--t", cn_t, "trace coefficient t")->required();
    cn->add_option("--s", cn_s, "second coefficient s")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (sweep->parsed()) return cmd_sweep(ctx);
        if (census->parsed()) return cmd_census(ctx, census_grid);
        if (pgt->parsed()) return cmd_pgt(ctx, pgt_xs);
        if (lseries->parsed()) return cmd_lseries(ctx, lseries_ss);
        if (kernel->parsed()) return cmd_kernel(ctx, kernel_N, kernel_lambdas, kernel_xs);
        if (reps->parsed()) return cmd_reps(ctx);
        if (order->parsed()) return cmd_order(ctx, order_t, order_s, false);
        if (cn->parsed()) return cmd_order(ctx, cn_t, cn_s, true);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.msg << "\n";
        return 2;
    } catch (const cubic::CacheError& e) {
        std::cerr << "cache error: " << e.what() << "\n";
        return 4;
    } catch (const cubic::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
