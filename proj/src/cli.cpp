#include "latpar/cli.hpp"

#include <chrono>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "latpar/cache.hpp"
#include "latpar/latin.hpp"
#include "latpar/matrix.hpp"
#include "latpar/poly.hpp"
#include "latpar/shifted.hpp"
#include "latpar/sums.hpp"
#include "latpar/verify.hpp"

namespace latpar::cli {

namespace {

enum class Format { Text, Json, Csv };

const std::map<std::string, Format> kFormatNames{
    {"text", Format::Text}, {"json", Format::Json}, {"csv", Format::Csv}};

const std::map<std::string, Filter> kFilterNames{
    {"all", Filter::All},
    {"reduced", Filter::Reduced},
    {"normalized_unipotent", Filter::NormalizedUnipotent}};

struct CacheMismatchError : Error {
    explicit CacheMismatchError(const std::string& msg) : Error(msg) {}
};

void emit_error(std::ostream& err, const std::string& type, const std::string& message) {
    err << nlohmann::json{{"error", {{"type", type}, {"message", message}}}}.dump() << "\n";
}

void write_payload(const std::string& payload, const std::string& out_path, std::ostream& out) {
    if (out_path.empty()) {
        out << payload;
        return;
    }
    std::ofstream f(out_path);
    if (!f.is_open()) throw InvalidArgument("cannot open output file " + out_path);
    f << payload;
}

// Shared flags; not every subcommand binds every field.
struct Args {
    int n = 3;
    int p = 0;
    std::string mode = "all";
    int threads = 1;
    Format format = Format::Text;
    std::string out_path;
    std::string cache_path;
    bool verify_cache = false;
    uint64_t seed = 12345;
    int trials = 100;
    bool extended = false;
    int max_order = kDefaultOrderCap;
    std::string filter = "all";
    bool list = false;
};

// Fetch-or-compute through the optional cache; with verify_cache a hit is
// recomputed and compared after stripping timing fields.
template <class ComputeFn>
nlohmann::json fetch_or_compute(ResultCache* cache, bool verify_cache, const std::string& task,
                                const nlohmann::json& params, ComputeFn compute) {
    if (cache == nullptr) return compute();
    const nlohmann::json key = ResultCache::make_key(task, params);
    if (auto hit = cache->lookup(key)) {
        if (verify_cache) {
            const nlohmann::json fresh = compute();
            if (ResultCache::strip_elapsed(fresh) != ResultCache::strip_elapsed(*hit)) {
                throw CacheMismatchError("cache entry for " + task +
                                         " does not match recomputation");
            }
        }
        return *hit;
    }
    const nlohmann::json fresh = compute();
    cache->store(key, fresh);
    return fresh;
}

int resolve_prime(const Args& a, const std::string& mode) {
    if (a.p != 0) return a.p;
    if (a.n % 2 == 1 && is_prime(a.n)) return a.n;
    throw InvalidArgument("mode " + mode + " needs -p/--prime (or -n set to an odd prime)");
}

verify::Options verify_options(const Args& a, ResultCache* cache) {
    verify::Options o;
    o.threads = a.threads;
    o.max_order = a.max_order;
    o.extended = a.extended;
    o.seed = a.seed;
    o.trials = a.trials;
    o.cache = cache;
    return o;
}

int run_enumerate(const Args& a, std::ostream& out) {
    std::unique_ptr<ResultCache> cache;
    if (!a.cache_path.empty()) cache = std::make_unique<ResultCache>(a.cache_path);

    if (a.list) {
        if (a.n > kDefaultOrderCap) {
            throw ResourceError("listing squares is capped at order 5; counters only above");
        }
        const Filter filter = kFilterNames.at(a.filter);
        std::ostringstream os;
        if (a.format == Format::Json) {
            nlohmann::json squares = nlohmann::json::array();
            for_each_square(a.n, filter, [&](const LatinSquare& sq) { squares.push_back(sq.to_json()); },
                            a.max_order);
            os << squares.dump(2) << "\n";
        } else if (a.format == Format::Csv) {
            for_each_square(a.n, filter,
                            [&](const LatinSquare& sq) {
                                for (int i = 0; i < sq.n(); ++i) {
                                    for (int j = 0; j < sq.n(); ++j) {
                                        if (i != 0 || j != 0) os << ",";
                                        os << sq.symbol(i, j);
                                    }
                                }
                                os << "\n";
                            },
                            a.max_order);
        } else {
            for_each_square(a.n, filter,
                            [&](const LatinSquare& sq) {
                                for (int i = 0; i < sq.n(); ++i) {
                                    for (int j = 0; j < sq.n(); ++j) {
                                        if (j != 0) os << " ";
                                        os << sq.symbol(i, j);
                                    }
                                    os << "\n";
                                }
                                os << "\n";
                            },
                            a.max_order);
        }
        write_payload(os.str(), a.out_path, out);
        return kExitPass;
    }

    const nlohmann::json payload =
        fetch_or_compute(cache.get(), a.verify_cache, "count_summary", {{"n", a.n}},
                         [&] { return count_summary(a.n, a.threads, a.max_order).to_json(); });
    std::ostringstream os;
    if (a.format == Format::Json) {
        os << payload.dump(2) << "\n";
    } else if (a.format == Format::Csv) {
        CountSummary::csv_header(os);
        os << payload["n"].get<int>() << "," << payload["total"].get<std::string>() << ","
           << payload["even"].get<std::string>() << "," << payload["odd"].get<std::string>() << ","
           << payload["even_minus_odd"].get<std::string>() << ","
           << payload["unipotent_even"].get<std::string>() << ","
           << payload["unipotent_odd"].get<std::string>() << ","
           << payload["alon_tarsi"].get<std::string>() << ","
           << payload["reduced_even"].get<std::string>() << ","
           << payload["reduced_odd"].get<std::string>() << ","
           << payload["reduced_diff"].get<std::string>() << ","
           << payload["reduced_pp"].get<std::string>() << ","
           << payload["reduced_pm"].get<std::string>() << ","
           << payload["reduced_mp"].get<std::string>() << ","
           << payload["reduced_mm"].get<std::string>() << "," << payload["elapsed_ms"].dump() << ","
           << payload["threads"].get<int>() << "\n";
    } else {
        os << "order " << payload["n"].get<int>() << "\n";
        for (const char* k : {"total", "even", "odd", "even_minus_odd", "unipotent_even",
                              "unipotent_odd", "alon_tarsi", "reduced_even", "reduced_odd",
                              "reduced_diff", "reduced_pp", "reduced_pm", "reduced_mp",
                              "reduced_mm"}) {
            os << "    " << k << " = " << payload[k].get<std::string>() << "\n";
        }
    }
    write_payload(os.str(), a.out_path, out);
    return kExitPass;
}

int run_sum(const Args& a, std::ostream& out) {
    std::unique_ptr<ResultCache> cache;
    if (!a.cache_path.empty()) cache = std::make_unique<ResultCache>(a.cache_path);

    SumOptions sopts;
    sopts.threads = a.threads;

    std::string task;
    nlohmann::json params;
    std::function<nlohmann::json()> compute;
    std::optional<Status> status;

    if (a.mode == "det_n") {
        task = "det_power_sum";
        params = {{"n", a.n}};
        compute = [&] { return det_power_sum(a.n, sopts).to_json(); };
    } else if (a.mode == "per_det") {
        task = "per_det_sum";
        params = {{"n", a.n}};
        compute = [&] { return per_det_sum(a.n, sopts).to_json(); };
    } else if (a.mode == "drisko") {
        const int p = resolve_prime(a, a.mode);
        task = "drisko_residue";
        params = {{"n", p}};
        compute = [&, p] { return drisko_residue(p, sopts).to_json(); };
    } else if (a.mode == "classes") {
        const int p = resolve_prime(a, a.mode);
        task = "class_permanent_sum";
        params = {{"n", p}};
        compute = [&, p] { return class_permanent_sum(p, sopts).to_json(); };
    } else {
        throw InvalidArgument("sum supports --mode det_n|per_det|drisko|classes");
    }

    nlohmann::json payload = fetch_or_compute(cache.get(), a.verify_cache, task, params, compute);

    int exit_code = kExitPass;
    if (a.mode == "drisko") {
        const int p = resolve_prime(a, a.mode);
        const SumResult s = SumResult::from_json(payload);
        const Status st = verify::drisko_status(s, shifted_family_per_det_sum(p), p);
        if (st == Status::Fail) exit_code = kExitMismatch;
        status = st;
        payload["status"] = to_string(st);
    }

    std::ostringstream os;
    if (a.format == Format::Json) {
        os << payload.dump(2) << "\n";
    } else if (a.format == Format::Csv) {
        SumResult::csv_header(os);
        SumResult::from_json(payload).append_csv(os);
    } else {
        os << SumResult::from_json(payload).to_text();
        if (status.has_value()) os << "    status = " << to_string(*status) << "\n";
    }
    write_payload(os.str(), a.out_path, out);
    return exit_code;
}

int run_verify(const Args& a, std::ostream& out) {
    std::unique_ptr<ResultCache> cache;
    if (!a.cache_path.empty()) cache = std::make_unique<ResultCache>(a.cache_path);
    const verify::Options vopts = verify_options(a, cache.get());

    std::vector<VerificationReport> reports;
    const std::string& m = a.mode;
    if (m == "all") {
        std::optional<int> p;
        if (a.p != 0) p = a.p;
        reports = verify::run_all(a.n, p, vopts);
    } else if (m == "per_n") {
        reports.push_back(verify::per_n_routes(a.n, vopts));
    } else if (m == "det_n") {
        reports.push_back(verify::det_n_routes(a.n, vopts));
    } else if (m == "per_det") {
        reports.push_back(verify::per_det_routes(a.n, vopts));
    } else if (m == "drisko") {
        reports.push_back(verify::drisko_report(resolve_prime(a, m), vopts));
    } else if (m == "classes") {
        reports.push_back(verify::classes_report(resolve_prime(a, m), vopts));
    } else if (m == "lemma32") {
        reports.push_back(verify::shift_residue_report(resolve_prime(a, m), vopts));
    } else if (m == "orbits") {
        reports.push_back(verify::orbit_report(resolve_prime(a, m), vopts));
    } else if (m == "zappa") {
        reports.push_back(verify::zappa_report(a.n, vopts));
    } else if (m == "thm41") {
        reports.push_back(verify::tuple_coeff_report(a.n, vopts));
    } else if (m == "prop42") {
        reports.push_back(verify::tuple_identity_report(a.n, vopts));
    } else {
        throw InvalidArgument("unknown verify mode " + m);
    }

    std::ostringstream os;
    if (a.format == Format::Json) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& r : reports) arr.push_back(r.to_json());
        os << arr.dump(2) << "\n";
    } else if (a.format == Format::Csv) {
        VerificationReport::csv_header(os);
        for (const auto& r : reports) r.append_csv(os);
    } else {
        for (const auto& r : reports) os << r.to_text();
    }
    write_payload(os.str(), a.out_path, out);

    for (const auto& r : reports) {
        if (r.failed()) return kExitMismatch;
    }
    return kExitPass;
}

int run_bench(const Args& a, std::ostream& out) {
    using Clock = std::chrono::steady_clock;
    nlohmann::json rows = nlohmann::json::array();

    auto add_row = [&](const std::string& name, int n, uint64_t iters, double ms) {
        rows.push_back({{"bench", name},
                        {"n", n},
                        {"iterations", iters},
                        {"elapsed_ms", ms},
                        {"rate_per_s", ms > 0 ? 1000.0 * static_cast<double>(iters) / ms : 0.0}});
    };

    const uint64_t code_mask = (1ull << 25) - 1ull;
    {
        const int n = 5;
        const uint64_t iters = 200000;
        const auto t0 = Clock::now();
        for (uint64_t c = 0; c < iters; ++c) {
            (void)permanent(BitMatrix::unrank((c * 0x9e3779b9ull) & code_mask, n));
        }
        add_row("ryser_permanent", n, iters,
                std::chrono::duration<double, std::milli>(Clock::now() - t0).count());
    }
    {
        const int n = 5;
        const uint64_t iters = 500000;
        const auto t0 = Clock::now();
        for (uint64_t c = 0; c < iters; ++c) {
            (void)determinant(BitMatrix::unrank((c * 0x9e3779b9ull) & code_mask, n));
        }
        add_row("bareiss_determinant", n, iters,
                std::chrono::duration<double, std::milli>(Clock::now() - t0).count());
    }
    {
        const auto t0 = Clock::now();
        const CountSummary cs = count_summary(4, a.threads);
        add_row("count_summary", 4, static_cast<uint64_t>(cs.total),
                std::chrono::duration<double, std::milli>(Clock::now() - t0).count());
    }
    {
        SumOptions sopts;
        sopts.threads = a.threads;
        const auto t0 = Clock::now();
        const SumResult r = det_power_sum(4, sopts);
        add_row("det_power_sum", 4, r.term_count,
                std::chrono::duration<double, std::milli>(Clock::now() - t0).count());
    }

    std::ostringstream os;
    if (a.format == Format::Json) {
        os << rows.dump(2) << "\n";
    } else if (a.format == Format::Csv) {
        os << "bench,n,iterations,elapsed_ms,rate_per_s\n";
        for (const auto& r : rows) {
            os << r["bench"].get<std::string>() << "," << r["n"].get<int>() << ","
               << r["iterations"].get<uint64_t>() << "," << r["elapsed_ms"].get<double>() << ","
               << r["rate_per_s"].get<double>() << "\n";
        }
    } else {
        for (const auto& r : rows) {
            os << r["bench"].get<std::string>() << " n=" << r["n"].get<int>() << ": "
               << r["iterations"].get<uint64_t>() << " items in " << r["elapsed_ms"].get<double>()
               << " ms\n";
        }
    }
    write_payload(os.str(), a.out_path, out);
    return kExitPass;
}

int run_report(const Args& a, std::ostream& out) {
    if (a.cache_path.empty()) throw InvalidArgument("report needs --cache PATH");
    const ResultCache cache(a.cache_path);

    std::ostringstream os;
    if (a.format == Format::Json) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& e : cache.entries()) arr.push_back({{"key", e.key}, {"payload", e.payload}});
        os << arr.dump(2) << "\n";
    } else if (a.format == Format::Csv) {
        auto quote = [](const std::string& s) {
            std::string q = "\"";
            for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
            q += "\"";
            return q;
        };
        os << "task,params,payload\n";
        for (const auto& e : cache.entries()) {
            os << e.key["task"].get<std::string>() << "," << quote(e.key["params"].dump()) << ","
               << quote(e.payload.dump()) << "\n";
        }
    } else {
        for (const auto& e : cache.entries()) {
            os << e.key["task"].get<std::string>() << " " << e.key["params"].dump() << " -> "
               << e.payload.dump() << "\n";
        }
    }
    write_payload(os.str(), a.out_path, out);
    return kExitPass;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"exact Latin square parity invariants: enumeration, alternating sums, and "
                 "polynomial coefficient routes with cross-verification"};
    app.require_subcommand(1);

    Args a;

    auto add_common = [&](CLI::App* cmd, bool with_np) {
        if (with_np) {
            cmd->add_option("-n,--order", a.n, "square order");
            cmd->add_option("-p,--prime", a.p, "odd prime for residue checks");
        }
        cmd->add_option("--threads", a.threads, "worker count, 0 = hardware");
        cmd->add_option("--format", a.format, "output format")
            ->transform(CLI::CheckedTransformer(kFormatNames, CLI::ignore_case));
        cmd->add_option("--out", a.out_path, "write output to a file");
        cmd->add_option("--cache", a.cache_path, "JSON-lines result cache");
        cmd->add_flag("--verify-cache", a.verify_cache, "recompute hits and compare");
        cmd->add_option("--max-order", a.max_order, "enumeration cap override (up to 6)");
    };

    CLI::App* enum_cmd = app.add_subcommand("enumerate", "count or list Latin squares");
    add_common(enum_cmd, true);
    enum_cmd->add_option("--filter", a.filter, "all | reduced | normalized_unipotent")
        ->check(CLI::IsMember({"all", "reduced", "normalized_unipotent"}));
    enum_cmd->add_flag("--list", a.list, "emit the squares instead of the count summary");

    CLI::App* sum_cmd = app.add_subcommand("sum", "exhaustive alternating sums over (0,1)-matrices");
    add_common(sum_cmd, true);
    sum_cmd->add_option("--mode", a.mode, "det_n | per_det | drisko | classes")->required();

    CLI::App* verify_cmd = app.add_subcommand("verify", "run identity and congruence checks");
    add_common(verify_cmd, true);
    verify_cmd->add_option("--mode", a.mode,
                           "per_n | det_n | per_det | drisko | classes | lemma32 | orbits | zappa "
                           "| thm41 | prop42 | all");
    verify_cmd->add_option("--seed", a.seed, "seed for randomized identity trials");
    verify_cmd->add_option("--trials", a.trials, "number of randomized trials");
    verify_cmd->add_flag("--extended", a.extended, "enable order-5 heavy routes");

    CLI::App* bench_cmd = app.add_subcommand("bench", "kernel micro-benchmarks");
    add_common(bench_cmd, false);

    CLI::App* report_cmd = app.add_subcommand("report", "render a result cache");
    add_common(report_cmd, false);

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("latpar");
    for (const auto& s : args) argv.push_back(s.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitPass;
    } catch (const CLI::ParseError& e) {
        emit_error(err, "invalid_arguments", e.what());
        return kExitUsage;
    }

    try {
        if (enum_cmd->parsed()) return run_enumerate(a, out);
        if (sum_cmd->parsed()) return run_sum(a, out);
        if (verify_cmd->parsed()) return run_verify(a, out);
        if (bench_cmd->parsed()) return run_bench(a, out);
        if (report_cmd->parsed()) return run_report(a, out);
        emit_error(err, "invalid_arguments", "missing subcommand");
        return kExitUsage;
    } catch (const CacheMismatchError& e) {
        emit_error(err, "verification_mismatch", e.what());
        return kExitMismatch;
    } catch (const ResourceError& e) {
        emit_error(err, "resource_cap", e.what());
        return kExitResource;
    } catch (const InternalError& e) {
        emit_error(err, "internal_error", e.what());
        return kExitInternal;
    } catch (const InvalidArgument& e) {
        emit_error(err, "invalid_arguments", e.what());
        return kExitUsage;
    } catch (const std::exception& e) {
        emit_error(err, "internal_error", e.what());
        return kExitInternal;
    }
}

}  // namespace latpar::cli
