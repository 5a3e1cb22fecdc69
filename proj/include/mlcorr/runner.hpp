// runner.hpp
// Experiment orchestration: validated run configurations, sequence
// provisioning through the sieve cache, deterministic CSV/JSON emission and
// an append-only JSON-lines run log.
//
// Every command writes its outputs under out_dir; the run log
// (out_dir/runlog.jsonl) is the only file that carries timestamps.

#pragma once
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <map>
#include <random>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "json.hpp"

#include "mlcorr/bound_chain.hpp"
#include "mlcorr/cache.hpp"
#include "mlcorr/correlation.hpp"
#include "mlcorr/dynamics.hpp"
#include "mlcorr/error.hpp"
#include "mlcorr/gowers.hpp"
#include "mlcorr/io.hpp"
#include "mlcorr/parallel.hpp"
#include "mlcorr/random.hpp"
#include "mlcorr/sieve.hpp"
#include "mlcorr/spectral.hpp"
#include "mlcorr/verify.hpp"

namespace mlcorr::runner {

namespace fs = std::filesystem;
using nlohmann::json;

inline constexpr const char* kToolVersion = "0.1.0";

enum ExitCode : int { kOk = 0, kFailure = 1, kConfigError = 2, kCapacityError = 3, kVerificationFailure = 4 };

class VerificationFailure : public Error {
public:
    using Error::Error;
};

inline const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names{"sieve",   "corr",      "cesaro", "geom",     "chowla",
                                                "cubic",   "expsum",    "quadphase", "gowers", "dynamics",
                                                "kbsz",    "vdc",       "verify"};
    return names;
}

struct RunConfig {
    std::string command;
    std::string subcommand;  // dynamics: cubic | birkhoff | ww

    // weights
    std::string kind = "mobius";  // mobius | liouville | omega | random
    std::vector<std::size_t> n_grid;
    std::size_t n_max = 0;  // sieve / verify / geom range
    std::string out;        // sieve output file name

    std::vector<double> eps{0.5, 1.0, 2.0};
    std::string method = "fft";

    double rho = 2.0;
    int m_max = 0;
    std::vector<double> deltas;
    std::size_t levels = 3;

    std::vector<std::size_t> shifts;
    std::vector<int> exponents;

    std::vector<int> ks{1, 2, 3};

    double alpha = kDefaultAlpha;
    double beta = 0.0;
    std::string system = "rotation";  // rotation | skew
    std::string coord = "x";          // coordinate the characters act on
    std::vector<std::int64_t> chars{1, 1, 1};
    std::vector<double> x0{0.0, 0.0};
    double epsilon = 0.25;
    std::size_t prime_cap = kDefaultPrimeCap;

    std::vector<std::size_t> H;
    std::size_t draws = 1000;

    bool bound_chain = false;
    std::string inject_fault;

    SupOptions sup;

    // global
    std::string out_dir = ".";
    std::string cache_dir;
    unsigned threads = 1;
    std::uint64_t seed = 1;
    bool overwrite = false;
    std::size_t memory_budget = std::size_t{1} << 30;
    bool omega_one_is_one = false;

    json to_json() const {
        json j;
        j["command"] = command;
        if (!subcommand.empty()) j["subcommand"] = subcommand;
        j["kind"] = kind;
        j["n_grid"] = n_grid;
        j["n_max"] = n_max;
        j["eps"] = eps;
        j["method"] = method;
        j["rho"] = rho;
        j["m_max"] = m_max;
        j["deltas"] = deltas;
        j["levels"] = levels;
        j["shifts"] = shifts;
        j["exponents"] = exponents;
        j["ks"] = ks;
        j["alpha"] = alpha;
        j["beta"] = beta;
        j["system"] = system;
        j["coord"] = coord;
        j["chars"] = chars;
        j["x0"] = x0;
        j["epsilon"] = epsilon;
        j["prime_cap"] = prime_cap;
        j["H"] = H;
        j["draws"] = draws;
        j["bound_chain"] = bound_chain;
        j["inject_fault"] = inject_fault;
        j["sup"] = {{"grid", sup.grid},
                    {"target_ratio", sup.target_ratio},
                    {"max_doublings", sup.max_doublings},
                    {"refine_cells", sup.refine_cells},
                    {"golden_iterations", sup.golden_iterations}};
        j["out_dir"] = out_dir;
        j["cache_dir"] = cache_dir;
        j["threads"] = threads;
        j["seed"] = seed;
        j["memory_budget"] = memory_budget;
        j["omega_one_is_one"] = omega_one_is_one;
        if (!out.empty()) j["out"] = out;
        return j;
    }
};

struct ExperimentRecord {
    std::string command;
    json config;
    std::string start;
    std::string end;
    std::vector<std::string> outputs;
    std::string tool_version = kToolVersion;
    std::map<std::string, std::uint32_t> cache_checksums;  // kind -> CRC-32 of the sieved values
    int exit_code = kOk;

    json to_json() const {
        json j{{"command", command}, {"config", config},   {"start", start},
               {"end", end},         {"outputs", outputs}, {"tool_version", tool_version},
               {"exit_code", exit_code}};
        json sums = json::object();
        for (const auto& [k, v] : cache_checksums) sums[k] = v;
        j["cache_checksums"] = sums;
        return j;
    }
};

// ---------------------------------------------------------------------------
// validation

namespace detail {

inline std::size_t max_of(const std::vector<std::size_t>& v) {
    return v.empty() ? 0 : *std::max_element(v.begin(), v.end());
}

inline bool weight_kind_ok(const std::string& k) {
    return k == "mobius" || k == "liouville" || k == "random";
}

// Bytes the command will hold at peak, dominated by the sieve and FFT buffers.
inline std::size_t estimate_bytes(const RunConfig& c, std::size_t sieve_n) {
    const std::size_t N = max_of(c.n_grid);
    std::size_t fft = 0;
    if (c.command == "corr" || c.command == "cesaro" || c.command == "geom")
        fft = 2 * next_pow2(4 * N + 1) * sizeof(cplx);
    if (c.command == "expsum" || c.command == "kbsz" || (c.command == "dynamics" && c.subcommand == "ww") ||
        c.bound_chain)
        fft = std::max(fft, (c.sup.grid ? c.sup.grid : default_grid(N)) * sizeof(cplx) * 2);
    if (c.command == "cubic" || c.command == "dynamics") fft = std::max(fft, 3 * next_pow2(4 * N) * sizeof(cplx));
    return sieve_n + fft;
}

}  // namespace detail

// A(1..n) the command reads.
inline std::size_t required_sieve(const RunConfig& c) {
    const std::size_t N = detail::max_of(c.n_grid);
    const std::string& cmd = c.command;
    if (cmd == "sieve") return c.n_max;
    if (cmd == "corr" || cmd == "cesaro" || cmd == "cubic") return 2 * N;
    if (cmd == "geom") {
        if (c.n_max) return c.n_max;
        return 2 * floor_pow(c.rho, c.m_max);
    }
    if (cmd == "chowla") return N + (c.shifts.empty() ? 0 : c.shifts.back());
    if (cmd == "expsum" || cmd == "quadphase" || cmd == "gowers") return N;
    if (cmd == "dynamics") return c.subcommand == "cubic" ? 2 * N : N;
    return 0;
}

inline void validate(const RunConfig& c) {
    const auto& names = command_names();
    if (std::find(names.begin(), names.end(), c.command) == names.end())
        throw ConfigError("command", "unknown command '" + c.command + "'");
    if (c.threads < 1) throw ConfigError("threads", "must be >= 1");
    if (c.memory_budget < 1) throw ConfigError("memory-budget", "must be >= 1");

    const std::string& cmd = c.command;
    const bool uses_grid = cmd == "corr" || cmd == "cesaro" || cmd == "chowla" || cmd == "cubic" ||
                           cmd == "expsum" || cmd == "quadphase" || cmd == "gowers" || cmd == "dynamics" ||
                           cmd == "kbsz" || cmd == "vdc";
    if (uses_grid) {
        if (c.n_grid.empty()) throw ConfigError("N", "at least one N is required");
        for (auto N : c.n_grid)
            if (N < 1) throw ConfigError("N", "zero-length sequence");
    }
    if (cmd == "corr" && c.n_grid.size() != 1) throw ConfigError("N", "corr takes a single N");
    if (cmd == "corr" && c.method != "fft" && c.method != "naive")
        throw ConfigError("method", "must be fft or naive");
    if (cmd == "cesaro" || cmd == "expsum")
        for (double e : c.eps)
            if (!(e > 0.0)) throw ConfigError("eps", "entries must be positive");

    if (cmd != "sieve" && cmd != "kbsz" && cmd != "vdc" && cmd != "verify") {
        if (!detail::weight_kind_ok(c.kind))
            throw ConfigError("kind", "must be mobius, liouville or random, got '" + c.kind + "'");
    }
    if (cmd == "sieve") {
        if (c.kind != "mobius" && c.kind != "liouville" && c.kind != "omega")
            throw ConfigError("kind", "sieve kind must be mobius, liouville or omega");
        if (c.n_max < 1) throw ConfigError("nmax", "must be >= 1");
    }
    if (cmd == "geom") {
        if (!(c.rho > 1.0)) throw ConfigError("rho", "must exceed 1");
        if (c.m_max < 1) throw ConfigError("mmax", "must be >= 1");
        if (c.n_max && floor_pow(c.rho, c.m_max) > c.n_max / 2)
            throw ConfigError("mmax", "[rho^mmax] exceeds nmax/2");
        for (double d : c.deltas)
            if (!(d > 0.0)) throw ConfigError("deltas", "entries must be positive");
        if (c.deltas.empty() && c.levels < 1) throw ConfigError("levels", "must be >= 1");
    }
    if (cmd == "chowla") {
        try {
            ChowlaSpec{c.shifts, c.exponents}.validate();
        } catch (const DomainError& e) {
            throw ConfigError("shifts/exps", e.what());
        }
    }
    if (cmd == "gowers") {
        if (c.method != "inductive" && c.method != "fourier" && c.method != "both")
            throw ConfigError("method", "must be inductive, fourier or both");
        for (int k : c.ks) {
            if (k < 1 || k > 3) throw ConfigError("k", "must be 1, 2 or 3");
            if (c.method == "fourier" && k != 2) throw ConfigError("k", "the Fourier method needs k = 2");
        }
    }
    if (cmd == "dynamics" || cmd == "kbsz") {
        if (cmd == "dynamics" && c.subcommand != "cubic" && c.subcommand != "birkhoff" && c.subcommand != "ww")
            throw ConfigError("subcommand", "dynamics needs cubic, birkhoff or ww");
        if (c.system != "rotation" && c.system != "skew") throw ConfigError("system", "must be rotation or skew");
        if (c.coord != "x" && c.coord != "y") throw ConfigError("coord", "must be x or y");
        if (c.coord == "y" && c.system == "rotation") throw ConfigError("coord", "a rotation has no y coordinate");
        if (c.x0.empty() || c.x0.size() > 2) throw ConfigError("x0", "one or two coordinates");
        if (c.chars.empty()) throw ConfigError("chars", "at least one character index");
        if (cmd == "dynamics" && c.subcommand == "cubic" && c.chars.size() != 3)
            throw ConfigError("chars", "cubic needs three character indices");
        if (!std::isfinite(c.alpha)) throw ConfigError("alpha", "must be finite");
    }
    if (cmd == "kbsz") {
        if (!(c.epsilon > 0.0 && c.epsilon < 1.0)) throw ConfigError("eps", "need 0 < eps < 1");
        if (!detail::weight_kind_ok(c.kind) && c.kind != "omega")
            throw ConfigError("weights", "unknown weight label");
    }
    if (cmd == "vdc") {
        for (auto h : c.H)
            if (h > c.n_grid.front() - 1) throw ConfigError("H", "need 0 <= H <= N-1");
        if (c.draws < 1) throw ConfigError("draws", "must be >= 1");
    }
    if (cmd == "verify") {
        if (c.n_max < 1) throw ConfigError("nmax", "zero-length sequence");
        if (!c.inject_fault.empty() && c.inject_fault != "sieve-sign")
            throw ConfigError("inject-fault", "only sieve-sign is supported");
    }
    if (cmd == "quadphase" && !(c.alpha >= 0.0 && c.alpha < 1.0 && c.beta >= 0.0 && c.beta < 1.0))
        throw ConfigError("alpha/beta", "must lie in [0, 1)");

    const std::size_t need = detail::estimate_bytes(c, required_sieve(c));
    if (need > c.memory_budget)
        throw CapacityError("command needs ~" + std::to_string(need) + " bytes, memory budget is " +
                            std::to_string(c.memory_budget));
}

// ---------------------------------------------------------------------------

class Context {
public:
    explicit Context(const RunConfig& cfg) : cfg_(cfg) {}

    const ArithSequence& sieved(SequenceKind kind, std::size_t n_max) {
        auto it = sequences_.find(kind);
        if (it != sequences_.end() && it->second.n_max() >= n_max) return it->second;

        SieveConfig sc;
        sc.n_max = n_max;
        sc.threads = cfg_.threads;
        sc.memory_budget_bytes = cfg_.memory_budget;
        sc.omega_one_is_one = cfg_.omega_one_is_one;

        std::optional<ArithSequence> seq;
        fs::path cache;
        if (!cfg_.cache_dir.empty()) {
            cache = fs::path(cfg_.cache_dir) /
                    (std::string(to_string(kind)) +
                     (kind == SequenceKind::omega && cfg_.omega_one_is_one ? "-omega1" : "") + ".cache");
            if (fs::exists(cache)) {
                auto loaded = load_cache(cache);
                if (loaded.kind() != kind) throw CacheFormatError("cache kind mismatch in " + cache.string());
                if (loaded.n_max() >= n_max) seq = std::move(loaded);
            }
        }
        if (!seq) {
            seq = sieve(kind, sc);
            if (!cache.empty()) {
                fs::create_directories(cache.parent_path());
                save_cache(*seq, cache);
            }
        }
        checksums_[std::string(to_string(kind))] = cache_checksum(*seq);
        auto [pos, _] = sequences_.insert_or_assign(kind, std::move(*seq));
        return pos->second;
    }

    // Calls f with the weight sequence named by cfg.kind.
    template <class F>
    decltype(auto) with_weights(std::size_t n_max, F&& f) {
        if (cfg_.kind == "random") {
            if (!random_ || random_->n_max() < n_max) random_ = random_sign_sequence(n_max, cfg_.seed);
            return f(*random_);
        }
        return f(sieved(parse_kind(cfg_.kind), n_max));
    }

    // Reserves out_dir/name, refusing duplicates and existing files unless overwriting.
    fs::path claim(const std::string& name) {
        const fs::path path = fs::path(cfg_.out_dir) / name;
        if (!claimed_.insert(path).second) throw ConfigError("out-dir", "output path collision: " + path.string());
        if (fs::exists(path) && !cfg_.overwrite)
            throw ConfigError("out-dir", "output path collision: " + path.string() +
                                             " exists (pass --overwrite to replace it)");
        return path;
    }

    void emit(const std::string& name, std::string content) {
        const auto path = claim(name);
        outputs_.emplace_back(path, std::move(content));
    }

    // for outputs already written by the caller
    void record_written(const fs::path& path) { written_.push_back(path); }
    const std::vector<fs::path>& written() const { return written_; }

    void fail_verification(std::string why) {
        if (!failure_) failure_ = std::move(why);
    }
    const std::optional<std::string>& failure() const { return failure_; }

    const std::vector<std::pair<fs::path, std::string>>& outputs() const { return outputs_; }
    const std::map<std::string, std::uint32_t>& checksums() const { return checksums_; }
    void note_checksum(std::string kind, std::uint32_t crc) { checksums_[std::move(kind)] = crc; }
    const RunConfig& cfg() const { return cfg_; }

private:
    const RunConfig& cfg_;
    std::map<SequenceKind, ArithSequence> sequences_;
    std::optional<CustomSequence> random_;
    std::vector<std::pair<fs::path, std::string>> outputs_;
    std::set<fs::path> claimed_;
    std::vector<fs::path> written_;
    std::map<std::string, std::uint32_t> checksums_;
    std::optional<std::string> failure_;
};

// ---------------------------------------------------------------------------
// commands

namespace commands {

inline std::vector<std::string> eps_columns(const std::string& prefix, const std::vector<double>& eps) {
    std::vector<std::string> cols;
    for (double e : eps) cols.push_back(prefix + io::fmt_label(e));
    return cols;
}

inline void corr(Context& ctx) {
    const auto& c = ctx.cfg();
    const std::size_t N = c.n_grid.front();
    ctx.with_weights(2 * N, [&](const auto& seq) {
        const auto table = correlate(seq, N, c.method == "naive" ? CorrelationMethod::naive : CorrelationMethod::fft);
        io::CsvBuilder csv({"n", "c"});
        for (std::size_t n = 0; n <= N; ++n) csv.row(n, table.coeffs[n]);
        ctx.emit("corr_" + c.kind + "_N" + std::to_string(N) + ".csv", csv.str());
    });
}

inline void cesaro(Context& ctx) {
    const auto& c = ctx.cfg();
    ctx.with_weights(2 * detail::max_of(c.n_grid), [&](const auto& seq) {
        std::vector<CesaroReport> reports(c.n_grid.size());
        parallel_for(c.n_grid.size(), c.threads,
                     [&](std::size_t i) { reports[i] = cesaro_abs_mean(fft_correlate(seq, c.n_grid[i]), c.eps); });

        std::vector<std::string> header{"N", "D"};
        for (auto& col : eps_columns("ratio_eps_", c.eps)) header.push_back(col);
        io::CsvBuilder csv(header);
        for (const auto& r : reports) {
            std::vector<std::string> row{std::to_string(r.N), io::fmt_double(r.D)};
            for (const auto& [e, v] : r.fitted_ratio) row.push_back(io::fmt_double(v));
            csv.row_cells(row);
        }
        ctx.emit("cesaro_" + c.kind + ".csv", csv.str());

        json fit = {{"kind", c.kind}, {"label", "empirical fit: max over the N-grid of D(N) ln(N)^eps"}};
        json arr = json::array();
        for (double e : c.eps) arr.push_back({{"eps", e}, {"C", empirical_constant(reports, e)}});
        fit["empirical_fit"] = arr;
        ctx.emit("cesaro_" + c.kind + "_fit.json", fit.dump(2) + "\n");

        if (c.bound_chain) {
            std::vector<BoundChainRecord> chain(c.n_grid.size());
            parallel_for(c.n_grid.size(), c.threads,
                         [&](std::size_t i) { chain[i] = bound_chain(seq, c.n_grid[i], c.sup); });
            io::CsvBuilder bc({"N", "L", "cauchy_schwarz", "sup_lower", "sup_upper", "density", "P", "rhs",
                               "tight_holds", "holds"});
            for (const auto& r : chain) {
                bc.row(r.N, r.L, r.cauchy_schwarz, r.sup_lower, r.sup_upper, r.density, r.P, r.rhs,
                       r.tight_holds ? 1 : 0, r.holds ? 1 : 0);
                if (!r.holds || !r.tight_holds)
                    ctx.fail_verification("bound chain violated at N = " + std::to_string(r.N));
            }
            ctx.emit("boundchain_" + c.kind + ".csv", bc.str());
        }
    });
}

inline void geom(Context& ctx) {
    const auto& c = ctx.cfg();
    ctx.with_weights(required_sieve(c), [&](const auto& seq) {
        const auto deltas = c.deltas.empty() ? dyadic_deltas(c.levels) : c.deltas;
        const auto scan = geometric_scan(seq, c.rho, c.m_max, deltas);
        io::CsvBuilder csv({"m", "rhopow", "D", "partial_sum"});
        for (int m = 1; m <= scan.m_max; ++m)
            csv.row(m, scan.rhopow[m - 1], scan.terms[m - 1], scan.partial_sums[m - 1]);
        ctx.emit("geom_" + c.kind + ".csv", csv.str());

        json w = json::array();
        for (const auto& x : scan.null_subseq)
            w.push_back({{"l", x.level}, {"delta", x.delta}, {"m", x.m}, {"rhopow", x.rhopow}, {"n", x.n},
                         {"abs_c", x.abs_c}});
        json out = {{"kind", c.kind},
                    {"rho", c.rho},
                    {"m_max", c.m_max},
                    {"deltas", deltas},
                    {"witnesses", w},
                    {"insufficient_range", scan.insufficient_range}};
        ctx.emit("geom_" + c.kind + "_witnesses.json", out.dump(2) + "\n");
    });
}

inline void chowla(Context& ctx) {
    const auto& c = ctx.cfg();
    ctx.with_weights(required_sieve(c), [&](const auto& seq) {
        const ChowlaSpec spec{c.shifts, c.exponents};
        io::CsvBuilder csv({"N", "value"});
        for (auto N : c.n_grid) csv.row(N, chowla_sum(spec, seq, N));
        ctx.emit("chowla_" + c.kind + ".csv", csv.str());
    });
}

inline void cubic(Context& ctx) {
    const auto& c = ctx.cfg();
    ctx.with_weights(required_sieve(c), [&](const auto& seq) {
        std::vector<double> v(c.n_grid.size());
        parallel_for(c.n_grid.size(), c.threads, [&](std::size_t i) { v[i] = cubic_average(seq, c.n_grid[i]); });
        io::CsvBuilder csv({"N", "value"});
        for (std::size_t i = 0; i < v.size(); ++i) csv.row(c.n_grid[i], v[i]);
        ctx.emit("cubic_" + c.kind + ".csv", csv.str());
    });
}

inline void expsum(Context& ctx) {
    const auto& c = ctx.cfg();
    ctx.with_weights(required_sieve(c), [&](const auto& seq) {
        const auto curve = decay_scan(seq, c.n_grid, c.eps, c.sup, c.threads);
        std::vector<std::string> header{"N", "sup_lower", "sup_upper"};
        for (auto& col : eps_columns("ratio_eps_", c.eps)) header.push_back(col);
        io::CsvBuilder csv(header);
        for (const auto& r : curve.rows) {
            const double invN = 1.0 / static_cast<double>(r.N);
            std::vector<std::string> row{std::to_string(r.N), io::fmt_double(r.bracket.lower * invN),
                                         io::fmt_double(r.bracket.upper * invN)};
            for (const auto& [e, v] : r.davenport_ratio) row.push_back(io::fmt_double(v));
            csv.row_cells(row);
        }
        ctx.emit("expsum_" + c.kind + ".csv", csv.str());
    });
}

inline void quadphase(Context& ctx) {
    const auto& c = ctx.cfg();
    ctx.with_weights(required_sieve(c), [&](const auto& seq) {
        io::CsvBuilder csv({"N", "value"});
        for (auto N : c.n_grid) csv.row(N, quad_phase_sum(seq, N, c.alpha, c.beta));
        ctx.emit("quadphase_" + c.kind + ".csv", csv.str());
    });
}

inline void gowers(Context& ctx) {
    const auto& c = ctx.cfg();
    ctx.with_weights(required_sieve(c), [&](const auto& seq) {
        io::CsvBuilder csv({"N", "k", "method", "value"});
        for (auto N : c.n_grid)
            for (int k : c.ks) {
                if (c.method != "fourier")
                    csv.row(N, k, "inductive", gowers_norm(seq, N, k, GowersMethod::inductive).value);
                if (c.method != "inductive" && k == 2)
                    csv.row(N, k, "fourier", gowers_norm(seq, N, k, GowersMethod::fourier).value);
            }
        ctx.emit("gowers_" + c.kind + ".csv", csv.str());
    });
}

inline DynamicalSystemSpec system_of(const RunConfig& c) {
    return {c.system == "rotation" ? SystemKind::rotation : SystemKind::affine_skew, c.alpha};
}

inline Observable observable_of(const RunConfig& c, std::size_t i) {
    const auto k = c.chars.at(i);
    return c.coord == "x" ? Observable::character(k, 0) : Observable::character(0, k);
}

inline TorusPoint start_of(const RunConfig& c) {
    return TorusPoint::from_doubles(c.x0[0], c.x0.size() > 1 ? c.x0[1] : 0.0);
}

inline void dynamics(Context& ctx) {
    const auto& c = ctx.cfg();
    const auto sys = system_of(c);
    const auto x0 = start_of(c);
    ctx.with_weights(required_sieve(c), [&](const auto& seq) {
        const std::string name = "dynamics_" + c.subcommand + "_" + c.kind + ".csv";
        if (c.subcommand == "ww") {
            io::CsvBuilder csv({"N", "sup_lower", "sup_upper"});
            for (auto N : c.n_grid) {
                const auto b = ww_sup(seq, observable_of(c, 0), sys, x0, N, c.sup);
                csv.row(N, b.lower, b.upper);
            }
            ctx.emit(name, csv.str());
            return;
        }
        io::CsvBuilder csv({"N", "re", "im", "abs"});
        for (auto N : c.n_grid) {
            cplx v;
            if (c.subcommand == "cubic") {
                const CubicSystems cs{observable_of(c, 0), observable_of(c, 1), observable_of(c, 2), sys, sys, sys};
                v = cubic_weighted_average(seq, cs, x0, N);
            } else {
                v = weighted_birkhoff(seq, observable_of(c, 0), sys, x0, N);
            }
            csv.row(N, v.real(), v.imag(), std::abs(v));
        }
        ctx.emit(name, csv.str());
    });
}

inline json kbsz_json(const KbszReport& r) {
    json pairs = json::array();
    for (const auto& p : r.pairs)
        pairs.push_back({{"p", p.p}, {"q", p.q}, {"sup_lower", p.sup_lower}, {"sup_upper", p.sup_upper}});
    return {{"epsilon", r.epsilon}, {"pairs", pairs},       {"max_sup", r.max_sup},
            {"bound", r.bound},     {"N", r.N},             {"weight", r.weight},
            {"prime_bound", r.prime_bound}, {"hypothesis_holds", r.hypothesis_holds}};
}

inline void kbsz(Context& ctx) {
    const auto& c = ctx.cfg();
    const auto rep = kbsz_quantity(c.kind, observable_of(c, 0), system_of(c), start_of(c), c.epsilon,
                                   c.n_grid.front(), c.sup, c.prime_cap, c.threads);
    ctx.emit("kbsz.json", kbsz_json(rep).dump(2) + "\n");
}

inline void vdc(Context& ctx) {
    const auto& c = ctx.cfg();
    const std::size_t N = c.n_grid.front();
    std::vector<std::size_t> Hs = c.H;
    if (Hs.empty()) {
        const auto root = static_cast<std::size_t>(std::sqrt(static_cast<double>(N)));
        Hs = {0, std::min<std::size_t>(1, N - 1), root, N - 1};
    }
    std::mt19937_64 rng(c.seed);
    io::CsvBuilder csv({"draw", "H", "lhs", "rhs"});
    for (std::size_t d = 0; d < c.draws; ++d) {
        std::vector<cplx> u(N);
        for (auto& z : u) z = random_unit_disc(rng);
        for (auto H : Hs) {
            const auto r = vdc_check(u, H);
            csv.row(d, H, r.lhs, r.rhs);
            if (!(r.lhs <= r.rhs + 1e-12))
                ctx.fail_verification("van der Corput violated at draw " + std::to_string(d));
        }
    }
    ctx.emit("vdc.csv", csv.str());
}

inline json verify_json(const VerifyReport& r) {
    json suites = json::array();
    for (const auto& s : r.suites)
        suites.push_back({{"name", s.name},
                          {"passed", s.passed},
                          {"max_deviation", s.max_deviation},
                          {"tolerance", s.tolerance},
                          {"cases", s.cases}});
    return {{"passed", r.passed()}, {"suites", suites}};
}

inline void verify(Context& ctx) {
    const auto& c = ctx.cfg();
    VerifyConfig vc;
    vc.sieve_limit = c.n_max;
    vc.seed = c.seed;
    vc.threads = c.threads;
    if (c.inject_fault == "sieve-sign") vc.sieve_fault_index = 30;
    const auto report = mlcorr::verify(vc);
    ctx.emit("verify.json", verify_json(report).dump(2) + "\n");
    if (!report.passed()) ctx.fail_verification("verification suites failed");
}

inline void sieve_cmd(Context& ctx) {
    const auto& c = ctx.cfg();
    const auto path = ctx.claim(c.out.empty() ? c.kind + ".cache" : c.out);
    const auto& seq = ctx.sieved(parse_kind(c.kind), c.n_max);
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    if (seq.n_max() == c.n_max) {
        save_cache(seq, path);
    } else {
        // a larger cached table was reused
        std::vector<std::int8_t> head(seq.raw().begin(), seq.raw().begin() + static_cast<std::ptrdiff_t>(c.n_max));
        save_cache(ArithSequence(seq.kind(), std::move(head)), path);
    }
    ctx.record_written(path);
}

}  // namespace commands

// ---------------------------------------------------------------------------

// Runs one command. Throws ConfigError / CapacityError before any compute
// when the configuration is unusable and VerificationFailure (after writing
// outputs and the record) when a checked inequality or suite fails.
inline ExperimentRecord run(const RunConfig& cfg) {
    ExperimentRecord rec;
    rec.command = cfg.command;
    rec.config = cfg.to_json();
    rec.start = io::utc_timestamp();
    validate(cfg);

    Context ctx(cfg);
    const std::string& cmd = cfg.command;
    if (cmd == "sieve") commands::sieve_cmd(ctx);
    else if (cmd == "corr") commands::corr(ctx);
    else if (cmd == "cesaro") commands::cesaro(ctx);
    else if (cmd == "geom") commands::geom(ctx);
    else if (cmd == "chowla") commands::chowla(ctx);
    else if (cmd == "cubic") commands::cubic(ctx);
    else if (cmd == "expsum") commands::expsum(ctx);
    else if (cmd == "quadphase") commands::quadphase(ctx);
    else if (cmd == "gowers") commands::gowers(ctx);
    else if (cmd == "dynamics") commands::dynamics(ctx);
    else if (cmd == "kbsz") commands::kbsz(ctx);
    else if (cmd == "vdc") commands::vdc(ctx);
    else if (cmd == "verify") commands::verify(ctx);

    for (const auto& path : ctx.written()) rec.outputs.push_back(path.string());
    for (const auto& [path, content] : ctx.outputs()) {
        io::write_file_atomic(path, content);
        rec.outputs.push_back(path.string());
    }
    rec.cache_checksums = ctx.checksums();
    rec.end = io::utc_timestamp();
    rec.exit_code = ctx.failure() ? kVerificationFailure : kOk;
    io::append_line(fs::path(cfg.out_dir) / "runlog.jsonl", rec.to_json().dump());
    if (ctx.failure()) throw VerificationFailure(*ctx.failure());
    return rec;
}

}  // namespace mlcorr::runner
