// cli.hpp
// Command-line front end for the experiment runner.

#pragma once
#include <cmath>
#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mlcorr/runner.hpp"

namespace mlcorr::cli {

namespace detail {

// Accepts plain integers and exact scientific forms such as 1e6.
inline std::size_t parse_count(const std::string& text, const std::string& field) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &pos);
    } catch (const std::exception&) {
        throw ConfigError(field, "not a number: '" + text + "'");
    }
    if (pos != text.size() || !(v >= 0.0) || v != std::floor(v) || v > 9.0e15)
        throw ConfigError(field, "not a non-negative integer: '" + text + "'");
    return static_cast<std::size_t>(v);
}

inline std::vector<std::size_t> parse_counts(const std::vector<std::string>& texts, const std::string& field) {
    std::vector<std::size_t> out;
    for (const auto& t : texts) out.push_back(parse_count(t, field));
    return out;
}

struct Raw {
    std::vector<std::string> n_grid;
    std::string n_max;
    std::string memory_budget;
};

}  // namespace detail

inline int main(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    runner::RunConfig cfg;
    detail::Raw raw;

    CLI::App app{"Correlation and exponential-sum experiments for the Mobius and Liouville functions", "mlcorr"};
    app.require_subcommand(1);
    app.set_version_flag("--version", runner::kToolVersion);
    app.option_defaults()->always_capture_default();

    app.add_option("--threads", cfg.threads, "worker threads");
    app.add_option("--cache-dir", cfg.cache_dir, "directory for sieve caches");
    app.add_option("--out-dir", cfg.out_dir, "directory for outputs and runlog.jsonl");
    app.add_option("--seed", cfg.seed, "seed for random inputs");
    app.add_flag("--overwrite", cfg.overwrite, "replace existing outputs");
    app.add_option("--memory-budget", raw.memory_budget, "bytes available to one command");
    app.add_flag("--omega-one-is-one", cfg.omega_one_is_one, "use Omega(1) = 1");

    cfg.kind.clear();
    auto kind_opt = [&](CLI::App* sub) {
        return sub->add_option("--kind,--weights", cfg.kind, "mobius | liouville | random");
    };
    auto grid_opt = [&](CLI::App* sub, const char* names) {
        return sub->add_option(names, raw.n_grid, "N values")->delimiter(',');
    };
    auto eps_opt = [&](CLI::App* sub) { sub->add_option("--eps", cfg.eps, "log-power exponents")->delimiter(','); };
    auto sup_opts = [&](CLI::App* sub) {
        sub->add_option("--grid", cfg.sup.grid, "initial phase grid (0 = next_pow2(8N))");
        sub->add_option("--target-ratio", cfg.sup.target_ratio, "upper/grid_max target for refinement");
    };
    auto dyn_opts = [&](CLI::App* sub) {
        sub->add_option("--alpha", cfg.alpha, "rotation number");
        sub->add_option("--system", cfg.system, "rotation | skew");
        sub->add_option("--coord", cfg.coord, "coordinate the characters act on: x | y");
        sub->add_option("--chars", cfg.chars, "character indices")->delimiter(',');
        sub->add_option("--x0", cfg.x0, "start point")->delimiter(',');
    };

    std::vector<CLI::App*> subs;
    auto add = [&](const char* name, const char* help) {
        auto* s = app.add_subcommand(name, help);
        s->fallthrough();
        s->callback([&cfg, name] { cfg.command = name; });
        subs.push_back(s);
        return s;
    };

    auto* sieve = add("sieve", "sieve omega, mu or lambda and write a binary cache");
    sieve->add_option("--kind", cfg.kind, "mobius | liouville | omega");
    sieve->add_option("--nmax", raw.n_max, "largest n")->required();
    sieve->add_option("--out", cfg.out, "cache file name inside out-dir");

    auto* corr = add("corr", "correlation coefficients c_{n,N}, n = 0..N");
    kind_opt(corr);
    grid_opt(corr, "--N")->required();
    corr->add_option("--method", cfg.method, "fft | naive");

    auto* ces = add("cesaro", "Cesaro mean D(N) of |c_{n,N}| and fitted log ratios");
    kind_opt(ces);
    grid_opt(ces, "--ngrid,--N")->required();
    eps_opt(ces);
    sup_opts(ces);
    ces->add_flag("--bound-chain", cfg.bound_chain, "also check the Cauchy-Schwarz / sup-norm chain");

    auto* geom = add("geom", "D along N = [rho^m], tail sums and null-subsequence witnesses");
    kind_opt(geom);
    geom->add_option("--rho", cfg.rho, "ratio > 1");
    geom->add_option("--mmax", cfg.m_max, "largest exponent")->required();
    geom->add_option("--levels", cfg.levels, "dyadic levels delta_l = 2^-l");
    geom->add_option("--deltas", cfg.deltas, "explicit thresholds")->delimiter(',');
    geom->add_option("--nmax", raw.n_max, "sieve range (default 2 [rho^mmax])");

    auto* chow = add("chowla", "(1/N) sum_n prod_i A(n + h_i)^{e_i}");
    kind_opt(chow);
    grid_opt(chow, "--ngrid,--N")->required();
    chow->add_option("--shifts", cfg.shifts, "positive shifts a_1 < a_2 < ...")->delimiter(',')->required();
    chow->add_option("--exps", cfg.exponents, "exponents i_0..i_r in {1, 2}")->delimiter(',')->required();

    auto* cub = add("cubic", "(1/N^2) sum_{n,m<=N} A(n)A(m)A(n+m)");
    kind_opt(cub);
    grid_opt(cub, "--ngrid,--N")->required();

    auto* exps = add("expsum", "certified sup_t |(1/N) sum A(n) e(nt)|");
    kind_opt(exps);
    grid_opt(exps, "--ngrid,--N")->required();
    eps_opt(exps);
    sup_opts(exps);

    auto* quad = add("quadphase", "(1/N)|sum A(n) e(alpha n^2 + beta n)|");
    kind_opt(quad);
    grid_opt(quad, "--ngrid,--N")->required();
    quad->add_option("--alpha", cfg.alpha, "quadratic frequency in [0, 1)");
    quad->add_option("--beta", cfg.beta, "linear frequency in [0, 1)");

    auto* gow = add("gowers", "Gowers U^k norms on Z/NZ");
    kind_opt(gow);
    grid_opt(gow, "--N,--ngrid")->required();
    gow->add_option("--k", cfg.ks, "orders in {1, 2, 3}")->delimiter(',');
    gow->add_option("--method", cfg.method, "inductive | fourier | both");

    auto* dyn = add("dynamics", "weighted averages along rotations and skew products");
    dyn->add_option("sub", cfg.subcommand, "cubic | birkhoff | ww")->required();
    kind_opt(dyn);
    grid_opt(dyn, "--ngrid,--N")->required();
    dyn_opts(dyn);
    sup_opts(dyn);

    auto* kb = add("kbsz", "prime-pair correlations sup_t |(1/N) sum f(T^{pn}x) f(T^{qn}x) e(nt)|");
    kb->add_option("--eps", cfg.epsilon, "0 < eps < 1");
    grid_opt(kb, "--N")->required();
    kb->add_option("--weights", cfg.kind, "label of the multiplicative weight");
    kb->add_option("--prime-cap", cfg.prime_cap, "refuse runs needing more primes");
    dyn_opts(kb);
    sup_opts(kb);

    auto* vdc = add("vdc", "van der Corput inequality on random unit-disc sequences");
    grid_opt(vdc, "--N");
    vdc->add_option("--draws", cfg.draws, "number of sequences");
    vdc->add_option("--H", cfg.H, "H values (default 0, 1, sqrt N, N-1)")->delimiter(',');

    auto* ver = add("verify", "run the built-in oracle cross-checks");
    ver->add_option("--nmax", raw.n_max, "sieve oracle range");
    ver->add_option("--inject-fault", cfg.inject_fault, "sieve-sign");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return runner::kConfigError;
    }

    try {
        if (cfg.kind.empty()) cfg.kind = cfg.command == "chowla" ? "liouville" : "mobius";
        cfg.n_grid = detail::parse_counts(raw.n_grid, "N");
        if (cfg.command == "vdc" && cfg.n_grid.empty()) cfg.n_grid = {64};
        if (!raw.memory_budget.empty()) cfg.memory_budget = detail::parse_count(raw.memory_budget, "memory-budget");
        if (!raw.n_max.empty()) cfg.n_max = detail::parse_count(raw.n_max, "nmax");
        else if (cfg.command == "verify") cfg.n_max = 100000;
        if (cfg.command == "gowers" && cfg.method == "fft") cfg.method = "both";

        const auto rec = runner::run(cfg);
        for (const auto& o : rec.outputs) out << o << '\n';
        return runner::kOk;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return runner::kConfigError;
    } catch (const CapacityError& e) {
        err << "capacity error: " << e.what() << '\n';
        return runner::kCapacityError;
    } catch (const runner::VerificationFailure& e) {
        err << "verification failure: " << e.what() << '\n';
        return runner::kVerificationFailure;
    } catch (const DomainError& e) {
        err << "domain error: " << e.what() << '\n';
        return runner::kConfigError;
    } catch (const RangeError& e) {
        err << "range error: " << e.what() << '\n';
        return runner::kConfigError;
    } catch (const GridResolutionError& e) {
        err << "grid resolution error: " << e.what() << '\n';
        return runner::kConfigError;
    } catch (const CacheError& e) {
        err << "cache error: " << e.what() << '\n';
        return runner::kConfigError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return runner::kFailure;
    }
}

}  // namespace mlcorr::cli
