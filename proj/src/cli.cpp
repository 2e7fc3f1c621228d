#include "spikepca/cli.hpp"
#include "spikepca/cli_io.hpp"
#include "spikepca/error.hpp"
#include "spikepca/harness.hpp"
#include "spikepca/oracles.hpp"
#include "spikepca/regime.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <optional>

namespace spikepca {

std::string shortest(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

namespace {

std::size_t default_threads() {
    if (const char* env = std::getenv("SPIKE_PCA_THREADS")) {
        char* end = nullptr;
        const unsigned long v = std::strtoul(env, &end, 10);
        if (end != env && *end == '\0' && v >= 1) return static_cast<std::size_t>(v);
        throw Error(ErrorKind::ValidationError, "SPIKE_PCA_THREADS must be a positive integer");
    }
    return 1;
}

struct Common {
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> threads;
    std::string format = "csv";
};

void add_common(CLI::App* sub, Common& c, bool config_required) {
    auto* opt = sub->add_option("--config", c.config, "experiment config (JSON)");
    if (config_required) opt->required();
    sub->add_option("--out", c.out, "output directory (overrides output_dir)");
    sub->add_option("--seed", c.seed, "master seed override");
    sub->add_option("--threads", c.threads, "worker threads (default: SPIKE_PCA_THREADS or 1)")
        ->check(CLI::PositiveNumber);
}

ExperimentConfig load(const Common& c) {
    ExperimentConfig cfg = parse_config(c.config);
    if (c.seed) cfg.master_seed = *c.seed;
    if (!c.out.empty()) cfg.output_dir = c.out;
    return cfg;
}

std::size_t threads_of(const Common& c) { return c.threads ? *c.threads : default_threads(); }

void print_report(const RegimeReport& rep, std::ostream& out) {
    out << "domain: " << (rep.domain == AsymptoticDomain::FixedN ? "fixed-n" : "growing-n");
    if (rep.domain == AsymptoticDomain::GrowingN) out << " gamma=" << shortest(rep.gamma);
    out << "\n";
    for (const auto& s : rep.spikes)
        out << "j=" << s.j << " tier=" << s.tier << " " << to_string(s.label)
            << " ratio_exponent=" << shortest(s.ratio_exponent) << " case=" << to_string(s.clause) << "\n";
    out << "noise " << to_string(rep.noise);
    if (rep.noise_subspace_consistent) out << " (noise block subspace consistent)";
    out << "\n";
}

int run_simulate(const Common& c, std::ostream& out, std::ostream& err) {
    const ExperimentConfig cfg = load(c);
    const ResultFormat fmt = parse_format(c.format);
    const SweepResult res = sweep(cfg, threads_of(c));
    if (!res.records.empty()) {
        const auto files = emit_results(res.records, res.aggregates, fmt,
                                        std::filesystem::path(cfg.output_dir) / (std::string("results") + extension(fmt)),
                                        cfg.measures);
        out << "wrote " << files.raw.string() << "\n" << "wrote " << files.aggregate.string() << "\n";
    }
    out << "trials: " << res.records.size() << " ok, " << res.failures.size() << " failed\n";
    if (res.wielandt_checked)
        out << "wielandt spot-checks: " << res.wielandt_checked << ", violations: " << res.wielandt_violations << "\n";
    if (!res.ok()) {
        err << res.failure_report() << "\n";
        return kExitNumerical;
    }
    return res.wielandt_violations ? kExitNumerical : kExitOk;
}

int run_phase(const Common& c, std::ostream& out, std::ostream& err) {
    const ExperimentConfig cfg = load(c);
    if (!cfg.phase) throw Error(ErrorKind::ValidationError, "phase: section required for phase-diagram");
    const PhaseDiagram pd = phase_diagram(cfg.phase->alpha_grid, cfg.phase->gamma_grid, cfg.phase->d, cfg.replicates,
                                          cfg.master_seed, threads_of(c), cfg.spec);
    const std::filesystem::path dir(cfg.output_dir);
    emit_phase_svg(pd, dir / "phase.svg");
    write_file(dir / "phase.csv", phase_csv(pd));
    out << "gamma\\alpha";
    for (double a : pd.alphas) out << " " << shortest(a);
    out << "\n";
    for (std::size_t r = 0; r < pd.gammas.size(); ++r) {
        out << shortest(pd.gammas[r]);
        for (std::size_t k = 0; k < pd.alphas.size(); ++k) {
            char buf[32];
            std::snprintf(buf, sizeof buf, " %.3f%c", pd.mean_inner_sq[r][k], glyph(pd.labels[r][k]));
            out << buf;
        }
        out << "\n";
    }
    out << "wrote " << (dir / "phase.svg").string() << "\n" << "wrote " << (dir / "phase.csv").string() << "\n";
    if (!pd.failures.empty()) {
        err << pd.failures.size() << " phase trial(s) failed\n";
        for (const auto& f : pd.failures)
            err << "  node=" << f.d_index << " replicate=" << f.replicate << ": " << f.message << "\n";
        return kExitNumerical;
    }
    return kExitOk;
}

int run_rate(const Common& c, std::ostream& out, std::ostream& err) {
    const ExperimentConfig cfg = load(c);
    const RateSettings rs = cfg.rate.value_or(RateSettings{});
    const RatePrediction first = predict_rate(cfg.spec, cfg.law, cfg.d_grid.front(), rs.index);
    const Response response = rs.response.value_or(response_for(first.quantity));
    const SweepResult res = sweep(cfg, threads_of(c));
    if (!res.ok()) {
        err << res.failure_report() << "\n";
        return kExitNumerical;
    }
    const auto predictor = [&](std::size_t d) {
        return std::pow(predict_rate(cfg.spec, cfg.law, d, rs.index).rate, rs.power);
    };
    const RateFit fit = fit_rate(res.records, predictor, {rs.index, response});
    out << "index: " << rs.index << "\n"
        << "case: " << first.theorem_case() << (first.approximate ? " (approximate)" : "") << "\n"
        << "quantity: " << to_string(first.quantity) << "\n"
        << "response: " << to_string(response) << " vs rate^" << shortest(rs.power) << "\n"
        << "slope: " << shortest(fit.slope) << "\n"
        << "intercept: " << shortest(fit.intercept) << "\n"
        << "r_squared: " << shortest(fit.r_squared) << "\n"
        << "points: " << fit.n_points << " (dropped " << fit.dropped << ")\n"
        << "o_constant: " << shortest(fit.max_ratio) << "\n";
    return kExitOk;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Spiked covariance PCA consistency laboratory", "spikepca"};
    app.require_subcommand(1);

    Common sim, phase, rate, cls;
    CLI::App* simulate = app.add_subcommand("simulate", "run a sweep and write raw and aggregate results");
    add_common(simulate, sim, true);
    simulate->add_option("--format", sim.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

    CLI::App* phase_cmd = app.add_subcommand("phase-diagram", "mean squared inner product over an (alpha, gamma) grid");
    add_common(phase_cmd, phase, true);

    CLI::App* rate_cmd = app.add_subcommand("rate-check", "fit measured responses against the predicted rate");
    add_common(rate_cmd, rate, true);

    CLI::App* classify_cmd = app.add_subcommand("classify", "print the regime labels of a configuration");
    add_common(classify_cmd, cls, false);
    std::optional<double> cls_alpha, cls_gamma;
    std::optional<std::size_t> cls_fixed_n;
    classify_cmd->add_option("--alpha", cls_alpha, "single spike index (instead of --config)");
    classify_cmd->add_option("--gamma", cls_gamma, "sample index");
    classify_cmd->add_option("--fixed-n", cls_fixed_n, "fixed sample size");

    CLI::App* oracle = app.add_subcommand("oracle", "evaluate a closed-form limit");
    oracle->require_subcommand(1);
    double lambda1 = 0.0, c_nadler = 0.0, c_bai = 0.0, c_jung = 1.0;
    std::size_t jung_n = 10, jung_count = 1, kd = 0;
    std::uint64_t jung_seed = 0;
    std::string k_config;
    CLI::App* nadler = oracle->add_subcommand("nadler", "limit of <u1_hat,u1>^2 for a fixed spike");
    nadler->add_option("--lambda1", lambda1, "spike eigenvalue (> 1)")->required();
    nadler->add_option("--c", c_nadler, "limit of d/n")->required();
    CLI::App* bai = oracle->add_subcommand("bai-yin", "extreme eigenvalue edges of a white Wishart matrix");
    bai->add_option("--c", c_bai, "limit of d/n")->required();
    CLI::App* jung = oracle->add_subcommand("jung-sample", "draws of chi2_n/(chi2_n + c)");
    jung->add_option("--n", jung_n, "degrees of freedom")->check(CLI::PositiveNumber);
    jung->add_option("--c", c_jung, "noise constant");
    jung->add_option("--count", jung_count, "number of draws");
    jung->add_option("--seed", jung_seed, "generator seed");
    CLI::App* kconst = oracle->add_subcommand("k-const", "noise mass constant K of a fixed-n dataset");
    kconst->add_option("--config", k_config, "experiment config (JSON)")->required();
    kconst->add_option("--d", kd, "dimension (default: first d_grid value)");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n" << app.help();
        return kExitValidation;
    }

    try {
        if (*simulate) return run_simulate(sim, out, err);
        if (*phase_cmd) return run_phase(phase, out, err);
        if (*rate_cmd) return run_rate(rate, out, err);
        if (*classify_cmd) {
            SpectrumSpec spec;
            ScalingLaw law;
            if (!cls.config.empty()) {
                const ExperimentConfig cfg = load(cls);
                spec = cfg.spec;
                law = cfg.law;
            } else if (cls_alpha && (cls_gamma || cls_fixed_n)) {
                spec.kind = SingleSpike{*cls_alpha};
                if (cls_gamma) law.gamma = *cls_gamma;
                law.fixed_n = cls_fixed_n;
            } else {
                err << "error: classify needs --config or --alpha with --gamma/--fixed-n\n" << classify_cmd->help();
                return kExitValidation;
            }
            if (cls_alpha && !cls.config.empty()) spec = with_alpha(spec, *cls_alpha);
            print_report(classify(spec, law), out);
            return kExitOk;
        }
        if (*nadler) {
            out << shortest(nadler_limit(lambda1, c_nadler)) << "\n";
            return kExitOk;
        }
        if (*bai) {
            const BaiYinEdges e = bai_yin_edges(c_bai);
            out << "largest: " << shortest(e.largest) << "\n" << "smallest_nonzero: " << shortest(e.smallest_nonzero)
                << "\n";
            return kExitOk;
        }
        if (*jung) {
            for (double v : jung_limit_draws(jung_n, c_jung, jung_count, jung_seed)) out << shortest(v) << "\n";
            return kExitOk;
        }
        if (*kconst) {
            const ExperimentConfig cfg = parse_config(k_config);
            const std::size_t d = kd ? kd : cfg.d_grid.front();
            const Dataset data = synthesize(cfg.spec, cfg.law, d, cfg.dist, cfg.basis, derive_seed(cfg.master_seed, 0, 0));
            const HdlssConstants h = hdlss_constants(data, tier_index(cfg.spec, d));
            out << shortest(h.k_const) << "\n";
            return kExitOk;
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return e.is_validation() ? kExitValidation : kExitNumerical;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
    err << app.help();
    return kExitValidation;
}

int cli_main(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return cli_main(args, std::cout, std::cerr);
}

}  // namespace spikepca
