// Acceptance suite: one [PASS]/[FAIL] line per criterion, nonzero exit on any failure.

#include "spikepca/cli_io.hpp"
#include "spikepca/error.hpp"
#include "spikepca/harness.hpp"
#include "spikepca/oracles.hpp"
#include "spikepca/rng.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <thread>
#include <vector>

using namespace spikepca;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::size_t worker_threads() {
    if (const char* env = std::getenv("SPIKE_PCA_THREADS")) return std::max(1L, std::strtol(env, nullptr, 10));
    return std::max(1u, std::thread::hardware_concurrency());
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

int failures = 0;

void criterion(int id, const char* name, double budget_s, const std::function<Outcome()>& body) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::string timing = num(secs) + " s";
    if (budget_s > 0) {
        timing += " / budget " + num(budget_s) + " s";
        if (secs > budget_s) {
            o.pass = false;
            o.detail += "; over time budget";
        }
    }
    if (!o.pass) ++failures;
    std::printf("[%s] #%d %s: %s (%s)\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str(), timing.c_str());
    std::fflush(stdout);
}

Matrix random_symmetric(Eigen::Index p, Rng& rng) {
    Matrix m(p, p);
    for (Eigen::Index j = 0; j < p; ++j)
        for (Eigen::Index i = 0; i < p; ++i) m(i, j) = rng.normal();
    return (m + m.transpose()) / 2.0;
}

SpectrumSpec single(double alpha) {
    SpectrumSpec s;
    s.kind = SingleSpike{alpha};
    return s;
}

ExperimentConfig config(SpectrumSpec spec, ScalingLaw law, std::vector<std::size_t> grid, std::size_t reps) {
    ExperimentConfig c;
    c.spec = std::move(spec);
    c.law = std::move(law);
    c.d_grid = std::move(grid);
    c.replicates = reps;
    c.master_seed = 1;
    return c;
}

ScalingLaw growing(double gamma) {
    ScalingLaw law;
    law.gamma = gamma;
    return law;
}

ScalingLaw fixed_n(std::size_t n) {
    ScalingLaw law;
    law.fixed_n = n;
    return law;
}

SweepResult checked_sweep(const ExperimentConfig& c) {
    SweepResult res = sweep(c, worker_threads());
    if (!res.ok()) throw Error(ErrorKind::TrialFailure, res.failure_report());
    return res;
}

std::vector<double> values_of(const SweepResult& res, std::size_t j, Response response) {
    std::vector<double> out;
    for (const auto& r : res.records)
        if (const IndexMeasure* m = r.find(j)) out.push_back(response_value(*m, response));
    return out;
}

double mean(const std::vector<double>& v) { return summarize(v).mean; }

double ks_distance(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::size_t i = 0, k = 0;
    double best = 0.0;
    while (i < a.size() && k < b.size()) {
        const double x = std::min(a[i], b[k]);
        while (i < a.size() && a[i] <= x) ++i;
        while (k < b.size() && b[k] <= x) ++k;
        best = std::max(best, std::abs(static_cast<double>(i) / a.size() - static_cast<double>(k) / b.size()));
    }
    return best;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

Outcome dual_equivalence() {
    Rng rng(101);
    double worst_value = 0.0, worst_measure = 0.0;
    for (int t = 0; t < 100; ++t) {
        const std::size_t d = 2 + rng() % 49;
        const std::size_t n = 1 + rng() % 50;
        const SpectrumSpec spec = single(1.5 * rng.uniform());
        const Dataset ds = synthesize(spec, fixed_n(n), d, ScoreDistribution::Gaussian, BasisKind::Identity, rng());
        const EigenResult direct = direct_eigen(ds.x);
        const EigenResult dual = dual_eigen(ds.x);
        if (direct.values.size() != dual.values.size())
            return {false, "nonzero counts differ at d=" + std::to_string(d) + " n=" + std::to_string(n)};
        std::vector<std::size_t> idx;
        for (Eigen::Index k = 0; k < direct.values.size(); ++k) {
            worst_value = std::max(worst_value, std::abs(dual.values(k) / direct.values(k) - 1.0));
            idx.push_back(static_cast<std::size_t>(k) + 1);
        }
        const TierIndex tiers = tier_index(spec, d);
        const auto a = measure_indices(ds, direct, tiers, idx);
        const auto b = measure_indices(ds, dual, tiers, idx);
        for (std::size_t k = 0; k < a.size(); ++k) {
            worst_measure = std::max(worst_measure, std::abs(a[k].abs_inner - b[k].abs_inner));
            worst_measure = std::max(worst_measure, std::abs(a[k].subspace_cos - b[k].subspace_cos));
        }
    }
    return {worst_value <= 1e-8 && worst_measure <= 1e-8,
            "max rel eigenvalue diff " + num(worst_value) + ", max measure diff " + num(worst_measure) + " (tol 1e-8)"};
}

Outcome eigensolver_certification() {
    Rng rng(202);
    double worst_res = 0.0, worst_orth = 0.0;
    for (int t = 0; t < 200; ++t) {
        const Eigen::Index p = 1 + static_cast<Eigen::Index>(rng() % 100);
        const Matrix m = random_symmetric(p, rng);
        const EigenResult r = sym_eigen(SymMatrix(m));
        const double fro = std::max(m.norm(), 1e-300);
        worst_res = std::max(worst_res, (r.vectors * r.values.asDiagonal() * r.vectors.transpose() - m).norm() / fro);
        worst_orth = std::max(worst_orth, (r.vectors.transpose() * r.vectors - Matrix::Identity(p, p)).cwiseAbs().maxCoeff());
    }
    return {worst_res <= 1e-10 && worst_orth <= 1e-10,
            "max residual/|M|_F " + num(worst_res) + ", max orthonormality error " + num(worst_orth) + " (tol 1e-10)"};
}

Outcome wielandt_suite() {
    Rng rng(303);
    std::size_t cases = 0, violations = 0;
    for (int t = 0; t < 100; ++t) {
        const Eigen::Index p = 1 + static_cast<Eigen::Index>(rng() % 40);
        const SymMatrix a(random_symmetric(p, rng));
        const SymMatrix b(random_symmetric(p, rng));
        for (Eigen::Index j = 1; j <= p; ++j) {
            ++cases;
            if (!wielandt_check(a, b, j).holds) ++violations;
        }
    }
    return {violations == 0, std::to_string(violations) + " violations in " + std::to_string(cases) + " (pair, j) cases"};
}

Outcome bai_yin() {
    const BaiYinEdges edges = bai_yin_edges(0.5);
    double worst_hi = 0.0, worst_lo = 0.0;
    for (std::uint64_t rep = 0; rep < 5; ++rep) {
        const DataMatrix z = sample_scores(600, 1200, ScoreDistribution::Gaussian, derive_seed(4, 0, rep));
        const EigenResult r = sym_eigen(sample_cov(z));
        worst_hi = std::max(worst_hi, std::abs(r.values(0) - edges.largest));
        worst_lo = std::max(worst_lo, std::abs(r.values(r.values.size() - 1) - edges.smallest_nonzero));
    }
    return {worst_hi <= 0.1 && worst_lo <= 0.1, "edges (" + num(edges.largest) + ", " + num(edges.smallest_nonzero) +
                                                    "), max deviation top " + num(worst_hi) + ", bottom " +
                                                    num(worst_lo) + " (tol 0.1)"};
}

Outcome nadler() {
    SpectrumSpec spec;
    spec.kind = Explicit{{2.0}};
    const SweepResult res = checked_sweep(config(spec, fixed_n(2000), {1000}, 20));
    const double m = mean(values_of(res, 1, Response::InnerSq));
    const double oracle = nadler_limit(2.0, 1000.0 / 2000.0);
    return {std::abs(m - oracle) <= 0.05, "mean inner_sq " + num(m) + " vs limit " + num(oracle) + " (tol 0.05)"};
}

Outcome jung() {
    ExperimentConfig c = config(single(1.0), fixed_n(10), {2000}, 200);
    c.path = PathChoice::Dual;
    const SweepResult res = checked_sweep(c);
    const std::vector<double> emp = values_of(res, 1, Response::InnerSq);
    const std::vector<double> ref = jung_limit_draws(10, 1.0, 100000, 6);
    const double ks = ks_distance(emp, ref);
    return {ks <= 0.15 && emp.size() == 200, "KS distance " + num(ks) + " over " + std::to_string(emp.size()) +
                                                 " replicates vs 1e5 draws (tol 0.15)"};
}

Outcome phase() {
    std::vector<double> alphas, gammas;
    for (int i = 0; i <= 8; ++i) alphas.push_back(0.25 * i);
    for (int i = 0; i <= 6; ++i) gammas.push_back(0.25 * i);
    const PhaseDiagram pd = phase_diagram(alphas, gammas, 300, 5, 1, worker_threads());
    if (!pd.failures.empty()) return {false, std::to_string(pd.failures.size()) + " trial failures"};
    const fs::path dir = fs::temp_directory_path() / "spikepca_acceptance_phase";
    fs::create_directories(dir);
    emit_phase_svg(pd, dir / "phase.svg");
    const std::string svg = slurp(dir / "phase.svg");

    std::size_t high = 0, low = 0;
    std::string bad;
    for (std::size_t r = 0; r < pd.gammas.size(); ++r) {
        for (std::size_t c = 0; c < pd.alphas.size(); ++c) {
            const double s = pd.alphas[c] + pd.gammas[r];
            const double v = pd.mean_inner_sq[r][c];
            const std::string node = " (" + num(pd.alphas[c]) + "," + num(pd.gammas[r]) + ")=" + num(v);
            if (s >= 1.4 - 1e-12) {
                ++high;
                if (!(v >= 0.8)) bad += node;
            } else if (s <= 0.6 + 1e-12) {
                ++low;
                if (!(v <= 0.1)) bad += node;
            }
        }
    }
    const bool svg_ok = svg.find("<svg") != std::string::npos && svg.find("</svg>") != std::string::npos;
    std::string detail = std::to_string(high) + " nodes need >= 0.8, " + std::to_string(low) + " need <= 0.1; ";
    detail += bad.empty() ? "all met" : "failing (alpha,gamma)=mean:" + bad;
    detail += "; svg " + (dir / "phase.svg").string();
    return {bad.empty() && svg_ok, detail};
}

Outcome si_rate() {
    const ExperimentConfig c = config(single(0.5), growing(0.25), {200, 400, 800, 1600}, 20);
    const SweepResult res = checked_sweep(c);
    const auto predictor = [&](std::size_t d) {
        const double rate = predict_rate(c.spec, c.law, d, 1).rate;
        return rate * rate;
    };
    const RateFit fit = fit_rate(res.records, predictor, {1, Response::InnerSq});
    return {std::abs(fit.slope - 1.0) <= 0.3, "slope " + num(fit.slope) + " (r^2 " + num(fit.r_squared) +
                                                  ", points " + std::to_string(fit.n_points) + ", tol 1 +/- 0.3)"};
}

Outcome consistency_gap() {
    const ExperimentConfig c = config(single(1.0), growing(0.75), {200, 400, 800, 1600}, 20);
    const SweepResult res = checked_sweep(c);
    double worst = 0.0;
    for (std::size_t d : c.d_grid) {
        std::vector<double> gaps;
        double n = 0.0, lambda1 = 0.0;
        for (const auto& r : res.records)
            if (r.d == d) {
                gaps.push_back(1.0 - r.find(1)->abs_inner);
                n = static_cast<double>(r.n);
                lambda1 = r.find(1)->population_value;
            }
        const double rate = std::sqrt(static_cast<double>(d) / (n * lambda1));
        worst = std::max(worst, mean(gaps) / rate);
    }
    return {worst <= 5.0, "max over d of mean gap / (d/(n lambda1))^(1/2) = " + num(worst) + " (tol 5)"};
}

Outcome multi_spike() {
    SpectrumSpec spec;
    spec.kind = MultiSpike{1.0, {8, 4, 2}};
    const SweepResult res = checked_sweep(config(spec, growing(0.5), {400}, 10));
    bool ok = true;
    std::string detail = "mean inner_sq";
    for (std::size_t j = 1; j <= 3; ++j) {
        const double m = mean(values_of(res, j, Response::InnerSq));
        ok = ok && m >= 0.9;
        detail += " j" + std::to_string(j) + "=" + num(m);
    }
    return {ok, detail + " (need >= 0.9 each)"};
}

Outcome tiered() {
    SpectrumSpec spec;
    spec.kind = Tiered{{{1.0, 2, 2.0}}};
    const std::size_t d = 5000, n = 10;
    const TierIndex tiers = tier_index(spec, d);
    std::vector<double> cos_sq[2];
    std::size_t sandwich_fail = 0, sandwich_cases = 0;
    double worst_low = 1e300, worst_high = 0.0;
    for (std::size_t rep = 0; rep < 20; ++rep) {
        const Dataset ds = synthesize(spec, fixed_n(n), d, ScoreDistribution::Gaussian, BasisKind::Identity,
                                      derive_seed(1, 0, rep));
        const EigenResult eig = dual_eigen(ds.x);
        const std::size_t idx[] = {1, 2};
        const auto ms = measure_indices(ds, eig, tiers, idx);
        const HdlssConstants h = hdlss_constants(ds, tiers);
        const EigenResult a = sym_eigen(h.tier_matrices[0]);
        const double mu_max = a.values(0);
        const double mu_min = a.values(static_cast<Eigen::Index>(tiers.sets[0].size()) - 1);
        const double lam = ds.spectrum(0);
        for (std::size_t k = 0; k < 2; ++k) {
            cos_sq[k].push_back(ms[k].subspace_cos_sq);
            const double lo = mu_min * lam * 0.95, hi = mu_max * lam * 1.05;
            const double v = eig.values(static_cast<Eigen::Index>(k));
            ++sandwich_cases;
            if (v < lo || v > hi) ++sandwich_fail;
            worst_low = std::min(worst_low, v / (mu_min * lam));
            worst_high = std::max(worst_high, v / (mu_max * lam));
        }
    }
    const double m1 = mean(cos_sq[0]), m2 = mean(cos_sq[1]);
    const double min1 = *std::min_element(cos_sq[0].begin(), cos_sq[0].end());
    const double min2 = *std::min_element(cos_sq[1].begin(), cos_sq[1].end());
    const bool ok = m1 >= 0.9 && m2 >= 0.9 && sandwich_fail == 0;
    return {ok, "mean subspace cos^2 " + num(m1) + ", " + num(m2) + " (per-replicate min " + num(min1) + ", " +
                    num(min2) + "; need >= 0.9); sandwich violations " + std::to_string(sandwich_fail) + "/" +
                    std::to_string(sandwich_cases) + " (lambda_hat/(mu_min lambda) min " + num(worst_low) +
                    ", lambda_hat/(mu_max lambda) max " + num(worst_high) + ", tol 0.95..1.05)"};
}

Outcome hdlss_limits() {
    const SpectrumSpec spec = single(1.5);
    const std::size_t d = 3000, n = 10;
    const TierIndex tiers = tier_index(spec, d);
    double worst1 = 0.0, worst2 = 0.0;
    std::vector<double> dev2;
    for (std::size_t rep = 0; rep < 20; ++rep) {
        const Dataset ds = synthesize(spec, fixed_n(n), d, ScoreDistribution::Gaussian, BasisKind::Identity,
                                      derive_seed(1, 0, rep));
        const EigenResult eig = dual_eigen(ds.x);
        const HdlssConstants h = hdlss_constants(ds, tiers);
        const double target1 = ds.scores.row(0).squaredNorm() / static_cast<double>(n);
        worst1 = std::max(worst1, std::abs((eig.values(0) / ds.spectrum(0)) / target1 - 1.0));
        const double r2 = eig.values(1) / static_cast<double>(d);
        dev2.push_back(r2 / h.k_const - 1.0);
        worst2 = std::max(worst2, std::abs(r2 / h.k_const - 1.0));
    }
    const double mean_dev2 = std::abs(mean(dev2));
    return {worst1 <= 0.05 && mean_dev2 <= 0.10,
            "max |ratio1/target - 1| = " + num(worst1) + " (per replicate, tol 0.05); lambda_hat2/d vs K: mean rel dev " +
                num(mean_dev2) + " (tol 0.10), per-replicate max " + num(worst2)};
}

Outcome basis_invariance() {
    Rng rng(1313);
    double worst = 0.0;
    for (int t = 0; t < 20; ++t) {
        const std::size_t d = 10 + rng() % 91;
        const std::size_t n = 2 + rng() % 40;
        const SpectrumSpec spec = single(0.5 + rng.uniform());
        const std::vector<double> values = build_spectrum(spec, d);
        const Vector spectrum = Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(d));
        const std::uint64_t seed = rng();
        const DataMatrix z = sample_scores(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(n),
                                           ScoreDistribution::Gaussian, seed);
        const Dataset id = synthesize_from_scores(spectrum, z, std::nullopt, seed);
        const Dataset haar =
            synthesize_from_scores(spectrum, z, haar_orthogonal(static_cast<Eigen::Index>(d), rotation_seed(seed)), seed);
        const EigenResult ea = prefers_dual(n, d) ? dual_eigen(id.x) : direct_eigen(id.x);
        const EigenResult eb = prefers_dual(n, d) ? dual_eigen(haar.x) : direct_eigen(haar.x);
        const TierIndex tiers = tier_index(spec, d);
        const auto idx = recorded_indices(1, n, d, std::min<std::size_t>(ea.values.size(), eb.values.size()));
        const auto a = measure_indices(id, ea, tiers, idx);
        const auto b = measure_indices(haar, eb, tiers, idx);
        for (std::size_t k = 0; k < a.size(); ++k) {
            worst = std::max({worst, std::abs(a[k].eigen_ratio - b[k].eigen_ratio),
                              std::abs(a[k].abs_inner - b[k].abs_inner), std::abs(a[k].inner_sq - b[k].inner_sq),
                              std::abs(a[k].subspace_cos - b[k].subspace_cos)});
        }
    }
    return {worst <= 1e-8, "max measure difference " + num(worst) + " (tol 1e-8)"};
}

Outcome determinism() {
    const fs::path dir = fs::temp_directory_path() / "spikepca_acceptance_determinism";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const fs::path cfg = dir / "config.json";
    std::ofstream(cfg) << R"({"spec": {"kind": "single", "alpha": 0.5}, "law": {"gamma": 0.25},
  "d_grid": [200, 400, 800, 1600], "replicates": 20, "master_seed": 1})"
                       << "\n";
    const std::string bin = SPIKEPCA_CLI_PATH;
    for (const char* t : {"1", "4"}) {
        const std::string cmd = bin + " simulate --config " + cfg.string() + " --out " + (dir / t).string() +
                                " --threads " + t + " > /dev/null";
        const int raw = std::system(cmd.c_str());
        if (!WIFEXITED(raw) || WEXITSTATUS(raw) != 0) return {false, "simulate with --threads " + std::string(t) + " failed"};
    }
    const std::string a = slurp(dir / "1" / "results.csv"), b = slurp(dir / "4" / "results.csv");
    const std::string aa = slurp(dir / "1" / "results_aggregate.csv"), ab = slurp(dir / "4" / "results_aggregate.csv");
    const bool ok = !a.empty() && a == b && aa == ab;
    return {ok, "results.csv " + std::to_string(a.size()) + " bytes, aggregate " + std::to_string(aa.size()) +
                    " bytes; --threads 1 vs 4 " + (ok ? "identical" : "differ")};
}

}  // namespace

int main() {
    std::printf("acceptance suite, %zu worker thread(s)\n", worker_threads());
    criterion(1, "dual spectral equivalence", 10, dual_equivalence);
    criterion(2, "eigensolver certification", 30, eigensolver_certification);
    criterion(3, "Wielandt suite", 0, wielandt_suite);
    criterion(4, "Bai-Yin edges", 120, bai_yin);
    criterion(5, "Nadler boundary limit", 300, nadler);
    criterion(6, "Jung HDLSS boundary", 120, jung);
    criterion(7, "phase diagram", 300, phase);
    criterion(8, "strong-inconsistency rate", 300, si_rate);
    criterion(9, "consistency-gap bound", 0, consistency_gap);
    criterion(10, "multi-spike individual consistency", 0, multi_spike);
    criterion(11, "tiered subspace consistency and eigenvalue sandwich", 120, tiered);
    criterion(12, "HDLSS eigenvalue limits", 0, hdlss_limits);
    criterion(13, "basis invariance", 0, basis_invariance);
    criterion(14, "determinism across thread counts", 0, determinism);
    std::printf("%d of 14 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
