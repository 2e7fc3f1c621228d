#include "spikepca/harness.hpp"
#include "spikepca/error.hpp"
#include "spikepca/rng.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

namespace spikepca {

const char* to_string(PathChoice path) {
    switch (path) {
        case PathChoice::Auto: return "auto";
        case PathChoice::Direct: return "direct";
        case PathChoice::Dual: return "dual";
    }
    return "?";
}

const char* to_string(Response response) {
    switch (response) {
        case Response::InnerSq: return "inner_sq";
        case Response::AbsInner: return "abs_inner";
        case Response::ConsistencyGap: return "consistency_gap";
        case Response::SubspaceGap: return "subspace_gap";
        case Response::EigenRatio: return "eigen_ratio";
    }
    return "?";
}

Response response_for(RateQuantity quantity) {
    switch (quantity) {
        case RateQuantity::ConsistencyGap: return Response::ConsistencyGap;
        case RateQuantity::StrongInconsistencyLevel: return Response::AbsInner;
        case RateQuantity::SubspaceGap: return Response::SubspaceGap;
    }
    return Response::InnerSq;
}

namespace {

void require(bool ok, const std::string& message) {
    if (!ok) throw Error(ErrorKind::ValidationError, message);
}

}  // namespace

void validate(const ExperimentConfig& config) {
    validate(config.spec);
    require(config.replicates >= 1, "replicates must be >= 1");
    require(!config.d_grid.empty(), "d_grid must be nonempty");
    for (std::size_t i = 0; i < config.d_grid.size(); ++i) {
        require(config.d_grid[i] >= 2, "d_grid entries must be >= 2");
        if (i > 0) require(config.d_grid[i - 1] < config.d_grid[i], "d_grid must be strictly increasing");
    }
    if (config.law.fixed_n) require(*config.law.fixed_n >= 1, "law.fixed_n must be >= 1");
    else require(std::isfinite(config.law.gamma) && config.law.gamma >= 0.0, "law.gamma must be >= 0");
    for (std::size_t d : config.d_grid) {
        try {
            build_spectrum(config.spec, d);
        } catch (const Error& e) {
            throw Error(e.kind(), std::string("d_grid value ") + std::to_string(d) + ": " + e.what());
        }
    }
    if (config.phase) {
        require(!config.phase->alpha_grid.empty(), "phase.alpha_grid must be nonempty");
        require(!config.phase->gamma_grid.empty(), "phase.gamma_grid must be nonempty");
        require(config.phase->d >= 50, "phase.d must be >= 50");
    }
    if (config.rate) {
        require(config.rate->index >= 1, "rate.index must be >= 1");
        require(std::isfinite(config.rate->power) && config.rate->power > 0.0, "rate.power must be positive");
    }
}

std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t grid_index, std::uint64_t replicate) {
    return mix64(master_seed ^ mix64((grid_index << 61) + replicate));
}

bool prefers_dual(std::size_t n, std::size_t d) { return 4 * n < d; }

const IndexMeasure* TrialRecord::find(std::size_t j) const {
    for (const auto& m : measures)
        if (m.j == j) return &m;
    return nullptr;
}

bool TrialRecord::operator==(const TrialRecord& o) const {
    if (d != o.d || n != o.n || d_index != o.d_index || replicate != o.replicate || seed != o.seed || path != o.path ||
        wall_ms != o.wall_ms || nonzero != o.nonzero || wielandt_ok != o.wielandt_ok ||
        measures.size() != o.measures.size())
        return false;
    for (std::size_t i = 0; i < measures.size(); ++i) {
        const IndexMeasure& a = measures[i];
        const IndexMeasure& b = o.measures[i];
        if (a.j != b.j || a.tier != b.tier || a.sample_value != b.sample_value ||
            a.population_value != b.population_value || a.eigen_ratio != b.eigen_ratio ||
            a.abs_inner != b.abs_inner || a.inner_sq != b.inner_sq || a.subspace_cos != b.subspace_cos ||
            a.subspace_cos_sq != b.subspace_cos_sq)
            return false;
    }
    return true;
}

std::vector<std::size_t> recorded_indices(std::size_t m, std::size_t n, std::size_t d1, std::size_t available) {
    const std::size_t cap = std::min(available, d1);
    std::vector<std::size_t> out;
    for (std::size_t j = 1; j <= m; ++j) out.push_back(j);
    out.push_back(m + 1);
    out.push_back(m + 2);
    out.push_back(std::min(n, d1));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    out.erase(std::remove_if(out.begin(), out.end(), [&](std::size_t j) { return j < 1 || j > cap; }), out.end());
    return out;
}

std::pair<SymMatrix, SymMatrix> dual_split(const Dataset& data, std::size_t m) {
    const Eigen::Index d = data.dimension();
    const Eigen::Index n = data.samples();
    if (data.scores.rows() != d || data.scores.cols() != n)
        throw Error(ErrorKind::MissingScores, "dataset carries no score matrix");
    const Eigen::Index mm = std::min<Eigen::Index>(static_cast<Eigen::Index>(m), d);
    const double inv_n = 1.0 / static_cast<double>(n);
    const Vector root = data.spectrum.cwiseSqrt();
    const Matrix spike = root.head(mm).asDiagonal() * data.scores.topRows(mm);
    const Matrix rest = root.tail(d - mm).asDiagonal() * data.scores.bottomRows(d - mm);
    return {SymMatrix(inv_n * spike.transpose() * spike), SymMatrix(inv_n * rest.transpose() * rest)};
}

bool wielandt_selected(std::uint64_t seed, std::size_t d) {
    return d <= 200 && mix64(seed ^ 0xD1B54A32D192ED03ULL) % 20 == 0;
}

TrialRecord run_trial_at(const ExperimentConfig& config, std::size_t d_index, std::size_t replicate) {
    if (d_index >= config.d_grid.size())
        throw Error(ErrorKind::ValidationError, "grid index " + std::to_string(d_index) + " outside d_grid");
    const std::size_t d = config.d_grid[d_index];
    TrialRecord rec;
    rec.d = d;
    rec.d_index = d_index;
    rec.replicate = replicate;
    rec.seed = derive_seed(config.master_seed, d_index, replicate);
    rec.n = resolve_n(config.law, d);
    try {
        const auto start = std::chrono::steady_clock::now();
        const Dataset data = synthesize(config.spec, config.law, d, config.dist, config.basis, rec.seed);
        const bool dual = config.path == PathChoice::Dual ||
                          (config.path == PathChoice::Auto && prefers_dual(rec.n, d));
        const EigenResult eig = dual ? dual_eigen(data.x) : direct_eigen(data.x);
        rec.path = eig.path;
        rec.nonzero = static_cast<std::size_t>(eig.values.size());

        const TierIndex tiers = tier_index(config.spec, d);
        const std::size_t m = tiers.spike_count();
        const std::size_t d1 = effective_dimension(config.spec, d);
        const std::vector<std::size_t> idx = recorded_indices(m, rec.n, d1, rec.nonzero);
        rec.measures = measure_indices(data, eig, tiers, idx);

        if (wielandt_selected(rec.seed, d)) {
            const auto [a, b] = dual_split(data, m);
            bool ok = true;
            for (Eigen::Index j = 1; j <= a.order(); ++j) ok = ok && wielandt_check(a, b, j).holds;
            rec.wielandt_ok = ok;
        }
        const auto stop = std::chrono::steady_clock::now();
        if (config.measures.wall_time)
            rec.wall_ms = std::chrono::duration<double, std::milli>(stop - start).count();
    } catch (const Error& e) {
        std::ostringstream os;
        os << "trial d=" << d << " (grid index " << d_index << ") replicate=" << replicate << " seed=" << rec.seed
           << ": " << e.what();
        throw Error(e.kind(), os.str());
    }
    return rec;
}

TrialRecord run_trial(const ExperimentConfig& config, std::size_t d, std::size_t replicate) {
    const auto it = std::find(config.d_grid.begin(), config.d_grid.end(), d);
    if (it == config.d_grid.end())
        throw Error(ErrorKind::ValidationError, "d=" + std::to_string(d) + " is not in d_grid");
    return run_trial_at(config, static_cast<std::size_t>(it - config.d_grid.begin()), replicate);
}

void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& job) {
    const std::size_t workers = std::max<std::size_t>(1, std::min(threads, count));
    if (workers == 1) {
        for (std::size_t i = 0; i < count; ++i) job(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) job(i);
        });
    }
    for (auto& t : pool) t.join();
}

std::string SweepResult::failure_report() const {
    std::ostringstream os;
    os << failures.size() << " trial(s) failed";
    for (const auto& f : failures)
        os << "\n  d=" << f.d << " grid_index=" << f.d_index << " replicate=" << f.replicate << " seed=" << f.seed
           << ": " << f.message;
    return os.str();
}

Summary summarize(const std::vector<double>& values) {
    Summary s;
    if (values.empty()) return s;
    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / static_cast<double>(values.size());
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - s.mean) * (v - s.mean);
        const double var = ss / static_cast<double>(values.size() - 1);
        s.std_error = std::sqrt(var / static_cast<double>(values.size()));
    }
    return s;
}

std::vector<Aggregate> aggregate(const std::vector<TrialRecord>& records) {
    struct Bucket {
        std::size_t n = 0;
        std::vector<double> ratio, abs_inner, inner_sq, sub, gap;
    };
    std::map<std::pair<std::size_t, std::size_t>, Bucket> buckets;
    for (const auto& r : records) {
        for (const auto& m : r.measures) {
            Bucket& b = buckets[{r.d, m.j}];
            b.n = r.n;
            b.ratio.push_back(m.eigen_ratio);
            b.abs_inner.push_back(m.abs_inner);
            b.inner_sq.push_back(m.inner_sq);
            b.sub.push_back(m.subspace_cos);
            b.gap.push_back(1.0 - m.abs_inner);
        }
    }
    std::vector<Aggregate> out;
    for (const auto& [key, b] : buckets) {
        Aggregate a;
        a.d = key.first;
        a.j = key.second;
        a.n = b.n;
        a.count = b.ratio.size();
        a.eigen_ratio = summarize(b.ratio);
        a.abs_inner = summarize(b.abs_inner);
        a.inner_sq = summarize(b.inner_sq);
        a.subspace_cos = summarize(b.sub);
        a.consistency_gap = summarize(b.gap);
        out.push_back(a);
    }
    return out;
}

SweepResult sweep(const ExperimentConfig& config, std::size_t threads, const TrialFunction& trial) {
    validate(config);
    const std::size_t reps = config.replicates;
    const std::size_t total = config.d_grid.size() * reps;
    std::vector<std::optional<TrialRecord>> slots(total);
    std::vector<std::string> errors(total);

    parallel_for(total, threads, [&](std::size_t i) {
        try {
            slots[i] = trial(config, i / reps, i % reps);
        } catch (const std::exception& e) {
            errors[i] = e.what();
            if (errors[i].empty()) errors[i] = "unknown failure";
        }
    });

    SweepResult out;
    for (std::size_t i = 0; i < total; ++i) {
        if (slots[i]) {
            const TrialRecord& r = *slots[i];
            if (r.wielandt_ok) {
                ++out.wielandt_checked;
                if (!*r.wielandt_ok) ++out.wielandt_violations;
            }
            out.records.push_back(std::move(*slots[i]));
        } else {
            const std::size_t di = i / reps;
            const std::size_t rep = i % reps;
            out.failures.push_back({config.d_grid[di], di, rep, derive_seed(config.master_seed, di, rep), errors[i]});
        }
    }
    out.aggregates = aggregate(out.records);
    return out;
}

RateFit fit_log_log(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw Error(ErrorKind::DimensionMismatch, "fit needs equal-length inputs");
    RateFit fit;
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(y[i] > kResponseFloor)) {
            ++fit.dropped;
            continue;
        }
        if (!(x[i] > 0.0) || !std::isfinite(x[i]) || !std::isfinite(y[i]))
            throw Error(ErrorKind::DomainError, "fit needs positive finite predictors");
        lx.push_back(std::log(x[i]));
        ly.push_back(std::log(y[i]));
        fit.max_ratio = std::max(fit.max_ratio, y[i] / x[i]);
    }
    fit.n_points = lx.size();
    if (fit.n_points < 2)
        throw Error(ErrorKind::NonPositiveResponse, std::to_string(fit.dropped) +
                                                        " response(s) at or below 1e-14 leave fewer than 2 points");
    const double k = static_cast<double>(fit.n_points);
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= k;
    my /= k;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
        syy += (ly[i] - my) * (ly[i] - my);
    }
    if (sxx == 0.0) throw Error(ErrorKind::InsufficientPoints, "predictor is constant across points");
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r_squared = syy == 0.0 ? 1.0 : std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0);
    return fit;
}

double response_value(const IndexMeasure& m, Response response) {
    switch (response) {
        case Response::InnerSq: return m.inner_sq;
        case Response::AbsInner: return m.abs_inner;
        case Response::ConsistencyGap: return 1.0 - m.abs_inner;
        case Response::SubspaceGap: return 1.0 - m.subspace_cos;
        case Response::EigenRatio: return m.eigen_ratio;
    }
    return 0.0;
}

RateFit fit_rate(const std::vector<TrialRecord>& records, const std::function<double(std::size_t d)>& predictor,
                 const ResponseSelector& selector) {
    std::map<std::size_t, std::vector<double>> by_d;
    for (const auto& r : records)
        if (const IndexMeasure* m = r.find(selector.j)) by_d[r.d].push_back(response_value(*m, selector.response));
    if (by_d.size() < 3)
        throw Error(ErrorKind::InsufficientPoints,
                    "rate fit needs >= 3 distinct d values, got " + std::to_string(by_d.size()));
    std::vector<double> x, y;
    for (const auto& [d, values] : by_d) {
        x.push_back(predictor(d));
        y.push_back(summarize(values).mean);
    }
    return fit_log_log(x, y);
}

std::uint64_t node_seed(std::uint64_t master_seed, std::size_t node_index) {
    return mix64(master_seed + kGoldenGamma * (static_cast<std::uint64_t>(node_index) + 1));
}

PhaseDiagram phase_diagram(const std::vector<double>& alpha_grid, const std::vector<double>& gamma_grid, std::size_t d,
                           std::size_t replicates, std::uint64_t master_seed, std::size_t threads,
                           const SpectrumSpec& spec_template) {
    if (alpha_grid.empty() || gamma_grid.empty())
        throw Error(ErrorKind::ValidationError, "phase diagram needs nonempty alpha and gamma grids");
    if (d < 50) throw Error(ErrorKind::ValidationError, "phase diagram needs d >= 50");
    if (replicates < 1) throw Error(ErrorKind::ValidationError, "phase diagram needs replicates >= 1");

    PhaseDiagram out;
    out.d = d;
    out.alphas = alpha_grid;
    out.gammas = gamma_grid;
    std::sort(out.alphas.begin(), out.alphas.end());
    std::sort(out.gammas.begin(), out.gammas.end(), std::greater<>());
    out.labels = region_grid(out.alphas, out.gammas, spec_template);

    const std::size_t cols = out.alphas.size();
    const std::size_t nodes = out.gammas.size() * cols;
    std::vector<ExperimentConfig> configs(nodes);
    for (std::size_t k = 0; k < nodes; ++k) {
        ExperimentConfig& c = configs[k];
        c.spec = with_alpha(spec_template, out.alphas[k % cols]);
        c.law.gamma = out.gammas[k / cols];
        c.d_grid = {d};
        c.replicates = replicates;
        c.master_seed = node_seed(master_seed, k);
    }

    const std::size_t total = nodes * replicates;
    std::vector<double> values(total, 0.0);
    std::vector<std::string> errors(total);
    parallel_for(total, threads, [&](std::size_t i) {
        try {
            const TrialRecord r = run_trial_at(configs[i / replicates], 0, i % replicates);
            const IndexMeasure* m = r.find(1);
            values[i] = m ? m->inner_sq : 0.0;
        } catch (const std::exception& e) {
            errors[i] = e.what();
        }
    });

    out.mean_inner_sq.assign(out.gammas.size(), std::vector<double>(cols, 0.0));
    for (std::size_t k = 0; k < nodes; ++k) {
        double sum = 0.0;
        std::size_t ok = 0;
        for (std::size_t rep = 0; rep < replicates; ++rep) {
            const std::size_t i = k * replicates + rep;
            if (errors[i].empty()) {
                sum += values[i];
                ++ok;
            } else {
                out.failures.push_back({d, k, rep, derive_seed(configs[k].master_seed, 0, rep), errors[i]});
            }
        }
        out.mean_inner_sq[k / cols][k % cols] = ok ? sum / static_cast<double>(ok) : std::nan("");
    }
    return out;
}

}  // namespace spikepca
