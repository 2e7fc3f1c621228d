#pragma once

#include "spikepca/eigencore.hpp"
#include "spikepca/metrics.hpp"
#include "spikepca/oracles.hpp"
#include "spikepca/regime.hpp"
#include "spikepca/sampler.hpp"
#include "spikepca/spike_model.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace spikepca {

enum class PathChoice { Auto, Direct, Dual };

const char* to_string(PathChoice path);

/// Which measures are written out. Disabled measures are still computed but
/// emitted as NaN; wall_time off means wall_ms is recorded as 0.
struct MeasureSet {
    bool eigen_ratio = true;
    bool abs_inner = true;
    bool inner_sq = true;
    bool subspace_cos = true;
    bool wall_time = false;
};

/// Response extracted from a record for rate fitting.
enum class Response { InnerSq, AbsInner, ConsistencyGap, SubspaceGap, EigenRatio };

const char* to_string(Response response);

/// Response matching a predicted quantity: 1-|<.,.>|, |<.,.>| or 1-cos.
Response response_for(RateQuantity quantity);

struct PhaseSettings {
    std::vector<double> alpha_grid;
    std::vector<double> gamma_grid;
    std::size_t d = 300;
};

struct RateSettings {
    std::size_t index = 1;            ///< 1-based eigen index
    std::optional<Response> response;  ///< defaults to response_for(predicted quantity)
    double power = 1.0;               ///< predictor = rate^power
};

struct ExperimentConfig {
    SpectrumSpec spec;
    ScalingLaw law;
    std::vector<std::size_t> d_grid;
    std::size_t replicates = 10;
    ScoreDistribution dist = ScoreDistribution::Gaussian;
    BasisKind basis = BasisKind::Identity;
    std::uint64_t master_seed = 0;
    MeasureSet measures;
    std::string output_dir = ".";
    PathChoice path = PathChoice::Auto;
    std::optional<PhaseSettings> phase;
    std::optional<RateSettings> rate;
};

/// Throws ValidationError naming the offending field.
void validate(const ExperimentConfig& config);

/// mix64(master ^ mix64(grid_index * 2^61 + replicate)), wrapping arithmetic.
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t grid_index, std::uint64_t replicate);

/// True when the dual n x n path is chosen automatically (n < d/4).
bool prefers_dual(std::size_t n, std::size_t d);

struct TrialRecord {
    std::size_t d = 0;
    std::size_t n = 0;
    std::size_t d_index = 0;
    std::size_t replicate = 0;
    std::uint64_t seed = 0;
    EigenPath path = EigenPath::Direct;
    double wall_ms = 0.0;
    std::size_t nonzero = 0;  ///< nonzero sample eigenvalues found
    std::vector<IndexMeasure> measures;
    std::optional<bool> wielandt_ok;  ///< set on spot-checked trials

    const IndexMeasure* find(std::size_t j) const;
    bool operator==(const TrialRecord& other) const;
};

/// 1-based indices recorded for a trial: 1..m, then m+1, m+2 and min(n, d1),
/// restricted to the `available` computed eigenpairs.
std::vector<std::size_t> recorded_indices(std::size_t m, std::size_t n, std::size_t d1, std::size_t available);

/// Eq. Sigma_D = A + B with A holding the spike coordinates 0..m-1 of
/// n^{-1} Z^T Lambda Z and B the rest.
std::pair<SymMatrix, SymMatrix> dual_split(const Dataset& data, std::size_t m);

/// Whether the trial with this seed gets the Wielandt spot-check (about 5%).
bool wielandt_selected(std::uint64_t seed, std::size_t d);

TrialRecord run_trial_at(const ExperimentConfig& config, std::size_t d_index, std::size_t replicate);
TrialRecord run_trial(const ExperimentConfig& config, std::size_t d, std::size_t replicate);

using TrialFunction = std::function<TrialRecord(const ExperimentConfig&, std::size_t d_index, std::size_t replicate)>;

struct TrialFailureInfo {
    std::size_t d = 0;
    std::size_t d_index = 0;
    std::size_t replicate = 0;
    std::uint64_t seed = 0;
    std::string message;
};

struct Summary {
    double mean = 0.0;
    double std_error = 0.0;
};

struct Aggregate {
    std::size_t d = 0;
    std::size_t n = 0;
    std::size_t j = 0;
    std::size_t count = 0;
    Summary eigen_ratio;
    Summary abs_inner;
    Summary inner_sq;
    Summary subspace_cos;
    Summary consistency_gap;
};

struct SweepResult {
    std::vector<TrialRecord> records;  ///< sorted by (d_index, replicate)
    std::vector<TrialFailureInfo> failures;
    std::vector<Aggregate> aggregates;  ///< sorted by (d, j)
    std::size_t wielandt_checked = 0;
    std::size_t wielandt_violations = 0;

    bool ok() const noexcept { return failures.empty(); }
    std::string failure_report() const;
};

/// Mean and standard error of the mean (sample sd / sqrt(count); 0 for one value).
Summary summarize(const std::vector<double>& values);

std::vector<Aggregate> aggregate(const std::vector<TrialRecord>& records);

/// Runs every (d, replicate) trial on up to `threads` workers. The result does
/// not depend on `threads`.
SweepResult sweep(const ExperimentConfig& config, std::size_t threads = 1, const TrialFunction& trial = run_trial_at);

/// Index `count` jobs across workers; job(i) must only touch slot i.
void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& job);

struct RateFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    std::size_t n_points = 0;
    std::size_t dropped = 0;   ///< points with response <= 1e-14
    double max_ratio = 0.0;    ///< max response / predictor (empirical O-constant)
};

inline constexpr double kResponseFloor = 1e-14;

/// OLS of log y on log x over points with y > kResponseFloor.
RateFit fit_log_log(const std::vector<double>& x, const std::vector<double>& y);

struct ResponseSelector {
    std::size_t j = 1;
    Response response = Response::InnerSq;
};

double response_value(const IndexMeasure& m, Response response);

/// Fit log(mean response at d) against log(predictor(d)). Needs at least 3
/// distinct d values.
RateFit fit_rate(const std::vector<TrialRecord>& records, const std::function<double(std::size_t d)>& predictor,
                 const ResponseSelector& selector);

struct PhaseDiagram {
    std::vector<double> alphas;  ///< ascending (columns)
    std::vector<double> gammas;  ///< descending (rows)
    std::vector<std::vector<double>> mean_inner_sq;
    std::vector<std::vector<RegimeLabel>> labels;
    std::size_t d = 0;
    std::vector<TrialFailureInfo> failures;
};

/// Seed of node `node_index` (row-major over the sorted grids).
std::uint64_t node_seed(std::uint64_t master_seed, std::size_t node_index);

PhaseDiagram phase_diagram(const std::vector<double>& alpha_grid, const std::vector<double>& gamma_grid, std::size_t d,
                           std::size_t replicates, std::uint64_t master_seed, std::size_t threads = 1,
                           const SpectrumSpec& spec_template = SpectrumSpec{});

}  // namespace spikepca
