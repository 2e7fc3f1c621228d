#pragma once

#include "spikepca/harness.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace spikepca {

/// Reads and validates a JSON experiment config. Unknown keys are rejected at
/// every level; malformed JSON raises ParseError with line and column.
ExperimentConfig parse_config(const std::filesystem::path& path);
ExperimentConfig parse_config_text(std::string_view text);

enum class ResultFormat { CSV, JSON };

ResultFormat parse_format(std::string_view name);
const char* extension(ResultFormat format);

inline constexpr const char* kSchemaVersion = "1";

/// Raw CSV column list, in order.
inline constexpr const char* kCsvHeader = "d,n,replicate,seed,j,eigen_ratio,abs_inner,inner_sq,subspace_cos,path,wall_ms";
inline constexpr const char* kAggregateCsvHeader =
    "d,n,j,count,eigen_ratio_mean,eigen_ratio_stderr,abs_inner_mean,abs_inner_stderr,inner_sq_mean,inner_sq_stderr,"
    "subspace_cos_mean,subspace_cos_stderr";

/// One output row: a trial record projected onto one eigen index. Disabled
/// measures hold NaN.
struct ResultRow {
    std::size_t d = 0;
    std::size_t n = 0;
    std::size_t replicate = 0;
    std::uint64_t seed = 0;
    std::size_t j = 0;
    double eigen_ratio = 0.0;
    double abs_inner = 0.0;
    double inner_sq = 0.0;
    double subspace_cos = 0.0;
    std::string path;
    double wall_ms = 0.0;
};

std::vector<ResultRow> result_rows(const std::vector<TrialRecord>& records, const MeasureSet& measures = {});

/// "%.17g"; NaN and infinities as nan, inf, -inf.
std::string format_double(double v);

struct EmittedFiles {
    std::filesystem::path raw;
    std::filesystem::path aggregate;
};

/// `path` names the raw file; the aggregate goes next to it as
/// <stem>_aggregate<ext>.
EmittedFiles emit_results(const std::vector<TrialRecord>& records, const std::vector<Aggregate>& aggregates,
                          ResultFormat format, const std::filesystem::path& path, const MeasureSet& measures = {});

std::string results_csv(const std::vector<ResultRow>& rows);
std::string aggregates_csv(const std::vector<Aggregate>& aggregates);
std::string results_json(const std::vector<ResultRow>& rows);
std::string aggregates_json(const std::vector<Aggregate>& aggregates);

/// Parses a raw results CSV produced by emit_results.
std::vector<ResultRow> read_results_csv(const std::filesystem::path& path);

/// Standalone SVG heatmap: one rect per node, grayscale white = 0 to black = 1,
/// alpha across and gamma up, a dashed alpha + gamma = 1 line clipped to the
/// grid, and a B glyph where the label is Boundary.
std::string phase_svg(const PhaseDiagram& diagram);
void emit_phase_svg(const PhaseDiagram& diagram, const std::filesystem::path& path);

/// Node table: gamma,alpha,mean_inner_sq,label.
std::string phase_csv(const PhaseDiagram& diagram);

void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace spikepca
