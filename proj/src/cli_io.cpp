#include "spikepca/cli_io.hpp"
#include "spikepca/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

namespace spikepca {

using nlohmann::json;

namespace {

[[noreturn]] void invalid(const std::string& key, const std::string& message) {
    throw Error(ErrorKind::ValidationError, key + ": " + message);
}

void allow_keys(const json& obj, const std::string& where, std::initializer_list<const char*> keys) {
    if (!obj.is_object()) invalid(where.empty() ? "config" : where, "must be a JSON object");
    const std::set<std::string> allowed(keys.begin(), keys.end());
    for (const auto& [key, _] : obj.items())
        if (!allowed.count(key)) invalid(where.empty() ? key : where + "." + key, "unknown key");
}

std::string join(const std::string& where, const char* key) { return where.empty() ? key : where + "." + key; }

const json& need(const json& obj, const std::string& where, const char* key) {
    if (!obj.contains(key)) invalid(join(where, key), "missing required key");
    return obj.at(key);
}

double as_double(const json& v, const std::string& key) {
    if (!v.is_number()) invalid(key, "must be a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) invalid(key, "must be finite");
    return x;
}

std::uint64_t as_uint(const json& v, const std::string& key) {
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer()) {
        if (v.get<std::int64_t>() < 0) invalid(key, "must be a nonnegative integer");
        return static_cast<std::uint64_t>(v.get<std::int64_t>());
    }
    invalid(key, "must be a nonnegative integer");
}

std::string as_string(const json& v, const std::string& key) {
    if (!v.is_string()) invalid(key, "must be a string");
    return v.get<std::string>();
}

std::vector<double> as_doubles(const json& v, const std::string& key) {
    if (!v.is_array()) invalid(key, "must be an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(as_double(v[i], key + "[" + std::to_string(i) + "]"));
    return out;
}

SpectrumSpec parse_spec(const json& s) {
    const std::string where = "spec";
    if (!s.is_object()) invalid(where, "must be a JSON object");
    const std::string kind = as_string(need(s, where, "kind"), "spec.kind");
    SpectrumSpec spec;
    if (kind == "single") {
        allow_keys(s, where, {"kind", "alpha", "base_level", "zero_tail"});
        spec.kind = SingleSpike{as_double(need(s, where, "alpha"), "spec.alpha")};
    } else if (kind == "multi") {
        allow_keys(s, where, {"kind", "alpha", "constants", "m", "base_level", "zero_tail"});
        MultiSpike m;
        m.alpha = as_double(need(s, where, "alpha"), "spec.alpha");
        if (s.contains("constants") && s.contains("m")) invalid("spec.m", "give either constants or m, not both");
        if (s.contains("constants")) {
            m.constants = as_doubles(s.at("constants"), "spec.constants");
        } else if (s.contains("m")) {
            const std::uint64_t count = as_uint(s.at("m"), "spec.m");
            if (count < 1) invalid("spec.m", "must be >= 1");
            m.constants = default_multi_constants(static_cast<std::size_t>(count));
        } else {
            invalid("spec.constants", "multi spike needs constants or m");
        }
        spec.kind = m;
    } else if (kind == "tiered") {
        allow_keys(s, where, {"kind", "tiers", "base_level", "zero_tail"});
        const json& tiers = need(s, where, "tiers");
        if (!tiers.is_array()) invalid("spec.tiers", "must be an array");
        Tiered t;
        for (std::size_t i = 0; i < tiers.size(); ++i) {
            const std::string tw = "spec.tiers[" + std::to_string(i) + "]";
            allow_keys(tiers[i], tw, {"exponent", "multiplicity", "scale"});
            Tier tier;
            tier.exponent = as_double(need(tiers[i], tw, "exponent"), tw + ".exponent");
            if (tiers[i].contains("multiplicity"))
                tier.multiplicity = static_cast<std::size_t>(as_uint(tiers[i].at("multiplicity"), tw + ".multiplicity"));
            if (tiers[i].contains("scale")) tier.scale = as_double(tiers[i].at("scale"), tw + ".scale");
            t.tiers.push_back(tier);
        }
        spec.kind = t;
    } else if (kind == "explicit") {
        allow_keys(s, where, {"kind", "values", "base_level", "zero_tail"});
        spec.kind = Explicit{as_doubles(need(s, where, "values"), "spec.values")};
    } else {
        invalid("spec.kind", "unknown spectrum kind '" + kind + "' (single, multi, tiered, explicit)");
    }
    if (s.contains("base_level")) spec.base_level = as_double(s.at("base_level"), "spec.base_level");
    if (s.contains("zero_tail")) spec.zero_tail = static_cast<std::size_t>(as_uint(s.at("zero_tail"), "spec.zero_tail"));
    try {
        validate(spec);
    } catch (const Error& e) {
        throw Error(ErrorKind::ValidationError, std::string("spec: ") + e.what());
    }
    return spec;
}

ScalingLaw parse_law(const json& l) {
    allow_keys(l, "law", {"gamma", "fixed_n"});
    ScalingLaw law;
    if (l.contains("gamma") == l.contains("fixed_n")) invalid("law", "give exactly one of gamma or fixed_n");
    if (l.contains("gamma")) {
        law.gamma = as_double(l.at("gamma"), "law.gamma");
        if (law.gamma < 0.0) invalid("law.gamma", "must be >= 0");
    } else {
        const std::uint64_t n = as_uint(l.at("fixed_n"), "law.fixed_n");
        if (n < 1) invalid("law.fixed_n", "must be >= 1");
        law.fixed_n = static_cast<std::size_t>(n);
    }
    return law;
}

ScoreDistribution parse_dist(const std::string& s) {
    if (s == "gaussian") return ScoreDistribution::Gaussian;
    if (s == "rademacher") return ScoreDistribution::Rademacher;
    if (s == "scaled_uniform") return ScoreDistribution::ScaledUniform;
    invalid("dist", "unknown distribution '" + s + "' (gaussian, rademacher, scaled_uniform)");
}

BasisKind parse_basis(const std::string& s) {
    if (s == "identity") return BasisKind::Identity;
    if (s == "haar") return BasisKind::Haar;
    invalid("basis", "unknown basis '" + s + "' (identity, haar)");
}

PathChoice parse_path(const std::string& s) {
    if (s == "auto") return PathChoice::Auto;
    if (s == "direct") return PathChoice::Direct;
    if (s == "dual") return PathChoice::Dual;
    invalid("path", "unknown path '" + s + "' (auto, direct, dual)");
}

Response parse_response(const std::string& s) {
    for (Response r : {Response::InnerSq, Response::AbsInner, Response::ConsistencyGap, Response::SubspaceGap,
                       Response::EigenRatio})
        if (s == to_string(r)) return r;
    invalid("rate.response", "unknown response '" + s + "'");
}

MeasureSet parse_measures(const json& v) {
    if (!v.is_array()) invalid("measures", "must be an array of measure names");
    MeasureSet m{false, false, false, false, false};
    for (std::size_t i = 0; i < v.size(); ++i) {
        const std::string name = as_string(v[i], "measures[" + std::to_string(i) + "]");
        if (name == "eigen_ratio") m.eigen_ratio = true;
        else if (name == "abs_inner") m.abs_inner = true;
        else if (name == "inner_sq") m.inner_sq = true;
        else if (name == "subspace_cos") m.subspace_cos = true;
        else if (name == "wall_time") m.wall_time = true;
        else invalid("measures[" + std::to_string(i) + "]", "unknown measure '" + name + "'");
    }
    return m;
}

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    const std::size_t end = std::min(byte, text.size());
    // nlohmann reports the byte just past the offending token.
    for (std::size_t i = 0; i + 1 < end; ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

}  // namespace

ExperimentConfig parse_config_text(std::string_view text) {
    json root;
    try {
        root = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        const auto [line, col] = line_column(text, e.byte);
        throw Error(ErrorKind::ParseError, "line " + std::to_string(line) + ", column " + std::to_string(col) + ": " +
                                               e.what());
    }
    allow_keys(root, "", {"spec", "law", "d_grid", "replicates", "dist", "basis", "master_seed", "measures",
                          "output_dir", "path", "phase", "rate"});

    ExperimentConfig cfg;
    cfg.spec = parse_spec(need(root, "", "spec"));
    cfg.law = parse_law(need(root, "", "law"));
    cfg.master_seed = as_uint(need(root, "", "master_seed"), "master_seed");

    if (root.contains("phase")) {
        const json& p = root.at("phase");
        allow_keys(p, "phase", {"alpha_grid", "gamma_grid", "d"});
        PhaseSettings ph;
        ph.alpha_grid = as_doubles(need(p, "phase", "alpha_grid"), "phase.alpha_grid");
        ph.gamma_grid = as_doubles(need(p, "phase", "gamma_grid"), "phase.gamma_grid");
        if (p.contains("d")) ph.d = static_cast<std::size_t>(as_uint(p.at("d"), "phase.d"));
        cfg.phase = ph;
    }
    if (root.contains("d_grid")) {
        const json& g = root.at("d_grid");
        if (!g.is_array()) invalid("d_grid", "must be an array of positive integers");
        for (std::size_t i = 0; i < g.size(); ++i)
            cfg.d_grid.push_back(static_cast<std::size_t>(as_uint(g[i], "d_grid[" + std::to_string(i) + "]")));
    } else if (cfg.phase) {
        cfg.d_grid = {cfg.phase->d};
    } else {
        invalid("d_grid", "missing required key");
    }
    cfg.law.d_values = cfg.d_grid;

    if (root.contains("replicates")) {
        cfg.replicates = static_cast<std::size_t>(as_uint(root.at("replicates"), "replicates"));
    }
    if (root.contains("dist")) cfg.dist = parse_dist(as_string(root.at("dist"), "dist"));
    if (root.contains("basis")) cfg.basis = parse_basis(as_string(root.at("basis"), "basis"));
    if (root.contains("measures")) cfg.measures = parse_measures(root.at("measures"));
    if (root.contains("output_dir")) cfg.output_dir = as_string(root.at("output_dir"), "output_dir");
    if (root.contains("path")) cfg.path = parse_path(as_string(root.at("path"), "path"));
    if (root.contains("rate")) {
        const json& r = root.at("rate");
        allow_keys(r, "rate", {"index", "response", "power"});
        RateSettings rs;
        if (r.contains("index")) rs.index = static_cast<std::size_t>(as_uint(r.at("index"), "rate.index"));
        if (r.contains("response")) rs.response = parse_response(as_string(r.at("response"), "rate.response"));
        if (r.contains("power")) rs.power = as_double(r.at("power"), "rate.power");
        cfg.rate = rs;
    }
    validate(cfg);
    return cfg;
}

ExperimentConfig parse_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::IoError, "cannot open config " + path.string());
    std::ostringstream os;
    os << in.rdbuf();
    return parse_config_text(os.str());
}

ResultFormat parse_format(std::string_view name) {
    if (name == "csv") return ResultFormat::CSV;
    if (name == "json") return ResultFormat::JSON;
    throw Error(ErrorKind::ValidationError, "format: unknown format '" + std::string(name) + "' (csv, json)");
}

const char* extension(ResultFormat format) { return format == ResultFormat::CSV ? ".csv" : ".json"; }

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<ResultRow> result_rows(const std::vector<TrialRecord>& records, const MeasureSet& measures) {
    const double nan = std::nan("");
    std::vector<ResultRow> rows;
    for (const auto& r : records) {
        for (const auto& m : r.measures) {
            ResultRow row;
            row.d = r.d;
            row.n = r.n;
            row.replicate = r.replicate;
            row.seed = r.seed;
            row.j = m.j;
            row.eigen_ratio = measures.eigen_ratio ? m.eigen_ratio : nan;
            row.abs_inner = measures.abs_inner ? m.abs_inner : nan;
            row.inner_sq = measures.inner_sq ? m.inner_sq : nan;
            row.subspace_cos = measures.subspace_cos ? m.subspace_cos : nan;
            row.path = r.path == EigenPath::Dual ? "dual" : "direct";
            row.wall_ms = measures.wall_time ? r.wall_ms : 0.0;
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

std::string results_csv(const std::vector<ResultRow>& rows) {
    std::string out = std::string(kCsvHeader) + "\n";
    for (const auto& r : rows) {
        out += std::to_string(r.d) + "," + std::to_string(r.n) + "," + std::to_string(r.replicate) + "," +
               std::to_string(r.seed) + "," + std::to_string(r.j) + "," + format_double(r.eigen_ratio) + "," +
               format_double(r.abs_inner) + "," + format_double(r.inner_sq) + "," + format_double(r.subspace_cos) +
               "," + r.path + "," + format_double(r.wall_ms) + "\n";
    }
    return out;
}

std::string aggregates_csv(const std::vector<Aggregate>& aggregates) {
    std::string out = std::string(kAggregateCsvHeader) + "\n";
    for (const auto& a : aggregates) {
        out += std::to_string(a.d) + "," + std::to_string(a.n) + "," + std::to_string(a.j) + "," +
               std::to_string(a.count);
        for (const Summary* s : {&a.eigen_ratio, &a.abs_inner, &a.inner_sq, &a.subspace_cos})
            out += "," + format_double(s->mean) + "," + format_double(s->std_error);
        out += "\n";
    }
    return out;
}

namespace {

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

std::string results_json(const std::vector<ResultRow>& rows) {
    json doc = {{"schema_version", kSchemaVersion}, {"kind", "trials"}, {"rows", json::array()}};
    for (const auto& r : rows) {
        doc["rows"].push_back({{"d", r.d},
                               {"n", r.n},
                               {"replicate", r.replicate},
                               {"seed", r.seed},
                               {"j", r.j},
                               {"eigen_ratio", number_or_null(r.eigen_ratio)},
                               {"abs_inner", number_or_null(r.abs_inner)},
                               {"inner_sq", number_or_null(r.inner_sq)},
                               {"subspace_cos", number_or_null(r.subspace_cos)},
                               {"path", r.path},
                               {"wall_ms", number_or_null(r.wall_ms)}});
    }
    return doc.dump(2) + "\n";
}

std::string aggregates_json(const std::vector<Aggregate>& aggregates) {
    json doc = {{"schema_version", kSchemaVersion}, {"kind", "aggregates"}, {"rows", json::array()}};
    for (const auto& a : aggregates) {
        json row = {{"d", a.d}, {"n", a.n}, {"j", a.j}, {"count", a.count}};
        const std::pair<const char*, const Summary*> fields[] = {
            {"eigen_ratio", &a.eigen_ratio}, {"abs_inner", &a.abs_inner}, {"inner_sq", &a.inner_sq},
            {"subspace_cos", &a.subspace_cos}};
        for (const auto& [name, s] : fields) {
            row[std::string(name) + "_mean"] = number_or_null(s->mean);
            row[std::string(name) + "_stderr"] = number_or_null(s->std_error);
        }
        doc["rows"].push_back(std::move(row));
    }
    return doc.dump(2) + "\n";
}

void write_file(const std::filesystem::path& path, std::string_view content) {
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::IoError, "cannot open " + path.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error(ErrorKind::IoError, "write to " + path.string() + " failed");
}

EmittedFiles emit_results(const std::vector<TrialRecord>& records, const std::vector<Aggregate>& aggregates,
                          ResultFormat format, const std::filesystem::path& path, const MeasureSet& measures) {
    if (records.empty()) throw Error(ErrorKind::ValidationError, "no records to emit");
    EmittedFiles files;
    files.raw = path;
    files.aggregate = path.parent_path() / (path.stem().string() + "_aggregate" + path.extension().string());
    const std::vector<ResultRow> rows = result_rows(records, measures);
    if (format == ResultFormat::CSV) {
        write_file(files.raw, results_csv(rows));
        write_file(files.aggregate, aggregates_csv(aggregates));
    } else {
        write_file(files.raw, results_json(rows));
        write_file(files.aggregate, aggregates_json(aggregates));
    }
    return files;
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream is(line);
    while (std::getline(is, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

double parse_double(const std::string& s) {
    if (s == "nan") return std::nan("");
    if (s == "inf") return HUGE_VAL;
    if (s == "-inf") return -HUGE_VAL;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0') throw Error(ErrorKind::ParseError, "bad number '" + s + "'");
    return v;
}

std::uint64_t parse_uint(const std::string& s) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
    if (s.empty() || end == s.c_str() || *end != '\0') throw Error(ErrorKind::ParseError, "bad integer '" + s + "'");
    return v;
}

}  // namespace

std::vector<ResultRow> read_results_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader)
        throw Error(ErrorKind::ParseError, path.string() + ": header does not match the results schema");
    std::vector<ResultRow> rows;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto cells = split_csv(line);
        if (cells.size() != 11)
            throw Error(ErrorKind::ParseError, path.string() + ": line " + std::to_string(lineno) + " has " +
                                                   std::to_string(cells.size()) + " fields");
        ResultRow r;
        r.d = parse_uint(cells[0]);
        r.n = parse_uint(cells[1]);
        r.replicate = parse_uint(cells[2]);
        r.seed = parse_uint(cells[3]);
        r.j = parse_uint(cells[4]);
        r.eigen_ratio = parse_double(cells[5]);
        r.abs_inner = parse_double(cells[6]);
        r.inner_sq = parse_double(cells[7]);
        r.subspace_cos = parse_double(cells[8]);
        r.path = cells[9];
        r.wall_ms = parse_double(cells[10]);
        rows.push_back(std::move(r));
    }
    return rows;
}

namespace {

std::string fixed(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string label_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

std::string gray(double v) {
    if (!std::isfinite(v)) return "#f4cccc";
    const int level = static_cast<int>(std::lround(255.0 * (1.0 - std::clamp(v, 0.0, 1.0))));
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", level, level, level);
    return buf;
}

// Piecewise-linear map from a grid value to the pixel center of its cell.
double interpolate(const std::vector<double>& ascending, double v, double first_center, double step) {
    if (ascending.size() == 1) return first_center;
    for (std::size_t i = 0; i + 1 < ascending.size(); ++i) {
        const double lo = ascending[i], hi = ascending[i + 1];
        if (v <= hi || i + 2 == ascending.size()) {
            const double t = hi == lo ? 0.0 : (v - lo) / (hi - lo);
            return first_center + (static_cast<double>(i) + t) * step;
        }
    }
    return first_center;
}

}  // namespace

std::string phase_svg(const PhaseDiagram& pd) {
    const std::size_t rows = pd.gammas.size();
    const std::size_t cols = pd.alphas.size();
    if (rows == 0 || cols == 0 || pd.mean_inner_sq.size() != rows || pd.labels.size() != rows)
        throw Error(ErrorKind::DimensionMismatch, "phase matrix must be rectangular and match the grids");
    for (std::size_t r = 0; r < rows; ++r)
        if (pd.mean_inner_sq[r].size() != cols || pd.labels[r].size() != cols)
            throw Error(ErrorKind::DimensionMismatch, "phase matrix must be rectangular and match the grids");

    const double cell = 40.0;
    const double left = 70.0, top = 30.0;
    const double plot_w = cell * static_cast<double>(cols), plot_h = cell * static_cast<double>(rows);
    const double legend_x = left + plot_w + 30.0;
    const double width = legend_x + 70.0, height = top + plot_h + 60.0;

    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << fixed(width) << "\" height=\""
       << fixed(height) << "\" viewBox=\"0 0 " << fixed(width) << " " << fixed(height) << "\">\n"
       << "<title>mean squared inner product of the leading eigenvector over (alpha, gamma), d=" << pd.d
       << "</title>\n"
       << "<defs><linearGradient id=\"shade\" x1=\"0\" y1=\"1\" x2=\"0\" y2=\"0\">"
       << "<stop offset=\"0\" stop-color=\"#ffffff\"/><stop offset=\"1\" stop-color=\"#000000\"/>"
       << "</linearGradient></defs>\n";

    os << "<g id=\"cells\" stroke=\"#888888\" stroke-width=\"0.5\">\n";
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            const double v = pd.mean_inner_sq[r][c];
            os << "<rect x=\"" << fixed(left + cell * static_cast<double>(c)) << "\" y=\""
               << fixed(top + cell * static_cast<double>(r)) << "\" width=\"" << fixed(cell) << "\" height=\""
               << fixed(cell) << "\" fill=\"" << gray(v) << "\"><title>alpha=" << label_number(pd.alphas[c])
               << " gamma=" << label_number(pd.gammas[r]) << " mean=" << format_double(v) << " "
               << to_string(pd.labels[r][c]) << "</title></rect>\n";
        }
    }
    os << "</g>\n";

    // Gamma rows run top-down in descending order, so map through the ascending copy.
    std::vector<double> gammas_up(pd.gammas.rbegin(), pd.gammas.rend());
    const double x0 = left + cell / 2.0;
    const double y_bottom = top + plot_h - cell / 2.0;
    const auto px = [&](double a) { return interpolate(pd.alphas, a, x0, cell); };
    const auto py = [&](double g) { return y_bottom - (interpolate(gammas_up, g, 0.0, cell)); };

    const double amin = pd.alphas.front(), amax = pd.alphas.back();
    const double gmin = gammas_up.front(), gmax = gammas_up.back();
    const double lo = std::max(amin, 1.0 - gmax);
    const double hi = std::min(amax, 1.0 - gmin);
    if (lo <= hi) {
        os << "<line x1=\"" << fixed(px(lo)) << "\" y1=\"" << fixed(py(1.0 - lo)) << "\" x2=\"" << fixed(px(hi))
           << "\" y2=\"" << fixed(py(1.0 - hi)) << "\" stroke=\"#d62728\" stroke-width=\"2\" "
           << "stroke-dasharray=\"6,4\"/>\n";
    }

    os << "<g id=\"boundary-glyphs\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\">\n";
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            if (pd.labels[r][c].kind != RegimeKind::Boundary) continue;
            const double cx = left + cell * (static_cast<double>(c) + 0.5);
            const double cy = top + cell * (static_cast<double>(r) + 0.5);
            os << "<circle cx=\"" << fixed(cx) << "\" cy=\"" << fixed(cy)
               << "\" r=\"9\" fill=\"#ffffff\" stroke=\"#d62728\"/>"
               << "<text x=\"" << fixed(cx) << "\" y=\"" << fixed(cy + 5.0) << "\" fill=\"#d62728\">B</text>\n";
        }
    }
    os << "</g>\n";

    os << "<g id=\"axes\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#000000\">\n";
    os << "<path d=\"M" << fixed(left) << "," << fixed(top + plot_h) << " H" << fixed(left + plot_w) << " M"
       << fixed(left) << "," << fixed(top) << " V" << fixed(top + plot_h) << "\" stroke=\"#000000\" fill=\"none\"/>\n";
    for (std::size_t c = 0; c < cols; ++c)
        os << "<text x=\"" << fixed(left + cell * (static_cast<double>(c) + 0.5)) << "\" y=\""
           << fixed(top + plot_h + 15.0) << "\" text-anchor=\"middle\">" << label_number(pd.alphas[c]) << "</text>\n";
    for (std::size_t r = 0; r < rows; ++r)
        os << "<text x=\"" << fixed(left - 6.0) << "\" y=\"" << fixed(top + cell * (static_cast<double>(r) + 0.5) + 4.0)
           << "\" text-anchor=\"end\">" << label_number(pd.gammas[r]) << "</text>\n";
    os << "<text x=\"" << fixed(left + plot_w / 2.0) << "\" y=\"" << fixed(top + plot_h + 40.0)
       << "\" text-anchor=\"middle\" font-size=\"14\">spike index alpha</text>\n";
    os << "<text x=\"18\" y=\"" << fixed(top + plot_h / 2.0) << "\" text-anchor=\"middle\" font-size=\"14\" "
       << "transform=\"rotate(-90 18 " << fixed(top + plot_h / 2.0) << ")\">sample index gamma</text>\n";
    os << "</g>\n";

    const double lh = std::min(plot_h, 200.0);
    os << "<g id=\"legend\" font-family=\"sans-serif\" font-size=\"11\">\n"
       << "<polygon points=\"" << fixed(legend_x) << "," << fixed(top) << " " << fixed(legend_x + 16.0) << ","
       << fixed(top) << " " << fixed(legend_x + 16.0) << "," << fixed(top + lh) << " " << fixed(legend_x) << ","
       << fixed(top + lh) << "\" fill=\"url(#shade)\" stroke=\"#000000\" stroke-width=\"0.5\"/>\n"
       << "<text x=\"" << fixed(legend_x + 20.0) << "\" y=\"" << fixed(top + 8.0) << "\">1</text>\n"
       << "<text x=\"" << fixed(legend_x + 20.0) << "\" y=\"" << fixed(top + lh) << "\">0</text>\n"
       << "</g>\n</svg>\n";
    return os.str();
}

void emit_phase_svg(const PhaseDiagram& diagram, const std::filesystem::path& path) {
    write_file(path, phase_svg(diagram));
}

std::string phase_csv(const PhaseDiagram& pd) {
    std::string out = "gamma,alpha,mean_inner_sq,label\n";
    for (std::size_t r = 0; r < pd.gammas.size(); ++r)
        for (std::size_t c = 0; c < pd.alphas.size(); ++c)
            out += format_double(pd.gammas[r]) + "," + format_double(pd.alphas[c]) + "," +
                   format_double(pd.mean_inner_sq[r][c]) + "," + to_string(pd.labels[r][c]) + "\n";
    return out;
}

}  // namespace spikepca
