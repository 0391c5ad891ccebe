#include "lqas/datasets.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "lqas/error.hpp"
#include "lqas/format.hpp"

namespace lqas {

namespace {

double noise_sigma(double noise, NoiseScale scale) {
    if (!(noise >= 0.0) || !std::isfinite(noise)) {
        throw ConfigError("noise must be a finite non-negative number");
    }
    return scale == NoiseScale::Variance ? std::sqrt(noise) : noise;
}

// Uniform draw on the open interval (lo, hi).
double open_uniform(std::mt19937_64& rng, double lo, double hi) {
    std::uniform_real_distribution<double> dist(lo, hi);
    double v = dist(rng);
    while (v <= lo || v >= hi) {
        v = dist(rng);
    }
    return v;
}

double gaussian(std::mt19937_64& rng, double sigma) {
    if (sigma == 0.0) {
        return 0.0;
    }
    std::normal_distribution<double> dist(0.0, sigma);
    return dist(rng);
}

}  // namespace

double ScalingRecord::scale_target(double y) const noexcept {
    return 2.0 * (y - target.min) / (target.max - target.min) - 1.0;
}

double ScalingRecord::unscale_target(double y_scaled) const noexcept {
    return target.min + (y_scaled + 1.0) * (target.max - target.min) / 2.0;
}

Dataset gen_quadratic_1d(const Quadratic1dOptions& opts, std::uint64_t seed) {
    if (opts.n < 1) {
        throw ConfigError("quadratic_1d needs n >= 1");
    }
    if (opts.replicas < 1) {
        throw ConfigError("quadratic_1d needs at least one feature column");
    }
    const double sigma = noise_sigma(opts.noise, opts.noise_scale);
    std::mt19937_64 rng(seed);

    Dataset ds;
    ds.X = Matrix(opts.n, opts.replicas);
    ds.y.resize(opts.n);
    for (std::size_t i = 0; i < opts.n; ++i) {
        const double x = open_uniform(rng, -2.0, 2.0);
        for (std::size_t c = 0; c < opts.replicas; ++c) {
            ds.X(i, c) = x;
        }
        ds.y[i] = x * x + gaussian(rng, sigma);
    }
    for (std::size_t c = 0; c < opts.replicas; ++c) {
        ds.feature_names.push_back("x" + std::to_string(c));
    }
    return ds;
}

Dataset gen_quadratic_2d(const Quadratic2dOptions& opts, std::uint64_t seed) {
    if (opts.n < 1) {
        throw ConfigError("quadratic_2d needs n >= 1");
    }
    const double sigma = noise_sigma(opts.noise, opts.noise_scale);
    std::mt19937_64 rng(seed);

    Dataset ds;
    ds.X = Matrix(opts.n, 2);
    ds.y.resize(opts.n);
    for (std::size_t i = 0; i < opts.n; ++i) {
        const double a = open_uniform(rng, -1.0, 1.0);
        const double b = open_uniform(rng, -1.0, 1.0);
        ds.X(i, 0) = a;
        ds.X(i, 1) = b;
        ds.y[i] = a * a + b * b + gaussian(rng, sigma);
    }
    ds.feature_names = {"x", "y"};
    ds.target_name = "z";
    return ds;
}

namespace {

// Splits RFC 4180 text into records of raw fields. Quoted fields may span
// lines and escape quotes by doubling them.
std::vector<std::vector<std::string>> parse_csv_records(const std::string& text) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> record;
    std::string field;
    bool in_quotes = false;
    bool field_started = false;
    std::size_t line = 1;

    auto end_field = [&] {
        record.push_back(std::move(field));
        field.clear();
        field_started = false;
    };
    auto end_record = [&] {
        end_field();
        const bool blank = record.size() == 1 && record[0].empty();
        if (!blank) {
            records.push_back(std::move(record));
        }
        record.clear();
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        const char ch = text[i];
        if (in_quotes) {
            if (ch == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                if (ch == '\n') {
                    ++line;
                }
                field.push_back(ch);
            }
            continue;
        }
        switch (ch) {
        case '"':
            if (field_started) {
                throw ParseError("line " + std::to_string(line) + ": stray quote inside field");
            }
            in_quotes = true;
            field_started = true;
            break;
        case ',':
            end_field();
            break;
        case '\r':
            break;
        case '\n':
            end_record();
            ++line;
            break;
        default:
            field.push_back(ch);
            field_started = true;
            break;
        }
    }
    if (in_quotes) {
        throw ParseError("unterminated quoted field at end of input");
    }
    if (field_started || !field.empty() || !record.empty()) {
        end_record();
    }
    return records;
}

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t");
    return std::string(s.substr(first, last - first + 1));
}

double parse_number(const std::string& raw, std::size_t row, std::size_t col,
                    const std::string& column_name) {
    const std::string s = trim(raw);
    double value = 0.0;
    const char* begin = s.data();
    const char* end = s.data() + s.size();
    if (!s.empty() && *begin == '+') {
        ++begin;
    }
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (s.empty() || ec != std::errc() || ptr != end || !std::isfinite(value)) {
        throw ParseError("row " + std::to_string(row) + ", column " + std::to_string(col + 1) +
                         " ('" + column_name + "'): not a finite number: '" + raw + "'");
    }
    return value;
}

}  // namespace

Dataset parse_table(const std::string& text, const std::string& target_column) {
    const auto records = parse_csv_records(text);
    if (records.empty()) {
        throw ParseError("table is empty; a header row is required");
    }
    std::vector<std::string> header;
    for (const auto& h : records[0]) {
        header.push_back(trim(h));
    }
    const auto target_it = std::find(header.begin(), header.end(), target_column);
    if (target_it == header.end()) {
        throw ParseError("header has no target column '" + target_column + "'");
    }
    const auto target_idx = static_cast<std::size_t>(target_it - header.begin());

    Dataset ds;
    ds.target_name = target_column;
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (c != target_idx) {
            ds.feature_names.push_back(header[c]);
        }
    }
    ds.X = Matrix(0, ds.feature_names.size());

    std::vector<double> row_values(ds.feature_names.size());
    for (std::size_t r = 1; r < records.size(); ++r) {
        const auto& rec = records[r];
        if (rec.size() != header.size()) {
            throw ParseError("row " + std::to_string(r + 1) + ": expected " +
                             std::to_string(header.size()) + " fields, found " +
                             std::to_string(rec.size()));
        }
        std::size_t f = 0;
        for (std::size_t c = 0; c < rec.size(); ++c) {
            const double v = parse_number(rec[c], r + 1, c, header[c]);
            if (c == target_idx) {
                ds.y.push_back(v);
            } else {
                row_values[f++] = v;
            }
        }
        ds.X.append_row(row_values);
    }
    return ds;
}

Dataset load_table(const std::filesystem::path& path, const std::string& target_column) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open table '" + path.string() + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_table(buf.str(), target_column);
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') {
            out += "\"\"";
        } else {
            out += ch;
        }
    }
    out += '"';
    return out;
}

}  // namespace

std::string format_table(const Dataset& ds) {
    std::string out;
    for (std::size_t c = 0; c < ds.n_features(); ++c) {
        const std::string name =
            c < ds.feature_names.size() ? ds.feature_names[c] : "x" + std::to_string(c);
        out += csv_field(name);
        out += ',';
    }
    out += csv_field(ds.target_name);
    out += '\n';
    for (std::size_t r = 0; r < ds.size(); ++r) {
        for (std::size_t c = 0; c < ds.n_features(); ++c) {
            out += format_double(ds.X(r, c));
            out += ',';
        }
        out += format_double(ds.y[r]);
        out += '\n';
    }
    return out;
}

void save_table(const std::filesystem::path& path, const Dataset& ds) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot write table '" + path.string() + "'");
    }
    out << format_table(ds);
    if (!out) {
        throw IoError("write failed for '" + path.string() + "'");
    }
}

ScalingRecord fit_minmax(const Dataset& ds, std::span<const std::size_t> rows) {
    std::vector<std::size_t> all;
    if (rows.empty()) {
        all.resize(ds.size());
        std::iota(all.begin(), all.end(), std::size_t{0});
        rows = all;
    }
    if (rows.empty()) {
        throw ScalingError("cannot fit scaling on an empty dataset");
    }

    auto fit_column = [&](auto&& value_at, std::string name) {
        ColumnRange range{std::move(name), value_at(rows[0]), value_at(rows[0])};
        for (std::size_t r : rows) {
            range.min = std::min(range.min, value_at(r));
            range.max = std::max(range.max, value_at(r));
        }
        if (!(range.max > range.min)) {
            throw ScalingError("column '" + range.name + "' is constant; cannot scale");
        }
        return range;
    };

    ScalingRecord record;
    for (std::size_t c = 0; c < ds.n_features(); ++c) {
        const std::string name =
            c < ds.feature_names.size() ? ds.feature_names[c] : "x" + std::to_string(c);
        record.features.push_back(fit_column([&](std::size_t r) { return ds.X(r, c); }, name));
    }
    record.target = fit_column([&](std::size_t r) { return ds.y[r]; }, ds.target_name);
    return record;
}

Dataset apply_scaling(const Dataset& ds, const ScalingRecord& record) {
    if (record.features.size() != ds.n_features()) {
        throw DimensionError("scaling record has " + std::to_string(record.features.size()) +
                             " feature columns, dataset has " + std::to_string(ds.n_features()));
    }
    Dataset out = ds;
    for (std::size_t r = 0; r < ds.size(); ++r) {
        for (std::size_t c = 0; c < ds.n_features(); ++c) {
            const ColumnRange& cr = record.features[c];
            out.X(r, c) = 2.0 * (ds.X(r, c) - cr.min) / (cr.max - cr.min) - 1.0;
        }
        out.y[r] = record.scale_target(ds.y[r]);
    }
    out.scaling = record;
    return out;
}

Dataset fit_minmax_and_scale(const Dataset& ds) { return apply_scaling(ds, fit_minmax(ds)); }

nlohmann::json scaling_to_json(const ScalingRecord& record) {
    auto column = [](const ColumnRange& c) {
        return nlohmann::json{{"name", c.name}, {"min", c.min}, {"max", c.max}};
    };
    nlohmann::json features = nlohmann::json::array();
    for (const auto& c : record.features) {
        features.push_back(column(c));
    }
    return nlohmann::json{{"features", std::move(features)}, {"target", column(record.target)}};
}

ScalingRecord scaling_from_json(const nlohmann::json& doc) {
    auto column = [](const nlohmann::json& j) {
        ColumnRange c;
        c.name = j.value("name", std::string{});
        c.min = j.at("min").get<double>();
        c.max = j.at("max").get<double>();
        if (!(c.max > c.min)) {
            throw ScalingError("column '" + c.name + "' has max <= min");
        }
        return c;
    };
    try {
        ScalingRecord record;
        for (const auto& f : doc.at("features")) {
            record.features.push_back(column(f));
        }
        record.target = column(doc.at("target"));
        return record;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed scaling record: ") + e.what());
    }
}

Split split(std::size_t n_rows, double train_fraction, std::uint64_t seed) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
        throw ConfigError("train_fraction must lie strictly between 0 and 1");
    }
    if (n_rows < 2) {
        throw ConfigError("splitting needs at least two rows");
    }
    std::vector<std::size_t> perm(n_rows);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::mt19937_64 rng(seed);
    std::shuffle(perm.begin(), perm.end(), rng);

    const auto n_train =
        static_cast<std::size_t>(std::floor(train_fraction * static_cast<double>(n_rows)));
    Split s;
    s.train.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n_train));
    s.validation.assign(perm.begin() + static_cast<std::ptrdiff_t>(n_train), perm.end());
    return s;
}

Samples take_rows(const Dataset& ds, std::span<const std::size_t> rows) {
    Samples out;
    out.X = ds.X.select_rows(rows);
    out.y.reserve(rows.size());
    for (std::size_t r : rows) {
        out.y.push_back(ds.y[r]);
    }
    return out;
}

}  // namespace lqas
