#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lqas/matrix.hpp"
#include "lqas/training.hpp"

namespace lqas {

struct ColumnRange {
    std::string name;
    double min = 0.0;
    double max = 0.0;
};

/// Per-column min/max used to map features and target onto [-1, 1].
struct ScalingRecord {
    std::vector<ColumnRange> features;
    ColumnRange target;

    double scale_target(double y) const noexcept;
    double unscale_target(double y_scaled) const noexcept;
};

struct Dataset {
    Matrix X;
    std::vector<double> y;
    std::vector<std::string> feature_names;
    std::string target_name = "y";
    std::optional<ScalingRecord> scaling;

    std::size_t size() const noexcept { return y.size(); }
    std::size_t n_features() const noexcept { return X.cols(); }
};

/// How the noise parameter of the synthetic generators is read.
enum class NoiseScale { StdDev, Variance };

struct Quadratic1dOptions {
    std::size_t n = 500;
    double noise = 0.5;
    NoiseScale noise_scale = NoiseScale::StdDev;
    /// The scalar input is replicated across this many feature columns.
    std::size_t replicas = 4;
};

struct Quadratic2dOptions {
    std::size_t n = 200;
    double noise = 0.5;
    NoiseScale noise_scale = NoiseScale::StdDev;
};

/// y = x^2 + eps with x ~ U(-2, 2), eps ~ N(0, sigma).
Dataset gen_quadratic_1d(const Quadratic1dOptions& opts, std::uint64_t seed);

/// z = x^2 + y^2 + eps with (x, y) ~ U(-1, 1)^2.
Dataset gen_quadratic_2d(const Quadratic2dOptions& opts, std::uint64_t seed);

/// Reads a numeric CSV with a header row. Every column except `target_column`
/// becomes a feature, in file order. Throws ParseError (with row/column) or
/// IoError.
Dataset load_table(const std::filesystem::path& path, const std::string& target_column);
Dataset parse_table(const std::string& text, const std::string& target_column);

/// Writes features then target, with a header row. Values use the shortest
/// representation that reads back exactly.
void save_table(const std::filesystem::path& path, const Dataset& ds);
std::string format_table(const Dataset& ds);

/// Min/max of every column over the selected rows (all rows when empty).
/// Throws ScalingError naming any constant column.
ScalingRecord fit_minmax(const Dataset& ds, std::span<const std::size_t> rows = {});

/// Maps each column affinely so the record's [min, max] lands on [-1, 1].
Dataset apply_scaling(const Dataset& ds, const ScalingRecord& record);

/// fit_minmax over all rows followed by apply_scaling.
Dataset fit_minmax_and_scale(const Dataset& ds);

nlohmann::json scaling_to_json(const ScalingRecord& record);
ScalingRecord scaling_from_json(const nlohmann::json& doc);

struct Split {
    std::vector<std::size_t> train;
    std::vector<std::size_t> validation;
};

/// Uniform random permutation of the row indices; the first
/// floor(train_fraction * n) go to training.
Split split(std::size_t n_rows, double train_fraction, std::uint64_t seed);

Samples take_rows(const Dataset& ds, std::span<const std::size_t> rows);

}  // namespace lqas
