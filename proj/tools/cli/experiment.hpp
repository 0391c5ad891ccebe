#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "lqas/circuit.hpp"
#include "lqas/datasets.hpp"
#include "lqas/search.hpp"

namespace lqas::cli {

enum class DatasetKind { Quadratic1d, Quadratic2d, Table };

struct DatasetSpec {
    DatasetKind kind = DatasetKind::Quadratic1d;
    std::optional<std::size_t> n;
    double noise = 0.5;
    NoiseScale noise_scale = NoiseScale::StdDev;
    /// Feature columns of the 1D set; defaults to the ansatz width.
    std::optional<std::size_t> replicas;
    std::filesystem::path path;
    std::string target;
};

enum class ScaleFit { Full, Train };

struct SplitSpec {
    double train_fraction = 0.8;
    ScaleFit scale_fit = ScaleFit::Full;
};

struct AnsatzSpec {
    bool from_file = false;
    std::filesystem::path path;
    /// HEA width; defaults to the dataset's feature count.
    std::optional<std::size_t> n_qubits;
    std::size_t k = 1;
    std::size_t m = 1;
};

struct ExperimentConfig {
    DatasetSpec dataset;
    SplitSpec split;
    AnsatzSpec ansatz;
    SearchConfig search;
    std::uint64_t seed = 0;
    std::optional<std::filesystem::path> out_dir;
};

/// Schema-checked parse; unknown keys and out-of-range values raise ConfigError.
ExperimentConfig parse_experiment_config(const nlohmann::json& doc);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

/// Fully resolved config as JSON (output directory excluded).
nlohmann::json to_json(const ExperimentConfig& cfg);

/// Parses "quad1d,n=500,noise=0.5" or "table,path=data.csv,target=y".
DatasetSpec parse_dataset_spec(const std::string& spec);
DatasetSpec dataset_spec_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const DatasetSpec& spec);

/// Parses "hea,n=4,k=1,m=1"; anything else is treated as an ansatz file path.
AnsatzSpec parse_ansatz_spec(const std::string& spec);

/// Raw (unscaled) dataset. `default_width` fills an unset replica count.
Dataset make_dataset(const DatasetSpec& spec, std::uint64_t seed, std::size_t default_width);

Ansatz make_ansatz(const AnsatzSpec& spec, std::size_t n_features);

/// Width the ansatz spec implies before any data is loaded, if it is known.
std::optional<std::size_t> ansatz_width(const AnsatzSpec& spec);

struct PreparedData {
    Dataset scaled;
    ScalingRecord scaling;
    Split split;
    Samples train;
    Samples validation;
};

/// Splits with `split_seed` and scales per the spec.
PreparedData prepare(const Dataset& raw, const SplitSpec& spec, std::uint64_t split_seed);

/// Seeds of the independent random streams derived from the master seed.
std::uint64_t data_seed(std::uint64_t master);
std::uint64_t split_seed(std::uint64_t master);

}  // namespace lqas::cli
