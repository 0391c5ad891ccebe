#include "experiment.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "lqas/ansatz_io.hpp"
#include "lqas/error.hpp"

namespace lqas::cli {

namespace {

using json = nlohmann::json;

void require_object(const json& j, const std::string& where) {
    if (!j.is_object()) {
        throw ConfigError("'" + where + "' must be an object");
    }
}

void reject_unknown(const json& j, const std::string& where, std::initializer_list<const char*> known) {
    const std::set<std::string> allowed(known.begin(), known.end());
    for (const auto& [key, value] : j.items()) {
        if (!allowed.count(key)) {
            throw ConfigError("unknown key '" + (where.empty() ? key : where + "." + key) + "'");
        }
    }
}

template <class T>
T field(const json& j, const char* key, T fallback, const std::string& where) {
    if (!j.contains(key)) {
        return fallback;
    }
    const json& v = j.at(key);
    const std::string name = where + "." + key;
    if constexpr (std::is_same_v<T, bool>) {
        if (!v.is_boolean()) {
            throw ConfigError("'" + name + "' must be a boolean");
        }
    } else if constexpr (std::is_integral_v<T>) {
        if (!v.is_number_integer()) {
            throw ConfigError("'" + name + "' must be an integer");
        }
        if constexpr (std::is_unsigned_v<T>) {
            if (v.is_number_integer() && !v.is_number_unsigned()) {
                throw ConfigError("'" + name + "' must be non-negative");
            }
        }
    } else if constexpr (std::is_floating_point_v<T>) {
        if (!v.is_number()) {
            throw ConfigError("'" + name + "' must be a number");
        }
    } else {
        if (!v.is_string()) {
            throw ConfigError("'" + name + "' must be a string");
        }
    }
    return v.get<T>();
}

std::size_t positive(std::size_t v, const std::string& name) {
    if (v < 1) {
        throw ConfigError("'" + name + "' must be >= 1");
    }
    return v;
}

DatasetKind parse_kind(const std::string& name) {
    if (name == "quadratic_1d" || name == "quad1d") {
        return DatasetKind::Quadratic1d;
    }
    if (name == "quadratic_2d" || name == "quad2d") {
        return DatasetKind::Quadratic2d;
    }
    if (name == "table") {
        return DatasetKind::Table;
    }
    throw ConfigError("unknown dataset kind '" + name + "'");
}

std::string kind_name(DatasetKind kind) {
    switch (kind) {
    case DatasetKind::Quadratic1d: return "quadratic_1d";
    case DatasetKind::Quadratic2d: return "quadratic_2d";
    case DatasetKind::Table: return "table";
    }
    return "?";
}

// Splits "head,key=value,key=value" into the head and a JSON object; values
// that read as numbers become numbers.
std::pair<std::string, json> parse_mini_spec(const std::string& spec) {
    std::vector<std::string> parts;
    std::stringstream in(spec);
    std::string part;
    while (std::getline(in, part, ',')) {
        parts.push_back(part);
    }
    if (parts.empty() || parts[0].empty()) {
        throw ConfigError("empty specification");
    }
    json fields = json::object();
    for (std::size_t i = 1; i < parts.size(); ++i) {
        const auto eq = parts[i].find('=');
        if (eq == std::string::npos || eq == 0) {
            throw ConfigError("expected key=value in '" + parts[i] + "'");
        }
        const std::string key = parts[i].substr(0, eq);
        const std::string value = parts[i].substr(eq + 1);
        json parsed = json::parse(value, nullptr, false);
        if (!parsed.is_discarded() && (parsed.is_number() || parsed.is_boolean())) {
            fields[key] = parsed;
        } else {
            fields[key] = value;
        }
    }
    return {parts[0], fields};
}

}  // namespace

DatasetSpec dataset_spec_from_json(const json& j) {
    require_object(j, "dataset");
    DatasetSpec s;
    s.kind = parse_kind(field<std::string>(j, "kind", "quadratic_1d", "dataset"));
    if (s.kind == DatasetKind::Table) {
        reject_unknown(j, "dataset", {"kind", "path", "target"});
        s.path = field<std::string>(j, "path", "", "dataset");
        s.target = field<std::string>(j, "target", "", "dataset");
        if (s.path.empty() || s.target.empty()) {
            throw ConfigError("table datasets need 'path' and 'target'");
        }
        return s;
    }
    if (s.kind == DatasetKind::Quadratic1d) {
        reject_unknown(j, "dataset", {"kind", "n", "noise", "noise_sd", "noise_scale", "replicas"});
        if (j.contains("replicas")) {
            s.replicas = positive(field<std::size_t>(j, "replicas", 1, "dataset"), "dataset.replicas");
        }
    } else {
        reject_unknown(j, "dataset", {"kind", "n", "noise", "noise_sd", "noise_scale"});
    }
    if (j.contains("n")) {
        s.n = positive(field<std::size_t>(j, "n", 1, "dataset"), "dataset.n");
    }
    if (j.contains("noise") && j.contains("noise_sd")) {
        throw ConfigError("give either 'dataset.noise' or 'dataset.noise_sd', not both");
    }
    s.noise = field<double>(j, "noise", 0.5, "dataset");
    if (j.contains("noise_sd")) {
        s.noise = field<double>(j, "noise_sd", 0.5, "dataset");
        s.noise_scale = NoiseScale::StdDev;
    }
    const std::string scale = field<std::string>(j, "noise_scale", "sd", "dataset");
    if (scale == "variance") {
        if (j.contains("noise_sd")) {
            throw ConfigError("'dataset.noise_sd' contradicts noise_scale 'variance'");
        }
        s.noise_scale = NoiseScale::Variance;
    } else if (scale != "sd") {
        throw ConfigError("'dataset.noise_scale' must be 'sd' or 'variance'");
    }
    if (!(s.noise >= 0.0)) {
        throw ConfigError("'dataset.noise' must be non-negative");
    }
    return s;
}

json to_json(const DatasetSpec& s) {
    json j{{"kind", kind_name(s.kind)}};
    if (s.kind == DatasetKind::Table) {
        j["path"] = s.path.string();
        j["target"] = s.target;
        return j;
    }
    j["n"] = s.n.value_or(s.kind == DatasetKind::Quadratic1d ? 500 : 200);
    j["noise"] = s.noise;
    j["noise_scale"] = s.noise_scale == NoiseScale::Variance ? "variance" : "sd";
    if (s.kind == DatasetKind::Quadratic1d && s.replicas) {
        j["replicas"] = *s.replicas;
    }
    return j;
}

DatasetSpec parse_dataset_spec(const std::string& spec) {
    auto [head, fields] = parse_mini_spec(spec);
    fields["kind"] = head;
    if (fields.contains("path") && !fields["path"].is_string()) {
        fields["path"] = fields["path"].dump();
    }
    if (fields.contains("target") && !fields["target"].is_string()) {
        fields["target"] = fields["target"].dump();
    }
    return dataset_spec_from_json(fields);
}

AnsatzSpec parse_ansatz_spec(const std::string& spec) {
    if (spec.rfind("hea", 0) == 0 && (spec.size() == 3 || spec[3] == ',')) {
        auto [head, fields] = parse_mini_spec(spec);
        reject_unknown(fields, "ansatz", {"n", "n_qubits", "k", "m"});
        AnsatzSpec a;
        if (fields.contains("n")) {
            a.n_qubits = positive(field<std::size_t>(fields, "n", 1, "ansatz"), "ansatz.n");
        }
        if (fields.contains("n_qubits")) {
            a.n_qubits = positive(field<std::size_t>(fields, "n_qubits", 1, "ansatz"), "ansatz.n_qubits");
        }
        a.k = positive(field<std::size_t>(fields, "k", 1, "ansatz"), "ansatz.k");
        a.m = positive(field<std::size_t>(fields, "m", 1, "ansatz"), "ansatz.m");
        return a;
    }
    AnsatzSpec a;
    a.from_file = true;
    a.path = spec;
    return a;
}

ExperimentConfig parse_experiment_config(const json& doc) {
    try {
        require_object(doc, "config");
        reject_unknown(doc, "", {"dataset", "split", "ansatz", "search", "train", "seed", "out_dir"});
        ExperimentConfig cfg;

        cfg.dataset = dataset_spec_from_json(doc.value("dataset", json::object()));

        const json split = doc.value("split", json::object());
        require_object(split, "split");
        reject_unknown(split, "split", {"train_fraction", "scale_fit"});
        cfg.split.train_fraction = field<double>(split, "train_fraction", 0.8, "split");
        if (!(cfg.split.train_fraction > 0.0 && cfg.split.train_fraction < 1.0)) {
            throw ConfigError("'split.train_fraction' must lie strictly between 0 and 1");
        }
        const std::string fit = field<std::string>(split, "scale_fit", "full", "split");
        if (fit == "train") {
            cfg.split.scale_fit = ScaleFit::Train;
        } else if (fit != "full") {
            throw ConfigError("'split.scale_fit' must be 'full' or 'train'");
        }

        const json ansatz = doc.value("ansatz", json{{"kind", "hea"}});
        require_object(ansatz, "ansatz");
        const std::string akind = field<std::string>(ansatz, "kind", "hea", "ansatz");
        if (akind == "hea") {
            reject_unknown(ansatz, "ansatz", {"kind", "n_qubits", "k", "m"});
            if (ansatz.contains("n_qubits")) {
                cfg.ansatz.n_qubits =
                    positive(field<std::size_t>(ansatz, "n_qubits", 1, "ansatz"), "ansatz.n_qubits");
            }
            cfg.ansatz.k = positive(field<std::size_t>(ansatz, "k", 1, "ansatz"), "ansatz.k");
            cfg.ansatz.m = positive(field<std::size_t>(ansatz, "m", 1, "ansatz"), "ansatz.m");
        } else if (akind == "file") {
            reject_unknown(ansatz, "ansatz", {"kind", "path"});
            cfg.ansatz.from_file = true;
            cfg.ansatz.path = field<std::string>(ansatz, "path", "", "ansatz");
            if (cfg.ansatz.path.empty()) {
                throw ConfigError("'ansatz.path' is required for kind 'file'");
            }
        } else {
            throw ConfigError("'ansatz.kind' must be 'hea' or 'file'");
        }

        const json search = doc.value("search", json::object());
        require_object(search, "search");
        reject_unknown(search, "search",
                       {"iterations", "samples_total", "top_k", "p_add", "p_remove", "p_switch",
                        "p_move", "elitism"});
        SearchConfig& s = cfg.search;
        s.iterations = field<int>(search, "iterations", 3, "search");
        s.samples_total = field<int>(search, "samples_total", 100, "search");
        s.top_k = field<int>(search, "top_k", 10, "search");
        s.probs.p_add = field<double>(search, "p_add", 0.1, "search");
        s.probs.p_remove = field<double>(search, "p_remove", 0.1, "search");
        s.probs.p_switch = field<double>(search, "p_switch", 0.1, "search");
        s.probs.p_move = field<double>(search, "p_move", 0.1, "search");
        s.elitism = field<bool>(search, "elitism", false, "search");

        const json train = doc.value("train", json::object());
        require_object(train, "train");
        reject_unknown(train, "train",
                       {"epochs", "batch_size", "learning_rate", "adam_beta1", "adam_beta2", "adam_eps"});
        TrainConfig& t = s.train;
        t.epochs = field<int>(train, "epochs", 200, "train");
        t.batch_size = field<int>(train, "batch_size", 25, "train");
        t.learning_rate = field<double>(train, "learning_rate", 1e-2, "train");
        t.adam_beta1 = field<double>(train, "adam_beta1", 0.9, "train");
        t.adam_beta2 = field<double>(train, "adam_beta2", 0.999, "train");
        t.adam_eps = field<double>(train, "adam_eps", 1e-8, "train");

        cfg.seed = field<std::uint64_t>(doc, "seed", 0, "config");
        if (doc.contains("out_dir")) {
            cfg.out_dir = field<std::string>(doc, "out_dir", "", "config");
        }
        s.master_seed = cfg.seed;
        t.shuffle_seed = cfg.seed;
        s.check();
        return cfg;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("invalid config: ") + e.what());
    }
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open config '" + path.string() + "'");
    }
    json doc = json::parse(in, nullptr, false, true);
    if (doc.is_discarded()) {
        throw ConfigError("config '" + path.string() + "' is not valid JSON");
    }
    return parse_experiment_config(doc);
}

json to_json(const ExperimentConfig& cfg) {
    json ansatz;
    if (cfg.ansatz.from_file) {
        ansatz = {{"kind", "file"}, {"path", cfg.ansatz.path.string()}};
    } else {
        ansatz = {{"kind", "hea"}, {"k", cfg.ansatz.k}, {"m", cfg.ansatz.m}};
        if (cfg.ansatz.n_qubits) {
            ansatz["n_qubits"] = *cfg.ansatz.n_qubits;
        }
    }
    const SearchConfig& s = cfg.search;
    const TrainConfig& t = s.train;
    return {
        {"dataset", to_json(cfg.dataset)},
        {"split",
         {{"train_fraction", cfg.split.train_fraction},
          {"scale_fit", cfg.split.scale_fit == ScaleFit::Train ? "train" : "full"}}},
        {"ansatz", ansatz},
        {"search",
         {{"iterations", s.iterations},
          {"samples_total", s.samples_total},
          {"top_k", s.top_k},
          {"p_add", s.probs.p_add},
          {"p_remove", s.probs.p_remove},
          {"p_switch", s.probs.p_switch},
          {"p_move", s.probs.p_move},
          {"elitism", s.elitism}}},
        {"train",
         {{"epochs", t.epochs},
          {"batch_size", t.batch_size},
          {"learning_rate", t.learning_rate},
          {"adam_beta1", t.adam_beta1},
          {"adam_beta2", t.adam_beta2},
          {"adam_eps", t.adam_eps}}},
        {"seed", cfg.seed},
    };
}

std::optional<std::size_t> ansatz_width(const AnsatzSpec& spec) {
    if (spec.from_file) {
        return std::nullopt;
    }
    return spec.n_qubits;
}

Dataset make_dataset(const DatasetSpec& spec, std::uint64_t seed, std::size_t default_width) {
    switch (spec.kind) {
    case DatasetKind::Quadratic1d: {
        Quadratic1dOptions o;
        o.n = spec.n.value_or(500);
        o.noise = spec.noise;
        o.noise_scale = spec.noise_scale;
        o.replicas = spec.replicas.value_or(default_width);
        return gen_quadratic_1d(o, seed);
    }
    case DatasetKind::Quadratic2d: {
        Quadratic2dOptions o;
        o.n = spec.n.value_or(200);
        o.noise = spec.noise;
        o.noise_scale = spec.noise_scale;
        return gen_quadratic_2d(o, seed);
    }
    case DatasetKind::Table:
        return load_table(spec.path, spec.target);
    }
    throw ConfigError("unknown dataset kind");
}

Ansatz make_ansatz(const AnsatzSpec& spec, std::size_t n_features) {
    if (spec.from_file) {
        Ansatz a = load_ansatz(spec.path);
        if (a.n_features > n_features) {
            throw ConfigError("ansatz reads " + std::to_string(a.n_features) +
                              " features but the dataset has " + std::to_string(n_features));
        }
        a.n_features = n_features;
        if (auto v = validate(a); !v.empty()) {
            throw ConfigError("ansatz file is invalid: " + v.front().message);
        }
        return a;
    }
    const std::size_t n = spec.n_qubits.value_or(n_features);
    if (n != n_features) {
        throw ConfigError("HEA on " + std::to_string(n) + " qubits needs " + std::to_string(n) +
                          " features, dataset has " + std::to_string(n_features));
    }
    return build_hea({n, spec.k, spec.m});
}

PreparedData prepare(const Dataset& raw, const SplitSpec& spec, std::uint64_t seed) {
    PreparedData out;
    out.split = split(raw.size(), spec.train_fraction, seed);
    out.scaling = spec.scale_fit == ScaleFit::Train ? fit_minmax(raw, out.split.train) : fit_minmax(raw);
    out.scaled = apply_scaling(raw, out.scaling);
    out.train = take_rows(out.scaled, out.split.train);
    out.validation = take_rows(out.scaled, out.split.validation);
    return out;
}

std::uint64_t data_seed(std::uint64_t master) { return master; }
std::uint64_t split_seed(std::uint64_t master) { return master + 1; }

}  // namespace lqas::cli
