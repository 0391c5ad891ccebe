#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "lqas/ansatz_io.hpp"
#include "lqas/error.hpp"
#include "lqas/format.hpp"
#include "lqas/report.hpp"

namespace lqas::cli {

namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

constexpr std::size_t kDefaultWidth = 4;

template <class F>
int guarded(std::ostream& err, F&& body) {
    try {
        return body();
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kIoError;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return kIoError;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kInternalError;
    }
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot write '" + path.string() + "'");
    }
    out << text;
    if (!out.flush()) {
        throw IoError("write failed for '" + path.string() + "'");
    }
}

std::string text_number(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    return format_double(v);
}

// Width used for a replicated 1D dataset when the config does not fix it.
std::size_t default_width(const AnsatzSpec& spec) {
    if (auto w = ansatz_width(spec)) {
        return *w;
    }
    if (spec.from_file) {
        return load_ansatz(spec.path).n_qubits;
    }
    return kDefaultWidth;
}

std::string summary_table(const SearchResult& result) {
    std::vector<std::vector<std::string>> rows;
    rows.push_back({"row", "candidate", "train_mse", "train_r2", "val_mse", "val_r2", "n_gates", "n_params"});
    for (const auto& report : result.iterations) {
        const Candidate& b = report.best();
        rows.push_back({report.iteration == 0 ? "Base" : "Iter" + std::to_string(report.iteration),
                        std::to_string(b.index), text_number(b.result.train.mse),
                        text_number(b.result.train.r2), text_number(b.result.validation.mse),
                        text_number(b.result.validation.r2), std::to_string(b.ansatz.gates.size()),
                        std::to_string(b.ansatz.n_params())});
    }
    std::vector<std::size_t> width(rows[0].size(), 0);
    for (const auto& r : rows) {
        for (std::size_t c = 0; c < r.size(); ++c) {
            width[c] = std::max(width[c], r[c].size());
        }
    }
    std::ostringstream out;
    for (const auto& r : rows) {
        for (std::size_t c = 0; c < r.size(); ++c) {
            out << std::left << std::setw(static_cast<int>(width[c])) << r[c];
            out << (c + 1 < r.size() ? "  " : "\n");
        }
    }
    return out.str();
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace

int cmd_run(const fs::path& config_path, const GlobalOptions& global, std::ostream& out,
            std::ostream& err) {
    return guarded(err, [&] {
        ExperimentConfig cfg = load_experiment_config(config_path);
        if (global.seed) {
            cfg.seed = *global.seed;
            cfg.search.master_seed = cfg.seed;
            cfg.search.train.shuffle_seed = cfg.seed;
        }
        const fs::path out_dir = global.out_dir.value_or(cfg.out_dir.value_or("lqas_out"));

        const Dataset raw = make_dataset(cfg.dataset, data_seed(cfg.seed), default_width(cfg.ansatz));
        const PreparedData data = prepare(raw, cfg.split, split_seed(cfg.seed));
        const Ansatz base = make_ansatz(cfg.ansatz, raw.n_features());

        fs::create_directories(out_dir);
        write_text(out_dir / "scale.json", dump(scaling_to_json(data.scaling)));

        RunOptions options;
        options.jobs = global.jobs;
        options.on_iteration = [&](const IterationReport& report) {
            const Candidate& b = report.best();
            std::size_t failures = 0;
            for (const auto& c : report.candidates) {
                if (c.failed) {
                    ++failures;
                    err << "warning: iteration " << report.iteration << " candidate " << c.index
                        << " failed: " << c.failure << '\n';
                }
            }
            err << "iteration " << report.iteration << ": " << report.candidates.size()
                << " candidates, best #" << b.index << " val_mse=" << text_number(b.result.validation.mse)
                << " val_r2=" << text_number(b.result.validation.r2);
            if (failures > 0) {
                err << " (" << failures << " failed)";
            }
            err << '\n';
        };
        const SearchResult result = run_lqas(base, data.train, data.validation, cfg.search, options);

        json report = to_json(result);
        report["config"] = to_json(cfg);
        report["scaling"] = scaling_to_json(data.scaling);
        report["split"] = {{"train", data.split.train.size()}, {"validation", data.split.validation.size()}};
        write_text(out_dir / "report.json", dump(report));
        write_text(out_dir / "iterations.csv", iterations_csv(result));
        write_text(out_dir / "summary.txt", summary_table(result));

        for (const auto& it : result.iterations) {
            json best = candidate_to_json(it.best(), true);
            best["iteration"] = it.iteration;
            write_text(out_dir / ("best_ansatz_" + std::to_string(it.iteration) + ".json"), dump(best));
        }
        const fs::path top_dir = out_dir / "top_k";
        fs::create_directories(top_dir);
        for (std::size_t r = 0; r < result.final_top_k.size(); ++r) {
            json c = candidate_to_json(result.final_top_k[r], true);
            c["rank"] = r + 1;
            write_text(top_dir / ("rank_" + std::to_string(r + 1) + ".json"), dump(c));
        }
        out << summary_table(result);
        out << "outputs written to " << out_dir.string() << '\n';
        return kOk;
    });
}

int cmd_eval(const EvalOptions& opts, const GlobalOptions& global, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const AnsatzSpec aspec = parse_ansatz_spec(opts.ansatz);
        const DatasetSpec dspec = parse_dataset_spec(opts.data);
        const std::uint64_t seed = global.seed.value_or(0);
        SplitSpec sspec;
        sspec.train_fraction = opts.train_fraction;
        sspec.scale_fit = opts.scale_fit_train ? ScaleFit::Train : ScaleFit::Full;

        const Dataset raw = make_dataset(dspec, data_seed(seed), default_width(aspec));
        const PreparedData data = prepare(raw, sspec, split_seed(seed));
        const Ansatz ansatz = make_ansatz(aspec, raw.n_features());
        TrainConfig tcfg = opts.train;
        tcfg.shuffle_seed = seed;
        const TrainResult r = train(ansatz, data.train, data.validation, tcfg);

        const json doc{
            {"ansatz", {{"n_qubits", ansatz.n_qubits}, {"n_gates", ansatz.gates.size()}, {"n_params", ansatz.n_params()}}},
            {"train", to_json(r.train)},
            {"validation", to_json(r.validation)},
            {"params", r.params},
        };
        out << dump(doc);
        return kOk;
    });
}

int cmd_gen(const std::string& spec, const fs::path& out_path, const GlobalOptions& global,
            std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const DatasetSpec dspec = parse_dataset_spec(spec);
        const Dataset ds = make_dataset(dspec, data_seed(global.seed.value_or(0)), kDefaultWidth);
        save_table(out_path, ds);
        fs::path sidecar = out_path;
        sidecar.replace_extension(".scale.json");
        write_text(sidecar, dump(scaling_to_json(fit_minmax(ds))));
        out << "wrote " << ds.size() << " rows to " << out_path.string() << '\n';
        return kOk;
    });
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Local architecture search for variational quantum regression circuits", "lqas"};
    app.require_subcommand(1);

    GlobalOptions global;
    global.jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    std::uint64_t seed = 0;
    std::string out_dir;
    auto* seed_opt = app.add_option("--seed", seed, "Master seed (overrides the config)");
    app.add_option("--jobs", global.jobs, "Worker threads for candidate training")
        ->check(CLI::PositiveNumber);
    auto* out_opt = app.add_option("--out-dir", out_dir, "Output directory for run");

    auto* run = app.add_subcommand("run", "Run the architecture search described by a JSON config");
    std::string config_path;
    run->add_option("config", config_path, "Experiment config (JSON)")->required();
    run->fallthrough();

    auto* eval = app.add_subcommand("eval", "Train one ansatz and print its metrics as JSON");
    EvalOptions eval_opts;
    std::string scale_fit = "full";
    eval->add_option("ansatz", eval_opts.ansatz, "Ansatz file or hea,n=..,k=..,m=..")->required();
    eval->add_option("--data", eval_opts.data, "Dataset spec, e.g. quad1d,n=500 or table,path=f.csv,target=y")
        ->capture_default_str();
    eval->add_option("--train-fraction", eval_opts.train_fraction)->capture_default_str();
    eval->add_option("--scale-fit", scale_fit, "Fit scaling on all rows or the training rows")
        ->check(CLI::IsMember({"full", "train"}))
        ->capture_default_str();
    eval->add_option("--epochs", eval_opts.train.epochs)->capture_default_str();
    eval->add_option("--batch-size", eval_opts.train.batch_size)->capture_default_str();
    eval->add_option("--lr", eval_opts.train.learning_rate)->capture_default_str();
    eval->fallthrough();

    auto* gen = app.add_subcommand("gen", "Write a synthetic dataset to CSV with a scaling sidecar");
    std::string gen_spec;
    std::string gen_out;
    gen->add_option("spec", gen_spec, "Dataset spec, e.g. quad1d,n=500")->required();
    gen->add_option("-o,--output", gen_out, "Output CSV path")->required();
    gen->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kConfigError;
    }
    if (*seed_opt) {
        global.seed = seed;
    }
    if (*out_opt) {
        global.out_dir = out_dir;
    }

    if (*run) {
        return cmd_run(config_path, global, out, err);
    }
    if (*eval) {
        eval_opts.scale_fit_train = scale_fit == "train";
        return cmd_eval(eval_opts, global, out, err);
    }
    return cmd_gen(gen_spec, gen_out, global, out, err);
}

}  // namespace lqas::cli
