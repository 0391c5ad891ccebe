#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "experiment.hpp"

namespace lqas::cli {

/// Process exit codes.
enum ExitCode : int { kOk = 0, kConfigError = 1, kIoError = 2, kInternalError = 3 };

struct GlobalOptions {
    std::optional<std::uint64_t> seed;
    int jobs = 1;
    std::optional<std::filesystem::path> out_dir;
};

struct EvalOptions {
    std::string ansatz;
    std::string data = "quad1d";
    double train_fraction = 0.8;
    bool scale_fit_train = false;
    TrainConfig train;
};

/// Each command reports problems on `err` and returns an exit code.
int cmd_run(const std::filesystem::path& config_path, const GlobalOptions& global, std::ostream& out,
            std::ostream& err);
int cmd_eval(const EvalOptions& opts, const GlobalOptions& global, std::ostream& out, std::ostream& err);
int cmd_gen(const std::string& spec, const std::filesystem::path& out_path, const GlobalOptions& global,
            std::ostream& out, std::ostream& err);

/// Parses argv and dispatches to a command.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lqas::cli
