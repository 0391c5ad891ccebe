#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "lqas/search.hpp"

namespace lqas {

nlohmann::json to_json(const Modification& mod);
nlohmann::json to_json(const ModificationLog& log);
ModificationLog log_from_json(const nlohmann::json& doc);

nlohmann::json to_json(const Metrics& m);

/// Candidate summary; the full circuit is embedded only when asked for.
nlohmann::json candidate_to_json(const Candidate& c, bool include_ansatz);

nlohmann::json to_json(const IterationReport& report);
nlohmann::json to_json(const SearchResult& result);

/// Header of the flat per-candidate table.
inline constexpr const char* kIterationsCsvHeader =
    "iteration,candidate,parent,train_mse,train_r2,val_mse,val_r2,n_gates,n_params,rank";

/// One row per candidate of every iteration, header first.
std::string iterations_csv(const SearchResult& result);

}  // namespace lqas
