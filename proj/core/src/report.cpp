#include "lqas/report.hpp"

#include <algorithm>
#include <cmath>

#include "lqas/ansatz_io.hpp"
#include "lqas/error.hpp"
#include "lqas/format.hpp"

namespace lqas {

namespace {

// JSON has no infinities; failed candidates report null.
nlohmann::json number(double v) {
    if (!std::isfinite(v)) {
        return nullptr;
    }
    return v;
}

std::string csv_number(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    return format_double(v);
}

}  // namespace

nlohmann::json to_json(const Modification& mod) {
    nlohmann::json j{{"action", to_string(mod.action)}, {"position", mod.position}};
    switch (mod.action) {
    case Action::Add:
        j["kind"] = to_string(mod.kind);
        j["wires"] = std::vector<std::size_t>(mod.wires.begin(), mod.wires.begin() + arity(mod.kind));
        break;
    case Action::Switch:
        j["kind"] = to_string(mod.kind);
        break;
    case Action::Move:
        j["kind"] = to_string(mod.kind);
        j["wires"] = std::vector<std::size_t>(mod.wires.begin(), mod.wires.begin() + arity(mod.kind));
        break;
    case Action::Remove:
        break;
    }
    return j;
}

nlohmann::json to_json(const ModificationLog& log) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& m : log) {
        out.push_back(to_json(m));
    }
    return out;
}

ModificationLog log_from_json(const nlohmann::json& doc) {
    try {
        ModificationLog log;
        for (const auto& j : doc) {
            Modification m;
            const auto name = j.at("action").get<std::string>();
            const auto action = parse_action(name);
            if (!action) {
                throw ParseError("unknown modification action '" + name + "'");
            }
            m.action = *action;
            m.position = j.at("position").get<std::size_t>();
            if (j.contains("kind")) {
                const auto kind_name = j.at("kind").get<std::string>();
                const auto kind = parse_gate_kind(kind_name);
                if (!kind) {
                    throw ParseError("unknown gate kind '" + kind_name + "'");
                }
                m.kind = *kind;
            }
            if (j.contains("wires")) {
                const auto wires = j.at("wires").get<std::vector<std::size_t>>();
                if (wires.empty() || wires.size() > 2) {
                    throw ParseError("modification wires must list one or two qubits");
                }
                std::copy(wires.begin(), wires.end(), m.wires.begin());
            }
            log.push_back(m);
        }
        return log;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed modification log: ") + e.what());
    }
}

nlohmann::json to_json(const Metrics& m) { return {{"mse", number(m.mse)}, {"r2", number(m.r2)}}; }

nlohmann::json candidate_to_json(const Candidate& c, bool include_ansatz) {
    nlohmann::json j{
        {"index", c.index},
        {"parent", c.parent ? nlohmann::json(*c.parent) : nlohmann::json(nullptr)},
        {"seed", c.seed},
        {"elite", c.elite},
        {"n_gates", c.ansatz.gates.size()},
        {"n_params", c.ansatz.n_params()},
        {"train", to_json(c.result.train)},
        {"validation", to_json(c.result.validation)},
        {"modifications", to_json(c.log)},
    };
    if (c.failed) {
        j["failure"] = c.failure;
    }
    if (include_ansatz) {
        j["ansatz"] = to_json(c.ansatz);
    }
    return j;
}

nlohmann::json to_json(const IterationReport& report) {
    nlohmann::json candidates = nlohmann::json::array();
    const auto ranks = report.ranks();
    for (std::size_t i = 0; i < report.candidates.size(); ++i) {
        auto j = candidate_to_json(report.candidates[i], false);
        j["rank"] = ranks[i] + 1;
        candidates.push_back(std::move(j));
    }
    const Candidate& best = report.best();
    return {
        {"iteration", report.iteration},
        {"ranking", report.ranking},
        {"best", {{"index", best.index},
                  {"val_mse", number(best.result.validation.mse)},
                  {"val_r2", number(best.result.validation.r2)},
                  {"train_mse", number(best.result.train.mse)},
                  {"train_r2", number(best.result.train.r2)}}},
        {"candidates", std::move(candidates)},
    };
}

nlohmann::json to_json(const SearchResult& result) {
    nlohmann::json iterations = nlohmann::json::array();
    for (const auto& it : result.iterations) {
        iterations.push_back(to_json(it));
    }
    nlohmann::json top = nlohmann::json::array();
    for (const auto& c : result.final_top_k) {
        top.push_back(candidate_to_json(c, true));
    }
    return {{"iterations", std::move(iterations)}, {"final_top_k", std::move(top)}};
}

std::string iterations_csv(const SearchResult& result) {
    std::string out = kIterationsCsvHeader;
    out += '\n';
    for (const auto& report : result.iterations) {
        const auto ranks = report.ranks();
        for (std::size_t i = 0; i < report.candidates.size(); ++i) {
            const Candidate& c = report.candidates[i];
            out += std::to_string(report.iteration) + ',' + std::to_string(c.index) + ',' +
                   (c.parent ? std::to_string(*c.parent) : std::string("-1")) + ',' +
                   csv_number(c.result.train.mse) + ',' + csv_number(c.result.train.r2) + ',' +
                   csv_number(c.result.validation.mse) + ',' +
                   csv_number(c.result.validation.r2) + ',' +
                   std::to_string(c.ansatz.gates.size()) + ',' +
                   std::to_string(c.ansatz.n_params()) + ',' + std::to_string(ranks[i] + 1) + '\n';
        }
    }
    return out;
}

}  // namespace lqas
