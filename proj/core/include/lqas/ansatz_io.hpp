#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "lqas/circuit.hpp"

namespace lqas {

// Two interchangeable encodings of an Ansatz.
//
// Text: '#' starts a comment; the first non-blank line is the header
// "<n_qubits> <n_params> [<n_features>]", then one gate per line:
//
//     RX 0 feature:0
//     RY 2 param:5
//     CNOT 0,1 none
//
// JSON:
//
//     {"n_qubits": 2, "n_features": 2, "n_params": 1,
//      "gates": [{"kind": "CRX", "wires": [0, 1],
//                 "binding": {"type": "param", "index": 0}}]}
//
// n_features defaults to n_qubits when absent. Parsers throw ParseError on
// malformed input or when the declared n_params disagrees with the gates.

std::string to_text(const Ansatz& ansatz);
Ansatz ansatz_from_text(const std::string& text);

nlohmann::json to_json(const Ansatz& ansatz);
Ansatz ansatz_from_json(const nlohmann::json& doc);

/// Chooses the encoding by extension: ".json" is JSON, anything else text.
Ansatz load_ansatz(const std::filesystem::path& path);
void save_ansatz(const std::filesystem::path& path, const Ansatz& ansatz);

}  // namespace lqas
