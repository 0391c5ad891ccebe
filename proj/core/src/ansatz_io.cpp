#include "lqas/ansatz_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "lqas/error.hpp"

namespace lqas {

namespace {

std::size_t parse_index(std::string_view s, std::size_t line, const char* what) {
    std::size_t value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
        throw ParseError("line " + std::to_string(line) + ": bad " + what + " '" +
                         std::string(s) + "'");
    }
    return value;
}

void check_declared_params(const Ansatz& ansatz, std::size_t declared) {
    if (ansatz.n_params() != declared) {
        throw ParseError("declared n_params " + std::to_string(declared) + " but gates bind " +
                         std::to_string(ansatz.n_params()));
    }
}

std::string binding_text(const Binding& b) {
    if (b.type == Binding::Type::None) {
        return "none";
    }
    return std::string(to_string(b.type)) + ":" + std::to_string(b.index);
}

}  // namespace

std::string to_text(const Ansatz& ansatz) {
    std::ostringstream out;
    out << ansatz.n_qubits << ' ' << ansatz.n_params() << ' ' << ansatz.n_features << '\n';
    for (const Gate& g : ansatz.gates) {
        out << to_string(g.kind) << ' ';
        auto wires = g.active_wires();
        for (std::size_t i = 0; i < wires.size(); ++i) {
            out << (i ? "," : "") << wires[i];
        }
        out << ' ' << binding_text(g.binding) << '\n';
    }
    return out.str();
}

Ansatz ansatz_from_text(const std::string& text) {
    std::istringstream in(text);
    std::string raw;
    std::size_t line_no = 0;
    bool have_header = false;
    std::size_t declared_params = 0;
    Ansatz ansatz;

    while (std::getline(in, raw)) {
        ++line_no;
        if (auto hash = raw.find('#'); hash != std::string::npos) {
            raw.erase(hash);
        }
        std::istringstream fields(raw);
        std::vector<std::string> tok;
        for (std::string t; fields >> t;) {
            tok.push_back(t);
        }
        if (tok.empty()) {
            continue;
        }

        if (!have_header) {
            if (tok.size() < 2 || tok.size() > 3) {
                throw ParseError("line " + std::to_string(line_no) +
                                 ": header must be '<n_qubits> <n_params> [<n_features>]'");
            }
            ansatz.n_qubits = parse_index(tok[0], line_no, "n_qubits");
            declared_params = parse_index(tok[1], line_no, "n_params");
            ansatz.n_features =
                tok.size() == 3 ? parse_index(tok[2], line_no, "n_features") : ansatz.n_qubits;
            have_header = true;
            continue;
        }

        if (tok.size() != 3) {
            throw ParseError("line " + std::to_string(line_no) + ": expected 'kind wires binding'");
        }
        Gate g;
        const auto kind = parse_gate_kind(tok[0]);
        if (!kind) {
            throw ParseError("line " + std::to_string(line_no) + ": unknown gate kind '" + tok[0] +
                             "'");
        }
        g.kind = *kind;

        std::vector<std::size_t> wires;
        std::string_view wire_list = tok[1];
        while (!wire_list.empty()) {
            const auto comma = wire_list.find(',');
            wires.push_back(parse_index(wire_list.substr(0, comma), line_no, "wire"));
            wire_list = comma == std::string_view::npos ? "" : wire_list.substr(comma + 1);
        }
        if (wires.size() != static_cast<std::size_t>(arity(g.kind))) {
            throw ParseError("line " + std::to_string(line_no) + ": " + tok[0] + " takes " +
                             std::to_string(arity(g.kind)) + " wire(s)");
        }
        std::copy(wires.begin(), wires.end(), g.wires.begin());

        const std::string& b = tok[2];
        if (b == "none") {
            g.binding = Binding::none();
        } else if (b.rfind("feature:", 0) == 0) {
            g.binding = Binding::feature(parse_index(std::string_view(b).substr(8), line_no, "index"));
        } else if (b.rfind("param:", 0) == 0) {
            g.binding = Binding::param(parse_index(std::string_view(b).substr(6), line_no, "index"));
        } else {
            throw ParseError("line " + std::to_string(line_no) + ": bad binding '" + b + "'");
        }
        ansatz.gates.push_back(g);
    }
    if (!have_header) {
        throw ParseError("ansatz text has no header line");
    }
    check_declared_params(ansatz, declared_params);
    return ansatz;
}

nlohmann::json to_json(const Ansatz& ansatz) {
    nlohmann::json gates = nlohmann::json::array();
    for (const Gate& g : ansatz.gates) {
        auto wires = g.active_wires();
        nlohmann::json binding{{"type", to_string(g.binding.type)}};
        if (g.binding.type != Binding::Type::None) {
            binding["index"] = g.binding.index;
        }
        gates.push_back({{"kind", to_string(g.kind)},
                         {"wires", std::vector<std::size_t>(wires.begin(), wires.end())},
                         {"binding", std::move(binding)}});
    }
    return {{"n_qubits", ansatz.n_qubits},
            {"n_features", ansatz.n_features},
            {"n_params", ansatz.n_params()},
            {"gates", std::move(gates)}};
}

Ansatz ansatz_from_json(const nlohmann::json& doc) {
    try {
        Ansatz ansatz;
        ansatz.n_qubits = doc.at("n_qubits").get<std::size_t>();
        ansatz.n_features = doc.contains("n_features") ? doc.at("n_features").get<std::size_t>()
                                                       : ansatz.n_qubits;
        const auto& gates = doc.at("gates");
        for (std::size_t i = 0; i < gates.size(); ++i) {
            const auto& jg = gates.at(i);
            const std::string where = "gates[" + std::to_string(i) + "]";
            Gate g;
            const auto kind_name = jg.at("kind").get<std::string>();
            const auto kind = parse_gate_kind(kind_name);
            if (!kind) {
                throw ParseError(where + ": unknown gate kind '" + kind_name + "'");
            }
            g.kind = *kind;
            const auto wires = jg.at("wires").get<std::vector<std::size_t>>();
            if (wires.size() != static_cast<std::size_t>(arity(g.kind))) {
                throw ParseError(where + ": " + kind_name + " takes " +
                                 std::to_string(arity(g.kind)) + " wire(s)");
            }
            std::copy(wires.begin(), wires.end(), g.wires.begin());

            const auto& jb = jg.at("binding");
            const auto type = jb.at("type").get<std::string>();
            if (type == "none") {
                g.binding = Binding::none();
            } else if (type == "feature") {
                g.binding = Binding::feature(jb.at("index").get<std::size_t>());
            } else if (type == "param") {
                g.binding = Binding::param(jb.at("index").get<std::size_t>());
            } else {
                throw ParseError(where + ": unknown binding type '" + type + "'");
            }
            ansatz.gates.push_back(g);
        }
        if (doc.contains("n_params")) {
            check_declared_params(ansatz, doc.at("n_params").get<std::size_t>());
        }
        return ansatz;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed ansatz JSON: ") + e.what());
    }
}

Ansatz load_ansatz(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open ansatz file '" + path.string() + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    if (path.extension() == ".json") {
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(buf.str());
        } catch (const nlohmann::json::parse_error& e) {
            throw ParseError(path.string() + ": " + e.what());
        }
        // Accept candidate documents that wrap the circuit under "ansatz".
        return ansatz_from_json(doc.contains("ansatz") ? doc.at("ansatz") : doc);
    }
    return ansatz_from_text(buf.str());
}

void save_ansatz(const std::filesystem::path& path, const Ansatz& ansatz) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot write ansatz file '" + path.string() + "'");
    }
    if (path.extension() == ".json") {
        out << to_json(ansatz).dump(2) << '\n';
    } else {
        out << to_text(ansatz);
    }
}

}  // namespace lqas
