#include "lqas/circuit.hpp"

#include <algorithm>
#include <sstream>

#include "lqas/error.hpp"

namespace lqas {

namespace {

constexpr std::array<GateKind, 3> kSingleQubitKinds{GateKind::RX, GateKind::RY, GateKind::RZ};
constexpr std::array<GateKind, 4> kTwoQubitKinds{GateKind::CNOT, GateKind::CRX, GateKind::CRY,
                                                 GateKind::CRZ};

}  // namespace

std::string_view to_string(GateKind kind) noexcept {
    switch (kind) {
    case GateKind::RX: return "RX";
    case GateKind::RY: return "RY";
    case GateKind::RZ: return "RZ";
    case GateKind::CNOT: return "CNOT";
    case GateKind::CRX: return "CRX";
    case GateKind::CRY: return "CRY";
    case GateKind::CRZ: return "CRZ";
    }
    return "?";
}

std::optional<GateKind> parse_gate_kind(std::string_view name) noexcept {
    for (GateKind kind : kAllGateKinds) {
        if (to_string(kind) == name) {
            return kind;
        }
    }
    return std::nullopt;
}

std::span<const GateKind> kinds_with_arity(int n_wires) noexcept {
    if (n_wires == 1) {
        return kSingleQubitKinds;
    }
    if (n_wires == 2) {
        return kTwoQubitKinds;
    }
    return {};
}

std::string_view to_string(Binding::Type type) noexcept {
    switch (type) {
    case Binding::Type::None: return "none";
    case Binding::Type::Feature: return "feature";
    case Binding::Type::Param: return "param";
    }
    return "?";
}

bool operator==(const Gate& a, const Gate& b) noexcept {
    if (a.kind != b.kind || !(a.binding == b.binding)) {
        return false;
    }
    auto wa = a.active_wires();
    auto wb = b.active_wires();
    return std::equal(wa.begin(), wa.end(), wb.begin(), wb.end());
}

Gate Gate::rotation(GateKind kind, std::size_t wire, Binding binding) {
    return Gate{kind, {wire, 0}, binding};
}

Gate Gate::cnot(std::size_t control, std::size_t target) {
    return Gate{GateKind::CNOT, {control, target}, Binding::none()};
}

Gate Gate::controlled(GateKind kind, std::size_t control, std::size_t target, std::size_t slot) {
    return Gate{kind, {control, target}, Binding::param(slot)};
}

std::size_t Ansatz::n_params() const noexcept {
    return static_cast<std::size_t>(
        std::count_if(gates.begin(), gates.end(), [](const Gate& g) { return g.is_parametrized(); }));
}

std::size_t Ansatz::n_encoding_gates() const noexcept {
    return static_cast<std::size_t>(
        std::count_if(gates.begin(), gates.end(), [](const Gate& g) { return g.is_encoding(); }));
}

Ansatz build_hea(const HeaSpec& spec) {
    if (spec.n_qubits == 0 || spec.k == 0 || spec.m == 0) {
        std::ostringstream msg;
        msg << "invalid HEA spec n_qubits=" << spec.n_qubits << " k=" << spec.k << " m=" << spec.m
            << " (all must be >= 1)";
        throw ConfigError(msg.str());
    }
    const std::size_t n = spec.n_qubits;
    Ansatz ansatz;
    ansatz.n_qubits = n;
    ansatz.n_features = n;
    ansatz.gates.reserve(spec.m * (n + spec.k * 4 * n));

    std::size_t slot = 0;
    for (std::size_t block = 0; block < spec.m; ++block) {
        for (std::size_t q = 0; q < n; ++q) {
            ansatz.gates.push_back(Gate::rotation(GateKind::RX, q, Binding::feature(q)));
        }
        for (std::size_t layer = 0; layer < spec.k; ++layer) {
            for (std::size_t q = 0; q < n; ++q) {
                ansatz.gates.push_back(Gate::rotation(GateKind::RY, q, Binding::param(slot++)));
                ansatz.gates.push_back(Gate::rotation(GateKind::RZ, q, Binding::param(slot++)));
                ansatz.gates.push_back(Gate::rotation(GateKind::RY, q, Binding::param(slot++)));
            }
            if (n >= 2) {
                for (std::size_t q = 0; q < n; ++q) {
                    ansatz.gates.push_back(Gate::cnot(q, (q + 1) % n));
                }
            }
        }
    }
    return ansatz;
}

std::vector<Violation> validate(const Ansatz& ansatz) {
    std::vector<Violation> out;
    auto report = [&out](std::size_t gate, std::string message) {
        out.push_back(Violation{gate, std::move(message)});
    };

    if (ansatz.n_qubits == 0) {
        report(Violation::kWholeAnsatz, "n_qubits must be positive");
    }

    std::vector<std::size_t> param_uses;
    for (std::size_t i = 0; i < ansatz.gates.size(); ++i) {
        const Gate& g = ansatz.gates[i];
        auto wires = g.active_wires();
        for (std::size_t w : wires) {
            if (w >= ansatz.n_qubits) {
                report(i, "wire out of range");
                break;
            }
        }
        if (wires.size() == 2 && wires[0] == wires[1]) {
            report(i, "duplicate wires");
        }

        switch (g.binding.type) {
        case Binding::Type::None:
            if (param_count(g.kind) != 0) {
                report(i, "parametrized gate without binding");
            }
            break;
        case Binding::Type::Feature:
            if (!is_rotation(g.kind)) {
                report(i, "feature binding on non-rotation gate");
            } else if (g.binding.index >= ansatz.n_features) {
                report(i, "feature index out of range");
            }
            break;
        case Binding::Type::Param:
            if (param_count(g.kind) == 0) {
                report(i, "binding on parameter-free gate");
            } else {
                param_uses.push_back(g.binding.index);
            }
            break;
        }
    }

    std::sort(param_uses.begin(), param_uses.end());
    if (std::adjacent_find(param_uses.begin(), param_uses.end()) != param_uses.end()) {
        report(Violation::kWholeAnsatz, "parameter slot used more than once");
    }
    param_uses.erase(std::unique(param_uses.begin(), param_uses.end()), param_uses.end());
    if (!param_uses.empty() && param_uses.back() + 1 != param_uses.size()) {
        report(Violation::kWholeAnsatz, "non-contiguous parameters");
    }
    return out;
}

Ansatz reindex_params(Ansatz ansatz) {
    std::size_t next = 0;
    for (Gate& g : ansatz.gates) {
        if (g.is_parametrized()) {
            g.binding.index = next++;
        }
    }
    return ansatz;
}

}  // namespace lqas
