#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lqas {

/// Closed gate vocabulary. Single-qubit kinds first, then two-qubit kinds.
enum class GateKind : std::uint8_t { RX, RY, RZ, CNOT, CRX, CRY, CRZ };

inline constexpr std::array<GateKind, 7> kAllGateKinds{
    GateKind::RX,   GateKind::RY,  GateKind::RZ,  GateKind::CNOT,
    GateKind::CRX,  GateKind::CRY, GateKind::CRZ,
};

constexpr int arity(GateKind kind) noexcept {
    switch (kind) {
    case GateKind::RX:
    case GateKind::RY:
    case GateKind::RZ:
        return 1;
    default:
        return 2;
    }
}

constexpr int param_count(GateKind kind) noexcept { return kind == GateKind::CNOT ? 0 : 1; }

constexpr bool is_rotation(GateKind kind) noexcept { return arity(kind) == 1; }

std::string_view to_string(GateKind kind) noexcept;
std::optional<GateKind> parse_gate_kind(std::string_view name) noexcept;

/// All kinds sharing the given arity, in declaration order.
std::span<const GateKind> kinds_with_arity(int n_wires) noexcept;

/// What a gate's rotation angle is read from.
struct Binding {
    enum class Type : std::uint8_t { None, Feature, Param };

    Type type = Type::None;
    std::size_t index = 0;

    static constexpr Binding none() noexcept { return {}; }
    static constexpr Binding feature(std::size_t column) noexcept { return {Type::Feature, column}; }
    static constexpr Binding param(std::size_t slot) noexcept { return {Type::Param, slot}; }

    friend bool operator==(const Binding& a, const Binding& b) noexcept {
        return a.type == b.type && (a.type == Type::None || a.index == b.index);
    }
};

std::string_view to_string(Binding::Type type) noexcept;

/// One gate. For two-qubit kinds wires[0] is the control and wires[1] the
/// target; single-qubit kinds only use wires[0].
struct Gate {
    GateKind kind = GateKind::RX;
    std::array<std::size_t, 2> wires{0, 0};
    Binding binding;

    /// Encoding gates read a feature column and are never touched by the search.
    bool is_encoding() const noexcept { return binding.type == Binding::Type::Feature; }
    bool is_parametrized() const noexcept { return binding.type == Binding::Type::Param; }
    int n_wires() const noexcept { return arity(kind); }
    std::span<const std::size_t> active_wires() const noexcept {
        return {wires.data(), static_cast<std::size_t>(arity(kind))};
    }

    friend bool operator==(const Gate& a, const Gate& b) noexcept;

    static Gate rotation(GateKind kind, std::size_t wire, Binding binding);
    static Gate cnot(std::size_t control, std::size_t target);
    static Gate controlled(GateKind kind, std::size_t control, std::size_t target, std::size_t slot);
};

/// A temporally ordered gate sequence over n_qubits wires.
///
/// n_features is the length of the feature row the circuit expects; it
/// defaults to n_qubits (one feature per wire).
struct Ansatz {
    std::size_t n_qubits = 1;
    std::size_t n_features = 1;
    std::vector<Gate> gates;

    /// Number of ParamSlot-bound gates. Equals the trainable-parameter count
    /// whenever validate() reports no violations.
    std::size_t n_params() const noexcept;
    std::size_t n_encoding_gates() const noexcept;

    friend bool operator==(const Ansatz& a, const Ansatz& b) noexcept = default;
};

/// Hardware-efficient ansatz shape: k variational layers inside each of m
/// data re-uploading blocks.
struct HeaSpec {
    std::size_t n_qubits = 1;
    std::size_t k = 1;
    std::size_t m = 1;
};

/// Builds HEA-k-m. Each of the m blocks is an RX feature layer followed by k
/// repetitions of (RY, RZ, RY on every qubit, then CNOT ring i -> i+1 mod n).
/// The ring is omitted for a single qubit. Throws ConfigError on a bad spec.
Ansatz build_hea(const HeaSpec& spec);

struct Violation {
    static constexpr std::size_t kWholeAnsatz = static_cast<std::size_t>(-1);

    std::size_t gate = kWholeAnsatz;
    std::string message;
};

/// Every invariant breach in the ansatz; empty when valid.
std::vector<Violation> validate(const Ansatz& ansatz);

/// Renumbers ParamSlots 0..n-1 in temporal order. FeatureSlots are untouched.
Ansatz reindex_params(Ansatz ansatz);

}  // namespace lqas
