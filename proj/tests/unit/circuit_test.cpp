#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "generators.hpp"
#include "lqas/ansatz_io.hpp"
#include "lqas/circuit.hpp"
#include "lqas/error.hpp"

using namespace lqas;

namespace {

bool has_violation(const Ansatz& a, std::string_view message) {
    const auto v = validate(a);
    return std::any_of(v.begin(), v.end(), [&](const Violation& x) { return x.message == message; });
}

std::size_t count_kind(const Ansatz& a, GateKind kind) {
    return static_cast<std::size_t>(std::count_if(
        a.gates.begin(), a.gates.end(), [&](const Gate& g) { return g.kind == kind; }));
}

}  // namespace

TEST(GateKind, ArityAndParamCount) {
    for (GateKind k : kAllGateKinds) {
        EXPECT_TRUE(arity(k) == 1 || arity(k) == 2);
        EXPECT_EQ(param_count(k), k == GateKind::CNOT ? 0 : 1) << to_string(k);
        EXPECT_EQ(parse_gate_kind(to_string(k)), k);
    }
    EXPECT_EQ(arity(GateKind::RY), 1);
    EXPECT_EQ(arity(GateKind::CRZ), 2);
    EXPECT_FALSE(parse_gate_kind("H").has_value());
    EXPECT_EQ(kinds_with_arity(1).size(), 3u);
    EXPECT_EQ(kinds_with_arity(2).size(), 4u);
}

TEST(BuildHea, FourQubitSingleLayer) {
    const Ansatz a = build_hea({4, 1, 1});
    ASSERT_EQ(a.gates.size(), 20u);
    EXPECT_EQ(a.n_params(), 12u);
    EXPECT_EQ(a.n_encoding_gates(), 4u);
    EXPECT_EQ(count_kind(a, GateKind::CNOT), 4u);

    for (std::size_t q = 0; q < 4; ++q) {
        EXPECT_EQ(a.gates[q], Gate::rotation(GateKind::RX, q, Binding::feature(q)));
    }
    // RY, RZ, RY per qubit, qubit-major, then the ring.
    std::size_t slot = 0;
    for (std::size_t q = 0; q < 4; ++q) {
        const std::size_t base = 4 + 3 * q;
        EXPECT_EQ(a.gates[base], Gate::rotation(GateKind::RY, q, Binding::param(slot++)));
        EXPECT_EQ(a.gates[base + 1], Gate::rotation(GateKind::RZ, q, Binding::param(slot++)));
        EXPECT_EQ(a.gates[base + 2], Gate::rotation(GateKind::RY, q, Binding::param(slot++)));
    }
    EXPECT_EQ(a.gates[16], Gate::cnot(0, 1));
    EXPECT_EQ(a.gates[17], Gate::cnot(1, 2));
    EXPECT_EQ(a.gates[18], Gate::cnot(2, 3));
    EXPECT_EQ(a.gates[19], Gate::cnot(3, 0));
    EXPECT_TRUE(validate(a).empty());
}

TEST(BuildHea, TwoQubitRingGoesBothWays) {
    const Ansatz a = build_hea({2, 1, 1});
    std::vector<Gate> cnots;
    std::copy_if(a.gates.begin(), a.gates.end(), std::back_inserter(cnots),
                 [](const Gate& g) { return g.kind == GateKind::CNOT; });
    ASSERT_EQ(cnots.size(), 2u);
    EXPECT_EQ(cnots[0], Gate::cnot(0, 1));
    EXPECT_EQ(cnots[1], Gate::cnot(1, 0));
}

TEST(BuildHea, ParameterCountForDeepCircuit) {
    EXPECT_EQ(build_hea({4, 2, 3}).n_params(), 72u);
    // A 16-qubit HEA-3-3 has 432 trainable angles.
    EXPECT_EQ(build_hea({16, 3, 3}).n_params(), 432u);
}

TEST(BuildHea, SingleQubitSkipsEntanglement) {
    const Ansatz a = build_hea({1, 2, 2});
    EXPECT_EQ(count_kind(a, GateKind::CNOT), 0u);
    EXPECT_EQ(a.n_params(), 12u);
    EXPECT_TRUE(validate(a).empty());
}

TEST(BuildHea, RejectsZeroSizes) {
    EXPECT_THROW(build_hea({0, 1, 1}), ConfigError);
    EXPECT_THROW(build_hea({2, 0, 1}), ConfigError);
    EXPECT_THROW(build_hea({2, 1, 0}), ConfigError);
}

TEST(BuildHea, StructuralCountsHoldAcrossShapes) {
    for (std::size_t n = 1; n <= 6; ++n) {
        for (std::size_t k = 1; k <= 3; ++k) {
            for (std::size_t m = 1; m <= 3; ++m) {
                const Ansatz a = build_hea({n, k, m});
                SCOPED_TRACE(testing::Message() << "n=" << n << " k=" << k << " m=" << m);
                EXPECT_EQ(a.n_params(), 3 * n * k * m);
                EXPECT_EQ(count_kind(a, GateKind::CNOT), n >= 2 ? n * k * m : 0);
                EXPECT_EQ(a.n_encoding_gates(), n * m);
                for (std::size_t j = 0; j < n; ++j) {
                    const auto uses = std::count_if(a.gates.begin(), a.gates.end(), [&](const Gate& g) {
                        return g.is_encoding() && g.binding.index == j;
                    });
                    EXPECT_EQ(static_cast<std::size_t>(uses), m);
                }
                for (const Gate& g : a.gates) {
                    if (g.is_encoding()) {
                        EXPECT_EQ(g.wires[0], g.binding.index);
                        EXPECT_EQ(g.kind, GateKind::RX);
                    }
                }
                EXPECT_TRUE(validate(a).empty());
            }
        }
    }
}

TEST(Validate, ReportsParameterGap) {
    Ansatz a;
    a.n_qubits = 1;
    a.n_features = 1;
    a.gates = {Gate::rotation(GateKind::RY, 0, Binding::param(0)),
               Gate::rotation(GateKind::RZ, 0, Binding::param(2))};
    EXPECT_TRUE(has_violation(a, "non-contiguous parameters"));
}

TEST(Validate, ReportsDuplicateWires) {
    Ansatz a;
    a.n_qubits = 2;
    a.n_features = 2;
    a.gates = {Gate::cnot(1, 1)};
    EXPECT_TRUE(has_violation(a, "duplicate wires"));
}

TEST(Validate, ReportsBindingAndRangeProblems) {
    Ansatz a;
    a.n_qubits = 2;
    a.n_features = 2;
    a.gates = {
        Gate{GateKind::CNOT, {0, 1}, Binding::feature(0)},
        Gate{GateKind::CRX, {0, 1}, Binding::feature(0)},
        Gate::rotation(GateKind::RX, 5, Binding::feature(0)),
        Gate::rotation(GateKind::RX, 0, Binding::feature(7)),
        Gate::rotation(GateKind::RY, 0, Binding::none()),
        Gate::rotation(GateKind::RY, 0, Binding::param(0)),
        Gate::rotation(GateKind::RY, 1, Binding::param(0)),
    };
    EXPECT_TRUE(has_violation(a, "binding on parameter-free gate") ||
                has_violation(a, "feature binding on non-rotation gate"));
    EXPECT_TRUE(has_violation(a, "feature binding on non-rotation gate"));
    EXPECT_TRUE(has_violation(a, "wire out of range"));
    EXPECT_TRUE(has_violation(a, "feature index out of range"));
    EXPECT_TRUE(has_violation(a, "parametrized gate without binding"));
    EXPECT_TRUE(has_violation(a, "parameter slot used more than once"));
}

TEST(ReindexParams, RenumbersInTemporalOrder) {
    Ansatz a;
    a.n_qubits = 2;
    a.n_features = 2;
    a.gates = {Gate::rotation(GateKind::RY, 0, Binding::param(0)),
               Gate::rotation(GateKind::RX, 1, Binding::feature(1)),
               Gate::controlled(GateKind::CRZ, 0, 1, 3), Gate::cnot(1, 0),
               Gate::rotation(GateKind::RZ, 1, Binding::param(7))};
    const Ansatz r = reindex_params(a);
    EXPECT_EQ(r.gates[0].binding, Binding::param(0));
    EXPECT_EQ(r.gates[1].binding, Binding::feature(1));
    EXPECT_EQ(r.gates[2].binding, Binding::param(1));
    EXPECT_EQ(r.gates[3].binding, Binding::none());
    EXPECT_EQ(r.gates[4].binding, Binding::param(2));
    EXPECT_EQ(r.n_params(), 3u);
    EXPECT_TRUE(validate(r).empty());
}

TEST(ReindexParams, IdentityOnContiguousAndEmpty) {
    const Ansatz hea = build_hea({3, 2, 1});
    EXPECT_EQ(reindex_params(hea), hea);

    Ansatz only_cnots;
    only_cnots.n_qubits = 2;
    only_cnots.n_features = 2;
    only_cnots.gates = {Gate::cnot(0, 1), Gate::cnot(1, 0)};
    EXPECT_EQ(reindex_params(only_cnots).n_params(), 0u);
}

TEST(ReindexParams, IdempotentAndShapePreserving) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        Ansatz a = testutil::random_ansatz(rng, 3, 25);
        // Scramble the slot numbers.
        std::uniform_int_distribution<std::size_t> slot(0, 1000);
        for (Gate& g : a.gates) {
            if (g.is_parametrized()) {
                g.binding.index = slot(rng);
            }
        }
        const Ansatz once = reindex_params(a);
        EXPECT_EQ(reindex_params(once), once);
        ASSERT_EQ(once.gates.size(), a.gates.size());
        for (std::size_t i = 0; i < a.gates.size(); ++i) {
            EXPECT_EQ(once.gates[i].kind, a.gates[i].kind);
        }
    }
}

TEST(AnsatzIo, RoundTripsThroughTextAndJson) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 40; ++trial) {
        const Ansatz a = testutil::random_ansatz(rng, 1 + trial % 4, static_cast<std::size_t>(trial));
        EXPECT_EQ(ansatz_from_text(to_text(a)), a);
        EXPECT_EQ(ansatz_from_json(nlohmann::json::parse(to_json(a).dump())), a);
    }
}

TEST(AnsatzIo, JsonUsesDocumentedFieldNames) {
    const auto j = to_json(build_hea({2, 1, 1}));
    EXPECT_EQ(j.at("n_qubits"), 2);
    EXPECT_EQ(j.at("n_params"), 6);
    const auto& first = j.at("gates").at(0);
    EXPECT_EQ(first.at("kind"), "RX");
    EXPECT_EQ(first.at("wires"), nlohmann::json::array({0}));
    EXPECT_EQ(first.at("binding").at("type"), "feature");
    EXPECT_EQ(first.at("binding").at("index"), 0);
    const auto& cnot = j.at("gates").back();
    EXPECT_EQ(cnot.at("kind"), "CNOT");
    EXPECT_EQ(cnot.at("wires"), nlohmann::json::array({1, 0}));
    EXPECT_EQ(cnot.at("binding").at("type"), "none");
}

TEST(AnsatzIo, TextFormatIsLineOriented) {
    const std::string text = "# toy circuit\n2 1\nRX 0 feature:0\nCRY 0,1 param:0  # trailing\nCNOT 1,0 none\n";
    const Ansatz a = ansatz_from_text(text);
    EXPECT_EQ(a.n_qubits, 2u);
    EXPECT_EQ(a.n_features, 2u);
    ASSERT_EQ(a.gates.size(), 3u);
    EXPECT_EQ(a.gates[1], Gate::controlled(GateKind::CRY, 0, 1, 0));
    EXPECT_EQ(to_text(a), "2 1 2\nRX 0 feature:0\nCRY 0,1 param:0\nCNOT 1,0 none\n");
}

TEST(AnsatzIo, RejectsMalformedInput) {
    EXPECT_THROW(ansatz_from_text(""), ParseError);
    EXPECT_THROW(ansatz_from_text("2 0\nH 0 none\n"), ParseError);
    EXPECT_THROW(ansatz_from_text("2 0\nCNOT 0 none\n"), ParseError);
    EXPECT_THROW(ansatz_from_text("2 0\nRX 0 weight:1\n"), ParseError);
    EXPECT_THROW(ansatz_from_text("2 2\nRX 0 param:0\n"), ParseError);
    EXPECT_THROW(ansatz_from_json(nlohmann::json{{"gates", nlohmann::json::array()}}), ParseError);
    EXPECT_THROW(ansatz_from_json(nlohmann::json::parse(
                     R"({"n_qubits":1,"gates":[{"kind":"RX","wires":[0],"binding":{"type":"bogus"}}]})")),
                 ParseError);
}
