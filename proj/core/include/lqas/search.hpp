#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lqas/circuit.hpp"
#include "lqas/training.hpp"

namespace lqas {

/// Per-gate Bernoulli probabilities of the four local actions. They are
/// independent knobs and need not sum to one.
struct ModificationProbs {
    double p_add = 0.1;
    double p_remove = 0.1;
    double p_switch = 0.1;
    double p_move = 0.1;

    void check() const;
};

/// Actions are tried in this order for each eligible gate; the first
/// Bernoulli success is applied and the rest are not drawn.
enum class Action : std::uint8_t { Add, Remove, Switch, Move };

std::string_view to_string(Action action) noexcept;
std::optional<Action> parse_action(std::string_view name) noexcept;

/// One applied action, addressed by the gate's position in the parent.
///
/// Add: insert `kind` on `wires` right after the parent gate.
/// Switch: the gate becomes `kind`. Move: the gate now acts on `wires`.
/// Remove uses neither field.
struct Modification {
    Action action = Action::Add;
    std::size_t position = 0;
    GateKind kind = GateKind::RX;
    std::array<std::size_t, 2> wires{0, 0};

    friend bool operator==(const Modification&, const Modification&) = default;
};

/// Ordered by position; at most one entry per parent gate.
using ModificationLog = std::vector<Modification>;

struct SampledAnsatz {
    Ansatz ansatz;
    ModificationLog log;
};

/// Walks the non-encoding gates of `parent` in temporal order and samples at
/// most one action per gate. New parametrized gates get fresh slots and the
/// result is reindexed. A move with no alternative placement (single-qubit
/// gate on a one-qubit circuit) consumes the gate's draw but changes nothing
/// and is not logged.
SampledAnsatz sample_modified(const Ansatz& parent, const ModificationProbs& probs,
                              std::uint64_t seed);

/// Rebuilds a child from its parent and log. Throws ConfigError when the log
/// does not fit the parent.
Ansatz replay_modifications(const Ansatz& parent, const ModificationLog& log);

struct ActionCounts {
    double add = 0.0;
    double remove = 0.0;
    double switch_ = 0.0;
    double move = 0.0;

    double any() const noexcept { return add + remove + switch_ + move; }
};

/// Probability of each action firing on a single eligible gate under the
/// first-success rule.
ActionCounts action_probabilities(const ModificationProbs& probs);

/// action_probabilities scaled by the number of non-encoding gates.
ActionCounts expected_action_count(const Ansatz& ansatz, const ModificationProbs& probs);

std::size_t eligible_gate_count(const Ansatz& ansatz) noexcept;

/// Deterministic per-candidate seed derived from the run's master seed.
std::uint64_t candidate_seed(std::uint64_t master_seed, std::size_t iteration,
                             std::size_t parent_index, std::size_t child_index) noexcept;

struct SearchConfig {
    int iterations = 3;
    /// Candidates sampled per iteration, shared evenly across the parents.
    int samples_total = 100;
    int top_k = 10;
    ModificationProbs probs;
    std::uint64_t master_seed = 0;
    /// Carry the parents into the next ranked pool with their recorded metrics.
    bool elitism = false;
    TrainConfig train;

    void check() const;
};

struct Candidate {
    std::size_t index = 0;
    /// Index of the parent in the previous iteration; empty for the base.
    std::optional<std::size_t> parent;
    std::uint64_t seed = 0;
    bool elite = false;
    Ansatz ansatz;
    ModificationLog log;
    TrainResult result;
    bool failed = false;
    std::string failure;
};

struct IterationReport {
    int iteration = 0;
    std::vector<Candidate> candidates;
    /// Every candidate index, ascending by validation MSE, ties by index.
    std::vector<std::size_t> ranking;

    const Candidate& best() const { return candidates.at(ranking.at(0)); }
    /// Rank (0-based) of each candidate, parallel to `candidates`.
    std::vector<std::size_t> ranks() const;
};

struct SearchResult {
    std::vector<IterationReport> iterations;
    /// Best top_k candidates of the final iteration, best first.
    std::vector<Candidate> final_top_k;
};

struct RunOptions {
    /// Worker threads used for candidate training; results do not depend on it.
    int jobs = 1;
    std::function<void(const IterationReport&)> on_iteration;
};

/// Ranks a finished pool: validation MSE ascending, non-finite last, ties by index.
std::vector<std::size_t> rank_candidates(const std::vector<Candidate>& candidates);

/// Iteration 0 trains the base ansatz. Each later iteration samples
/// samples_total children from the previous top_k (ceil(N / parents) per
/// parent, parent-major, truncated to N), retrains each from zero and ranks
/// them by validation MSE. A candidate whose training throws or produces a
/// non-finite loss is kept with failed = true and ranked last.
SearchResult run_lqas(const Ansatz& base, const Samples& train_set, const Samples& val_set,
                      const SearchConfig& cfg, const RunOptions& options = {});

}  // namespace lqas
