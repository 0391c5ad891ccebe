#include "lqas/search.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <thread>

#include "lqas/error.hpp"

namespace lqas {

namespace {

constexpr std::size_t kFreshSlot = std::numeric_limits<std::size_t>::max();

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

Binding binding_for(GateKind kind, const Binding& previous) {
    if (param_count(kind) == 0) {
        return Binding::none();
    }
    if (previous.type == Binding::Type::Param) {
        return previous;
    }
    return Binding::param(kFreshSlot);
}

Gate apply_switch(const Gate& g, GateKind kind) {
    Gate out = g;
    out.kind = kind;
    out.binding = binding_for(kind, g.binding);
    return out;
}

Gate make_inserted(GateKind kind, const std::array<std::size_t, 2>& wires) {
    return Gate{kind, wires, binding_for(kind, Binding::none())};
}

// Uniform choice of a different wire assignment; nullopt when none exists.
std::optional<std::array<std::size_t, 2>> sample_move(const Gate& g, std::size_t n_qubits,
                                                      std::mt19937_64& rng) {
    if (g.n_wires() == 1) {
        if (n_qubits < 2) {
            return std::nullopt;
        }
        std::uniform_int_distribution<std::size_t> pick(0, n_qubits - 2);
        std::size_t w = pick(rng);
        if (w >= g.wires[0]) {
            ++w;
        }
        return std::array<std::size_t, 2>{w, 0};
    }
    // Ordered pairs (c, t), c != t, enumerated c-major; skip the current one.
    const std::size_t n_pairs = n_qubits * (n_qubits - 1);
    if (n_pairs < 2) {
        return std::nullopt;
    }
    const std::size_t current = g.wires[0] * (n_qubits - 1) +
                                (g.wires[1] > g.wires[0] ? g.wires[1] - 1 : g.wires[1]);
    std::uniform_int_distribution<std::size_t> pick(0, n_pairs - 2);
    std::size_t code = pick(rng);
    if (code >= current) {
        ++code;
    }
    const std::size_t c = code / (n_qubits - 1);
    std::size_t t = code % (n_qubits - 1);
    if (t >= c) {
        ++t;
    }
    return std::array<std::size_t, 2>{c, t};
}

}  // namespace

void ModificationProbs::check() const {
    for (double p : {p_add, p_remove, p_switch, p_move}) {
        if (!(p >= 0.0 && p <= 1.0)) {
            throw ConfigError("modification probabilities must lie in [0, 1]");
        }
    }
}

std::string_view to_string(Action action) noexcept {
    switch (action) {
    case Action::Add: return "add";
    case Action::Remove: return "remove";
    case Action::Switch: return "switch";
    case Action::Move: return "move";
    }
    return "?";
}

std::optional<Action> parse_action(std::string_view name) noexcept {
    for (Action a : {Action::Add, Action::Remove, Action::Switch, Action::Move}) {
        if (to_string(a) == name) {
            return a;
        }
    }
    return std::nullopt;
}

SampledAnsatz sample_modified(const Ansatz& parent, const ModificationProbs& probs,
                              std::uint64_t seed) {
    probs.check();
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution add(probs.p_add);
    std::bernoulli_distribution remove(probs.p_remove);
    std::bernoulli_distribution switch_(probs.p_switch);
    std::bernoulli_distribution move(probs.p_move);

    SampledAnsatz out;
    out.ansatz.n_qubits = parent.n_qubits;
    out.ansatz.n_features = parent.n_features;
    out.ansatz.gates.reserve(parent.gates.size() + parent.gates.size() / 4);

    for (std::size_t pos = 0; pos < parent.gates.size(); ++pos) {
        const Gate& g = parent.gates[pos];
        if (g.is_encoding()) {
            out.ansatz.gates.push_back(g);
            continue;
        }
        const auto same_arity = kinds_with_arity(g.n_wires());

        if (add(rng)) {
            std::uniform_int_distribution<std::size_t> pick(0, same_arity.size() - 1);
            const GateKind kind = same_arity[pick(rng)];
            out.ansatz.gates.push_back(g);
            out.ansatz.gates.push_back(make_inserted(kind, g.wires));
            out.log.push_back({Action::Add, pos, kind, g.wires});
        } else if (remove(rng)) {
            out.log.push_back({Action::Remove, pos, g.kind, g.wires});
        } else if (switch_(rng)) {
            std::uniform_int_distribution<std::size_t> pick(0, same_arity.size() - 2);
            const auto current =
                static_cast<std::size_t>(std::find(same_arity.begin(), same_arity.end(), g.kind) -
                                         same_arity.begin());
            std::size_t choice = pick(rng);
            if (choice >= current) {
                ++choice;
            }
            const GateKind kind = same_arity[choice];
            out.ansatz.gates.push_back(apply_switch(g, kind));
            out.log.push_back({Action::Switch, pos, kind, g.wires});
        } else if (move(rng)) {
            const auto wires = sample_move(g, parent.n_qubits, rng);
            Gate moved = g;
            if (wires) {
                moved.wires = *wires;
                out.log.push_back({Action::Move, pos, g.kind, *wires});
            }
            out.ansatz.gates.push_back(moved);
        } else {
            out.ansatz.gates.push_back(g);
        }
    }
    out.ansatz = reindex_params(std::move(out.ansatz));
    return out;
}

Ansatz replay_modifications(const Ansatz& parent, const ModificationLog& log) {
    Ansatz child;
    child.n_qubits = parent.n_qubits;
    child.n_features = parent.n_features;

    auto entry = log.begin();
    for (std::size_t pos = 0; pos < parent.gates.size(); ++pos) {
        const Gate& g = parent.gates[pos];
        if (entry == log.end() || entry->position != pos) {
            child.gates.push_back(g);
            continue;
        }
        const Modification& mod = *entry++;
        if (entry != log.end() && entry->position <= pos) {
            throw ConfigError("modification log is not strictly ordered by position");
        }
        if (g.is_encoding()) {
            throw ConfigError("modification log touches encoding gate " + std::to_string(pos));
        }
        switch (mod.action) {
        case Action::Add:
            if (arity(mod.kind) != g.n_wires()) {
                throw ConfigError("add at " + std::to_string(pos) + " changes arity");
            }
            child.gates.push_back(g);
            child.gates.push_back(make_inserted(mod.kind, g.wires));
            break;
        case Action::Remove:
            break;
        case Action::Switch:
            if (arity(mod.kind) != g.n_wires()) {
                throw ConfigError("switch at " + std::to_string(pos) + " changes arity");
            }
            child.gates.push_back(apply_switch(g, mod.kind));
            break;
        case Action::Move: {
            Gate moved = g;
            moved.wires = mod.wires;
            child.gates.push_back(moved);
            break;
        }
        }
    }
    if (entry != log.end()) {
        throw ConfigError("modification log refers past the end of the parent");
    }
    return reindex_params(std::move(child));
}

ActionCounts action_probabilities(const ModificationProbs& probs) {
    probs.check();
    ActionCounts p;
    double untouched = 1.0;
    p.add = untouched * probs.p_add;
    untouched *= 1.0 - probs.p_add;
    p.remove = untouched * probs.p_remove;
    untouched *= 1.0 - probs.p_remove;
    p.switch_ = untouched * probs.p_switch;
    untouched *= 1.0 - probs.p_switch;
    p.move = untouched * probs.p_move;
    return p;
}

std::size_t eligible_gate_count(const Ansatz& ansatz) noexcept {
    return ansatz.gates.size() - ansatz.n_encoding_gates();
}

ActionCounts expected_action_count(const Ansatz& ansatz, const ModificationProbs& probs) {
    ActionCounts p = action_probabilities(probs);
    const auto n = static_cast<double>(eligible_gate_count(ansatz));
    return {p.add * n, p.remove * n, p.switch_ * n, p.move * n};
}

std::uint64_t candidate_seed(std::uint64_t master_seed, std::size_t iteration,
                             std::size_t parent_index, std::size_t child_index) noexcept {
    std::uint64_t h = splitmix64(master_seed);
    h = splitmix64(h ^ static_cast<std::uint64_t>(iteration));
    h = splitmix64(h ^ static_cast<std::uint64_t>(parent_index));
    h = splitmix64(h ^ static_cast<std::uint64_t>(child_index));
    return h;
}

void SearchConfig::check() const {
    if (iterations < 1) {
        throw ConfigError("iterations must be >= 1");
    }
    if (top_k < 1) {
        throw ConfigError("top_k must be >= 1");
    }
    if (samples_total < top_k) {
        throw ConfigError("samples_total must be >= top_k");
    }
    probs.check();
    train.check();
}

std::vector<std::size_t> IterationReport::ranks() const {
    std::vector<std::size_t> out(candidates.size());
    for (std::size_t r = 0; r < ranking.size(); ++r) {
        out[ranking[r]] = r;
    }
    return out;
}

std::vector<std::size_t> rank_candidates(const std::vector<Candidate>& candidates) {
    auto key = [&](std::size_t i) {
        const Candidate& c = candidates[i];
        const double v = c.result.validation.mse;
        return (c.failed || !std::isfinite(v)) ? std::numeric_limits<double>::infinity() : v;
    };
    std::vector<std::size_t> order(candidates.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        order[i] = i;
    }
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return key(a) < key(b); });
    return order;
}

namespace {

void mark_failed(Candidate& c, std::string reason) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    c.failed = true;
    c.failure = std::move(reason);
    c.result.train = Metrics{inf, -inf};
    c.result.validation = Metrics{inf, -inf};
}

void train_candidate(Candidate& c, const Samples& train_set, const Samples& val_set,
                     const TrainConfig& cfg) {
    try {
        c.result = train(c.ansatz, train_set, val_set, cfg);
        if (!std::isfinite(c.result.validation.mse) || !std::isfinite(c.result.train.mse)) {
            mark_failed(c, "non-finite loss");
        }
    } catch (const std::exception& e) {
        mark_failed(c, e.what());
    }
}

// Trains candidates [first, end) on up to `jobs` threads. Each candidate is
// written only by the worker that claimed it.
void train_all(std::vector<Candidate>& pool, std::size_t first, const Samples& train_set,
               const Samples& val_set, const TrainConfig& cfg, int jobs) {
    const std::size_t count = pool.size() - first;
    const auto workers = static_cast<std::size_t>(std::max(1, jobs));
    std::atomic<std::size_t> next{first};
    auto work = [&] {
        for (std::size_t i = next++; i < pool.size(); i = next++) {
            train_candidate(pool[i], train_set, val_set, cfg);
        }
    };
    if (workers == 1 || count <= 1) {
        work();
        return;
    }
    std::vector<std::jthread> threads;
    threads.reserve(std::min(workers, count) - 1);
    for (std::size_t t = 1; t < std::min(workers, count); ++t) {
        threads.emplace_back(work);
    }
    work();
}

}  // namespace

SearchResult run_lqas(const Ansatz& base, const Samples& train_set, const Samples& val_set,
                      const SearchConfig& cfg, const RunOptions& options) {
    cfg.check();
    if (auto violations = validate(base); !violations.empty()) {
        std::ostringstream msg;
        msg << "base ansatz is invalid:";
        for (const auto& v : violations) {
            msg << ' ' << v.message << ';';
        }
        throw ConfigError(msg.str());
    }

    SearchResult result;
    auto emit = [&](IterationReport report) {
        report.ranking = rank_candidates(report.candidates);
        if (options.on_iteration) {
            options.on_iteration(report);
        }
        result.iterations.push_back(std::move(report));
    };

    {
        IterationReport baseline;
        baseline.iteration = 0;
        Candidate c;
        c.seed = candidate_seed(cfg.master_seed, 0, 0, 0);
        c.ansatz = base;
        baseline.candidates.push_back(std::move(c));
        train_all(baseline.candidates, 0, train_set, val_set, cfg.train, options.jobs);
        emit(std::move(baseline));
    }

    const auto n_total = static_cast<std::size_t>(cfg.samples_total);
    const auto k = static_cast<std::size_t>(cfg.top_k);
    for (int it = 1; it <= cfg.iterations; ++it) {
        const IterationReport& prev = result.iterations.back();
        const std::size_t n_parents = std::min(k, prev.ranking.size());
        const std::size_t per_parent = (n_total + n_parents - 1) / n_parents;

        IterationReport report;
        report.iteration = it;
        report.candidates.reserve(n_total + (cfg.elitism ? n_parents : 0));
        for (std::size_t p = 0; p < n_parents && report.candidates.size() < n_total; ++p) {
            const Candidate& parent = prev.candidates[prev.ranking[p]];
            for (std::size_t j = 0; j < per_parent && report.candidates.size() < n_total; ++j) {
                Candidate c;
                c.index = report.candidates.size();
                c.parent = parent.index;
                c.seed = candidate_seed(cfg.master_seed, static_cast<std::size_t>(it), p, j);
                auto sampled = sample_modified(parent.ansatz, cfg.probs, c.seed);
                c.ansatz = std::move(sampled.ansatz);
                c.log = std::move(sampled.log);
                report.candidates.push_back(std::move(c));
            }
        }
        train_all(report.candidates, 0, train_set, val_set, cfg.train, options.jobs);

        if (cfg.elitism) {
            for (std::size_t p = 0; p < n_parents; ++p) {
                Candidate elite = prev.candidates[prev.ranking[p]];
                elite.parent = elite.index;
                elite.index = report.candidates.size();
                elite.elite = true;
                elite.log.clear();
                report.candidates.push_back(std::move(elite));
            }
        }
        emit(std::move(report));
    }

    const IterationReport& last = result.iterations.back();
    for (std::size_t r = 0; r < std::min(k, last.ranking.size()); ++r) {
        result.final_top_k.push_back(last.candidates[last.ranking[r]]);
    }
    return result;
}

}  // namespace lqas
