// Copyright 2026 The qkge Authors.

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
/**
 * @file
 * The training loop: MSE loss over fidelity scores, exact gradients via
 * the adjoint sweep (single or batched circuits), sparse Adam updates.
 *
 * Batched gradient evaluation runs one forward execution per batch. The
 * loss weights are frozen into a diagonal observable,
 *
 *     w[basis(address = i, data = 0)] = (2/D) (delta_i - y_i) 2^q,
 *
 * so a single reverse sweep yields dL/d(theta) for every parameter of
 * every branch at once.
 *
 * All randomness (init, shuffles, negative sampling) flows from one seeded
 * stream, so (seed, config, data) fully determines every checkpoint byte.
 */
#pragma once

#include <bit>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "adam.hpp"
#include "ansatz.hpp"
#include "circuit.hpp"
#include "data.hpp"
#include "errors.hpp"
#include "eval.hpp"
#include "gradient.hpp"
#include "params.hpp"
#include "rng.hpp"
#include "scoring.hpp"
#include "statevector.hpp"

namespace qkge {

enum class GradientMode : std::uint8_t {
    Exact,                // adjoint sweep, works batched and single
    ParameterShiftSingle, // two-term rule, single-triple circuits only
    FiniteDiffDebug,      // central differences, slow diagnostic oracle
};

inline std::string gradient_mode_name(GradientMode mode) {
    switch (mode) {
    case GradientMode::Exact:
        return "exact";
    case GradientMode::ParameterShiftSingle:
        return "parameter_shift_single";
    case GradientMode::FiniteDiffDebug:
        return "finite_diff_debug";
    }
    throw ConfigError("invalid gradient mode value");
}

inline GradientMode parse_gradient_mode(const std::string &name) {
    if (name == "exact") {
        return GradientMode::Exact;
    }
    if (name == "parameter_shift_single") {
        return GradientMode::ParameterShiftSingle;
    }
    if (name == "finite_diff_debug") {
        return GradientMode::FiniteDiffDebug;
    }
    throw ConfigError("unknown gradient mode \"" + name +
                      "\" (expected exact, parameter_shift_single, or "
                      "finite_diff_debug)");
}

struct TrainConfig {
    std::uint32_t n_qubits = 4;
    std::uint32_t entity_layers = 2;
    std::uint32_t relation_layers = 1;
    double learning_rate = 0.001;
    std::uint32_t epochs = 20;
    std::uint32_t batch_size = 4;
    std::uint32_t negatives_per_positive = 1;
    std::uint64_t seed = 1;
    GradientMode gradient_mode = GradientMode::Exact;
    bool batched_scoring = true;
    bool corrupt_heads = false; // mix head corruptions into negatives
    unsigned threads = 1;       // validation-metric parallelism only

    bool operator==(const TrainConfig &) const = default;
};

inline ParamShapes shapes_of(const TrainConfig &config) {
    ParamShapes shapes;
    shapes.entity = {config.n_qubits, config.entity_layers};
    shapes.relation = {config.n_qubits, config.relation_layers};
    return shapes;
}

inline AdamConfig adam_of(const TrainConfig &config) {
    AdamConfig adam;
    adam.learning_rate = config.learning_rate;
    return adam;
}

inline void validate(const TrainConfig &config) {
    check_shapes(shapes_of(config));
    if (config.n_qubits > kMaxQubits) {
        throw ConfigError("n_qubits exceeds the " +
                          std::to_string(kMaxQubits) + "-qubit limit");
    }
    if (!(config.learning_rate > 0.0) ||
        !std::isfinite(config.learning_rate)) {
        throw ConfigError("learning rate must be positive and finite");
    }
    if (config.batch_size == 0) {
        throw ConfigError("batch size must be at least 1");
    }
    if (config.batched_scoring &&
        !std::has_single_bit(config.batch_size)) {
        throw ConfigError("batch size must be a power of two when batched "
                          "scoring is on, got " +
                          std::to_string(config.batch_size));
    }
    if (config.negatives_per_positive == 0) {
        throw ConfigError("need at least 1 negative per positive");
    }
    const std::uint32_t group = 1 + config.negatives_per_positive;
    if (config.batch_size % group != 0) {
        throw ConfigError("batch size " + std::to_string(config.batch_size) +
                          " is not a multiple of the positive+negatives "
                          "group size " +
                          std::to_string(group));
    }
    if (config.gradient_mode == GradientMode::ParameterShiftSingle &&
        config.batched_scoring) {
        throw ConfigError("parameter-shift gradients require batched "
                          "scoring off (conditioned rotations violate the "
                          "two-term rule)");
    }
}

/// Mean squared error (1/D) sum (delta_i - y_i)^2.
inline double mse_loss(std::span<const double> scores,
                       std::span<const double> labels) {
    if (scores.empty() || scores.size() != labels.size()) {
        throw TrainingError("mse_loss needs equal-length nonempty inputs");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        const double diff = scores[i] - labels[i];
        sum += diff * diff;
    }
    return sum / static_cast<double>(scores.size());
}

inline std::vector<double> labels_of(std::span<const LabeledTriple> batch) {
    std::vector<double> labels;
    labels.reserve(batch.size());
    for (const LabeledTriple &triple : batch) {
        labels.push_back(static_cast<double>(triple.y));
    }
    return labels;
}

/// Loss, per-triple scores, and the sparse parameter gradient of one batch.
struct BatchGradient {
    double loss = 0.0;
    std::vector<double> scores;
    GradMap grads;
};

namespace detail {

/// Adds coef * angle_grads into the owners named by the circuit's slots.
/// Owners enter the map with a full-size zero tensor on first touch.
inline void accumulate_slotted(GradMap &grads, const CircuitSpec &circuit,
                               std::span<const double> angle_grads,
                               double coef, const ParameterStore &store) {
    const std::vector<std::optional<ParamSlot>> table =
        angle_slot_table(circuit);
    for (std::size_t a = 0; a < table.size(); ++a) {
        if (!table[a].has_value()) {
            continue;
        }
        const ParamSlot &slot = *table[a];
        auto [it, inserted] = grads.emplace(slot.owner, std::vector<double>());
        if (inserted) {
            it->second.assign(store.angles(slot.owner).size(), 0.0);
        }
        it->second[slot.base] += coef * angle_grads[a];
    }
}

inline BatchGradient
batch_gradient_exact_batched(std::span<const LabeledTriple> batch,
                             const ParameterStore &store,
                             ExecutionCounter *counter) {
    const BatchLayout layout = make_batch_layout(
        std::vector<LabeledTriple>(batch.begin(), batch.end()),
        store.shapes.entity.n_qubits);
    const CircuitSpec circuit = build_batched(layout, store.shapes);
    const AngleLookup lookup = store.lookup();
    Statevector state = zero_state(circuit.n_qubits);
    run_circuit(state, circuit, lookup);
    if (counter != nullptr) {
        counter->executions += 1;
    }
    BatchGradient out;
    out.scores = extract_scores(state, layout);
    const std::vector<double> labels = labels_of(batch);
    out.loss = mse_loss(out.scores, labels);

    const double d = static_cast<double>(batch.size());
    const double scale =
        static_cast<double>(std::size_t{1} << layout.n_address_qubits);
    std::vector<double> weights(state.amps.size(), 0.0);
    for (std::size_t i = 0; i < batch.size(); ++i) {
        const double coef =
            (2.0 / d) * (out.scores[i] - labels[i]) * scale;
        const PatternMask pm =
            compile_pattern(branch_pattern(layout, i), state.n_qubits);
        for (std::size_t b = 0; b < weights.size(); ++b) {
            if ((b & pm.mask) == pm.value) {
                weights[b] += coef;
            }
        }
    }
    const GradientResult grad =
        adjoint_gradients(circuit, lookup, weights, std::move(state));
    accumulate_slotted(out.grads, circuit, grad.angle_grads, 1.0, store);
    return out;
}

inline BatchGradient
batch_gradient_per_triple(std::span<const LabeledTriple> batch,
                          const ParameterStore &store, GradientMode mode,
                          ExecutionCounter *counter) {
    BatchGradient out;
    const std::vector<double> labels = labels_of(batch);
    const double d = static_cast<double>(batch.size());
    const AngleLookup lookup = store.lookup();
    for (std::size_t i = 0; i < batch.size(); ++i) {
        check_triple_ids(batch[i], store);
        const CircuitSpec circuit =
            build_single_circuit(batch[i], store.shapes);
        const Pattern zeros = Pattern::all_zero(circuit.n_qubits);
        const GradientResult grad =
            mode == GradientMode::ParameterShiftSingle
                ? parameter_shift_gradients(circuit, lookup, zeros)
                : gradient_exact(circuit, lookup, zeros);
        if (counter != nullptr) {
            // the unshifted forward run; shifted evaluations are counted
            // by the parameter-shift branch below
            counter->executions += 1;
            if (mode == GradientMode::ParameterShiftSingle) {
                counter->executions += 2 * grad.angle_grads.size();
            }
        }
        out.scores.push_back(grad.value);
        const double coef = (2.0 / d) * (grad.value - labels[i]);
        accumulate_slotted(out.grads, circuit, grad.angle_grads, coef, store);
    }
    out.loss = mse_loss(out.scores, labels);
    return out;
}

inline BatchGradient
batch_gradient_finite_diff(std::span<const LabeledTriple> batch,
                           const ParameterStore &store,
                           ExecutionCounter *counter) {
    constexpr double kStep = 1e-5;
    BatchGradient out;
    const std::vector<double> labels = labels_of(batch);
    const double d = static_cast<double>(batch.size());
    for (std::size_t i = 0; i < batch.size(); ++i) {
        check_triple_ids(batch[i], store);
        const CircuitSpec circuit =
            build_single_circuit(batch[i], store.shapes);
        const Pattern zeros = Pattern::all_zero(circuit.n_qubits);

        std::map<ParamOwner, std::vector<double>> overrides;
        const AngleLookup base = store.lookup();
        const AngleLookup lookup =
            [&overrides, &base](const ParamOwner &owner)
            -> std::span<const double> {
            const auto it = overrides.find(owner);
            if (it != overrides.end()) {
                return it->second;
            }
            return base(owner);
        };
        const auto probe = [&]() {
            Statevector state = zero_state(circuit.n_qubits);
            run_circuit(state, circuit, lookup);
            if (counter != nullptr) {
                counter->executions += 1;
            }
            return basis_probability(state, zeros);
        };

        const double delta = probe();
        out.scores.push_back(delta);
        const double coef = (2.0 / d) * (delta - labels[i]);

        const std::set<ParamOwner> owners = {
            {OwnerKind::Entity, batch[i].h},
            {OwnerKind::Relation, batch[i].r},
            {OwnerKind::Entity, batch[i].t},
        };
        for (const ParamOwner &owner : owners) {
            const std::span<const double> angles = store.angles(owner);
            auto [it, inserted] = out.grads.emplace(
                owner, std::vector<double>());
            if (inserted) {
                it->second.assign(angles.size(), 0.0);
            }
            std::vector<double> &probe_angles =
                overrides
                    .emplace(owner, std::vector<double>(angles.begin(),
                                                        angles.end()))
                    .first->second;
            for (std::size_t a = 0; a < probe_angles.size(); ++a) {
                const double saved = probe_angles[a];
                probe_angles[a] = saved + kStep;
                const double plus = probe();
                probe_angles[a] = saved - kStep;
                const double minus = probe();
                probe_angles[a] = saved;
                it->second[a] += coef * (plus - minus) / (2.0 * kStep);
            }
            overrides.erase(owner);
        }
    }
    out.loss = mse_loss(out.scores, labels);
    return out;
}

} // namespace detail

/// dL/d(theta) = (2/D) sum_i (delta_i - y_i) d(delta_i)/d(theta) over the
/// parameters of entities and relations present in the batch. The batched
/// circuit is used when enabled and the batch is a full power of two;
/// leftover partial batches take the per-triple path.
inline BatchGradient loss_gradient(std::span<const LabeledTriple> batch,
                                   const ParameterStore &store,
                                   const TrainConfig &config,
                                   ExecutionCounter *counter = nullptr) {
    if (batch.empty()) {
        throw TrainingError("gradient of an empty batch");
    }
    switch (config.gradient_mode) {
    case GradientMode::Exact:
        if (config.batched_scoring && std::has_single_bit(batch.size())) {
            return detail::batch_gradient_exact_batched(batch, store,
                                                        counter);
        }
        return detail::batch_gradient_per_triple(batch, store,
                                                 GradientMode::Exact,
                                                 counter);
    case GradientMode::ParameterShiftSingle:
        return detail::batch_gradient_per_triple(
            batch, store, GradientMode::ParameterShiftSingle, counter);
    case GradientMode::FiniteDiffDebug:
        return detail::batch_gradient_finite_diff(batch, store, counter);
    }
    throw ConfigError("invalid gradient mode value");
}

struct EpochLog {
    std::uint32_t epoch = 0; // 1-based
    double mean_loss = 0.0;
    double valid_mrr = 0.0;
    double wall_seconds = 0.0;
    std::uint64_t circuit_executions = 0; // this epoch's training runs
};

struct TrainResult {
    ParameterStore store;
    std::vector<EpochLog> log;
};

/// Invoked after each epoch with the fresh log record, the updated store,
/// and the serialized RNG state (for resumable checkpoints).
using EpochCallback = std::function<void(
    const EpochLog &, const ParameterStore &, const std::string &)>;

inline std::string rng_state_string(const std::mt19937_64 &rng) {
    std::ostringstream out;
    out << rng;
    return out.str();
}

/// Full training run. Each epoch shuffles the positives, pairs every
/// positive with its freshly sampled negatives, walks batches of
/// `batch_size` triples, and applies one Adam step per batch. Validation
/// MRR is logged per epoch (no early stopping).
inline TrainResult train(const TrainConfig &config,
                         std::span<const LabeledTriple> train_triples,
                         std::span<const LabeledTriple> valid_triples,
                         const Vocabulary &vocab,
                         const EpochCallback &on_epoch = {}) {
    validate(config);
    if (config.epochs > 0 && train_triples.empty()) {
        throw DataError("training split is empty");
    }

    std::mt19937_64 rng(config.seed);
    ParameterStore store = init_params(vocab.n_entities(), vocab.n_relations(),
                                       shapes_of(config), rng);

    const TripleSet train_set = make_triple_set(train_triples);
    TripleSet filter_set = train_set;
    insert_triples(filter_set, valid_triples);

    const AdamConfig adam = adam_of(config);
    const std::uint32_t group = 1 + config.negatives_per_positive;
    const std::size_t groups_per_batch = config.batch_size / group;

    TrainResult result;
    ExecutionCounter counter;
    std::vector<std::size_t> order(train_triples.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        order[i] = i;
    }

    for (std::uint32_t epoch = 1; epoch <= config.epochs; ++epoch) {
        const auto t0 = std::chrono::steady_clock::now();
        const std::uint64_t executions_before = counter.executions;
        shuffle_in_place(order, rng);

        double squared_error_sum = 0.0;
        std::size_t triples_seen = 0;
        std::vector<LabeledTriple> batch;
        batch.reserve(config.batch_size);
        const auto flush = [&]() {
            if (batch.empty()) {
                return;
            }
            const BatchGradient bg =
                loss_gradient(batch, store, config, &counter);
            adam_step(store, bg.grads, adam);
            squared_error_sum +=
                bg.loss * static_cast<double>(batch.size());
            triples_seen += batch.size();
            batch.clear();
        };

        std::size_t groups_in_batch = 0;
        for (const std::size_t index : order) {
            const LabeledTriple &positive = train_triples[index];
            batch.push_back(positive);
            const std::vector<LabeledTriple> negatives = sample_negatives(
                positive, vocab, config.negatives_per_positive, rng,
                train_set, config.corrupt_heads);
            batch.insert(batch.end(), negatives.begin(), negatives.end());
            if (++groups_in_batch == groups_per_batch) {
                flush();
                groups_in_batch = 0;
            }
        }
        flush(); // leftover groups form a final short batch

        EpochLog entry;
        entry.epoch = epoch;
        entry.mean_loss =
            squared_error_sum / static_cast<double>(triples_seen);
        if (!valid_triples.empty()) {
            EvalOptions options;
            options.threads = config.threads;
            entry.valid_mrr =
                evaluate(valid_triples, store, filter_set, options)
                    .tail_metrics.mrr;
        }
        entry.circuit_executions = counter.executions - executions_before;
        entry.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                          t0)
                .count();
        result.log.push_back(entry);
        if (on_epoch) {
            on_epoch(entry, store, rng_state_string(rng));
        }
    }

    result.store = std::move(store);
    return result;
}

} // namespace qkge
