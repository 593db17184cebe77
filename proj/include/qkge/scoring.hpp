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
 * Triple scoring.
 *
 * The fidelity score of a triple (h, r, t) is
 *
 *     delta = |<0...0| prep(t)^dagger . rel(r) . prep(h) |0...0>|^2,
 *
 * read off as the all-zeros basis probability after running the composed
 * circuit. The batched path loads B = 2^q triples into orthogonal branches
 * of a q-qubit address register (one Hadamard per address qubit, every
 * branch circuit conditioned on its address value) so a single execution
 * scores the whole batch; branch i's score is 2^q times the probability of
 * (address == i, data == all zeros).
 *
 * Address qubits are indexed after the data qubits. A widened circuit keeps
 * data wires 0..n-1, so branch gates coincide with their single-triple
 * counterparts gate for gate.
 */
#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ansatz.hpp"
#include "circuit.hpp"
#include "data.hpp"
#include "errors.hpp"
#include "params.hpp"
#include "rng.hpp"
#include "statevector.hpp"

namespace qkge {

/// Geometry of one batched scoring circuit. B == 2^n_address_qubits.
struct BatchLayout {
    std::uint32_t n_data_qubits = 0;
    std::uint32_t n_address_qubits = 0;
    std::vector<LabeledTriple> batch;

    std::uint32_t n_qubits_total() const {
        return n_data_qubits + n_address_qubits;
    }
    std::size_t batch_size() const { return batch.size(); }
};

/// Address register width for a batch of B triples; B must be 2^q.
inline std::uint32_t address_qubits_for(std::size_t batch_size) {
    if (batch_size == 0 || !std::has_single_bit(batch_size)) {
        throw SizeError("batch size must be a power of two, got " +
                        std::to_string(batch_size));
    }
    return static_cast<std::uint32_t>(std::bit_width(batch_size) - 1);
}

inline BatchLayout make_batch_layout(std::vector<LabeledTriple> batch,
                                     std::uint32_t n_data_qubits) {
    BatchLayout layout;
    layout.n_data_qubits = n_data_qubits;
    layout.n_address_qubits = address_qubits_for(batch.size());
    layout.batch = std::move(batch);
    if (n_data_qubits == 0 ||
        layout.n_qubits_total() > kMaxQubits) {
        throw SizeError("batched circuit needs " +
                        std::to_string(layout.n_qubits_total()) +
                        " qubits, supported range is 1 to " +
                        std::to_string(kMaxQubits));
    }
    return layout;
}

/// Condition pinning the address register to `branch`. Address wire
/// n_data + 0 is the most significant address bit.
inline std::vector<ConditionBit> address_condition(const BatchLayout &layout,
                                                   std::size_t branch) {
    const std::uint32_t q = layout.n_address_qubits;
    std::vector<ConditionBit> condition;
    condition.reserve(q);
    for (std::uint32_t j = 0; j < q; ++j) {
        const std::uint8_t bit =
            static_cast<std::uint8_t>((branch >> (q - 1 - j)) & 1u);
        condition.push_back({layout.n_data_qubits + j, bit});
    }
    return condition;
}

/// Measurement pattern for branch readout: data all zero, address == branch.
inline Pattern branch_pattern(const BatchLayout &layout, std::size_t branch) {
    Pattern pattern = Pattern::all_zero(layout.n_qubits_total());
    const std::uint32_t q = layout.n_address_qubits;
    for (std::uint32_t j = 0; j < q; ++j) {
        if (((branch >> (q - 1 - j)) & 1u) != 0) {
            pattern.bits[layout.n_data_qubits + j] = PatternBit::One;
        }
    }
    return pattern;
}

/// Counts forward circuit executions (gradient sweeps excluded).
struct ExecutionCounter {
    std::uint64_t executions = 0;
};

/// Reinterprets `circuit` on a wider register; wire indices are unchanged.
inline CircuitSpec widened(CircuitSpec circuit, std::uint32_t n_qubits) {
    if (n_qubits < circuit.n_qubits) {
        throw CircuitError("cannot narrow a circuit");
    }
    circuit.n_qubits = n_qubits;
    return circuit;
}

namespace detail {

/// Branch body: head preparation layers, relation layers, inverted tail
/// preparation layers, all conditioned. The Hadamard pre/post layers are
/// branch-independent and live in the caller.
inline CircuitSpec branch_circuit(const LabeledTriple &triple,
                                  const ParamShapes &shapes,
                                  const std::vector<ConditionBit> &condition) {
    CircuitSpec circuit = entangling_layers(
        shapes.entity, ParamOwner{OwnerKind::Entity, triple.h}, condition);
    append_circuit(circuit,
                   entangling_layers(shapes.relation,
                                     ParamOwner{OwnerKind::Relation, triple.r},
                                     condition));
    append_circuit(circuit,
                   inverse(entangling_layers(
                       shapes.entity, ParamOwner{OwnerKind::Entity, triple.t},
                       condition)));
    return circuit;
}

} // namespace detail

/// Composed scoring circuit for `layout`: address Hadamards, data
/// Hadamards, one conditioned branch per triple, closing data Hadamards.
/// For B == 1 this is exactly the single-triple circuit.
inline CircuitSpec build_batched(const BatchLayout &layout,
                                 const ParamShapes &shapes) {
    check_shapes(shapes);
    if (shapes.entity.n_qubits != layout.n_data_qubits) {
        throw CircuitError("layout data register (" +
                           std::to_string(layout.n_data_qubits) +
                           " qubits) does not match the ansatz (" +
                           std::to_string(shapes.entity.n_qubits) + ")");
    }
    const std::uint32_t n = layout.n_data_qubits;
    const std::uint32_t total = layout.n_qubits_total();
    CircuitSpec circuit;
    circuit.n_qubits = total;
    for (std::uint32_t j = 0; j < layout.n_address_qubits; ++j) {
        circuit.gates.push_back(make_hadamard(n + j));
    }
    for (std::uint32_t d = 0; d < n; ++d) {
        circuit.gates.push_back(make_hadamard(d));
    }
    for (std::size_t i = 0; i < layout.batch.size(); ++i) {
        const std::vector<ConditionBit> condition =
            address_condition(layout, i);
        append_circuit(circuit, widened(detail::branch_circuit(
                                            layout.batch[i], shapes,
                                            condition),
                                        total));
    }
    // descending order mirrors the inverted tail preparation of the
    // single-triple composition
    for (std::uint32_t d = n; d-- > 0;) {
        circuit.gates.push_back(make_hadamard(d));
    }
    return circuit;
}

/// Single-triple scoring circuit prep(t)^dagger . rel(r) . prep(h).
inline CircuitSpec build_single_circuit(const LabeledTriple &triple,
                                        const ParamShapes &shapes) {
    return build_batched(make_batch_layout({triple}, shapes.entity.n_qubits),
                         shapes);
}

inline void check_triple_ids(const LabeledTriple &triple,
                             const ParameterStore &store) {
    store.check_owner({OwnerKind::Entity, triple.h});
    store.check_owner({OwnerKind::Relation, triple.r});
    store.check_owner({OwnerKind::Entity, triple.t});
}

/// delta(h, r, t) via one dedicated circuit execution.
inline double score_single(const LabeledTriple &triple,
                           const ParameterStore &store,
                           ExecutionCounter *counter = nullptr) {
    check_triple_ids(triple, store);
    const CircuitSpec circuit = build_single_circuit(triple, store.shapes);
    Statevector state = zero_state(circuit.n_qubits);
    run_circuit(state, circuit, store.lookup());
    if (counter != nullptr) {
        counter->executions += 1;
    }
    return basis_probability(state, Pattern::all_zero(circuit.n_qubits));
}

inline double score_single(std::int32_t h, std::int32_t r, std::int32_t t,
                           const ParameterStore &store,
                           ExecutionCounter *counter = nullptr) {
    return score_single(LabeledTriple{h, r, t, 1}, store, counter);
}

/// Per-branch scores from a batched final state: delta_i = 2^q * P(address
/// == i, data == 0). Exact probability readout, no sampling.
inline std::vector<double> extract_scores(const Statevector &state,
                                          const BatchLayout &layout) {
    if (state.n_qubits != layout.n_qubits_total()) {
        throw SizeError("state register does not match the batch layout");
    }
    const double scale =
        static_cast<double>(std::size_t{1} << layout.n_address_qubits);
    std::vector<double> scores;
    scores.reserve(layout.batch.size());
    for (std::size_t i = 0; i < layout.batch.size(); ++i) {
        scores.push_back(scale *
                         basis_probability(state, branch_pattern(layout, i)));
    }
    return scores;
}

/// Scores a whole batch with one circuit execution.
inline std::vector<double> score_batched(const BatchLayout &layout,
                                         const ParameterStore &store,
                                         ExecutionCounter *counter = nullptr) {
    for (const LabeledTriple &triple : layout.batch) {
        check_triple_ids(triple, store);
    }
    const CircuitSpec circuit = build_batched(layout, store.shapes);
    Statevector state = zero_state(circuit.n_qubits);
    run_circuit(state, circuit, store.lookup());
    if (counter != nullptr) {
        counter->executions += 1;
    }
    return extract_scores(state, layout);
}

/// Logical-resource report for one batch. N (element_count) and m (epochs)
/// are bookkeeping inputs echoed into reports when known; M = 2^n is the
/// feature count of one entity state.
struct ResourceEstimate {
    std::uint32_t batch_size = 1;
    std::uint32_t n_data_qubits = 0;
    std::uint32_t n_address_qubits = 0;
    std::uint32_t qubits_total = 0;
    std::size_t gate_count = 0;
    std::uint64_t executions_batched = 1;
    std::uint64_t executions_sequential = 1;
    std::size_t parameters_touched = 0;
    std::size_t feature_count = 0;
    std::size_t element_count = 0;
    std::uint32_t epochs = 0;
};

/// Shot-based score estimates: draws `shots` multinomial samples from the
/// joint distribution of the batched final state and estimates
/// delta_i = 2^q * (branch-i all-zero-data counts) / shots. Supports the
/// epsilon-accuracy analysis; the exact readout stays the production path.
inline std::vector<double> sample_scores(const Statevector &state,
                                         const BatchLayout &layout,
                                         std::uint64_t shots,
                                         std::mt19937_64 &rng) {
    if (state.n_qubits != layout.n_qubits_total()) {
        throw SizeError("state register does not match the batch layout");
    }
    if (shots == 0) {
        throw SamplingError("sample_scores needs at least one shot");
    }
    std::vector<PatternMask> masks;
    masks.reserve(layout.batch.size());
    for (std::size_t i = 0; i < layout.batch.size(); ++i) {
        masks.push_back(
            compile_pattern(branch_pattern(layout, i), state.n_qubits));
    }
    std::vector<std::uint64_t> counts(layout.batch.size(), 0);
    for (std::uint64_t s = 0; s < shots; ++s) {
        // inverse-CDF draw over basis states; the residual catch-all absorbs
        // rounding in the cumulative sum
        double u = uniform_unit(rng);
        std::size_t drawn = state.amps.size() - 1;
        for (std::size_t b = 0; b < state.amps.size(); ++b) {
            u -= std::norm(state.amps[b]);
            if (u < 0.0) {
                drawn = b;
                break;
            }
        }
        for (std::size_t i = 0; i < masks.size(); ++i) {
            if ((drawn & masks[i].mask) == masks[i].value) {
                counts[i] += 1;
            }
        }
    }
    const double scale =
        static_cast<double>(std::size_t{1} << layout.n_address_qubits) /
        static_cast<double>(shots);
    std::vector<double> scores;
    scores.reserve(counts.size());
    for (const std::uint64_t c : counts) {
        scores.push_back(scale * static_cast<double>(c));
    }
    return scores;
}

/// Builds the batched circuit for B synthetic distinct triples and counts
/// logical resources (conditioned gates count once each).
inline ResourceEstimate resource_estimate(std::uint32_t batch_size,
                                          std::uint32_t n_data_qubits,
                                          std::uint32_t entity_layers,
                                          std::uint32_t relation_layers) {
    ParamShapes shapes;
    shapes.entity = {n_data_qubits, entity_layers};
    shapes.relation = {n_data_qubits, relation_layers};
    check_shapes(shapes);
    std::vector<LabeledTriple> batch;
    batch.reserve(batch_size);
    for (std::uint32_t i = 0; i < batch_size; ++i) {
        batch.push_back({static_cast<std::int32_t>(2 * i),
                         static_cast<std::int32_t>(i),
                         static_cast<std::int32_t>(2 * i + 1), 1});
    }
    const BatchLayout layout =
        make_batch_layout(std::move(batch), n_data_qubits);
    const CircuitSpec circuit = build_batched(layout, shapes);
    ResourceEstimate estimate;
    estimate.batch_size = batch_size;
    estimate.n_data_qubits = n_data_qubits;
    estimate.n_address_qubits = layout.n_address_qubits;
    estimate.qubits_total = layout.n_qubits_total();
    estimate.gate_count = circuit.gates.size();
    estimate.executions_batched = 1;
    estimate.executions_sequential = batch_size;
    estimate.parameters_touched =
        static_cast<std::size_t>(batch_size) *
        (2 * shapes.entity.param_count() + shapes.relation.param_count());
    estimate.feature_count = std::size_t{1} << n_data_qubits;
    return estimate;
}

} // namespace qkge
