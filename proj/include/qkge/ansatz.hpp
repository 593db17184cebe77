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
 * Strongly-entangling layered circuits for entities and relations.
 *
 * One layer = a three-angle Rot on every qubit, then a full CNOT ring with
 * control q and target (q + r) mod n, where the range r cycles through
 * 1 .. n-1 layer by layer. Angles are consumed in [layer][qubit][phi,
 * theta, omega] order, matching the flat tensor layout used everywhere.
 *
 * Entity circuits prepend an unconditional Hadamard on every data qubit;
 * relation circuits apply the layers alone.
 */
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "circuit.hpp"
#include "gates.hpp"

namespace qkge {

struct AnsatzShape {
    std::uint32_t n_qubits = 0;
    std::uint32_t n_layers = 0;

    std::size_t param_count() const {
        return static_cast<std::size_t>(3) * n_layers * n_qubits;
    }
};

/// CNOT ring offset used by layer `layer`; 0 means no entanglers (n == 1).
inline std::uint32_t ring_range(const AnsatzShape &shape, std::uint32_t layer) {
    if (shape.n_qubits <= 1) {
        return 0;
    }
    return (layer % (shape.n_qubits - 1)) + 1;
}

namespace detail {

// Angles come either from a literal span or, when owner != nullptr, from
// slots into the owner's flat tensor; exactly one source is set.
inline CircuitSpec
entangling_layers_impl(const AnsatzShape &shape, std::span<const double> angles,
                       const ParamOwner *owner,
                       const std::vector<ConditionBit> &condition) {
    if (shape.n_qubits == 0) {
        throw SizeError("ansatz needs at least one qubit");
    }
    if (owner == nullptr && angles.size() != shape.param_count()) {
        throw ParameterError("entangling_layers: expected " +
                             std::to_string(shape.param_count()) +
                             " angles, got " + std::to_string(angles.size()));
    }
    CircuitSpec circuit;
    circuit.n_qubits = shape.n_qubits;
    const std::uint32_t n = shape.n_qubits;
    for (std::uint32_t layer = 0; layer < shape.n_layers; ++layer) {
        for (std::uint32_t q = 0; q < n; ++q) {
            const std::size_t base =
                (static_cast<std::size_t>(layer) * n + q) * 3;
            if (owner != nullptr) {
                circuit.param_slots.emplace(circuit.gates.size(),
                                            ParamSlot{*owner, base});
                circuit.gates.push_back(make_rot(q, 0.0, 0.0, 0.0, condition));
            } else {
                circuit.gates.push_back(make_rot(q, angles[base],
                                                 angles[base + 1],
                                                 angles[base + 2], condition));
            }
        }
        const std::uint32_t range = ring_range(shape, layer);
        if (range == 0) {
            continue; // single-qubit ansatz has no entanglers
        }
        for (std::uint32_t q = 0; q < n; ++q) {
            circuit.gates.push_back(make_cnot(q, (q + range) % n, condition));
        }
    }
    return circuit;
}

} // namespace detail

/// Layered ansatz with literal angles.
inline CircuitSpec
entangling_layers(const AnsatzShape &shape, std::span<const double> angles,
                  const std::vector<ConditionBit> &condition = {}) {
    return detail::entangling_layers_impl(shape, angles, nullptr, condition);
}

/// Layered ansatz whose angles are slots into `owner`'s tensor.
inline CircuitSpec
entangling_layers(const AnsatzShape &shape, const ParamOwner &owner,
                  const std::vector<ConditionBit> &condition = {}) {
    return detail::entangling_layers_impl(shape, {}, &owner, condition);
}

namespace detail {

inline CircuitSpec entity_prep_impl(const AnsatzShape &shape,
                                    CircuitSpec layers) {
    CircuitSpec circuit;
    circuit.n_qubits = shape.n_qubits;
    // The Hadamard layer is common to every batch branch and therefore
    // never conditioned.
    for (std::uint32_t q = 0; q < shape.n_qubits; ++q) {
        circuit.gates.push_back(make_hadamard(q));
    }
    append_circuit(circuit, layers);
    return circuit;
}

} // namespace detail

/// Entity state preparation: H on every data qubit, then the layers.
inline CircuitSpec entity_prep(const AnsatzShape &shape,
                               std::span<const double> angles,
                               const std::vector<ConditionBit> &condition = {}) {
    return detail::entity_prep_impl(shape,
                                    entangling_layers(shape, angles, condition));
}

inline CircuitSpec entity_prep(const AnsatzShape &shape,
                               const ParamOwner &owner,
                               const std::vector<ConditionBit> &condition = {}) {
    return detail::entity_prep_impl(shape,
                                    entangling_layers(shape, owner, condition));
}

} // namespace qkge
