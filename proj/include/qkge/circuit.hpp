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
 * Ordered gate lists with parameter slots, execution, and inversion.
 *
 * A Rot gate either carries three literal angles or, when its position
 * appears in `param_slots`, reads three consecutive values from the owning
 * parameter tensor at run time. Owners are opaque (kind, id) pairs so the
 * simulator stays independent of the embedding model.
 */
#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gates.hpp"
#include "statevector.hpp"

namespace qkge {

enum class OwnerKind : std::uint8_t { Entity = 0, Relation = 1 };

/// Identifies the tensor a slotted rotation reads from.
struct ParamOwner {
    OwnerKind kind = OwnerKind::Entity;
    std::int32_t id = 0;

    auto operator<=>(const ParamOwner &) const = default;
};

inline std::string owner_name(const ParamOwner &owner) {
    return (owner.kind == OwnerKind::Entity ? "entity " : "relation ") +
           std::to_string(owner.id);
}

/// Three consecutive angles starting at `base` in the owner's flat tensor.
struct ParamSlot {
    ParamOwner owner;
    std::size_t base = 0;

    bool operator==(const ParamSlot &) const = default;
};

/// Maps an owner to its flat angle tensor. An empty function means no
/// parameters are available.
using AngleLookup = std::function<std::span<const double>(const ParamOwner &)>;

struct CircuitSpec {
    std::uint32_t n_qubits = 0;
    std::vector<GateOp> gates;
    std::map<std::size_t, ParamSlot> param_slots; // gate position -> slot

    bool operator==(const CircuitSpec &) const = default;
};

inline std::size_t rot_gate_count(const CircuitSpec &circuit) {
    std::size_t n = 0;
    for (const GateOp &g : circuit.gates) {
        n += (g.kind == GateKind::Rot) ? 1 : 0;
    }
    return n;
}

/// Number of rotation angles in the circuit (3 per Rot gate).
inline std::size_t angle_count(const CircuitSpec &circuit) {
    return 3 * rot_gate_count(circuit);
}

/// Angles for the Rot gate at `pos`: literal, or read through `lookup`.
inline std::array<double, 3> resolved_angles(const CircuitSpec &circuit,
                                             std::size_t pos,
                                             const AngleLookup &lookup) {
    const auto it = circuit.param_slots.find(pos);
    if (it == circuit.param_slots.end()) {
        return circuit.gates[pos].angles;
    }
    const ParamSlot &slot = it->second;
    if (!lookup) {
        throw ParameterError("unresolved param slot at gate " +
                             std::to_string(pos) + " (owner " +
                             owner_name(slot.owner) + ")");
    }
    const std::span<const double> params = lookup(slot.owner);
    if (params.data() == nullptr || slot.base + 3 > params.size()) {
        throw ParameterError("param slot at gate " + std::to_string(pos) +
                             " reads past the tensor of " +
                             owner_name(slot.owner));
    }
    return {params[slot.base], params[slot.base + 1], params[slot.base + 2]};
}

/// Applies one gate of the circuit with resolved angles; `invert` applies
/// the gate's adjoint instead.
inline void apply_circuit_gate(Statevector &state, const CircuitSpec &circuit,
                               std::size_t pos, const AngleLookup &lookup,
                               bool invert = false) {
    const GateOp &gate = circuit.gates[pos];
    const ConditionMask cond = gate_condition(gate, state.n_qubits);
    switch (gate.kind) {
    case GateKind::Hadamard:
        apply_hadamard(state, gate.target, cond);
        break;
    case GateKind::Cnot:
        apply_cnot(state, gate.control, gate.target, cond);
        break;
    case GateKind::Rot: {
        const std::array<double, 3> a = resolved_angles(circuit, pos, lookup);
        Mat2 m = rot_matrix(a[0], a[1], a[2]);
        if (gate.adjoint != invert) {
            m = dagger(m);
        }
        apply_single_qubit(state, gate.target, m, cond);
        break;
    }
    }
}

/// Runs every gate in order. Slots resolve through `lookup`; a slotted gate
/// without a lookup is a parameter error.
inline void run_circuit(Statevector &state, const CircuitSpec &circuit,
                        const AngleLookup &lookup = {}) {
    if (circuit.n_qubits != state.n_qubits) {
        throw CircuitError("circuit register (" +
                           std::to_string(circuit.n_qubits) +
                           " qubits) does not match state (" +
                           std::to_string(state.n_qubits) + ")");
    }
    for (std::size_t pos = 0; pos < circuit.gates.size(); ++pos) {
        apply_circuit_gate(state, circuit, pos, lookup);
    }
}

/// Gate-for-gate inverse: order reversed, each Rot adjointed, conditions
/// preserved. H and CNOT are self-inverse. inverse(inverse(c)) == c.
inline CircuitSpec inverse(const CircuitSpec &circuit) {
    CircuitSpec out;
    out.n_qubits = circuit.n_qubits;
    const std::size_t n = circuit.gates.size();
    out.gates.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        GateOp gate = circuit.gates[n - 1 - k];
        if (gate.kind == GateKind::Rot) {
            gate.adjoint = !gate.adjoint;
        }
        out.gates.push_back(std::move(gate));
    }
    for (const auto &[pos, slot] : circuit.param_slots) {
        out.param_slots.emplace(n - 1 - pos, slot);
    }
    return out;
}

/// Appends `src` to `dst`, shifting slot positions.
inline void append_circuit(CircuitSpec &dst, const CircuitSpec &src) {
    if (dst.n_qubits != src.n_qubits) {
        throw CircuitError("cannot append a " + std::to_string(src.n_qubits) +
                           "-qubit circuit to a " +
                           std::to_string(dst.n_qubits) + "-qubit circuit");
    }
    const std::size_t offset = dst.gates.size();
    dst.gates.insert(dst.gates.end(), src.gates.begin(), src.gates.end());
    for (const auto &[pos, slot] : src.param_slots) {
        dst.param_slots.emplace(offset + pos, slot);
    }
}

/// Copy of the circuit with every slot baked into literal angles.
inline CircuitSpec resolve_literals(const CircuitSpec &circuit,
                                    const AngleLookup &lookup) {
    CircuitSpec out = circuit;
    for (const auto &[pos, slot] : circuit.param_slots) {
        (void)slot;
        out.gates[pos].angles = resolved_angles(circuit, pos, lookup);
    }
    out.param_slots.clear();
    return out;
}

} // namespace qkge
