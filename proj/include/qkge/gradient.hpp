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
 * Exact gradients of diagonal expectation values by a reverse sweep.
 *
 * For E = <psi| diag(w) |psi> with psi = U_G ... U_1 |0>, the sweep walks
 * the circuit backwards keeping two vectors: `ket` (the state before the
 * current gate) and `lam` (the observable-weighted state pulled back
 * through the tail of the circuit). Each rotation angle contributes
 * 2 Re <lam| dU |ket>, evaluated pairwise on the gate's subspace without
 * materializing dU. The derivative of a conditioned rotation is supported
 * on the conditioned subspace only, so non-matching basis states simply
 * never enter the pair loop.
 *
 * Gradients are reported per angle instance: three per Rot gate, in
 * circuit order, with respect to the gate's stored (phi, theta, omega)
 * whether or not the gate is adjointed. Mapping instances back to shared
 * parameter tensors is the caller's job (see `slot_of_angle`).
 */
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "circuit.hpp"
#include "gates.hpp"
#include "statevector.hpp"

namespace qkge {

struct GradientResult {
    double value = 0.0;              // the expectation itself
    std::vector<double> angle_grads; // 3 per Rot gate, circuit order
};

/// Derivative matrices of the *applied* rotation with respect to the
/// stored angles. For an adjointed gate the applied matrix is
/// Rot(phi,theta,omega)^dagger, so each derivative is daggered too.
inline std::array<Mat2, 3> applied_rot_derivs(const std::array<double, 3> &a,
                                              bool adjoint) {
    std::array<Mat2, 3> d = rot_matrix_derivs(a[0], a[1], a[2]);
    if (adjoint) {
        for (Mat2 &m : d) {
            m = dagger(m);
        }
    }
    return d;
}

/// 2 Re <lam| D |ket> where D applies `d` on the gate subspace and is zero
/// outside it.
inline double pair_derivative_term(const Statevector &lam,
                                   const Statevector &ket,
                                   std::uint32_t target, const Mat2 &d,
                                   const ConditionMask &cond) {
    const std::uint64_t tmask = qubit_mask(ket.n_qubits, target);
    const std::uint64_t dim = ket.amps.size();
    Complex acc{0.0, 0.0};
    for (std::uint64_t i = 0; i < dim; ++i) {
        if ((i & tmask) != 0 || !cond.matches(i)) {
            continue;
        }
        const std::uint64_t j = i | tmask;
        const Complex k0 = ket.amps[i];
        const Complex k1 = ket.amps[j];
        acc += std::conj(lam.amps[i]) * (d[0] * k0 + d[1] * k1);
        acc += std::conj(lam.amps[j]) * (d[2] * k0 + d[3] * k1);
    }
    return 2.0 * acc.real();
}

/// Reverse sweep over a circuit whose final state is already known.
/// `diag_weights` has one real weight per basis state.
inline GradientResult adjoint_gradients(const CircuitSpec &circuit,
                                        const AngleLookup &lookup,
                                        std::span<const double> diag_weights,
                                        Statevector final_state) {
    if (diag_weights.size() != final_state.amps.size()) {
        throw SizeError("diagonal weight vector has " +
                        std::to_string(diag_weights.size()) +
                        " entries for a state of dimension " +
                        std::to_string(final_state.amps.size()));
    }

    GradientResult result;
    for (std::size_t b = 0; b < final_state.amps.size(); ++b) {
        result.value += diag_weights[b] * std::norm(final_state.amps[b]);
    }

    Statevector lam = final_state;
    for (std::size_t b = 0; b < lam.amps.size(); ++b) {
        lam.amps[b] *= diag_weights[b];
    }
    Statevector ket = std::move(final_state);

    result.angle_grads.assign(angle_count(circuit), 0.0);
    std::size_t rot_ordinal = rot_gate_count(circuit);

    for (std::size_t pos = circuit.gates.size(); pos-- > 0;) {
        const GateOp &gate = circuit.gates[pos];
        // ket becomes the state before this gate.
        apply_circuit_gate(ket, circuit, pos, lookup, /*invert=*/true);
        if (gate.kind == GateKind::Rot) {
            --rot_ordinal;
            const std::array<double, 3> a = resolved_angles(circuit, pos, lookup);
            const std::array<Mat2, 3> derivs =
                applied_rot_derivs(a, gate.adjoint);
            const ConditionMask cond = gate_condition(gate, ket.n_qubits);
            for (std::size_t j = 0; j < 3; ++j) {
                result.angle_grads[3 * rot_ordinal + j] =
                    pair_derivative_term(lam, ket, gate.target, derivs[j], cond);
            }
        }
        apply_circuit_gate(lam, circuit, pos, lookup, /*invert=*/true);
    }
    return result;
}

/// Forward run from |0...0> followed by the reverse sweep.
inline GradientResult adjoint_gradients(const CircuitSpec &circuit,
                                        const AngleLookup &lookup,
                                        std::span<const double> diag_weights) {
    Statevector psi = zero_state(circuit.n_qubits);
    run_circuit(psi, circuit, lookup);
    return adjoint_gradients(circuit, lookup, diag_weights, std::move(psi));
}

/// 0/1 weight vector selecting the basis states consistent with `pattern`.
inline std::vector<double> pattern_weights(const Pattern &pattern,
                                           std::uint32_t n_qubits) {
    const PatternMask pm = compile_pattern(pattern, n_qubits);
    std::vector<double> w(std::size_t{1} << n_qubits, 0.0);
    for (std::size_t i = 0; i < w.size(); ++i) {
        if ((i & pm.mask) == pm.value) {
            w[i] = 1.0;
        }
    }
    return w;
}

/// d basis_probability(run_circuit(|0..0>, c), pattern) / d angle for every
/// rotation angle in the circuit, computed exactly.
inline GradientResult gradient_exact(const CircuitSpec &circuit,
                                     const AngleLookup &lookup,
                                     const Pattern &pattern) {
    return adjoint_gradients(circuit, lookup,
                             pattern_weights(pattern, circuit.n_qubits));
}

/// Slot for the k-th angle instance (3 per Rot gate), if the owning gate is
/// slotted; nullopt for literal gates.
inline std::vector<std::optional<ParamSlot>>
angle_slot_table(const CircuitSpec &circuit) {
    std::vector<std::optional<ParamSlot>> table;
    table.reserve(angle_count(circuit));
    for (std::size_t pos = 0; pos < circuit.gates.size(); ++pos) {
        if (circuit.gates[pos].kind != GateKind::Rot) {
            continue;
        }
        const auto it = circuit.param_slots.find(pos);
        for (std::size_t j = 0; j < 3; ++j) {
            if (it == circuit.param_slots.end()) {
                table.emplace_back(std::nullopt);
            } else {
                table.emplace_back(
                    ParamSlot{it->second.owner, it->second.base + j});
            }
        }
    }
    return table;
}

/// Two-term parameter-shift gradients of basis_probability. Valid only for
/// unconditioned circuits; conditioned rotations violate the two-term rule.
inline GradientResult parameter_shift_gradients(const CircuitSpec &circuit,
                                                const AngleLookup &lookup,
                                                const Pattern &pattern) {
    for (const GateOp &gate : circuit.gates) {
        if (gate.kind == GateKind::Rot && !gate.condition.empty()) {
            throw CircuitError("parameter-shift gradients support "
                               "unconditioned circuits only");
        }
    }
    const CircuitSpec literal = resolve_literals(circuit, lookup);

    GradientResult result;
    {
        Statevector psi = zero_state(literal.n_qubits);
        run_circuit(psi, literal);
        result.value = basis_probability(psi, pattern);
    }
    result.angle_grads.assign(angle_count(literal), 0.0);

    constexpr double shift = 1.5707963267948966; // pi/2
    std::size_t k = 0;
    for (std::size_t pos = 0; pos < literal.gates.size(); ++pos) {
        if (literal.gates[pos].kind != GateKind::Rot) {
            continue;
        }
        for (std::size_t j = 0; j < 3; ++j) {
            double probs[2];
            for (int s = 0; s < 2; ++s) {
                CircuitSpec shifted = literal;
                shifted.gates[pos].angles[j] += (s == 0 ? shift : -shift);
                Statevector psi = zero_state(shifted.n_qubits);
                run_circuit(psi, shifted);
                probs[s] = basis_probability(psi, pattern);
            }
            result.angle_grads[3 * k + j] = 0.5 * (probs[0] - probs[1]);
        }
        ++k;
    }
    return result;
}

} // namespace qkge
