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
 * Gate alphabet {H, Rot, CNOT} and the in-place application kernels,
 * each optionally conditioned on an address-register basis value.
 *
 * A conditioned gate acts on basis states whose condition bits match and
 * is the identity elsewhere. Conditions are logical (a mask test on the
 * basis index), not a Toffoli decomposition.
 *
 * Rot convention: Rot(phi, theta, omega) = RZ(omega) * RY(theta) * RZ(phi)
 * with RZ(l) = diag(e^{-il/2}, e^{il/2}) and the real RY.
 */
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "statevector.hpp"

namespace qkge {

/// Row-major 2x2 complex matrix: {m00, m01, m10, m11}.
using Mat2 = std::array<Complex, 4>;

inline Mat2 dagger(const Mat2 &m) {
    return {std::conj(m[0]), std::conj(m[2]), std::conj(m[1]), std::conj(m[3])};
}

/// Rot(phi, theta, omega) as an explicit matrix.
inline Mat2 rot_matrix(double phi, double theta, double omega) {
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    const Complex e_pp = std::polar(1.0, -(phi + omega) / 2.0);
    const Complex e_pm = std::polar(1.0, (phi - omega) / 2.0);
    return {e_pp * c, -e_pm * s, std::conj(e_pm) * s, std::conj(e_pp) * c};
}

/// Elementwise derivatives of rot_matrix with respect to (phi, theta, omega).
inline std::array<Mat2, 3> rot_matrix_derivs(double phi, double theta,
                                             double omega) {
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    const Complex e_pp = std::polar(1.0, -(phi + omega) / 2.0);
    const Complex e_pm = std::polar(1.0, (phi - omega) / 2.0);
    const Complex m00 = e_pp * c;
    const Complex m01 = -e_pm * s;
    const Complex m10 = std::conj(e_pm) * s;
    const Complex m11 = std::conj(e_pp) * c;
    const Complex ih{0.0, 0.5}; // i/2

    const Mat2 d_phi = {-ih * m00, ih * m01, -ih * m10, ih * m11};
    const Mat2 d_theta = {e_pp * (-s / 2.0), -e_pm * (c / 2.0),
                          std::conj(e_pm) * (c / 2.0),
                          std::conj(e_pp) * (-s / 2.0)};
    const Mat2 d_omega = {-ih * m00, -ih * m01, ih * m10, ih * m11};
    return {d_phi, d_theta, d_omega};
}

enum class GateKind : std::uint8_t { Hadamard, Rot, Cnot };

/// One required address bit: `qubit` must read `value`.
struct ConditionBit {
    std::uint32_t qubit = 0;
    std::uint8_t value = 0;

    bool operator==(const ConditionBit &) const = default;
};

struct GateOp {
    GateKind kind = GateKind::Hadamard;
    std::uint32_t target = 0;
    std::uint32_t control = 0;           // Cnot only
    std::array<double, 3> angles{};      // Rot only: phi, theta, omega
    bool adjoint = false;                // Rot only: apply the inverse rotation
    std::vector<ConditionBit> condition; // empty = unconditional

    bool operator==(const GateOp &) const = default;
};

inline GateOp make_hadamard(std::uint32_t target,
                            std::vector<ConditionBit> condition = {}) {
    GateOp g;
    g.kind = GateKind::Hadamard;
    g.target = target;
    g.condition = std::move(condition);
    return g;
}

inline GateOp make_rot(std::uint32_t target, double phi, double theta,
                       double omega, std::vector<ConditionBit> condition = {}) {
    GateOp g;
    g.kind = GateKind::Rot;
    g.target = target;
    g.angles = {phi, theta, omega};
    g.condition = std::move(condition);
    return g;
}

inline GateOp make_cnot(std::uint32_t control, std::uint32_t target,
                        std::vector<ConditionBit> condition = {}) {
    GateOp g;
    g.kind = GateKind::Cnot;
    g.control = control;
    g.target = target;
    g.condition = std::move(condition);
    return g;
}

/// Compiled condition: index i is in the active subspace iff
/// (i & mask) == value.
struct ConditionMask {
    std::uint64_t mask = 0;
    std::uint64_t value = 0;

    bool matches(std::uint64_t index) const {
        return (index & mask) == value;
    }
};

/// Validates qubit ranges and disjointness against the gate's own wires.
inline ConditionMask compile_condition(std::span<const ConditionBit> condition,
                                       std::uint32_t n_qubits,
                                       std::uint64_t wire_mask) {
    ConditionMask cm;
    for (const ConditionBit &bit : condition) {
        if (bit.qubit >= n_qubits) {
            throw CircuitError("condition qubit " + std::to_string(bit.qubit) +
                               " out of range for " + std::to_string(n_qubits) +
                               "-qubit register");
        }
        const std::uint64_t m = qubit_mask(n_qubits, bit.qubit);
        if ((m & wire_mask) != 0) {
            throw CircuitError("condition qubit " + std::to_string(bit.qubit) +
                               " collides with a gate wire");
        }
        if ((cm.mask & m) != 0) {
            throw CircuitError("duplicate condition qubit " +
                               std::to_string(bit.qubit));
        }
        cm.mask |= m;
        if (bit.value != 0) {
            cm.value |= m;
        }
    }
    return cm;
}

inline void check_wire(std::uint32_t wire, std::uint32_t n_qubits,
                       const char *what) {
    if (wire >= n_qubits) {
        throw CircuitError(std::string(what) + " qubit " + std::to_string(wire) +
                           " out of range for " + std::to_string(n_qubits) +
                           "-qubit register");
    }
}

/// Applies a 2x2 matrix to `target` on the condition-matching subspace.
inline void apply_single_qubit(Statevector &state, std::uint32_t target,
                               const Mat2 &m, const ConditionMask &cond) {
    const std::uint64_t tmask = qubit_mask(state.n_qubits, target);
    const std::uint64_t dim = state.amps.size();
    for (std::uint64_t i = 0; i < dim; ++i) {
        if ((i & tmask) != 0 || !cond.matches(i)) {
            continue;
        }
        const std::uint64_t j = i | tmask;
        const Complex v0 = state.amps[i];
        const Complex v1 = state.amps[j];
        state.amps[i] = m[0] * v0 + m[1] * v1;
        state.amps[j] = m[2] * v0 + m[3] * v1;
    }
}

inline void apply_hadamard(Statevector &state, std::uint32_t target,
                           const ConditionMask &cond) {
    constexpr double inv_sqrt2 = 0.70710678118654752440;
    const std::uint64_t tmask = qubit_mask(state.n_qubits, target);
    const std::uint64_t dim = state.amps.size();
    for (std::uint64_t i = 0; i < dim; ++i) {
        if ((i & tmask) != 0 || !cond.matches(i)) {
            continue;
        }
        const std::uint64_t j = i | tmask;
        const Complex v0 = state.amps[i];
        const Complex v1 = state.amps[j];
        state.amps[i] = inv_sqrt2 * (v0 + v1);
        state.amps[j] = inv_sqrt2 * (v0 - v1);
    }
}

inline void apply_cnot(Statevector &state, std::uint32_t control,
                       std::uint32_t target, const ConditionMask &cond) {
    const std::uint64_t cmask = qubit_mask(state.n_qubits, control);
    const std::uint64_t tmask = qubit_mask(state.n_qubits, target);
    const std::uint64_t dim = state.amps.size();
    for (std::uint64_t i = 0; i < dim; ++i) {
        if ((i & cmask) == 0 || (i & tmask) != 0 || !cond.matches(i)) {
            continue;
        }
        std::swap(state.amps[i], state.amps[i | tmask]);
    }
}

/// Compiles and validates the gate against the register, returning the
/// condition mask used by the kernels.
inline ConditionMask gate_condition(const GateOp &gate,
                                    std::uint32_t n_qubits) {
    std::uint64_t wires = 0;
    check_wire(gate.target, n_qubits, "target");
    wires |= qubit_mask(n_qubits, gate.target);
    if (gate.kind == GateKind::Cnot) {
        check_wire(gate.control, n_qubits, "control");
        if (gate.control == gate.target) {
            throw CircuitError("CNOT control equals target");
        }
        wires |= qubit_mask(n_qubits, gate.control);
    }
    return compile_condition(gate.condition, n_qubits, wires);
}

/// Applies one gate in place, using the angles stored on the gate.
inline void apply_gate(Statevector &state, const GateOp &gate) {
    const ConditionMask cond = gate_condition(gate, state.n_qubits);
    switch (gate.kind) {
    case GateKind::Hadamard:
        apply_hadamard(state, gate.target, cond);
        break;
    case GateKind::Rot: {
        Mat2 m = rot_matrix(gate.angles[0], gate.angles[1], gate.angles[2]);
        if (gate.adjoint) {
            m = dagger(m);
        }
        apply_single_qubit(state, gate.target, m, cond);
        break;
    }
    case GateKind::Cnot:
        apply_cnot(state, gate.control, gate.target, cond);
        break;
    }
}

} // namespace qkge
