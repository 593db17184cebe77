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
 * Dense statevector over n qubits plus probability/overlap readout.
 *
 * Qubit 0 is the most significant bit of the basis index throughout the
 * library; this pins the amplitude layout for checkpoints and tests.
 */
#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"

namespace qkge {

using Complex = std::complex<double>;

/// Dense simulation is capped at desk scale.
inline constexpr std::uint32_t kMaxQubits = 24;

/// Bit mask selecting `qubit` inside a basis index (qubit 0 = MSB).
inline std::uint64_t qubit_mask(std::uint32_t n_qubits, std::uint32_t qubit) {
    return std::uint64_t{1} << (n_qubits - 1 - qubit);
}

struct Statevector {
    std::uint32_t n_qubits = 0;
    std::vector<Complex> amps;

    std::size_t size() const { return amps.size(); }
};

/// |0...0> on n qubits.
inline Statevector zero_state(std::uint32_t n_qubits) {
    if (n_qubits < 1 || n_qubits > kMaxQubits) {
        throw SizeError("zero_state: n_qubits must be in [1, " +
                        std::to_string(kMaxQubits) + "], got " +
                        std::to_string(n_qubits));
    }
    Statevector state;
    state.n_qubits = n_qubits;
    state.amps.assign(std::size_t{1} << n_qubits, Complex{0.0, 0.0});
    state.amps[0] = Complex{1.0, 0.0};
    return state;
}

inline double norm_sqr(const Statevector &state) {
    double acc = 0.0;
    for (const Complex &a : state.amps) {
        acc += std::norm(a);
    }
    return acc;
}

/// <a|b> = sum_k conj(a_k) * b_k.
inline Complex overlap(const Statevector &a, const Statevector &b) {
    if (a.n_qubits != b.n_qubits) {
        throw SizeError("overlap: dimension mismatch (" +
                        std::to_string(a.n_qubits) + " vs " +
                        std::to_string(b.n_qubits) + " qubits)");
    }
    Complex acc{0.0, 0.0};
    for (std::size_t k = 0; k < a.amps.size(); ++k) {
        acc += std::conj(a.amps[k]) * b.amps[k];
    }
    return acc;
}

/// Per-qubit measurement constraint.
enum class PatternBit : std::uint8_t { Zero, One, Any };

/// A basis-state pattern; one constraint per qubit, qubit order.
struct Pattern {
    std::vector<PatternBit> bits;

    static Pattern all_any(std::uint32_t n_qubits) {
        return Pattern{std::vector<PatternBit>(n_qubits, PatternBit::Any)};
    }
    static Pattern all_zero(std::uint32_t n_qubits) {
        return Pattern{std::vector<PatternBit>(n_qubits, PatternBit::Zero)};
    }
};

/// Compiled (mask, value) form of a Pattern: index i matches iff
/// (i & mask) == value.
struct PatternMask {
    std::uint64_t mask = 0;
    std::uint64_t value = 0;
};

inline PatternMask compile_pattern(const Pattern &pattern,
                                   std::uint32_t n_qubits) {
    if (pattern.bits.size() != n_qubits) {
        throw SizeError("pattern length " + std::to_string(pattern.bits.size()) +
                        " does not match register of " +
                        std::to_string(n_qubits) + " qubits");
    }
    PatternMask pm;
    for (std::uint32_t q = 0; q < n_qubits; ++q) {
        if (pattern.bits[q] == PatternBit::Any) {
            continue;
        }
        const std::uint64_t bit = qubit_mask(n_qubits, q);
        pm.mask |= bit;
        if (pattern.bits[q] == PatternBit::One) {
            pm.value |= bit;
        }
    }
    return pm;
}

/// Total probability of all basis states consistent with the pattern.
inline double basis_probability(const Statevector &state,
                                const Pattern &pattern) {
    const PatternMask pm = compile_pattern(pattern, state.n_qubits);
    double acc = 0.0;
    for (std::size_t i = 0; i < state.amps.size(); ++i) {
        if ((i & pm.mask) == pm.value) {
            acc += std::norm(state.amps[i]);
        }
    }
    return acc;
}

} // namespace qkge
