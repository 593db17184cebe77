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
#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include <qkge/circuit.hpp>
#include <qkge/gates.hpp>
#include <qkge/statevector.hpp>

#include "test_helpers.hpp"

using namespace qkge;
using Catch::Matchers::WithinAbs;

namespace {

const double kPi = std::numbers::pi;
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

void require_close(const Complex &got, const Complex &want,
                   double tol = 1e-12) {
    REQUIRE_THAT(got.real(), WithinAbs(want.real(), tol));
    REQUIRE_THAT(got.imag(), WithinAbs(want.imag(), tol));
}

} // namespace

TEST_CASE("Hadamard on qubit 0 makes |+>", "[gates]") {
    Statevector state = zero_state(1);
    apply_hadamard(state, 0, ConditionMask{});
    require_close(state.amps[0], Complex{kInvSqrt2, 0.0});
    require_close(state.amps[1], Complex{kInvSqrt2, 0.0});
}

TEST_CASE("Rot(0, pi, 0) flips |0> to |1>", "[gates]") {
    Statevector state = zero_state(1);
    apply_single_qubit(state, 0, rot_matrix(0.0, kPi, 0.0), ConditionMask{});
    require_close(state.amps[0], Complex{0.0, 0.0});
    require_close(state.amps[1], Complex{1.0, 0.0});
}

TEST_CASE("CNOT(0, 1) maps |10> to |11>", "[gates]") {
    Statevector state = zero_state(2);
    state.amps[0] = Complex{0.0, 0.0};
    state.amps[0b10] = Complex{1.0, 0.0}; // |10>: qubit 0 set
    apply_cnot(state, 0, 1, ConditionMask{});
    require_close(state.amps[0b10], Complex{0.0, 0.0});
    require_close(state.amps[0b11], Complex{1.0, 0.0});
}

TEST_CASE("CNOT leaves control-clear states alone", "[gates]") {
    Statevector state = zero_state(2); // |00>
    apply_cnot(state, 0, 1, ConditionMask{});
    require_close(state.amps[0], Complex{1.0, 0.0});
}

TEST_CASE("rot_matrix follows the RZ.RY.RZ convention", "[gates]") {
    // Spot angles plus a seeded sweep, against a 2x2 product assembled
    // independently in the test.
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 25; ++trial) {
        const double phi = trial == 0 ? 0.0 : uniform_angle(rng);
        const double theta = trial == 0 ? kPi : uniform_angle(rng);
        const double omega = trial == 0 ? 0.0 : uniform_angle(rng);
        const Mat2 got = rot_matrix(phi, theta, omega);
        const auto want = qkge_test::oracle_rot(phi, theta, omega);
        for (int k = 0; k < 4; ++k) {
            require_close(got[static_cast<std::size_t>(k)],
                          want[static_cast<std::size_t>(k)]);
        }
    }
}

TEST_CASE("dagger inverts a rotation", "[gates]") {
    const Mat2 m = rot_matrix(0.3, 1.1, -0.7);
    const Mat2 d = dagger(m);
    // m . d == identity.
    require_close(m[0] * d[0] + m[1] * d[2], Complex{1.0, 0.0});
    require_close(m[0] * d[1] + m[1] * d[3], Complex{0.0, 0.0});
    require_close(m[2] * d[0] + m[3] * d[2], Complex{0.0, 0.0});
    require_close(m[2] * d[1] + m[3] * d[3], Complex{1.0, 0.0});
}

TEST_CASE("conditioned rotation acts only on the matching branch",
          "[gates]") {
    // 3 qubits, address = qubit 2 (least significant bit). Input
    // (|addr=0, data=00> + |addr=1, data=00>)/sqrt(2).
    Statevector state = zero_state(3);
    state.amps[0b000] = Complex{kInvSqrt2, 0.0};
    state.amps[0b001] = Complex{kInvSqrt2, 0.0};

    GateOp gate = make_rot(0, 0.0, kPi, 0.0, {{2, 1}});
    const Statevector input = state;
    const ConditionMask cond = gate_condition(gate, state.n_qubits);
    REQUIRE(cond.mask == 0b001);
    REQUIRE(cond.value == 0b001);
    apply_single_qubit(state, 0, rot_matrix(0.0, kPi, 0.0), cond);

    // Branch addr=0 untouched, branch addr=1 got its target flipped.
    require_close(state.amps[0b000], Complex{kInvSqrt2, 0.0});
    require_close(state.amps[0b001], Complex{0.0, 0.0});
    require_close(state.amps[0b101], Complex{kInvSqrt2, 0.0});

    // Same input through the dense 8x8 matrix oracle.
    CircuitSpec circuit;
    circuit.n_qubits = 3;
    circuit.gates.push_back(gate);
    const auto oracle = qkge_test::matvec(
        qkge_test::dense_unitary(circuit),
        {input.amps.begin(), input.amps.end()});
    for (std::size_t i = 0; i < 8; ++i) {
        require_close(state.amps[i], oracle[i], 1e-12);
    }
}

TEST_CASE("conditioned-gate locality leaves mismatched branches bit-identical",
          "[gates]") {
    std::mt19937_64 rng(33);
    // Random 4-qubit state; qubit 3 is the address wire.
    const CircuitSpec prep = qkge_test::random_circuit(rng, 4, 14);
    Statevector state = zero_state(4);
    run_circuit(state, prep);
    const Statevector before = state;

    CircuitSpec conditioned;
    conditioned.n_qubits = 4;
    conditioned.gates.push_back(make_rot(1, 0.4, 1.9, 2.6, {{3, 1}}));
    conditioned.gates.push_back(make_hadamard(0, {{3, 1}}));
    conditioned.gates.push_back(make_cnot(0, 2, {{3, 1}}));
    run_circuit(state, conditioned);

    const std::uint64_t addr_mask = qubit_mask(4, 3);
    for (std::size_t i = 0; i < state.amps.size(); ++i) {
        if ((i & addr_mask) == 0) {
            // off-branch amplitudes are exactly the input bits
            REQUIRE(state.amps[i] == before.amps[i]);
        }
    }
}

TEST_CASE("gate application rejects condition overlapping the target",
          "[gates]") {
    Statevector state = zero_state(2);
    const GateOp gate = make_rot(0, 0.1, 0.2, 0.3, {{0, 1}});
    REQUIRE_THROWS_AS(gate_condition(gate, state.n_qubits), CircuitError);
}

TEST_CASE("norm is preserved across random gate sequences", "[gates]") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const std::uint32_t n = 2 + static_cast<std::uint32_t>(
                                        uniform_index(rng, 4));
        const CircuitSpec circuit =
            qkge_test::random_circuit(rng, n, 30, /*n_conditioned=*/6);
        Statevector state = zero_state(n);
        run_circuit(state, circuit);
        REQUIRE_THAT(norm_sqr(state), WithinAbs(1.0, 1e-10));
    }
}
