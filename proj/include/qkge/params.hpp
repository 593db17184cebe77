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
 * Trainable angle storage for entities and relations, plus optimizer state.
 *
 * Each entity owns one angle tensor of shape [entity_layers][n_qubits][3]
 * and each relation one of shape [relation_layers][n_qubits][3], stored
 * flat in [layer][qubit][phi, theta, omega] order. Adam moments and step
 * counters mirror the angle geometry so sparse updates stay per-parameter.
 */
#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "ansatz.hpp"
#include "circuit.hpp"
#include "errors.hpp"
#include "rng.hpp"

namespace qkge {

/// Angle tensor shapes shared by all entities and all relations.
struct ParamShapes {
    AnsatzShape entity;
    AnsatzShape relation;

    bool operator==(const ParamShapes &) const = default;
};

inline void check_shapes(const ParamShapes &shapes) {
    if (shapes.entity.n_qubits != shapes.relation.n_qubits) {
        throw ParameterError("entity and relation circuits must act on the "
                             "same register");
    }
    if (shapes.entity.n_qubits == 0) {
        throw ParameterError("ansatz needs at least 1 qubit");
    }
}

/// All trainable angles plus per-parameter Adam moments and step counters.
/// Outer index is the dense entity/relation id; inner vectors are flat
/// [layer][qubit][phi, theta, omega] tensors of uniform length.
struct ParameterStore {
    ParamShapes shapes;
    std::vector<std::vector<double>> entity_angles;
    std::vector<std::vector<double>> relation_angles;
    std::vector<std::vector<double>> entity_m;
    std::vector<std::vector<double>> entity_v;
    std::vector<std::vector<double>> relation_m;
    std::vector<std::vector<double>> relation_v;
    std::vector<std::vector<std::uint64_t>> entity_steps;
    std::vector<std::vector<std::uint64_t>> relation_steps;

    std::int32_t n_entities() const {
        return static_cast<std::int32_t>(entity_angles.size());
    }
    std::int32_t n_relations() const {
        return static_cast<std::int32_t>(relation_angles.size());
    }

    void check_owner(const ParamOwner &owner) const {
        const std::int32_t count =
            owner.kind == OwnerKind::Entity ? n_entities() : n_relations();
        if (owner.id < 0 || owner.id >= count) {
            throw LookupError("unknown " + owner_name(owner));
        }
    }

    std::span<const double> angles(const ParamOwner &owner) const {
        check_owner(owner);
        const auto &rows = owner.kind == OwnerKind::Entity ? entity_angles
                                                           : relation_angles;
        return rows[static_cast<std::size_t>(owner.id)];
    }

    std::span<double> angles_mut(const ParamOwner &owner) {
        check_owner(owner);
        auto &rows = owner.kind == OwnerKind::Entity ? entity_angles
                                                     : relation_angles;
        return rows[static_cast<std::size_t>(owner.id)];
    }

    /// Lookup view for circuit execution. The store must outlive the
    /// returned callable.
    AngleLookup lookup() const {
        return [this](const ParamOwner &owner) { return angles(owner); };
    }

    std::size_t total_angles() const {
        return entity_angles.size() * shapes.entity.param_count() +
               relation_angles.size() * shapes.relation.param_count();
    }
};

/// Zero-filled store of the requested geometry.
inline ParameterStore make_store(std::int32_t n_entities,
                                 std::int32_t n_relations,
                                 const ParamShapes &shapes) {
    check_shapes(shapes);
    if (n_entities < 0 || n_relations < 0) {
        throw ParameterError("negative vocabulary size");
    }
    ParameterStore store;
    store.shapes = shapes;
    const std::size_t ne = static_cast<std::size_t>(n_entities);
    const std::size_t nr = static_cast<std::size_t>(n_relations);
    const std::size_t pe = shapes.entity.param_count();
    const std::size_t pr = shapes.relation.param_count();
    store.entity_angles.assign(ne, std::vector<double>(pe, 0.0));
    store.entity_m = store.entity_angles;
    store.entity_v = store.entity_angles;
    store.entity_steps.assign(ne, std::vector<std::uint64_t>(pe, 0));
    store.relation_angles.assign(nr, std::vector<double>(pr, 0.0));
    store.relation_m = store.relation_angles;
    store.relation_v = store.relation_angles;
    store.relation_steps.assign(nr, std::vector<std::uint64_t>(pr, 0));
    return store;
}

/// Draws every angle uniform in [0, 2*pi) from `rng`, entities first in id
/// order, then relations, each tensor in storage order. The generator is
/// left positioned after the last draw so callers can keep one stream.
inline ParameterStore init_params(std::int32_t n_entities,
                                  std::int32_t n_relations,
                                  const ParamShapes &shapes,
                                  std::mt19937_64 &rng) {
    ParameterStore store = make_store(n_entities, n_relations, shapes);
    for (auto &row : store.entity_angles) {
        for (double &angle : row) {
            angle = uniform_angle(rng);
        }
    }
    for (auto &row : store.relation_angles) {
        for (double &angle : row) {
            angle = uniform_angle(rng);
        }
    }
    return store;
}

inline ParameterStore init_params(std::int32_t n_entities,
                                  std::int32_t n_relations,
                                  const ParamShapes &shapes,
                                  std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return init_params(n_entities, n_relations, shapes, rng);
}

} // namespace qkge
