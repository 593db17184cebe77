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
 * Lazy (sparse) Adam. Only parameters named in the gradient map update
 * their moments and step counters; everything else is untouched, so each
 * parameter's bias correction runs on its own clock.
 */
#pragma once

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "circuit.hpp"
#include "errors.hpp"
#include "params.hpp"

namespace qkge {

struct AdamConfig {
    double learning_rate = 0.001;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

/// Sparse gradient: owner -> flat gradient tensor in angle storage order.
/// std::map keeps update order deterministic across runs.
using GradMap = std::map<ParamOwner, std::vector<double>>;

/// Accumulates `src` into `dst`, summing gradients of shared owners.
inline void accumulate_grads(GradMap &dst, const GradMap &src) {
    for (const auto &[owner, grad] : src) {
        auto [it, inserted] = dst.emplace(owner, grad);
        if (inserted) {
            continue;
        }
        std::vector<double> &sum = it->second;
        if (sum.size() != grad.size()) {
            throw TrainingError("gradient size mismatch for " +
                                owner_name(owner));
        }
        for (std::size_t i = 0; i < grad.size(); ++i) {
            sum[i] += grad[i];
        }
    }
}

/// One bias-corrected Adam step over the owners present in `grads`.
inline void adam_step(ParameterStore &store, const GradMap &grads,
                      const AdamConfig &config) {
    for (const auto &[owner, grad] : grads) {
        store.check_owner(owner);
        const std::size_t id = static_cast<std::size_t>(owner.id);
        const bool entity = owner.kind == OwnerKind::Entity;
        std::vector<double> &theta =
            entity ? store.entity_angles[id] : store.relation_angles[id];
        std::vector<double> &m =
            entity ? store.entity_m[id] : store.relation_m[id];
        std::vector<double> &v =
            entity ? store.entity_v[id] : store.relation_v[id];
        std::vector<std::uint64_t> &steps =
            entity ? store.entity_steps[id] : store.relation_steps[id];
        if (grad.size() != theta.size()) {
            throw TrainingError("gradient size mismatch for " +
                                owner_name(owner));
        }
        for (std::size_t i = 0; i < grad.size(); ++i) {
            const double g = grad[i];
            if (!std::isfinite(g)) {
                throw TrainingError("non-finite gradient for " +
                                    owner_name(owner) + " angle " +
                                    std::to_string(i));
            }
            const std::uint64_t t = ++steps[i];
            m[i] = config.beta1 * m[i] + (1.0 - config.beta1) * g;
            v[i] = config.beta2 * v[i] + (1.0 - config.beta2) * g * g;
            const double m_hat =
                m[i] / (1.0 - std::pow(config.beta1,
                                       static_cast<double>(t)));
            const double v_hat =
                v[i] / (1.0 - std::pow(config.beta2,
                                       static_cast<double>(t)));
            theta[i] -= config.learning_rate * m_hat /
                        (std::sqrt(v_hat) + config.epsilon);
        }
    }
}

} // namespace qkge
