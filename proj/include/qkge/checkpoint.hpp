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
 * Versioned JSON checkpoints.
 *
 * Angle tensors serialize as nested [layer][qubit][phi, theta, omega]
 * arrays. Doubles round-trip bit-exactly (shortest-representation dump,
 * exact parse), object keys serialize sorted, so identical runs produce
 * identical bytes.
 */
#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ansatz.hpp"
#include "data.hpp"
#include "errors.hpp"
#include "params.hpp"
#include "train.hpp"

namespace qkge {

inline constexpr int kCheckpointVersion = 1;
inline constexpr const char *kCheckpointKind = "qkge-checkpoint";

inline void to_json(nlohmann::json &j, const TrainConfig &config) {
    j = nlohmann::json{
        {"n_qubits", config.n_qubits},
        {"entity_layers", config.entity_layers},
        {"relation_layers", config.relation_layers},
        {"learning_rate", config.learning_rate},
        {"epochs", config.epochs},
        {"batch_size", config.batch_size},
        {"negatives_per_positive", config.negatives_per_positive},
        {"seed", config.seed},
        {"gradient_mode", gradient_mode_name(config.gradient_mode)},
        {"batched_scoring", config.batched_scoring},
        {"corrupt_heads", config.corrupt_heads},
        {"threads", config.threads},
    };
}

inline void from_json(const nlohmann::json &j, TrainConfig &config) {
    j.at("n_qubits").get_to(config.n_qubits);
    j.at("entity_layers").get_to(config.entity_layers);
    j.at("relation_layers").get_to(config.relation_layers);
    j.at("learning_rate").get_to(config.learning_rate);
    j.at("epochs").get_to(config.epochs);
    j.at("batch_size").get_to(config.batch_size);
    j.at("negatives_per_positive").get_to(config.negatives_per_positive);
    j.at("seed").get_to(config.seed);
    config.gradient_mode =
        parse_gradient_mode(j.at("gradient_mode").get<std::string>());
    j.at("batched_scoring").get_to(config.batched_scoring);
    j.at("corrupt_heads").get_to(config.corrupt_heads);
    j.at("threads").get_to(config.threads);
}

namespace detail {

/// Flat angle tensor -> nested [layer][qubit][3] JSON array.
inline nlohmann::json angles_to_json(const std::vector<double> &flat,
                                     const AnsatzShape &shape) {
    nlohmann::json layers = nlohmann::json::array();
    std::size_t idx = 0;
    for (std::uint32_t l = 0; l < shape.n_layers; ++l) {
        nlohmann::json qubits = nlohmann::json::array();
        for (std::uint32_t q = 0; q < shape.n_qubits; ++q) {
            qubits.push_back(nlohmann::json::array(
                {flat[idx], flat[idx + 1], flat[idx + 2]}));
            idx += 3;
        }
        layers.push_back(std::move(qubits));
    }
    return layers;
}

inline std::vector<double> angles_from_json(const nlohmann::json &j,
                                            const AnsatzShape &shape) {
    if (!j.is_array() || j.size() != shape.n_layers) {
        throw CheckpointError("angle tensor has wrong layer count");
    }
    std::vector<double> flat;
    flat.reserve(shape.param_count());
    for (const nlohmann::json &layer : j) {
        if (!layer.is_array() || layer.size() != shape.n_qubits) {
            throw CheckpointError("angle tensor has wrong qubit count");
        }
        for (const nlohmann::json &angles : layer) {
            if (!angles.is_array() || angles.size() != 3) {
                throw CheckpointError("angle triple has wrong arity");
            }
            for (const nlohmann::json &angle : angles) {
                flat.push_back(angle.get<double>());
            }
        }
    }
    return flat;
}

inline nlohmann::json
tensor_list_to_json(const std::vector<std::vector<double>> &rows,
                    const AnsatzShape &shape) {
    nlohmann::json out = nlohmann::json::array();
    for (const std::vector<double> &row : rows) {
        out.push_back(angles_to_json(row, shape));
    }
    return out;
}

inline std::vector<std::vector<double>>
tensor_list_from_json(const nlohmann::json &j, const AnsatzShape &shape,
                      std::size_t expected_rows) {
    if (!j.is_array() || j.size() != expected_rows) {
        throw CheckpointError("tensor list length does not match the "
                              "vocabulary");
    }
    std::vector<std::vector<double>> rows;
    rows.reserve(expected_rows);
    for (const nlohmann::json &row : j) {
        rows.push_back(angles_from_json(row, shape));
    }
    return rows;
}

} // namespace detail

/// Everything needed to resume or evaluate a run.
struct Checkpoint {
    TrainConfig config;
    Vocabulary vocab;
    ParameterStore store;
    std::string rng_state; // serialized generator, empty if not recorded
};

inline nlohmann::json checkpoint_to_json(const Checkpoint &checkpoint,
                                         bool include_optimizer = true) {
    const ParameterStore &store = checkpoint.store;
    nlohmann::json j;
    j["format_version"] = kCheckpointVersion;
    j["kind"] = kCheckpointKind;
    j["config"] = checkpoint.config;
    j["vocabulary"] = {{"entities", checkpoint.vocab.entity_names},
                       {"relations", checkpoint.vocab.relation_names}};
    j["entity_angles"] =
        detail::tensor_list_to_json(store.entity_angles, store.shapes.entity);
    j["relation_angles"] = detail::tensor_list_to_json(
        store.relation_angles, store.shapes.relation);
    if (include_optimizer) {
        nlohmann::json opt;
        opt["entity_m"] = detail::tensor_list_to_json(store.entity_m,
                                                      store.shapes.entity);
        opt["entity_v"] = detail::tensor_list_to_json(store.entity_v,
                                                      store.shapes.entity);
        opt["relation_m"] = detail::tensor_list_to_json(
            store.relation_m, store.shapes.relation);
        opt["relation_v"] = detail::tensor_list_to_json(
            store.relation_v, store.shapes.relation);
        opt["entity_steps"] = store.entity_steps;
        opt["relation_steps"] = store.relation_steps;
        j["optimizer"] = std::move(opt);
    }
    j["rng"] = {{"seed", checkpoint.config.seed},
                {"state", checkpoint.rng_state}};
    return j;
}

inline Checkpoint checkpoint_from_json(const nlohmann::json &j) {
    if (!j.is_object() || !j.contains("format_version")) {
        throw CheckpointError("not a checkpoint document");
    }
    if (j.at("format_version").get<int>() != kCheckpointVersion) {
        throw CheckpointError(
            "unsupported checkpoint format version " +
            j.at("format_version").dump() + " (expected " +
            std::to_string(kCheckpointVersion) + ")");
    }
    if (j.value("kind", std::string{}) != kCheckpointKind) {
        throw CheckpointError("wrong document kind");
    }
    Checkpoint checkpoint;
    checkpoint.config = j.at("config").get<TrainConfig>();
    const nlohmann::json &vocab_json = j.at("vocabulary");
    for (const nlohmann::json &name : vocab_json.at("entities")) {
        checkpoint.vocab.add_entity(name.get<std::string>());
    }
    for (const nlohmann::json &name : vocab_json.at("relations")) {
        checkpoint.vocab.add_relation(name.get<std::string>());
    }

    const ParamShapes shapes = shapes_of(checkpoint.config);
    ParameterStore store =
        make_store(checkpoint.vocab.n_entities(),
                   checkpoint.vocab.n_relations(), shapes);
    store.entity_angles = detail::tensor_list_from_json(
        j.at("entity_angles"), shapes.entity,
        static_cast<std::size_t>(checkpoint.vocab.n_entities()));
    store.relation_angles = detail::tensor_list_from_json(
        j.at("relation_angles"), shapes.relation,
        static_cast<std::size_t>(checkpoint.vocab.n_relations()));
    if (j.contains("optimizer")) {
        const nlohmann::json &opt = j.at("optimizer");
        const std::size_t ne =
            static_cast<std::size_t>(checkpoint.vocab.n_entities());
        const std::size_t nr =
            static_cast<std::size_t>(checkpoint.vocab.n_relations());
        store.entity_m =
            detail::tensor_list_from_json(opt.at("entity_m"), shapes.entity,
                                          ne);
        store.entity_v =
            detail::tensor_list_from_json(opt.at("entity_v"), shapes.entity,
                                          ne);
        store.relation_m = detail::tensor_list_from_json(
            opt.at("relation_m"), shapes.relation, nr);
        store.relation_v = detail::tensor_list_from_json(
            opt.at("relation_v"), shapes.relation, nr);
        opt.at("entity_steps").get_to(store.entity_steps);
        opt.at("relation_steps").get_to(store.relation_steps);
        if (store.entity_steps.size() != ne ||
            store.relation_steps.size() != nr) {
            throw CheckpointError("step counters do not match the "
                                  "vocabulary");
        }
    }
    checkpoint.store = std::move(store);
    if (j.contains("rng")) {
        checkpoint.rng_state = j.at("rng").value("state", std::string{});
    }
    return checkpoint;
}

inline void save_checkpoint(const std::filesystem::path &path,
                            const Checkpoint &checkpoint,
                            bool include_optimizer = true) {
    std::ofstream out(path);
    if (!out) {
        throw CheckpointError("cannot write checkpoint file: " +
                              path.string());
    }
    out << checkpoint_to_json(checkpoint, include_optimizer).dump(1) << "\n";
    if (!out) {
        throw CheckpointError("short write to checkpoint file: " +
                              path.string());
    }
}

inline Checkpoint load_checkpoint(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw CheckpointError("cannot open checkpoint file: " +
                              path.string());
    }
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception &e) {
        throw CheckpointError("corrupt checkpoint " + path.string() + ": " +
                              e.what());
    }
    try {
        return checkpoint_from_json(j);
    } catch (const nlohmann::json::exception &e) {
        throw CheckpointError("malformed checkpoint " + path.string() +
                              ": " + e.what());
    }
}

} // namespace qkge
