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
 * Knowledge-graph vocabulary, labeled triples, TSV ingestion, and
 * negative sampling.
 *
 * Dataset files hold one triple per line, `head<TAB>relation<TAB>tail`,
 * UTF-8, trailing CR/LF stripped, blank lines ignored.
 */
#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "errors.hpp"
#include "rng.hpp"

namespace qkge {

/// Bijection between names and dense ids, insertion-ordered.
struct Vocabulary {
    std::vector<std::string> entity_names;
    std::vector<std::string> relation_names;
    std::unordered_map<std::string, std::int32_t> entity_ids;
    std::unordered_map<std::string, std::int32_t> relation_ids;

    std::int32_t n_entities() const {
        return static_cast<std::int32_t>(entity_names.size());
    }
    std::int32_t n_relations() const {
        return static_cast<std::int32_t>(relation_names.size());
    }

    std::int32_t add_entity(const std::string &name) {
        const auto it = entity_ids.find(name);
        if (it != entity_ids.end()) {
            return it->second;
        }
        const std::int32_t id = n_entities();
        entity_names.push_back(name);
        entity_ids.emplace(name, id);
        return id;
    }

    std::int32_t add_relation(const std::string &name) {
        const auto it = relation_ids.find(name);
        if (it != relation_ids.end()) {
            return it->second;
        }
        const std::int32_t id = n_relations();
        relation_names.push_back(name);
        relation_ids.emplace(name, id);
        return id;
    }

    std::optional<std::int32_t> entity_id(const std::string &name) const {
        const auto it = entity_ids.find(name);
        if (it == entity_ids.end()) {
            return std::nullopt;
        }
        return it->second;
    }

    std::optional<std::int32_t> relation_id(const std::string &name) const {
        const auto it = relation_ids.find(name);
        if (it == relation_ids.end()) {
            return std::nullopt;
        }
        return it->second;
    }
};

struct LabeledTriple {
    std::int32_t h = 0;
    std::int32_t r = 0;
    std::int32_t t = 0;
    std::uint8_t y = 1; // 1 positive, 0 negative

    bool operator==(const LabeledTriple &) const = default;
};

/// Packs (h, r, t) into one key; 21 bits per field is ample at desk scale.
inline std::uint64_t triple_key(std::int32_t h, std::int32_t r,
                                std::int32_t t) {
    return (static_cast<std::uint64_t>(h) << 42) |
           (static_cast<std::uint64_t>(r) << 21) |
           static_cast<std::uint64_t>(t);
}

using TripleSet = std::unordered_set<std::uint64_t>;

inline void insert_triples(TripleSet &set,
                           std::span<const LabeledTriple> triples) {
    for (const LabeledTriple &triple : triples) {
        set.insert(triple_key(triple.h, triple.r, triple.t));
    }
}

inline TripleSet make_triple_set(std::span<const LabeledTriple> triples) {
    TripleSet set;
    set.reserve(triples.size() * 2);
    insert_triples(set, triples);
    return set;
}

/// Loads positives (y = 1) from a TSV file, extending the vocabulary with
/// unseen names in file order. Duplicates are preserved.
inline std::vector<LabeledTriple>
load_triples(const std::filesystem::path &path, Vocabulary &vocab) {
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open dataset file: " + path.string());
    }
    std::vector<LabeledTriple> triples;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        const std::size_t tab1 = line.find('\t');
        const std::size_t tab2 =
            (tab1 == std::string::npos) ? std::string::npos
                                        : line.find('\t', tab1 + 1);
        const std::size_t tab3 =
            (tab2 == std::string::npos) ? std::string::npos
                                        : line.find('\t', tab2 + 1);
        if (tab1 == std::string::npos || tab2 == std::string::npos ||
            tab3 != std::string::npos) {
            throw DataError(path.string() + ":" + std::to_string(line_no) +
                            ": expected 3 tab-separated fields");
        }
        const std::string head = line.substr(0, tab1);
        const std::string rel = line.substr(tab1 + 1, tab2 - tab1 - 1);
        const std::string tail = line.substr(tab2 + 1);
        if (head.empty() || rel.empty() || tail.empty()) {
            throw DataError(path.string() + ":" + std::to_string(line_no) +
                            ": empty field");
        }
        LabeledTriple triple;
        triple.h = vocab.add_entity(head);
        triple.r = vocab.add_relation(rel);
        triple.t = vocab.add_entity(tail);
        triple.y = 1;
        triples.push_back(triple);
    }
    return triples;
}

/// Draws k corrupted copies of `positive` (y = 0). The replacement entity
/// differs from the original and, for up to 100 tries per negative, avoids
/// `known`; after that the inequality constraint alone suffices. With
/// `corrupt_head` set, a coin decides which side each negative corrupts;
/// otherwise only tails are replaced.
inline std::vector<LabeledTriple>
sample_negatives(const LabeledTriple &positive, const Vocabulary &vocab,
                 std::uint32_t k, std::mt19937_64 &rng, const TripleSet &known,
                 bool corrupt_head = false) {
    const std::size_t n_entities =
        static_cast<std::size_t>(vocab.n_entities());
    if (n_entities < 2) {
        throw SamplingError("negative sampling needs at least 2 entities");
    }
    std::vector<LabeledTriple> negatives;
    negatives.reserve(k);
    for (std::uint32_t i = 0; i < k; ++i) {
        const bool replace_head = corrupt_head && (rng() & 1u) != 0;
        const std::int32_t original = replace_head ? positive.h : positive.t;
        LabeledTriple negative = positive;
        negative.y = 0;
        for (int attempt = 0; attempt < 100; ++attempt) {
            const std::int32_t candidate =
                static_cast<std::int32_t>(uniform_index(rng, n_entities));
            if (candidate == original) {
                continue;
            }
            (replace_head ? negative.h : negative.t) = candidate;
            if (known.count(triple_key(negative.h, negative.r, negative.t)) ==
                0) {
                break; // found an unseen corruption
            }
        }
        if ((replace_head ? negative.h : negative.t) == original) {
            // retry cap exhausted without ever drawing a different entity;
            // force the inequality constraint
            std::int32_t candidate = original;
            while (candidate == original) {
                candidate =
                    static_cast<std::int32_t>(uniform_index(rng, n_entities));
            }
            (replace_head ? negative.h : negative.t) = candidate;
        }
        negatives.push_back(negative);
    }
    return negatives;
}

} // namespace qkge
