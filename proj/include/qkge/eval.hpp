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
 * Filtered link-prediction evaluation: tail ranking over all entities,
 * MRR and Hits@k, structured reports.
 *
 * Candidate scores reuse a per-run cache of prepared entity states:
 * delta(h, r, e) = |<e_state | U_r | h_state>|^2, so each (h, r) pair costs
 * one relation-circuit run plus one inner product per candidate instead of
 * one full circuit per candidate.
 */
#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "ansatz.hpp"
#include "circuit.hpp"
#include "data.hpp"
#include "errors.hpp"
#include "parallel.hpp"
#include "params.hpp"
#include "statevector.hpp"

namespace qkge {

/// Rank adjustment for score ties against the true candidate. Pessimistic
/// counts tied competitors as ahead, so a constant scorer ranks last.
enum class TiePolicy : std::uint8_t { Pessimistic, Optimistic };

inline std::string tie_policy_name(TiePolicy policy) {
    return policy == TiePolicy::Pessimistic ? "pessimistic" : "optimistic";
}

inline TiePolicy parse_tie_policy(const std::string &name) {
    if (name == "pessimistic") {
        return TiePolicy::Pessimistic;
    }
    if (name == "optimistic") {
        return TiePolicy::Optimistic;
    }
    throw ConfigError("unknown tie policy \"" + name +
                      "\" (expected pessimistic or optimistic)");
}

struct Metrics {
    double mrr = 0.0;
    double hits1 = 0.0;
    double hits10 = 0.0;
    std::vector<std::uint32_t> ranks;
    std::size_t n_evaluated = 0;
};

/// Aggregates a rank list: MRR = mean(1/rank), Hits@k = fraction(rank <= k).
inline Metrics metrics(std::vector<std::uint32_t> ranks) {
    if (ranks.empty()) {
        throw DataError("metrics need at least one rank");
    }
    Metrics out;
    out.n_evaluated = ranks.size();
    double reciprocal_sum = 0.0;
    std::size_t within1 = 0;
    std::size_t within10 = 0;
    for (const std::uint32_t rank : ranks) {
        reciprocal_sum += 1.0 / static_cast<double>(rank);
        within1 += rank <= 1 ? 1 : 0;
        within10 += rank <= 10 ? 1 : 0;
    }
    const double n = static_cast<double>(ranks.size());
    out.mrr = reciprocal_sum / n;
    out.hits1 = static_cast<double>(within1) / n;
    out.hits10 = static_cast<double>(within10) / n;
    out.ranks = std::move(ranks);
    return out;
}

/// Prepared state of every entity, built once per evaluation run and then
/// shared read-only.
struct EntityStateCache {
    std::vector<Statevector> states;
};

inline EntityStateCache build_entity_cache(const ParameterStore &store,
                                           unsigned threads = 1) {
    const std::size_t n = static_cast<std::size_t>(store.n_entities());
    EntityStateCache cache;
    cache.states.assign(n, Statevector{});
    const AngleLookup lookup = store.lookup();
    parallel_for(n, threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t e = begin; e < end; ++e) {
            const CircuitSpec prep = entity_prep(
                store.shapes.entity,
                ParamOwner{OwnerKind::Entity, static_cast<std::int32_t>(e)});
            Statevector state = zero_state(prep.n_qubits);
            run_circuit(state, prep, lookup);
            cache.states[e] = std::move(state);
        }
    });
    return cache;
}

/// delta(h, r, e) for every entity e, via one relation-circuit run on the
/// cached head state and an inner product per candidate.
inline std::vector<double> candidate_scores(std::int32_t h, std::int32_t r,
                                            const ParameterStore &store,
                                            const EntityStateCache &cache) {
    store.check_owner({OwnerKind::Entity, h});
    store.check_owner({OwnerKind::Relation, r});
    Statevector transformed = cache.states[static_cast<std::size_t>(h)];
    const CircuitSpec relation = entangling_layers(
        store.shapes.relation, ParamOwner{OwnerKind::Relation, r});
    run_circuit(transformed, relation, store.lookup());
    std::vector<double> scores(cache.states.size(), 0.0);
    for (std::size_t e = 0; e < cache.states.size(); ++e) {
        scores[e] = std::norm(overlap(cache.states[e], transformed));
    }
    return scores;
}

/// Competitors strictly above and exactly tied with the true candidate,
/// after filtering.
struct RankCounts {
    std::uint32_t greater = 0;
    std::uint32_t tied = 0;

    std::uint32_t rank(TiePolicy policy) const {
        return 1 + greater +
               (policy == TiePolicy::Pessimistic ? tied : 0);
    }
};

/// Counts filtered competitors of the true candidate. Competitors e !=
/// truth with (h, r, e) in `known` (or (e, r, t) when ranking heads) are
/// removed before counting.
inline RankCounts rank_counts(std::span<const double> scores,
                              const LabeledTriple &triple,
                              const TripleSet &known, bool rank_head) {
    const std::int32_t truth = rank_head ? triple.h : triple.t;
    const double truth_score = scores[static_cast<std::size_t>(truth)];
    RankCounts counts;
    for (std::size_t e = 0; e < scores.size(); ++e) {
        const std::int32_t candidate = static_cast<std::int32_t>(e);
        if (candidate == truth) {
            continue;
        }
        const std::uint64_t key =
            rank_head ? triple_key(candidate, triple.r, triple.t)
                      : triple_key(triple.h, triple.r, candidate);
        if (known.count(key) != 0) {
            continue;
        }
        if (scores[e] > truth_score) {
            ++counts.greater;
        } else if (scores[e] == truth_score) {
            ++counts.tied;
        }
    }
    return counts;
}

/// Filtered tail rank of one triple under the chosen tie policy.
inline std::uint32_t rank_tail(const LabeledTriple &triple,
                               const ParameterStore &store,
                               const EntityStateCache &cache,
                               const TripleSet &known,
                               TiePolicy tie_policy = TiePolicy::Pessimistic) {
    store.check_owner({OwnerKind::Entity, triple.t});
    const std::vector<double> scores =
        candidate_scores(triple.h, triple.r, store, cache);
    return rank_counts(scores, triple, known, false).rank(tie_policy);
}

/// Filtered head rank (diagnostic only; reported metrics rank tails).
inline std::uint32_t rank_head(const LabeledTriple &triple,
                               const ParameterStore &store,
                               const EntityStateCache &cache,
                               const TripleSet &known,
                               TiePolicy tie_policy = TiePolicy::Pessimistic) {
    store.check_owner({OwnerKind::Entity, triple.h});
    store.check_owner({OwnerKind::Entity, triple.t});
    store.check_owner({OwnerKind::Relation, triple.r});
    const CircuitSpec relation = entangling_layers(
        store.shapes.relation, ParamOwner{OwnerKind::Relation, triple.r});
    const Statevector &tail_state =
        cache.states[static_cast<std::size_t>(triple.t)];
    std::vector<double> scores(cache.states.size(), 0.0);
    const AngleLookup lookup = store.lookup();
    for (std::size_t e = 0; e < cache.states.size(); ++e) {
        Statevector transformed = cache.states[e];
        run_circuit(transformed, relation, lookup);
        scores[e] = std::norm(overlap(tail_state, transformed));
    }
    return rank_counts(scores, triple, known, true).rank(tie_policy);
}

struct EvalOptions {
    TiePolicy tie_policy = TiePolicy::Pessimistic;
    unsigned threads = 1;
    bool include_head_ranks = false; // adds diagnostic head ranks to the dump
};

struct RankRecord {
    LabeledTriple triple;
    std::uint32_t tail_rank = 0;            // selected tie policy
    std::uint32_t tail_rank_optimistic = 0; // other-variant audit fields
    std::uint32_t tail_rank_pessimistic = 0;
    std::uint32_t head_rank = 0; // 0 when head ranking is off
};

struct EvalResult {
    TiePolicy tie_policy = TiePolicy::Pessimistic;
    Metrics tail_metrics;            // selected tie policy
    Metrics tail_metrics_pessimistic;
    Metrics tail_metrics_optimistic;
    std::vector<RankRecord> records;
};

/// Ranks every triple of `split` against the filter set `known` (all
/// positives across train/valid/test). Both tie-policy variants fall out
/// of one scoring pass. Deterministic for any thread count.
inline EvalResult evaluate(std::span<const LabeledTriple> split,
                           const ParameterStore &store,
                           const TripleSet &known,
                           const EvalOptions &options = {}) {
    if (split.empty()) {
        throw DataError("evaluation split is empty");
    }
    const EntityStateCache cache = build_entity_cache(store, options.threads);
    std::vector<RankRecord> records(split.size());
    parallel_for(split.size(), options.threads,
                 [&](std::size_t begin, std::size_t end) {
                     for (std::size_t i = begin; i < end; ++i) {
                         const LabeledTriple &triple = split[i];
                         store.check_owner({OwnerKind::Entity, triple.t});
                         const std::vector<double> scores =
                             candidate_scores(triple.h, triple.r, store,
                                              cache);
                         const RankCounts counts =
                             rank_counts(scores, triple, known, false);
                         RankRecord record;
                         record.triple = triple;
                         record.tail_rank_pessimistic =
                             counts.rank(TiePolicy::Pessimistic);
                         record.tail_rank_optimistic =
                             counts.rank(TiePolicy::Optimistic);
                         record.tail_rank = counts.rank(options.tie_policy);
                         if (options.include_head_ranks) {
                             record.head_rank =
                                 rank_head(triple, store, cache, known,
                                           options.tie_policy);
                         }
                         records[i] = record;
                     }
                 });
    std::vector<std::uint32_t> selected;
    std::vector<std::uint32_t> pessimistic;
    std::vector<std::uint32_t> optimistic;
    selected.reserve(records.size());
    pessimistic.reserve(records.size());
    optimistic.reserve(records.size());
    for (const RankRecord &record : records) {
        selected.push_back(record.tail_rank);
        pessimistic.push_back(record.tail_rank_pessimistic);
        optimistic.push_back(record.tail_rank_optimistic);
    }
    EvalResult result;
    result.tie_policy = options.tie_policy;
    result.tail_metrics = metrics(std::move(selected));
    result.tail_metrics_pessimistic = metrics(std::move(pessimistic));
    result.tail_metrics_optimistic = metrics(std::move(optimistic));
    result.records = std::move(records);
    return result;
}

namespace detail {

inline nlohmann::json metrics_to_json(const Metrics &m) {
    return nlohmann::json{
        {"mrr", m.mrr},
        {"hits1", m.hits1},
        {"hits10", m.hits10},
        {"mrr_percent", 100.0 * m.mrr},
        {"hits1_percent", 100.0 * m.hits1},
        {"hits10_percent", 100.0 * m.hits10},
    };
}

} // namespace detail

/// Structured metrics report: headline numbers as fractions and percents
/// (selected tie policy, with both variants for comparison), a rank
/// histogram, and a per-triple dump for audit.
inline nlohmann::json metrics_report(const EvalResult &result,
                                     const Vocabulary &vocab) {
    const Metrics &m = result.tail_metrics;
    nlohmann::json report = detail::metrics_to_json(m);
    report["n_evaluated"] = m.n_evaluated;
    report["tie_policy"] = tie_policy_name(result.tie_policy);
    report["by_tie_policy"] = {
        {"pessimistic",
         detail::metrics_to_json(result.tail_metrics_pessimistic)},
        {"optimistic",
         detail::metrics_to_json(result.tail_metrics_optimistic)},
    };
    std::map<std::uint32_t, std::size_t> histogram;
    for (const std::uint32_t rank : m.ranks) {
        ++histogram[rank];
    }
    nlohmann::json bins = nlohmann::json::array();
    for (const auto &[rank, count] : histogram) {
        bins.push_back({{"rank", rank}, {"count", count}});
    }
    report["rank_histogram"] = std::move(bins);
    nlohmann::json triples = nlohmann::json::array();
    for (const RankRecord &record : result.records) {
        nlohmann::json row;
        row["head"] =
            vocab.entity_names[static_cast<std::size_t>(record.triple.h)];
        row["relation"] =
            vocab.relation_names[static_cast<std::size_t>(record.triple.r)];
        row["tail"] =
            vocab.entity_names[static_cast<std::size_t>(record.triple.t)];
        row["rank"] = record.tail_rank;
        if (record.head_rank != 0) {
            row["head_rank"] = record.head_rank;
        }
        triples.push_back(std::move(row));
    }
    report["triples"] = std::move(triples);
    return report;
}

} // namespace qkge
